"""Built-in sample schemes: the 40-object reference document used by the
regression suite and three small curated drawings for golden rendering."""

from . import edit, model
from .model import (
    Attach,
    Axis,
    Dimension,
    DimDirection,
    DimPoint,
    DimPointKind,
    ElevationMark,
    JointKind,
    LeaderToBlock,
    LeaderToPipe,
    PositionMark,
    Scheme,
    ShelfDir,
    SlopeFormat,
    SlopeMark,
    SpecKind,
    SpecProps,
    SymbolDef,
    SymbolSegment,
    TargetKind,
    Text,
    UpDir,
)


def _valve_symbol() -> SymbolDef:
    # bow-tie gate valve, 6 mm of pipe hidden around the stem
    g = [
        SymbolSegment(-3.0, -1.5, 3.0, 1.5),
        SymbolSegment(-3.0, 1.5, 3.0, -1.5),
        SymbolSegment(-3.0, -1.5, -3.0, 1.5),
        SymbolSegment(3.0, -1.5, 3.0, 1.5),
    ]
    return SymbolDef("valve", g, Attach.AXIAL, (6.0,), sym_axis=True)


def _support_symbol() -> SymbolDef:
    g = [
        SymbolSegment(-2.0, 0.0, 2.0, 0.0),
        SymbolSegment(0.0, 0.0, 0.0, -3.0),
        SymbolSegment(-1.5, -3.0, 1.5, -3.0),
    ]
    return SymbolDef("support", g, Attach.AXIAL, (0.0,))


def reference_scheme() -> Scheme:
    """The committed 40-object sample: a run with riser, branch and slope.

    Position 1 covers two pipes of 1000 and 2340 mm, so the six-column
    specification shows 3.34 m for it.
    """
    s = model.new_scheme()
    pa = edit.add_point(s, 0.0, 0.0, 1000.0)
    pb = edit.add_point(s, 1000.0, 0.0, 1000.0)
    pc = edit.add_point(s, 3340.0, 0.0, 1000.0)
    pd = edit.add_point(s, 3340.0, 0.0, 2500.0)
    pe = edit.add_point(s, 3340.0, 2000.0, 2500.0)
    pf = edit.add_point(s, 5340.0, 2000.0, 2540.0)

    pipe1 = edit.add_pipe(s, pa, pb)
    pipe2 = edit.add_pipe(s, pb, pc)
    pipe3 = edit.add_pipe(s, pc, pd)
    pipe4 = edit.add_pipe(s, pd, pe)
    pipe5 = edit.add_pipe(s, pe, pf)

    s.insert("joints", model.Joint(pipe2, pipe3, JointKind.FILLET, 100.0))
    s.insert("joints", model.Joint(pipe3, pipe4, JointKind.BUTT))

    edit.add_offset(s, edit.GeneralOffsetSpec(Axis.X, 2000.0, 400.0))

    valve = s.insert("symbols", _valve_symbol())
    support = s.insert("symbols", _support_symbol())
    blk_valve = edit.place_block(s, valve, pipe2, 1500.0, updir=UpDir.ZP)
    blk_support = edit.place_block(s, support, pipe4, 1000.0, updir=UpDir.ZM)

    t_label = s.insert("texts", Text(
        ["Ду50"], (TargetKind.PIPE, 0), offset_vec=(300.0, 300.0)))
    lp1 = s.insert("pipe_leaders", LeaderToPipe(t_label, pipe2, 500.0))
    s.texts[t_label].main_leader = (TargetKind.PIPE, lp1)

    t_slope = s.insert("texts", Text(
        [model.SLOPE_RIGHT + "2.0%"], (TargetKind.PIPE, 0),
        offset_vec=(200.0, 400.0), slope_format=SlopeFormat.PERCENT))
    lp2 = s.insert("pipe_leaders", LeaderToPipe(t_slope, pipe5, 600.0))
    s.texts[t_slope].main_leader = (TargetKind.PIPE, lp2)

    t_sup = s.insert("texts", Text(
        ["Опора"], (TargetKind.PIPE, 0), offset_vec=(250.0, -350.0)))
    lb1 = s.insert("block_leaders", LeaderToBlock(t_sup, blk_support, (0.0, -3.0)))
    s.texts[t_sup].main_leader = (TargetKind.BLOCK, lb1)

    sp_pipe50 = s.insert("spec_props", SpecProps(
        1, SpecKind.FOR_PIPE, designation="ГОСТ 3262-75",
        name="Труба Ду50", unit_mass_kg=4.88))
    sp_valve = s.insert("spec_props", SpecProps(
        2, SpecKind.FOR_BLOCK, qty=1.0, designation="30ч6бр",
        name="Задвижка Ду50", unit_mass_kg=16.0))
    sp_bolts = s.insert("spec_props", SpecProps(
        3, SpecKind.FOR_BLOCK, qty=8.0, designation="ГОСТ 7798-70",
        name="Болт М12", unit_mass_kg=0.05))
    sp_pipe40 = s.insert("spec_props", SpecProps(
        4, SpecKind.FOR_PIPE, designation="ГОСТ 3262-75",
        name="Труба Ду40", unit_mass_kg=3.84))

    s.insert("position_marks", PositionMark(
        TargetKind.PIPE, pipe1, [sp_pipe50], anchor_t=400.0,
        offset_vec=(150.0, 250.0)))
    s.insert("position_marks", PositionMark(
        TargetKind.PIPE, pipe2, [sp_pipe50], anchor_t=2000.0,
        offset_vec=(150.0, 250.0)))
    s.insert("position_marks", PositionMark(
        TargetKind.BLOCK, blk_valve, [sp_valve], anchor_xy=(0.0, 1.5),
        offset_vec=(100.0, 300.0)))
    s.insert("position_marks", PositionMark(
        TargetKind.PIPE, pipe4, [sp_bolts], anchor_t=500.0,
        offset_vec=(120.0, 280.0), visible=False))
    s.insert("position_marks", PositionMark(
        TargetKind.PIPE, pipe5, [sp_pipe40], anchor_t=1200.0,
        offset_vec=(150.0, 250.0)))

    s.insert("dimensions", Dimension(
        [DimPoint(DimPointKind.POINT, pa), DimPoint(DimPointKind.POINT, pb),
         DimPoint(DimPointKind.POINT, pc)],
        Axis.Y, DimDirection(axis=Axis.X), line_offset=12.0))
    s.insert("dimensions", Dimension(
        [DimPoint(DimPointKind.POINT, pc), DimPoint(DimPointKind.POINT, pd)],
        Axis.X, DimDirection(axis=Axis.Z), line_offset=10.0))

    s.insert("elevation_marks", ElevationMark(
        TargetKind.PIPE, pipe4, 0.0, Axis.X, ShelfDir.XP))
    s.insert("elevation_marks", ElevationMark(
        TargetKind.PIPE, pipe1, 0.0, Axis.Y, ShelfDir.YP, arrow_shift=8.0))

    s.insert("slope_marks", SlopeMark(pipe5, 1000.0, 4.0,
                                      SlopeFormat.PERCENT, 1))

    s.axis_grid = model.AxisGrid(
        [model.AxisGroup(3, 6000.0)], [model.AxisGroup(2, 6000.0)],
        model.GridSettings(visible_x={1, 2, 3}, visible_y={1, 2}))
    return s


def golden_straight_run() -> Scheme:
    """Straight pipe run crossed by a stretch offset: dots plus break letters."""
    s = model.new_scheme()
    pa = edit.add_point(s, 0.0, 0.0, 0.0)
    pb = edit.add_point(s, 2000.0, 0.0, 0.0)
    pc = edit.add_point(s, 4000.0, 0.0, 0.0)
    edit.add_pipe(s, pa, pb)
    edit.add_pipe(s, pb, pc)
    edit.add_offset(s, edit.GeneralOffsetSpec(Axis.X, 3000.0, 500.0))
    return s


def golden_tee_assembly() -> Scheme:
    """Tee with a valve block, a chain dimension, elevation and slope marks."""
    s = model.new_scheme()
    pa = edit.add_point(s, 0.0, 0.0, 0.0)
    pt = edit.add_point(s, 1500.0, 0.0, 0.0)
    pb = edit.add_point(s, 3000.0, 0.0, 0.0)
    pc = edit.add_point(s, 1500.0, 2000.0, 100.0)
    pipe1 = edit.add_pipe(s, pa, pt)
    pipe2 = edit.add_pipe(s, pt, pb)
    pipe3 = edit.add_pipe(s, pt, pc)

    tee_sym = s.insert("symbols", SymbolDef(
        "tee", [SymbolSegment(-2.0, 0.0, 2.0, 0.0),
                SymbolSegment(0.0, 0.0, 0.0, 2.0)],
        Attach.TEE, (4.0, 4.0, 4.0)))
    valve = s.insert("symbols", _valve_symbol())
    edit.place_block(s, tee_sym, pipe1, 1500.0, updir=UpDir.ZP,
                     pipe2=pipe2, pipe3=pipe3)
    edit.place_block(s, valve, pipe3, 1000.0, updir=UpDir.ZP)

    s.insert("dimensions", Dimension(
        [DimPoint(DimPointKind.POINT, pa), DimPoint(DimPointKind.POINT, pt),
         DimPoint(DimPointKind.POINT, pb)],
        Axis.Y, DimDirection(axis=Axis.X), line_offset=14.0))
    s.insert("elevation_marks", ElevationMark(
        TargetKind.PIPE, pipe1, 0.0, Axis.Y, ShelfDir.YP))
    s.insert("slope_marks", SlopeMark(pipe3, 800.0, 4.0, SlopeFormat.PERCENT, 1))

    t_slope = s.insert("texts", Text(
        [model.SLOPE_RIGHT + "5.0%"], (TargetKind.PIPE, 0),
        offset_vec=(150.0, 350.0), slope_format=SlopeFormat.PERCENT))
    lp = s.insert("pipe_leaders", LeaderToPipe(t_slope, pipe3, 1600.0))
    s.texts[t_slope].main_leader = (TargetKind.PIPE, lp)
    return s


def golden_axis_grid() -> Scheme:
    """Building axes only: two groups per direction, one hidden axis,
    overall dimensions on."""
    s = model.new_scheme()
    s.axis_grid = model.AxisGrid(
        [model.AxisGroup(2, 6000.0), model.AxisGroup(2, 3000.0)],
        [model.AxisGroup(3, 4500.0)],
        model.GridSettings(visible_x={1, 2, 4}, visible_y={1, 2, 3},
                           overall_dim_x=True, overall_dim_y=True))
    return s
