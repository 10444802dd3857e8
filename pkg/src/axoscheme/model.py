"""Object model for axonometric piping-scheme documents.

A scheme is a plain value: plain dataclasses held in per-class dicts keyed by
stable integer identifiers.  Identifiers are allocated by a per-class counter
and never reused within a session; persistence renumbers them densely.

All 3D coordinates are model millimetres ("nature"); sheet-space millimetres
("paper") relate to them through ``Settings.scale``.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

from .vectors import Vec2, Vec3, cross3, dist3, dot3, lerp3, norm3, sub3, unit3

# Point coincidence tolerance, model mm: closer than this merges to one point.
MERGE_EPS = 1e-6

PALETTE_SIZE = 16

# Special text symbols, stored as private-use codepoints; the renderer maps
# them to real glyphs (degree/diameter) or to stroke-built slope wedges.
SLOPE_LEFT = ""
SLOPE_RIGHT = ""
DEGREE = ""
DIAMETER = ""
SPECIAL_SYMBOLS = (SLOPE_LEFT, SLOPE_RIGHT, DEGREE, DIAMETER)


class SchemeError(Exception):
    """Base class for kernel errors."""


class UnknownIdError(SchemeError):
    """A referenced identifier does not resolve."""


class EditError(SchemeError):
    """An edit was rejected by a compatibility rule."""


class Axis(Enum):
    X = "x"
    Y = "y"
    Z = "z"

    def unit(self) -> Vec3:
        return {Axis.X: (1.0, 0.0, 0.0), Axis.Y: (0.0, 1.0, 0.0), Axis.Z: (0.0, 0.0, 1.0)}[self]

    @property
    def index(self) -> int:
        return {Axis.X: 0, Axis.Y: 1, Axis.Z: 2}[self]


class LineType(Enum):
    SOLID = "solid"
    DASHED = "dashed"
    DASH_DOT = "dash-dot"
    DOTTED = "dotted"


@dataclass
class LineStyle:
    color: int = 0
    line_type: LineType = LineType.SOLID


@dataclass
class Point3:
    x: float
    y: float
    z: float

    def as_tuple(self) -> Vec3:
        return (self.x, self.y, self.z)


@dataclass
class Pipe:
    start: int
    end: int
    style: LineStyle = field(default_factory=LineStyle)


class JointKind(Enum):
    BUTT = "butt"
    FILLET = "fillet"


@dataclass
class Joint:
    pipe_a: int
    pipe_b: int
    kind: JointKind = JointKind.BUTT
    radius: float = 0.0  # fillet radius, nature mm; meaningful for FILLET only


class OffsetKind(Enum):
    GENERAL = "general"
    LOCAL = "local"


@dataclass
class Offset:
    """Non-metric stretch/compression of one side of the scheme.

    ``ort`` points from the fixed side into the displaced side; a positive
    magnitude stretches the drawing apart, a negative one compresses it.
    General offsets cut space with an axis-aligned plane; local offsets
    displace an explicit point set bounded by their break lines.
    """

    letter: str
    ort: Vec3
    magnitude: float
    kind: OffsetKind
    axis: Axis | None = None      # GENERAL: plane normal axis
    plane_coord: float = 0.0      # GENERAL: plane position on that axis
    displaced_points: set[int] = field(default_factory=set)  # LOCAL


class BreakGlyph(Enum):
    DOTS = "dots"
    WAVES = "waves"


@dataclass
class BreakLine:
    pipe: int
    offset: int
    paper_len: float
    # GENERAL offset: shift of the break centre from the cutting plane along
    # ort, nature mm.  LOCAL offset: break position on the pipe from its
    # start, nature mm.
    placement: float = 0.0
    label_shift_axial: float = 0.0
    label_shift_normal: float = 0.0
    glyph: BreakGlyph = BreakGlyph.DOTS


class Attach(Enum):
    AXIAL = "axial"
    ANGULAR = "angular"
    TEE = "tee"

    @property
    def legs(self) -> int:
        return {Attach.AXIAL: 1, Attach.ANGULAR: 2, Attach.TEE: 3}[self]


@dataclass
class SymbolSegment:
    x1: float
    y1: float
    x2: float
    y2: float


@dataclass
class SymbolArc:
    cx: float
    cy: float
    r: float
    a0: float  # degrees, counter-clockwise from +X
    a1: float


@dataclass
class SymbolDef:
    name: str
    graphics: list
    attach: Attach = Attach.AXIAL
    cut_lengths: tuple[float, ...] = (0.0,)  # paper mm, one per leg
    sym_axis: bool = False
    sym_normal: bool = False
    stretch_default: float = 1.0


class UpDir(Enum):
    XP = "x+"
    XM = "x-"
    YP = "y+"
    YM = "y-"
    ZP = "z+"
    ZM = "z-"
    PIPE2 = "pipe2"
    PIPE3 = "pipe3"

    @property
    def is_axis(self) -> bool:
        return self not in (UpDir.PIPE2, UpDir.PIPE3)

    def axis_vector(self) -> Vec3:
        return {
            UpDir.XP: (1.0, 0.0, 0.0), UpDir.XM: (-1.0, 0.0, 0.0),
            UpDir.YP: (0.0, 1.0, 0.0), UpDir.YM: (0.0, -1.0, 0.0),
            UpDir.ZP: (0.0, 0.0, 1.0), UpDir.ZM: (0.0, 0.0, -1.0),
        }[self]


@dataclass
class Block:
    symbol: int
    pipe: int
    dist_from_start: float = 0.0
    pipe2: int | None = None
    pipe3: int | None = None
    style: LineStyle = field(default_factory=LineStyle)
    flip: bool = False
    updir: UpDir = UpDir.ZP
    stretch: float = 1.0


@dataclass
class FontSetting:
    face: str = "gost-a"
    height: float = 3.5  # paper mm
    width_factor: float = 1.0
    slant: bool = False


class SlopeFormat(Enum):
    ANGLE = "angle"
    RATIO = "ratio"
    PERCENT = "percent"


class TargetKind(Enum):
    PIPE = "pipe"
    BLOCK = "block"


class ShelfFrom(Enum):
    START = "start"
    END = "end"


@dataclass
class Text:
    lines: list[str]
    main_leader: tuple[TargetKind, int]
    font: FontSetting = field(default_factory=FontSetting)
    line_step: float = 5.0
    color: int = 0
    offset_vec: Vec2 = (0.0, 0.0)  # nature mm from indicated point to text origin
    slope_format: SlopeFormat | None = None


@dataclass
class LeaderToPipe:
    text: int
    pipe: int
    t: float  # nature mm from pipe start


@dataclass
class LeaderToBlock:
    text: int
    block: int
    anchor: Vec2  # paper mm on the symbol's library image


@dataclass
class PositionMark:
    target_kind: TargetKind
    target: int
    props: list[int]
    anchor_t: float = 0.0          # pipe target
    anchor_xy: Vec2 = (0.0, 0.0)   # block target
    font: FontSetting = field(default_factory=FontSetting)
    line_step: float = 5.0
    color: int = 0
    offset_vec: Vec2 = (0.0, 0.0)
    shelf_from: ShelfFrom = ShelfFrom.START
    visible: bool = True


class SpecKind(Enum):
    FOR_PIPE = "pipe"
    FOR_BLOCK = "block"


@dataclass
class ExtendedProps:
    type_mark: str = ""
    name_and_spec: str = ""
    unit_name: str = ""
    manufacturer: str = ""
    equipment_code: str = ""


@dataclass
class SpecProps:
    position: int
    kind: SpecKind
    qty: float = 1.0  # FOR_BLOCK only, per mark
    designation: str = ""
    name: str = ""
    unit_mass_kg: float = 0.0
    note: str = ""
    extended: ExtendedProps | None = None


class DimPointKind(Enum):
    POINT = "point"
    BLOCK = "block"


@dataclass(frozen=True)
class DimPoint:
    kind: DimPointKind
    ref: int


@dataclass(frozen=True)
class DimDirection:
    axis: Axis | None = None
    pipe: int | None = None

    @property
    def along_pipe(self) -> bool:
        return self.pipe is not None


@dataclass
class Dimension:
    points: list[DimPoint]
    ext_axis: Axis
    dim_dir: DimDirection
    line_offset: float = 10.0  # paper mm from the first stored point
    text_offset: float = 1.5   # paper mm from the dimension line


class ShelfDir(Enum):
    XP = "x+"
    XM = "x-"
    YP = "y+"
    YM = "y-"

    @property
    def axis(self) -> Axis:
        return Axis.X if self in (ShelfDir.XP, ShelfDir.XM) else Axis.Y

    @property
    def sign(self) -> float:
        return 1.0 if self in (ShelfDir.XP, ShelfDir.YP) else -1.0


@dataclass
class ElevationMark:
    target_kind: TargetKind
    target: int
    t: float = 0.0  # pipe target only
    ext_axis: Axis = Axis.X
    shelf_dir: ShelfDir = ShelfDir.XP
    arrow_shift: float = 10.0
    shelf_shift: float = 5.0
    line_type: LineType = LineType.SOLID


@dataclass
class SlopeMark:
    pipe: int
    t: float
    shift: float = 3.0
    format: SlopeFormat = SlopeFormat.PERCENT
    precision: int = 1


@dataclass
class AxisGroup:
    count: int
    step: float  # nature mm


@dataclass
class GridSettings:
    digits_label_x: bool = True
    plane_z: float = 0.0
    bend_shift_z: float = 10.0  # paper mm
    visible_x: set[int] = field(default_factory=set)  # 1-based axis indices
    visible_y: set[int] = field(default_factory=set)
    dim_offset_x: float = 10.0
    dim_offset_y: float = 10.0
    lead_len_x: float = 6.0
    lead_len_y: float = 6.0
    first_number: int = 1
    first_letter: str = "А"
    overall_dim_x: bool = False
    overall_dim_y: bool = False
    dir_positive_x: bool = True
    dir_positive_y: bool = True
    labels_at_first: bool = True
    color: int = 0


@dataclass
class AxisGrid:
    x_groups: list[AxisGroup]
    y_groups: list[AxisGroup]
    settings: GridSettings = field(default_factory=GridSettings)


@dataclass
class Slice:
    """Height slab selecting part of the scheme; both bounds None means all."""

    z_min: float | None = None
    z_max: float | None = None

    @property
    def is_all(self) -> bool:
        return self.z_min is None and self.z_max is None

    def contains(self, z: float) -> bool:
        if self.is_all:
            return True
        return self.z_min <= z <= self.z_max


@dataclass
class Visibility:
    pipes: bool = True
    joints: bool = True
    breaks: bool = True
    blocks: bool = True
    texts: bool = True
    position_marks: bool = True
    dimensions: bool = True
    elevations: bool = True
    slopes: bool = True
    grid: bool = True
    axes_icon: bool = True
    occlusion: bool = True
    break_letters: bool = True
    covered_pipes: bool = False
    hidden_marks: bool = False


@dataclass
class JointDefaults:
    kind: JointKind = JointKind.BUTT
    radius: float = 100.0


@dataclass
class BreakSettings:
    paper_len: float = 6.0
    label_shift_axial: float = 2.0
    label_shift_normal: float = 2.0
    dot_step: float = 1.0        # scheme-wide
    wave_diameter: float = 8.0   # scheme-wide
    label_font: FontSetting = field(default_factory=lambda: FontSetting(height=5.0))


@dataclass
class BlockDefaults:
    stretch: float = 1.0
    style: LineStyle = field(default_factory=LineStyle)


@dataclass
class TextDefaults:
    font: FontSetting = field(default_factory=FontSetting)
    color: int = 0
    line_step: float = 5.0
    shelf_from: ShelfFrom = ShelfFrom.START
    second_shelf: bool = False


@dataclass
class MarkDefaults:
    font: FontSetting = field(default_factory=FontSetting)
    color: int = 0
    line_step: float = 5.0
    shelf_from: ShelfFrom = ShelfFrom.START


@dataclass
class DimensionSettings:
    font: FontSetting = field(default_factory=FontSetting)
    arrow_len: float = 2.5
    precision: int = 0
    color: int = 0
    text_offset: float = 1.5
    ext_overshoot: float = 2.0  # extension line past the dimension line


@dataclass
class ElevationSettings:
    line_type: LineType = LineType.SOLID
    ext_axis: Axis = Axis.X
    shelf_dir: ShelfDir = ShelfDir.XP
    arrow_shift: float = 10.0
    shelf_shift: float = 5.0
    font: FontSetting = field(default_factory=FontSetting)
    arrow_len: float = 4.0
    color: int = 0


@dataclass
class SlopeSettings:
    shift: float = 3.0
    format: SlopeFormat = SlopeFormat.PERCENT
    precision: int = 1
    font: FontSetting = field(default_factory=FontSetting)
    arrow_len: float = 5.0
    arrow_span: float = 1.0
    color: int = 0


@dataclass
class Settings:
    # object defaults
    pipe_style: LineStyle = field(default_factory=LineStyle)
    joint: JointDefaults = field(default_factory=JointDefaults)
    breaks: BreakSettings = field(default_factory=BreakSettings)
    block: BlockDefaults = field(default_factory=BlockDefaults)
    text: TextDefaults = field(default_factory=TextDefaults)
    mark: MarkDefaults = field(default_factory=MarkDefaults)
    dimension: DimensionSettings = field(default_factory=DimensionSettings)
    elevation: ElevationSettings = field(default_factory=ElevationSettings)
    slope: SlopeSettings = field(default_factory=SlopeSettings)
    grid: GridSettings = field(default_factory=GridSettings)
    flange_positions: int = 3
    # working mode
    occlusion_gap_len: float = 2.0
    current_param_file: str = ""
    projection: str = "isometric"
    slice: Slice = field(default_factory=Slice)
    visibility: Visibility = field(default_factory=Visibility)
    work_temperature: float = 0.0
    work_pressure: float = 0.0
    autonumber: bool = True
    spec_extended: bool = False
    # paper mm per nature mm, 1:50; pinned to 32-bit storage precision
    scale: float = 0.019999999552965164


# Collection names, in a fixed order shared by persistence and integrity.
COLLECTIONS = (
    "points", "pipes", "joints", "offsets", "breaks", "symbols", "blocks",
    "texts", "pipe_leaders", "block_leaders", "position_marks", "spec_props",
    "dimensions", "elevation_marks", "slope_marks",
)


@dataclass
class Scheme:
    points: dict[int, Point3] = field(default_factory=dict)
    pipes: dict[int, Pipe] = field(default_factory=dict)
    joints: dict[int, Joint] = field(default_factory=dict)
    offsets: dict[int, Offset] = field(default_factory=dict)
    breaks: dict[int, BreakLine] = field(default_factory=dict)
    symbols: dict[int, SymbolDef] = field(default_factory=dict)
    blocks: dict[int, Block] = field(default_factory=dict)
    texts: dict[int, Text] = field(default_factory=dict)
    pipe_leaders: dict[int, LeaderToPipe] = field(default_factory=dict)
    block_leaders: dict[int, LeaderToBlock] = field(default_factory=dict)
    position_marks: dict[int, PositionMark] = field(default_factory=dict)
    spec_props: dict[int, SpecProps] = field(default_factory=dict)
    dimensions: dict[int, Dimension] = field(default_factory=dict)
    elevation_marks: dict[int, ElevationMark] = field(default_factory=dict)
    slope_marks: dict[int, SlopeMark] = field(default_factory=dict)
    axis_grid: AxisGrid | None = None
    settings: Settings = field(default_factory=Settings)
    # allocation counters are session state, not document content
    next_ids: dict[str, int] = field(default_factory=dict, compare=False)

    # -- identifier allocation ------------------------------------------

    def new_id(self, collection: str) -> int:
        nid = self.next_ids.get(collection, 1)
        self.next_ids[collection] = nid + 1
        return nid

    def insert(self, collection: str, obj) -> int:
        nid = self.new_id(collection)
        getattr(self, collection)[nid] = obj
        return nid

    # -- checked accessors ----------------------------------------------

    def _get(self, collection: str, oid: int):
        try:
            return getattr(self, collection)[oid]
        except KeyError:
            raise UnknownIdError(f"unknown {collection[:-1]} id {oid}") from None

    def point(self, oid: int) -> Point3:
        return self._get("points", oid)

    def pipe(self, oid: int) -> Pipe:
        return self._get("pipes", oid)

    def joint(self, oid: int) -> Joint:
        return self._get("joints", oid)

    def offset(self, oid: int) -> Offset:
        return self._get("offsets", oid)

    def break_line(self, oid: int) -> BreakLine:
        return self._get("breaks", oid)

    def symbol(self, oid: int) -> SymbolDef:
        return self._get("symbols", oid)

    def block(self, oid: int) -> Block:
        return self._get("blocks", oid)

    def text(self, oid: int) -> Text:
        return self._get("texts", oid)

    def spec_prop(self, oid: int) -> SpecProps:
        return self._get("spec_props", oid)


def new_scheme() -> Scheme:
    return Scheme()


# -- pipe geometry helpers ------------------------------------------------

def pipe_ends(scheme: Scheme, pipe_id: int) -> tuple[Vec3, Vec3]:
    p = scheme.pipe(pipe_id)
    return scheme.point(p.start).as_tuple(), scheme.point(p.end).as_tuple()


def pipe_length(scheme: Scheme, pipe_id: int) -> float:
    a, b = pipe_ends(scheme, pipe_id)
    return dist3(a, b)


def pipe_direction(scheme: Scheme, pipe_id: int) -> Vec3:
    a, b = pipe_ends(scheme, pipe_id)
    return unit3(sub3(b, a))


def pipe_point_at(scheme: Scheme, pipe_id: int, t: float) -> Vec3:
    """Point at arc length ``t`` (nature mm) from the pipe start."""
    a, b = pipe_ends(scheme, pipe_id)
    length = dist3(a, b)
    if length == 0.0:
        return a
    return lerp3(a, b, t / length)


def block_anchor_point(scheme: Scheme, block_id: int) -> Vec3:
    blk = scheme.block(block_id)
    return pipe_point_at(scheme, blk.pipe, blk.dist_from_start)


def symbol_bbox(sym: SymbolDef) -> tuple[float, float, float, float]:
    """Bounding box (xmin, ymin, xmax, ymax) of the symbol graphics."""
    xs: list[float] = []
    ys: list[float] = []
    for g in sym.graphics:
        if isinstance(g, SymbolSegment):
            xs += [g.x1, g.x2]
            ys += [g.y1, g.y2]
        elif isinstance(g, SymbolArc):
            xs += [g.cx - g.r, g.cx + g.r]
            ys += [g.cy - g.r, g.cy + g.r]
    if not xs:
        return (0.0, 0.0, 0.0, 0.0)
    return (min(xs), min(ys), max(xs), max(ys))


# -- integrity -------------------------------------------------------------

@dataclass
class Violation:
    rule: str
    subject: str
    message: str


def _bad(out: list[Violation], rule: str, subject: str, message: str) -> None:
    out.append(Violation(rule, subject, message))


def _check_style(out: list[Violation], subject: str, style: LineStyle) -> None:
    if not (0 <= style.color < PALETTE_SIZE):
        _bad(out, "style-palette", subject, f"color index {style.color} outside palette")


def _check_font(out: list[Violation], subject: str, font: FontSetting) -> None:
    if font.height <= 0 or font.width_factor <= 0:
        _bad(out, "font-invalid", subject, "font height and width factor must be positive")


def _segments_overlap(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> bool:
    """True if two segments share a collinear sub-segment of positive length."""
    da = sub3(a1, a0)
    db = sub3(b1, b0)
    la = norm3(da)
    lb = norm3(db)
    if la == 0.0 or lb == 0.0:
        return False
    scale = max(la, lb)
    tol = 1e-9 * scale
    if norm3(cross3(da, db)) > tol * scale:
        return False  # not parallel
    if norm3(cross3(da, sub3(b0, a0))) > tol * scale:
        return False  # parallel but not on the same line
    # project b onto a's axis
    ua = (da[0] / la, da[1] / la, da[2] / la)
    s0 = dot3(sub3(b0, a0), ua)
    s1 = dot3(sub3(b1, a0), ua)
    lo, hi = min(s0, s1), max(s0, s1)
    return min(la, hi) - max(0.0, lo) > tol


def integrity_check(scheme: Scheme) -> list[Violation]:
    """Validate referential integrity and every per-type invariant.

    Returns an empty list for a consistent scheme; violations are data, not
    exceptions, so a broken document can still be inspected.
    """
    out: list[Violation] = []
    pts = scheme.points
    pipes = scheme.pipes

    # points: finite, pairwise distinct
    ids = list(pts)
    for pid in ids:
        p = pts[pid]
        if not all(math.isfinite(c) for c in p.as_tuple()):
            _bad(out, "point-finite", f"point:{pid}", "non-finite coordinate")
    for i, pid in enumerate(ids):
        for qid in ids[i + 1:]:
            if dist3(pts[pid].as_tuple(), pts[qid].as_tuple()) < MERGE_EPS:
                _bad(out, "point-coincident", f"point:{qid}",
                     f"coincides with point {pid}")

    # pipes
    for pid, pipe in pipes.items():
        sub = f"pipe:{pid}"
        if pipe.start not in pts or pipe.end not in pts:
            _bad(out, "dangling-ref", sub, "endpoint id does not resolve")
            continue
        if pipe.start == pipe.end:
            _bad(out, "pipe-zero-length", sub, "start and end are the same point")
        elif dist3(pts[pipe.start].as_tuple(), pts[pipe.end].as_tuple()) < MERGE_EPS:
            _bad(out, "pipe-zero-length", sub, "endpoints coincide")
        _check_style(out, sub, pipe.style)
    pipe_ids = [pid for pid, p in pipes.items() if p.start in pts and p.end in pts
                and p.start != p.end]
    for i, pa in enumerate(pipe_ids):
        a0, a1 = pipe_ends(scheme, pa)
        for pb in pipe_ids[i + 1:]:
            b0, b1 = pipe_ends(scheme, pb)
            if _segments_overlap(a0, a1, b0, b1):
                _bad(out, "pipe-overlap", f"pipe:{pb}",
                     f"collinear overlap with pipe {pa}")

    # joints
    seen_pairs: dict[frozenset, int] = {}
    for jid, joint in scheme.joints.items():
        sub = f"joint:{jid}"
        if joint.pipe_a not in pipes or joint.pipe_b not in pipes:
            _bad(out, "dangling-ref", sub, "pipe id does not resolve")
            continue
        if joint.pipe_a == joint.pipe_b:
            _bad(out, "joint-degenerate", sub, "joins a pipe with itself")
            continue
        pair = frozenset((joint.pipe_a, joint.pipe_b))
        if pair in seen_pairs:
            _bad(out, "joint-duplicate", sub,
                 f"second joint on pipe pair (first: joint {seen_pairs[pair]})")
        else:
            seen_pairs[pair] = jid
        a = pipes[joint.pipe_a]
        b = pipes[joint.pipe_b]
        shared = {a.start, a.end} & {b.start, b.end}
        if len(shared) != 1:
            _bad(out, "joint-not-adjacent", sub,
                 "joined pipes must share exactly one endpoint")
        if joint.kind is JointKind.FILLET and joint.radius <= 0:
            _bad(out, "joint-radius", sub, "fillet radius must be positive")

    # offsets
    letters: dict[str, int] = {}
    for oid, off in scheme.offsets.items():
        sub = f"offset:{oid}"
        if abs(norm3(off.ort) - 1.0) > 1e-9:
            _bad(out, "offset-ort", sub, "ort is not unit length")
        if off.magnitude == 0.0:
            _bad(out, "offset-magnitude", sub, "magnitude must be nonzero")
        if off.letter in letters:
            _bad(out, "offset-letter", sub,
                 f"letter {off.letter!r} already used by offset {letters[off.letter]}")
        else:
            letters[off.letter] = oid
        if off.kind is OffsetKind.GENERAL:
            if off.axis is None:
                _bad(out, "offset-general-axis", sub, "general offset needs a plane axis")
            else:
                au = off.axis.unit()
                if abs(abs(dot3(off.ort, au)) - 1.0) > 1e-9:
                    _bad(out, "offset-general-axis", sub,
                         "ort must be the plane normal (either sign)")
        else:
            missing = [p for p in off.displaced_points if p not in pts]
            if missing:
                _bad(out, "dangling-ref", sub, f"displaced points {missing} do not resolve")

    # break lines
    for bid, brk in scheme.breaks.items():
        sub = f"break:{bid}"
        if brk.pipe not in pipes or brk.offset not in scheme.offsets:
            _bad(out, "dangling-ref", sub, "pipe or offset id does not resolve")
            continue
        off = scheme.offsets[brk.offset]
        if brk.glyph is BreakGlyph.WAVES and off.magnitude >= 0:
            _bad(out, "break-glyph", sub, "wave glyph allowed only for compression")
        if off.kind is OffsetKind.GENERAL and off.axis is not None:
            a0, a1 = pipe_ends(scheme, brk.pipe)
            c0 = a0[off.axis.index] - off.plane_coord
            c1 = a1[off.axis.index] - off.plane_coord
            if not (min(c0, c1) < 0.0 < max(c0, c1)):
                _bad(out, "break-unaffected", sub,
                     "pipe does not cross the offset plane")
        if off.kind is OffsetKind.LOCAL:
            if not (0.0 <= brk.placement <= pipe_length(scheme, brk.pipe)):
                _bad(out, "break-unaffected", sub, "break position outside the pipe")

    # local offset cuts need break data, checked after breaks resolve
    from . import constraints  # deferred: constraints imports this module

    for oid, off in scheme.offsets.items():
        if off.kind is not OffsetKind.LOCAL:
            continue
        if any(p not in pts for p in off.displaced_points):
            continue  # already reported as dangling
        report = constraints.check_local_offset(scheme, oid)
        if report.verdict != "ok":
            _bad(out, "offset-local-cut", f"offset:{oid}", report.note)

    # symbol defs
    for sid, sym in scheme.symbols.items():
        sub = f"symbol:{sid}"
        if not sym.graphics:
            _bad(out, "symbol-empty", sub, "symbol has no graphics")
        if len(sym.cut_lengths) != sym.attach.legs:
            _bad(out, "symbol-cuts", sub,
                 f"{sym.attach.value} attach needs {sym.attach.legs} cut lengths")
        if any(c < 0 for c in sym.cut_lengths):
            _bad(out, "symbol-cuts", sub, "cut lengths must be non-negative")
        if sym.stretch_default <= 0:
            _bad(out, "symbol-stretch", sub, "stretch ratio must be positive")

    # blocks
    for bid, blk in scheme.blocks.items():
        sub = f"block:{bid}"
        if blk.symbol not in scheme.symbols or blk.pipe not in pipes:
            _bad(out, "dangling-ref", sub, "symbol or pipe id does not resolve")
            continue
        sym = scheme.symbols[blk.symbol]
        needs2 = sym.attach in (Attach.ANGULAR, Attach.TEE)
        needs3 = sym.attach is Attach.TEE
        if (blk.pipe2 is not None) != needs2:
            _bad(out, "block-pipes", sub,
                 f"pipe2 must be present iff attach is angular/tee")
        if (blk.pipe3 is not None) != needs3:
            _bad(out, "block-pipes", sub, "pipe3 must be present iff attach is tee")
        for ref in (blk.pipe2, blk.pipe3):
            if ref is not None and ref not in pipes:
                _bad(out, "dangling-ref", sub, f"attached pipe {ref} does not resolve")
        if not (0.0 <= blk.dist_from_start <= pipe_length(scheme, blk.pipe) + MERGE_EPS):
            _bad(out, "block-dist", sub, "attachment point outside the host pipe")
        else:
            anchor = pipe_point_at(scheme, blk.pipe, blk.dist_from_start)
            for ref in (blk.pipe2, blk.pipe3):
                if ref is None or ref not in pipes:
                    continue
                e0, e1 = pipe_ends(scheme, ref)
                if min(dist3(anchor, e0), dist3(anchor, e1)) > MERGE_EPS:
                    _bad(out, "block-pipes", sub,
                         f"attached pipe {ref} does not meet the attachment point")
        if blk.updir in (UpDir.PIPE2, UpDir.PIPE3) and sym.attach is Attach.AXIAL:
            _bad(out, "block-updir", sub, "pipe updir requires angular/tee attach")
        if blk.updir is UpDir.PIPE3 and sym.attach is not Attach.TEE:
            _bad(out, "block-updir", sub, "pipe3 updir requires tee attach")
        if blk.stretch <= 0:
            _bad(out, "block-stretch", sub, "stretch ratio must be positive")
        _check_style(out, sub, blk.style)
        if pipe_length(scheme, blk.pipe) > 0:
            legal = constraints.enumerate_block_orientations(
                scheme, blk.symbol, blk.pipe, blk.pipe2, blk.pipe3,
                dist_from_start=blk.dist_from_start)
            if (blk.flip, blk.updir) not in legal:
                _bad(out, "block-orientation", sub,
                     f"orientation ({blk.flip}, {blk.updir.value}) not in the legal set")

    # texts and leaders
    leaders_by_text: dict[int, list[tuple[TargetKind, int]]] = {}
    for lid, ld in scheme.pipe_leaders.items():
        sub = f"pipe_leader:{lid}"
        if ld.text not in scheme.texts or ld.pipe not in pipes:
            _bad(out, "dangling-ref", sub, "text or pipe id does not resolve")
            continue
        leaders_by_text.setdefault(ld.text, []).append((TargetKind.PIPE, lid))
        if not (0.0 <= ld.t <= pipe_length(scheme, ld.pipe)):
            _bad(out, "leader-range", sub, "pipe coordinate outside the pipe")
    for lid, ld in scheme.block_leaders.items():
        sub = f"block_leader:{lid}"
        if ld.text not in scheme.texts or ld.block not in scheme.blocks:
            _bad(out, "dangling-ref", sub, "text or block id does not resolve")
            continue
        leaders_by_text.setdefault(ld.text, []).append((TargetKind.BLOCK, lid))
        blk = scheme.blocks[ld.block]
        if blk.symbol in scheme.symbols:
            x0, y0, x1, y1 = symbol_bbox(scheme.symbols[blk.symbol])
            ax, ay = ld.anchor
            if not (x0 - 1e-9 <= ax <= x1 + 1e-9 and y0 - 1e-9 <= ay <= y1 + 1e-9):
                _bad(out, "leader-anchor", sub, "anchor outside the symbol bounding box")
    for tid, txt in scheme.texts.items():
        sub = f"text:{tid}"
        mine = leaders_by_text.get(tid, [])
        if not mine:
            _bad(out, "text-leaderless", sub, "no leader references this text")
            continue
        if txt.main_leader not in mine:
            _bad(out, "text-main", sub, "main leader does not reference this text")
        has_slope_sym = any(SLOPE_LEFT in ln or SLOPE_RIGHT in ln for ln in txt.lines)
        main_is_pipe = txt.main_leader[0] is TargetKind.PIPE
        want_format = main_is_pipe and has_slope_sym
        if (txt.slope_format is not None) != want_format:
            _bad(out, "text-slope-format", sub,
                 "slope format present iff main leader targets a pipe and"
                 " a line carries a slope symbol")
        _check_font(out, sub, txt.font)

    # position marks
    positions_in_use: set[int] = set()
    for mid, mark in scheme.position_marks.items():
        sub = f"mark:{mid}"
        store = pipes if mark.target_kind is TargetKind.PIPE else scheme.blocks
        if mark.target not in store:
            _bad(out, "dangling-ref", sub, "target id does not resolve")
        elif mark.target_kind is TargetKind.PIPE:
            if not (0.0 <= mark.anchor_t <= pipe_length(scheme, mark.target)):
                _bad(out, "leader-range", sub, "pipe coordinate outside the pipe")
        if not (1 <= len(mark.props) <= 8):
            _bad(out, "mark-props", sub, "a mark carries 1..8 positions")
        for ref in mark.props:
            if ref not in scheme.spec_props:
                _bad(out, "dangling-ref", sub, f"spec props {ref} does not resolve")
            else:
                positions_in_use.add(scheme.spec_props[ref].position)
        _check_font(out, sub, mark.font)

    # spec props
    seen_positions: dict[int, int] = {}
    for sid, props in scheme.spec_props.items():
        sub = f"props:{sid}"
        if props.position < 1:
            _bad(out, "props-position", sub, "position must be positive")
        if props.position in seen_positions:
            _bad(out, "props-position", sub,
                 f"position {props.position} already used by props {seen_positions[props.position]}")
        else:
            seen_positions[props.position] = sid
        if props.kind is SpecKind.FOR_BLOCK and props.qty <= 0:
            _bad(out, "props-qty", sub, "block quantity must be positive")
        if (props.extended is not None) != scheme.settings.spec_extended:
            _bad(out, "props-extended", sub,
                 "extended fields present iff the extended mode is set")
    if scheme.settings.autonumber and scheme.spec_props:
        have = sorted(p.position for p in scheme.spec_props.values())
        if have != list(range(1, len(have) + 1)):
            _bad(out, "props-dense", "props:*",
                 f"autonumbered positions must be exactly 1..{len(have)}, got {have}")

    # dimensions
    for did, dim in scheme.dimensions.items():
        sub = f"dim:{did}"
        if len(dim.points) < 2:
            _bad(out, "dim-points", sub, "a dimension needs at least two points")
            continue
        dangling = False
        for dp in dim.points:
            store = pts if dp.kind is DimPointKind.POINT else scheme.blocks
            if dp.ref not in store:
                _bad(out, "dangling-ref", sub, f"dim point {dp} does not resolve")
                dangling = True
        if dim.dim_dir.along_pipe and dim.dim_dir.pipe not in pipes:
            _bad(out, "dangling-ref", sub, "dimension direction pipe does not resolve")
            dangling = True
        if dangling:
            continue
        legal = constraints.legal_dimension_orientations(scheme, dim.points)
        key = (dim.ext_axis, dim.dim_dir)
        if key not in legal:
            _bad(out, "dim-orientation", sub,
                 f"({dim.ext_axis.value}, {'pipe' if dim.dim_dir.along_pipe else dim.dim_dir.axis.value})"
                 " is not a legal orientation for these points")

    # elevation marks
    for eid, mark in scheme.elevation_marks.items():
        sub = f"elevation:{eid}"
        store = pipes if mark.target_kind is TargetKind.PIPE else scheme.blocks
        if mark.target not in store:
            _bad(out, "dangling-ref", sub, "target id does not resolve")
            continue
        if mark.target_kind is TargetKind.PIPE and not (
            0.0 <= mark.t <= pipe_length(scheme, mark.target)
        ):
            _bad(out, "leader-range", sub, "pipe coordinate outside the pipe")
        if mark.ext_axis is Axis.Z:
            _bad(out, "elevation-axis", sub, "extension axis must be X or Y")

    # slope marks
    for sid, mark in scheme.slope_marks.items():
        sub = f"slope:{sid}"
        if mark.pipe not in pipes:
            _bad(out, "dangling-ref", sub, "pipe id does not resolve")
            continue
        if not (0.0 <= mark.t <= pipe_length(scheme, mark.pipe)):
            _bad(out, "leader-range", sub, "pipe coordinate outside the pipe")
        if mark.precision < 0:
            _bad(out, "slope-precision", sub, "precision must be non-negative")

    # axis grid
    grid = scheme.axis_grid
    if grid is not None:
        sub = "grid"
        if not grid.x_groups and not grid.y_groups:
            _bad(out, "grid-empty", sub, "grid needs groups on at least one axis")
        for groups in (grid.x_groups, grid.y_groups):
            for g in groups:
                if g.count < 1:
                    _bad(out, "grid-group", sub, "group count must be positive")
                if g.step <= 0:
                    _bad(out, "grid-group", sub, "group step must be positive")
        nx = sum(g.count for g in grid.x_groups)
        ny = sum(g.count for g in grid.y_groups)
        if any(i < 1 or i > nx for i in grid.settings.visible_x):
            _bad(out, "grid-visible", sub, "visible X indices outside the axis range")
        if any(i < 1 or i > ny for i in grid.settings.visible_y):
            _bad(out, "grid-visible", sub, "visible Y indices outside the axis range")

    # settings
    st = scheme.settings
    if st.occlusion_gap_len <= 0:
        _bad(out, "settings-invalid", "settings", "occlusion gap length must be positive")
    if st.scale <= 0:
        _bad(out, "settings-invalid", "settings", "scale must be positive")
    if st.slice.z_min is not None and st.slice.z_max is not None and not (
        st.slice.z_min < st.slice.z_max
    ):
        _bad(out, "settings-invalid", "settings", "slice bounds must be ordered")
    _check_style(out, "settings", st.pipe_style)

    return out


def connected_component(scheme: Scheme, pipe_id: int) -> set[int]:
    """Pipes transitively sharing endpoints with ``pipe_id``.

    Joint records are ignored: sharing a point is what connects pipes.
    """
    scheme.pipe(pipe_id)  # raises on unknown id
    by_point: dict[int, list[int]] = {}
    for pid, pipe in scheme.pipes.items():
        by_point.setdefault(pipe.start, []).append(pid)
        by_point.setdefault(pipe.end, []).append(pid)
    seen = {pipe_id}
    queue = [pipe_id]
    while queue:
        cur = queue.pop()
        pipe = scheme.pipes[cur]
        for pt in (pipe.start, pipe.end):
            for nxt in by_point.get(pt, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return seen
