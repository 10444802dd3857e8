"""Projection catalog, 3D->2D transform, offset application, height-layer
slicing and occlusion-gap computation.

The catalog covers the thirteen standard axonometric projections, the six
plain orthographic views, six extra oblique frontal projections receding
into the first quadrant, and one parametric custom entry.  Axis images are
pinned numeric literals so output never depends on the platform's libm.
"""

from dataclasses import dataclass, field

from . import model
from .model import OffsetKind, Scheme, Slice
from .vectors import Vec2, Vec3, add3, cross3, dist2, dist3, dot3, mul3, norm3, unit3


@dataclass(frozen=True)
class Projection:
    """2D images of the unit axes plus the depth-ordering direction.

    ``depth = p . view_dir`` grows toward the viewer: at a drawn crossing the
    segment with the smaller depth passes behind.
    """

    name: str
    ex: Vec2
    ey: Vec2
    ez: Vec2
    view_dir: Vec3


def _row(name, ex, ey, ez, view_dir) -> Projection:
    return Projection(name, ex, ey, ez, view_dir)


_CATALOG: tuple[Projection, ...] = (
    # -- 13 axonometric projections --
    _row("isometric",
         (-0.866025403784, -0.5), (0.866025403784, -0.5), (0, 1),
         (0.57735026919, 0.57735026919, 0.57735026919)),
    _row("dimetric",
         (-0.992187449333, -0.12475602345), (0.374959335037, -0.330765017904), (0, 1),
         (0.333333333333, 0.881917103688, 0.333333333333)),
    _row("dimetric-left",
         (0.992187449333, -0.12475602345), (-0.374959335037, -0.330765017904), (0, 1),
         (-0.333333333333, 0.881917103688, 0.333333333333)),
    _row("frontal-isometric-30",
         (1, 0), (-0.866025403784, -0.5), (0, 1),
         (-0.612372435696, -0.707106781187, -0.353553390593)),
    _row("frontal-isometric-45",
         (1, 0), (-0.707106781187, -0.707106781187), (0, 1),
         (-0.5, -0.707106781187, -0.5)),
    _row("frontal-isometric-60",
         (1, 0), (-0.5, -0.866025403784), (0, 1),
         (-0.353553390593, -0.707106781187, -0.612372435696)),
    _row("horizontal-isometric-30",
         (0.866025403784, -0.5), (0.5, 0.866025403784), (0, 1),
         (0.353553390593, -0.612372435696, 0.707106781187)),
    _row("horizontal-isometric-45",
         (0.707106781187, -0.707106781187), (0.707106781187, 0.707106781187), (0, 1),
         (0.5, -0.5, 0.707106781187)),
    _row("horizontal-isometric-60",
         (0.5, -0.866025403784), (0.866025403784, 0.5), (0, 1),
         (0.612372435696, -0.353553390593, 0.707106781187)),
    _row("frontal-dimetric-30",
         (1, 0), (-0.433012701892, -0.25), (0, 1),
         (-0.387298334621, -0.894427191, -0.22360679775)),
    _row("frontal-dimetric-45",
         (1, 0), (-0.353553390593, -0.353553390593), (0, 1),
         (-0.316227766017, -0.894427191, -0.316227766017)),
    _row("frontal-dimetric-60",
         (1, 0), (-0.25, -0.433012701892), (0, 1),
         (-0.22360679775, -0.894427191, -0.387298334621)),
    _row("frontal-dimetric-45-left",
         (1, 0), (0.353553390593, -0.353553390593), (0, 1),
         (0.316227766017, -0.894427191, -0.316227766017)),
    # -- 6 orthographic views --
    _row("view-front", (1, 0), (0, 0), (0, 1), (0, -1, 0)),
    _row("view-back", (-1, 0), (0, 0), (0, 1), (0, 1, 0)),
    _row("view-top", (1, 0), (0, 1), (0, 0), (0, 0, 1)),
    _row("view-bottom", (1, 0), (0, -1), (0, 0), (0, 0, -1)),
    _row("view-left", (0, 0), (-1, 0), (0, 1), (-1, 0, 0)),
    _row("view-right", (0, 0), (1, 0), (0, 1), (1, 0, 0)),
    # -- 6 extra oblique frontal projections, Y receding into quadrant I --
    _row("frontal-isometric-q1-30",
         (1, 0), (0.866025403784, 0.5), (0, 1),
         (0.612372435696, -0.707106781187, 0.353553390593)),
    _row("frontal-isometric-q1-45",
         (1, 0), (0.707106781187, 0.707106781187), (0, 1),
         (0.5, -0.707106781187, 0.5)),
    _row("frontal-isometric-q1-60",
         (1, 0), (0.5, 0.866025403784), (0, 1),
         (0.353553390593, -0.707106781187, 0.612372435696)),
    _row("frontal-dimetric-q1-30",
         (1, 0), (0.433012701892, 0.25), (0, 1),
         (0.387298334621, -0.894427191, 0.22360679775)),
    _row("frontal-dimetric-q1-45",
         (1, 0), (0.353553390593, 0.353553390593), (0, 1),
         (0.316227766017, -0.894427191, 0.316227766017)),
    _row("frontal-dimetric-q1-60",
         (1, 0), (0.25, 0.433012701892), (0, 1),
         (0.22360679775, -0.894427191, 0.387298334621)),
)


def custom_projection(view_dir: Vec3, up: Vec3 = (0.0, 0.0, 1.0),
                      name: str = "custom") -> Projection:
    """True orthographic projection along user-given spatial axes."""
    w = unit3(view_dir)
    h = cross3(up, w)
    if norm3(h) < 1e-12:  # viewing straight along up: fall back to world X
        h = cross3((1.0, 0.0, 0.0), w)
    h = unit3(h)
    v = cross3(w, h)
    axes = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    ex, ey, ez = ((dot3(a, h), dot3(a, v)) for a in axes)
    return Projection(name, ex, ey, ez, w)


def projection_catalog() -> list[Projection]:
    """The full named catalog: 13 axonometric + 6 views + 6 oblique + custom."""
    return list(_CATALOG) + [custom_projection((1.0, 1.0, 1.0))]


def projection_by_name(name: str) -> Projection:
    for proj in projection_catalog():
        if proj.name == name:
            return proj
    known = ", ".join(p.name for p in projection_catalog())
    raise KeyError(f"unknown projection {name!r}; catalog: {known}")


def project_point(proj: Projection, p: Vec3) -> tuple[Vec2, float]:
    """Map a nature point to the drawing plane (nature-scale mm) plus depth."""
    u = p[0] * proj.ex[0] + p[1] * proj.ey[0] + p[2] * proj.ez[0]
    v = p[0] * proj.ex[1] + p[1] * proj.ey[1] + p[2] * proj.ez[1]
    return (u, v), dot3(p, proj.view_dir)


# -- offsets ----------------------------------------------------------------

def point_displacements(scheme: Scheme) -> dict[int, Vec3]:
    """Displacement vector per point id; offsets affecting a point sum up."""
    from . import constraints

    out: dict[int, Vec3] = {}
    for pid in scheme.points:
        d = (0.0, 0.0, 0.0)
        for off in scheme.offsets.values():
            if constraints.offset_affects_point(scheme, off, pid):
                d = add3(d, mul3(off.ort, off.magnitude))
        out[pid] = d
    return out


def apply_offsets(scheme: Scheme) -> dict[int, Vec3]:
    """Displaced position per point id (original plus accumulated offsets)."""
    return {
        pid: add3(scheme.points[pid].as_tuple(), d)
        for pid, d in point_displacements(scheme).items()
    }


def displacement_on_pipe(scheme: Scheme, pipe_id: int, t: float) -> Vec3:
    """Displacement of the point at arc length ``t`` on a pipe."""
    from . import constraints

    d = (0.0, 0.0, 0.0)
    for off in scheme.offsets.values():
        if constraints.offset_affects_pipe_pos(scheme, off, pipe_id, t):
            d = add3(d, mul3(off.ort, off.magnitude))
    return d


def displaced_pipe_pos(scheme: Scheme, pipe_id: int, t: float) -> Vec3:
    p = model.pipe_point_at(scheme, pipe_id, t)
    return add3(p, displacement_on_pipe(scheme, pipe_id, t))


def pipe_split_params(scheme: Scheme, pipe_id: int) -> list[tuple[float, int]]:
    """Arc-length positions where offsets break this pipe, with offset ids.

    General offsets split at the plane crossing, local offsets at their break
    position.  Sorted ascending; at most one entry per offset.
    """
    from . import constraints

    a, b = model.pipe_ends(scheme, pipe_id)
    length = model.pipe_length(scheme, pipe_id)
    splits: list[tuple[float, int]] = []
    for oid, off in scheme.offsets.items():
        if not constraints.pipe_crosses_offset(scheme, off, pipe_id):
            continue
        if off.kind is OffsetKind.GENERAL:
            denom = b[off.axis.index] - a[off.axis.index]
            if denom == 0.0:
                continue
            frac = (off.plane_coord - a[off.axis.index]) / denom
            splits.append((min(max(frac, 0.0), 1.0) * length, oid))
        else:
            brk = next((x for x in scheme.breaks.values()
                        if x.pipe == pipe_id and x.offset == oid), None)
            if brk is not None:
                splits.append((brk.placement, oid))
    splits.sort()
    return splits


@dataclass
class DrawnSpan:
    """One rigidly displaced piece of a pipe's drawn image.

    2D coordinates are nature-scale drawing-plane mm (not yet paper-scaled);
    ``t0``/``t1`` are the nature arc-length bounds on the pipe.
    """

    p0: Vec2
    p1: Vec2
    t0: float
    t1: float
    split_offset: int | None = None  # offset causing the gap before this span


def pipe_drawn_spans(scheme: Scheme, proj: Projection, pipe_id: int) -> list[DrawnSpan]:
    length = model.pipe_length(scheme, pipe_id)
    splits = pipe_split_params(scheme, pipe_id)
    bounds = [0.0] + [t for t, _ in splits] + [length]
    spans: list[DrawnSpan] = []
    for i in range(len(bounds) - 1):
        t0, t1 = bounds[i], bounds[i + 1]
        mid = 0.5 * (t0 + t1)
        d = displacement_on_pipe(scheme, pipe_id, mid)
        q0 = add3(model.pipe_point_at(scheme, pipe_id, t0), d)
        q1 = add3(model.pipe_point_at(scheme, pipe_id, t1), d)
        u0, _ = project_point(proj, q0)
        u1, _ = project_point(proj, q1)
        gap_offset = splits[i - 1][1] if i > 0 else None
        spans.append(DrawnSpan(u0, u1, t0, t1, gap_offset))
    return spans


# -- block coverage ----------------------------------------------------------

def coverage_intervals(scheme: Scheme, pipe_id: int) -> list[tuple[float, float]]:
    """Merged nature-mm spans of a pipe hidden by blocks.

    Each symbol leg removes ``cut_length / scale`` of pipe centred at its
    attachment point, clipped to the pipe extent.
    """
    scale = scheme.settings.scale
    length = model.pipe_length(scheme, pipe_id)
    raw: list[tuple[float, float]] = []
    for bid, blk in scheme.blocks.items():
        sym = scheme.symbols.get(blk.symbol)
        if sym is None:
            continue
        legs: list[tuple[int, float, float]] = [
            (blk.pipe, blk.dist_from_start, sym.cut_lengths[0])]
        anchor = model.block_anchor_point(scheme, bid)
        for i, ref in enumerate((blk.pipe2, blk.pipe3), start=1):
            if ref is None or i >= len(sym.cut_lengths) or ref not in scheme.pipes:
                continue
            e0, e1 = model.pipe_ends(scheme, ref)
            at = 0.0 if dist3(anchor, e0) <= dist3(anchor, e1) else model.pipe_length(scheme, ref)
            legs.append((ref, at, sym.cut_lengths[i]))
        for leg_pipe, centre, cut_paper in legs:
            if leg_pipe != pipe_id or cut_paper <= 0.0:
                continue
            half = cut_paper / scale * blk.stretch / 2.0
            lo = max(0.0, centre - half)
            hi = min(length, centre + half)
            if hi > lo:
                raw.append((lo, hi))
    raw.sort()
    merged: list[tuple[float, float]] = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def pipe_fully_covered(scheme: Scheme, pipe_id: int) -> bool:
    spans = coverage_intervals(scheme, pipe_id)
    length = model.pipe_length(scheme, pipe_id)
    return len(spans) == 1 and spans[0][0] <= 0.0 and spans[0][1] >= length


# -- slicing ----------------------------------------------------------------

@dataclass
class Selection:
    """Per-class id sets picked by a height slab."""

    pipes: set[int] = field(default_factory=set)
    joints: set[int] = field(default_factory=set)
    breaks: set[int] = field(default_factory=set)
    blocks: set[int] = field(default_factory=set)
    texts: set[int] = field(default_factory=set)
    pipe_leaders: set[int] = field(default_factory=set)
    block_leaders: set[int] = field(default_factory=set)
    position_marks: set[int] = field(default_factory=set)
    dimensions: set[int] = field(default_factory=set)
    elevation_marks: set[int] = field(default_factory=set)
    slope_marks: set[int] = field(default_factory=set)
    grid: bool = False


def slice_scheme(scheme: Scheme, slc: Slice) -> Selection:
    """Select the sub-scheme touched by a height slab.

    Pipes are in when their z-range touches the slab; blocks, elevation and
    slope marks when their indicated point is inside; dimensions when at
    least one dimensioned point is inside; joints, breaks, leaders, texts and
    position marks follow their targets; the grid when its plane is inside.
    """
    sel = Selection()

    def inside(z: float) -> bool:
        return slc.contains(z)

    for pid, pipe in scheme.pipes.items():
        za = scheme.point(pipe.start).z
        zb = scheme.point(pipe.end).z
        if slc.is_all or (min(za, zb) <= slc.z_max and max(za, zb) >= slc.z_min):
            sel.pipes.add(pid)
    for jid, joint in scheme.joints.items():
        if joint.pipe_a in sel.pipes and joint.pipe_b in sel.pipes:
            sel.joints.add(jid)
    for bid, brk in scheme.breaks.items():
        if brk.pipe in sel.pipes:
            sel.breaks.add(bid)
    for bid, blk in scheme.blocks.items():
        if inside(model.block_anchor_point(scheme, bid)[2]):
            sel.blocks.add(bid)
    for lid, ld in scheme.pipe_leaders.items():
        if ld.pipe in sel.pipes:
            sel.pipe_leaders.add(lid)
            sel.texts.add(ld.text)
    for lid, ld in scheme.block_leaders.items():
        if ld.block in sel.blocks:
            sel.block_leaders.add(lid)
            sel.texts.add(ld.text)
    for mid, mark in scheme.position_marks.items():
        store = sel.pipes if mark.target_kind is model.TargetKind.PIPE else sel.blocks
        if mark.target in store:
            sel.position_marks.add(mid)
    for did, dim in scheme.dimensions.items():
        for dp in dim.points:
            if dp.kind is model.DimPointKind.POINT:
                z = scheme.point(dp.ref).z
            else:
                z = model.block_anchor_point(scheme, dp.ref)[2]
            if inside(z):
                sel.dimensions.add(did)
                break
    for eid, mark in scheme.elevation_marks.items():
        if mark.target_kind is model.TargetKind.PIPE:
            z = model.pipe_point_at(scheme, mark.target, mark.t)[2]
        else:
            z = model.block_anchor_point(scheme, mark.target)[2]
        if inside(z):
            sel.elevation_marks.add(eid)
    for sid, mark in scheme.slope_marks.items():
        if inside(model.pipe_point_at(scheme, mark.pipe, mark.t)[2]):
            sel.slope_marks.add(sid)
    if scheme.axis_grid is not None and inside(scheme.axis_grid.settings.plane_z):
        sel.grid = True
    return sel


# -- occlusion --------------------------------------------------------------

def _segment_crossing(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2):
    """Interior crossing params (s, t) of two 2D segments, or None.

    Endpoint touches and (anti)parallel segments do not count.
    """
    d1 = (a1[0] - a0[0], a1[1] - a0[1])
    d2 = (b1[0] - b0[0], b1[1] - b0[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    scale = max(abs(d1[0]), abs(d1[1]), abs(d2[0]), abs(d2[1]), 1e-30)
    if abs(denom) <= 1e-12 * scale * scale:
        return None
    r = (b0[0] - a0[0], b0[1] - a0[1])
    s = (r[0] * d2[1] - r[1] * d2[0]) / denom
    t = (r[0] * d1[1] - r[1] * d1[0]) / denom
    eps = 1e-9
    if eps < s < 1.0 - eps and eps < t < 1.0 - eps:
        return s, t
    return None


def occlusion_gaps(scheme: Scheme, proj: Projection,
                   include: set[int] | None = None) -> list[tuple[int, tuple[float, float]]]:
    """Paper-mm gap intervals where a pipe passes behind another.

    For every interior 2D crossing of two drawn pipe images, the pipe that is
    farther from the viewer receives a gap of ``Settings.occlusion_gap_len``
    centred at the crossing.  Intervals are measured along the pipe's drawn
    chain in paper mm.  Empty when occlusion visibility is off.
    """
    if not scheme.settings.visibility.occlusion:
        return []
    scale = scheme.settings.scale
    gap = scheme.settings.occlusion_gap_len

    chains: dict[int, list[DrawnSpan]] = {}
    offsets_paper: dict[int, list[float]] = {}
    for pid in scheme.pipes:
        if include is not None and pid not in include:
            continue
        if model.pipe_length(scheme, pid) == 0.0:
            continue
        spans = pipe_drawn_spans(scheme, proj, pid)
        chains[pid] = spans
        acc = [0.0]
        for s in spans:
            acc.append(acc[-1] + dist2(s.p0, s.p1) * scale)
        offsets_paper[pid] = acc

    def true_depth(pipe_id: int, span: DrawnSpan, s: float) -> float:
        t = span.t0 + s * (span.t1 - span.t0)
        p = model.pipe_point_at(scheme, pipe_id, t)
        return dot3(p, proj.view_dir)

    out: list[tuple[int, tuple[float, float]]] = []
    ids = sorted(chains)
    for i, pa in enumerate(ids):
        for pb in ids[i + 1:]:
            for ia, sa in enumerate(chains[pa]):
                for ib, sb in enumerate(chains[pb]):
                    hit = _segment_crossing(sa.p0, sa.p1, sb.p0, sb.p1)
                    if hit is None:
                        continue
                    s, t = hit
                    da = true_depth(pa, sa, s)
                    db = true_depth(pb, sb, t)
                    if abs(da - db) <= 1e-9:
                        continue  # a true 3D meeting point: nothing hides
                    if da < db:
                        victim, vspan_i, vs = pa, ia, s
                    else:
                        victim, vspan_i, vs = pb, ib, t
                    spans = chains[victim]
                    span = spans[vspan_i]
                    centre = offsets_paper[victim][vspan_i] + vs * dist2(span.p0, span.p1) * scale
                    total = offsets_paper[victim][-1]
                    lo = max(0.0, centre - gap / 2.0)
                    hi = min(total, centre + gap / 2.0)
                    out.append((victim, (lo, hi)))
    out.sort(key=lambda g: (g[0], g[1]))
    return out
