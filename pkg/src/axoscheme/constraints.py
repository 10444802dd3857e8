"""Compatibility calculus: pipe overlap, offset legality, dimension
orientation legality and block orientation enumeration.

Everything here is a pure function over a scheme snapshot.  Collinearity and
coplanarity use a tolerance of 1e-6 relative to the point-set diameter;
unit-vector parallelism uses an absolute 1e-9.
"""

from dataclasses import dataclass

from . import model
from .model import (
    Attach,
    Axis,
    DimDirection,
    DimPoint,
    DimPointKind,
    OffsetKind,
    Scheme,
    UpDir,
)
from .vectors import Vec3, cross3, dist3, dot3, mul3, norm3, sub3, unit3

REL_TOL = 1e-6       # relative to point-set diameter
PARALLEL_TOL = 1e-9  # for unit vectors

OK = "ok"
VIOLATION = "violation"


@dataclass
class LegalityReport:
    subject: str
    rule: str
    verdict: str  # "ok" | "violation"
    note: str = ""


def _ok(subject: str, rule: str) -> LegalityReport:
    return LegalityReport(subject, rule, OK)


def _viol(subject: str, rule: str, note: str) -> LegalityReport:
    return LegalityReport(subject, rule, VIOLATION, note)


# -- pipe overlap -----------------------------------------------------------

def check_pipe_overlap(scheme: Scheme, start: int, end: int) -> LegalityReport:
    """Validate a candidate pipe between two existing points.

    A violation is reported for a zero-length candidate or for a collinear
    overlap of positive length with any stored pipe; a shared endpoint alone
    is fine.
    """
    a = scheme.point(start).as_tuple()
    b = scheme.point(end).as_tuple()
    subject = f"pipe:{start}-{end}"
    if start == end or dist3(a, b) < model.MERGE_EPS:
        return _viol(subject, "pipe-zero-length", "zero-length pipes are forbidden")
    for pid in scheme.pipes:
        b0, b1 = model.pipe_ends(scheme, pid)
        if model._segments_overlap(a, b, b0, b1):
            return _viol(subject, "pipe-overlap",
                         f"collinear overlap with pipe {pid}")
    return _ok(subject, "pipe-overlap")


# -- general offsets --------------------------------------------------------

def _general_side(off, p: Vec3) -> bool:
    """True when ``p`` is strictly on the displaced side of a general offset."""
    sign = dot3(off.ort, off.axis.unit())
    return (p[off.axis.index] - off.plane_coord) * sign > 0.0


def offset_affects_point(scheme: Scheme, off, point_id: int) -> bool:
    if off.kind is OffsetKind.GENERAL:
        if off.axis is None:
            return False
        return _general_side(off, scheme.point(point_id).as_tuple())
    return point_id in off.displaced_points


def offset_affects_pipe_pos(scheme: Scheme, off, pipe_id: int, t: float) -> bool:
    """Whether the offset displaces the point at arc length ``t`` on a pipe."""
    if off.kind is OffsetKind.GENERAL:
        if off.axis is None:
            return False
        return _general_side(off, model.pipe_point_at(scheme, pipe_id, t))
    pipe = scheme.pipe(pipe_id)
    brk = _local_break_on(scheme, off, pipe_id)
    if brk is None:
        return pipe.start in off.displaced_points
    if t > brk.placement:
        return pipe.end in off.displaced_points
    return pipe.start in off.displaced_points


def _local_break_on(scheme: Scheme, off, pipe_id: int):
    for oid, brk in scheme.breaks.items():
        if brk.pipe == pipe_id and scheme.offsets.get(brk.offset) is off:
            return brk
    return None


def pipe_crosses_offset(scheme: Scheme, off, pipe_id: int) -> bool:
    """A pipe is affected when its endpoints displace differently."""
    pipe = scheme.pipe(pipe_id)
    return (offset_affects_point(scheme, off, pipe.start)
            != offset_affects_point(scheme, off, pipe.end))


def check_general_offset(scheme: Scheme, offset_id: int) -> list[LegalityReport]:
    """Check every pipe and dimension line crossed by a general offset plane.

    Crossing pipes and crossing dimension lines must run along the plane
    normal; crossing pipes must carry a break line of this offset.
    """
    off = scheme.offset(offset_id)
    out: list[LegalityReport] = []
    axis_u = off.axis.unit()
    broken = {b.pipe for b in scheme.breaks.values() if b.offset == offset_id}
    for pid in scheme.pipes:
        if not pipe_crosses_offset(scheme, off, pid):
            continue
        d = model.pipe_direction(scheme, pid)
        if norm3(cross3(d, axis_u)) > PARALLEL_TOL:
            out.append(_viol(f"pipe:{pid}", "offset-oblique-pipe",
                             f"pipe crosses offset {off.letter!r} obliquely"))
        if pid not in broken:
            out.append(_viol(f"pipe:{pid}", "offset-missing-break",
                             f"crossing pipe lacks a break line of offset {off.letter!r}"))
    for did, dim in scheme.dimensions.items():
        flags = [_dim_point_affected(scheme, off, dp) for dp in dim.points]
        if not (any(flags) and not all(flags)):
            continue
        if dim.dim_dir.along_pipe:
            d = model.pipe_direction(scheme, dim.dim_dir.pipe)
        else:
            d = dim.dim_dir.axis.unit()
        if norm3(cross3(d, axis_u)) > PARALLEL_TOL:
            out.append(_viol(f"dim:{did}", "offset-oblique-dimension",
                             f"dimension line crosses offset {off.letter!r} obliquely"))
    return out


def _dim_point_affected(scheme: Scheme, off, dp: DimPoint) -> bool:
    if dp.kind is DimPointKind.POINT:
        return offset_affects_point(scheme, off, dp.ref)
    blk = scheme.block(dp.ref)
    return offset_affects_pipe_pos(scheme, off, blk.pipe, blk.dist_from_start)


# -- local offsets ----------------------------------------------------------

def check_local_offset(scheme: Scheme, offset_id: int) -> LegalityReport:
    """Validate that a local offset's breaks form a clean graph cut.

    Removing the broken pipes must separate the displaced point set from its
    complement, with every break sitting on the boundary.
    """
    off = scheme.offset(offset_id)
    subject = f"offset:{offset_id}"
    rule = "offset-local-cut"
    breaks = [b for b in scheme.breaks.values() if b.offset == offset_id]
    if not breaks:
        return _viol(subject, rule, "local offset has no break lines (empty cut)")
    broken_pipes = {b.pipe for b in breaks}
    displaced = off.displaced_points

    for b in breaks:
        pipe = scheme.pipe(b.pipe)
        if (pipe.start in displaced) == (pipe.end in displaced):
            return _viol(subject, rule,
                         f"break on pipe {b.pipe} does not lie on the cut boundary")

    # components of the point graph with the broken pipes removed
    adjacency: dict[int, list[int]] = {pid: [] for pid in scheme.points}
    for pid, pipe in scheme.pipes.items():
        if pid in broken_pipes:
            continue
        adjacency[pipe.start].append(pipe.end)
        adjacency[pipe.end].append(pipe.start)
    seen: set[int] = set()
    for root in scheme.points:
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            cur = stack.pop()
            for nxt in adjacency[cur]:
                if nxt not in comp:
                    comp.add(nxt)
                    stack.append(nxt)
        seen |= comp
        inside = comp & displaced
        if inside and inside != comp:
            return _viol(subject, rule,
                         "a pipe joins the displaced and fixed sides without a break")
    return _ok(subject, rule)


# -- dimension orientation legality ----------------------------------------

def _diameter(coords: list[Vec3]) -> float:
    best = 0.0
    for i, a in enumerate(coords):
        for b in coords[i + 1:]:
            d = dist3(a, b)
            if d > best:
                best = d
    return best


def _line_direction(coords: list[Vec3], tol: float) -> Vec3 | None:
    """Unit direction when all points are collinear, else None."""
    base = coords[0]
    far = None
    far_d = 0.0
    for c in coords[1:]:
        d = dist3(base, c)
        if d > far_d:
            far_d = d
            far = c
    if far is None or far_d <= tol:
        return None
    u = unit3(sub3(far, base))
    for c in coords:
        if norm3(cross3(sub3(c, base), u)) > tol:
            return None
    return u


def _plane_normal(coords: list[Vec3], tol: float) -> Vec3 | None:
    """Unit normal when all points are coplanar (and not collinear), else None."""
    base = coords[0]
    normal = None
    best = 0.0
    for i in range(1, len(coords)):
        for j in range(i + 1, len(coords)):
            n = cross3(sub3(coords[i], base), sub3(coords[j], base))
            m = norm3(n)
            if m > best:
                best = m
                normal = n
    if normal is None or best <= tol * tol:
        return None
    nu = unit3(normal)
    for c in coords:
        if abs(dot3(sub3(c, base), nu)) > tol:
            return None
    return nu


def _axis_of(u: Vec3, tol: float) -> Axis | None:
    for axis in Axis:
        if norm3(cross3(u, axis.unit())) <= tol:
            return axis
    return None


def _pipes_on_line(scheme: Scheme, base: Vec3, u: Vec3, tol: float) -> list[int]:
    found = []
    for pid in scheme.pipes:
        a, b = model.pipe_ends(scheme, pid)
        d = sub3(b, a)
        if norm3(d) == 0.0:
            continue
        du = unit3(d)
        if norm3(cross3(du, u)) > tol:
            continue
        if norm3(cross3(sub3(a, base), u)) > tol:
            continue
        found.append(pid)
    return found


def legal_dimension_orientations(
    scheme: Scheme, dim_points: list[DimPoint]
) -> set[tuple[Axis, DimDirection]]:
    """All (extension axis, dimension direction) pairs legal for the points."""
    coords = []
    for dp in dim_points:
        if dp.kind is DimPointKind.POINT:
            coords.append(scheme.point(dp.ref).as_tuple())
        else:
            coords.append(model.block_anchor_point(scheme, dp.ref))

    def affected(off, i: int) -> bool:
        return _dim_point_affected(scheme, off, dim_points[i])

    return _orientations(scheme, coords, affected)


def legal_orientations_at(
    scheme: Scheme, coords: list[Vec3]
) -> set[tuple[Axis, DimDirection]]:
    """Orientation calculus over raw coordinates.

    Local offsets are resolved through the nearest stored point; intended for
    schemes whose dimension points are plain spatial points.
    """
    def affected(off, i: int) -> bool:
        if off.kind is OffsetKind.GENERAL:
            return _general_side(off, coords[i])
        for pid in off.displaced_points:
            if dist3(scheme.point(pid).as_tuple(), coords[i]) < model.MERGE_EPS:
                return True
        return False

    return _orientations(scheme, coords, affected)


def _orientations(scheme, coords, affected) -> set[tuple[Axis, DimDirection]]:
    empty: set[tuple[Axis, DimDirection]] = set()
    if len(coords) < 2:
        return empty
    diameter = _diameter(coords)
    tol = max(REL_TOL * diameter, model.MERGE_EPS)

    # (a) coincident points are always illegal
    for i, a in enumerate(coords):
        for b in coords[i + 1:]:
            if dist3(a, b) < tol:
                return empty

    line_u = _line_direction(coords, tol)

    # (f) offsets moving a strict subset must stay within the plane/axis
    for off in scheme.offsets.values():
        flags = [affected(off, i) for i in range(len(coords))]
        if not (any(flags) and not all(flags)):
            continue
        if line_u is not None:
            if norm3(cross3(off.ort, line_u)) > PARALLEL_TOL:
                return empty
        else:
            normal = _plane_normal(coords, tol)
            if normal is None or abs(dot3(off.ort, normal)) > PARALLEL_TOL:
                return empty

    if line_u is None:
        # non-collinear: the plane must be parallel to a coordinate plane
        normal = _plane_normal(coords, tol)
        if normal is None:
            return empty  # non-coplanar
        perp = _axis_of(normal, PARALLEL_TOL)
        if perp is None:
            return empty  # plane not parallel to a coordinate plane
        in_plane = [a for a in Axis if a is not perp]
        return {
            (in_plane[0], DimDirection(axis=in_plane[1])),
            (in_plane[1], DimDirection(axis=in_plane[0])),
        }

    # collinear cases
    axis = _axis_of(line_u, PARALLEL_TOL)
    if axis is not None:
        others = [a for a in Axis if a is not axis]
        return {(e, DimDirection(axis=axis)) for e in others}

    pipes = _pipes_on_line(scheme, coords[0], line_u, tol)
    if not pipes:
        return empty  # a free oblique line is not a legal carrier
    zero_components = [a for a in Axis if abs(line_u[a.index]) <= PARALLEL_TOL]
    result: set[tuple[Axis, DimDirection]] = set()
    if not zero_components:
        # parallel to no coordinate plane: dimension only along the pipe
        for pid in pipes:
            for ext in Axis:
                result.add((ext, DimDirection(pipe=pid)))
        return result
    # parallel to exactly one coordinate plane: its perpendicular axis is out
    perp = zero_components[0]
    in_plane = [a for a in Axis if a is not perp]
    for pid in pipes:
        for ext in in_plane:
            result.add((ext, DimDirection(pipe=pid)))
    result.add((in_plane[0], DimDirection(axis=in_plane[1])))
    result.add((in_plane[1], DimDirection(axis=in_plane[0])))
    return result


# -- block orientation ------------------------------------------------------

_UPDIR_ORDER = (UpDir.XP, UpDir.XM, UpDir.YP, UpDir.YM, UpDir.ZP, UpDir.ZM,
                UpDir.PIPE2, UpDir.PIPE3)
_NEGATIVE_UPDIRS = (UpDir.XM, UpDir.YM, UpDir.ZM)


def attached_pipe_direction(scheme: Scheme, anchor: Vec3, pipe_id: int) -> Vec3:
    """Unit direction of an attached pipe, pointing away from the anchor."""
    a, b = model.pipe_ends(scheme, pipe_id)
    if dist3(anchor, a) <= dist3(anchor, b):
        return unit3(sub3(b, a))
    return unit3(sub3(a, b))


def _updir_target(scheme: Scheme, updir: UpDir, anchor: Vec3,
                  pipe2: int | None, pipe3: int | None) -> Vec3 | None:
    if updir.is_axis:
        return updir.axis_vector()
    ref = pipe2 if updir is UpDir.PIPE2 else pipe3
    if ref is None:
        return None
    return attached_pipe_direction(scheme, anchor, ref)


def enumerate_block_orientations(
    scheme: Scheme,
    symbol_id: int,
    pipe_id: int,
    pipe2: int | None = None,
    pipe3: int | None = None,
    dist_from_start: float = 0.0,
) -> list[tuple[bool, UpDir]]:
    """All legal (flip, updir) pairs for placing a symbol on a pipe.

    Updir choices parallel to the host pipe are excluded (their normal is
    degenerate); the symbol's symmetry flags quotient the list, keeping the
    first representative in enumeration order.  Never exceeds 16 entries.
    """
    sym = scheme.symbol(symbol_id)
    host_u = model.pipe_direction(scheme, pipe_id)
    anchor = model.pipe_point_at(scheme, pipe_id, dist_from_start)

    updirs: list[UpDir] = []
    for ud in _UPDIR_ORDER:
        if ud is UpDir.PIPE2 and (pipe2 is None or sym.attach is Attach.AXIAL):
            continue
        if ud is UpDir.PIPE3 and (pipe3 is None or sym.attach is not Attach.TEE):
            continue
        if sym.sym_normal and ud in _NEGATIVE_UPDIRS:
            continue
        target = _updir_target(scheme, ud, anchor, pipe2, pipe3)
        if target is None:
            continue
        if norm3(cross3(target, host_u)) <= PARALLEL_TOL:
            continue  # degenerate: no normal component
        updirs.append(ud)

    flips = (False,) if sym.sym_axis else (False, True)
    return [(flip, ud) for flip in flips for ud in updirs]


def resolve_block_frame(scheme: Scheme, block_id: int):
    """Orthonormal right-handed frame (origin, ex, ey, ez) of a placed block.

    ``ex`` follows the host pipe (negated by flip); ``ey`` is the updir
    target's component orthogonal to ``ex`` and makes an acute angle with it.
    """
    blk = scheme.block(block_id)
    origin = model.pipe_point_at(scheme, blk.pipe, blk.dist_from_start)
    ex = model.pipe_direction(scheme, blk.pipe)
    if blk.flip:
        ex = mul3(ex, -1.0)
    target = _updir_target(scheme, blk.updir, origin, blk.pipe2, blk.pipe3)
    if target is None:
        raise model.EditError(f"block {block_id}: updir target is missing")
    perp = sub3(target, mul3(ex, dot3(target, ex)))
    n = norm3(perp)
    if n <= PARALLEL_TOL:
        raise model.EditError(f"block {block_id}: updir parallel to the pipe axis")
    ey = mul3(perp, 1.0 / n)
    ez = cross3(ex, ey)
    return origin, ex, ey, ez
