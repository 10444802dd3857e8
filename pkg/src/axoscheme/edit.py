"""Mutating operations: merging point insertion, validated pipe/offset/block
placement, cascade deletion, position renumbering, slope-text sync.

Every operation leaves the scheme with ``integrity_check(scheme) == []``.
"""

import math
import re
from dataclasses import dataclass, field

from . import constraints, model
from .model import (
    Attach,
    Axis,
    BreakLine,
    DimPointKind,
    EditError,
    LineStyle,
    Offset,
    OffsetKind,
    Pipe,
    Point3,
    Scheme,
    SlopeFormat,
    TargetKind,
    UpDir,
)
from .vectors import Vec3, dist3, mul3

# Drafting letter run: Cyrillic а..я without the unused ъ, ы, ь, й.
OFFSET_LETTERS = "абвгдежзиклмнопрстуфхцчшщэюя"


def offset_letter(n: int) -> str:
    """n-th letter of the offset sequence (0-based), doubling after я: аа, аб, ..."""
    base = len(OFFSET_LETTERS)
    out = ""
    n += 1
    while n > 0:
        n, rem = divmod(n - 1, base)
        out = OFFSET_LETTERS[rem] + out
    return out


def next_offset_letter(scheme: Scheme) -> str:
    used = {off.letter for off in scheme.offsets.values()}
    n = 0
    while offset_letter(n) in used:
        n += 1
    return offset_letter(n)


# -- points and pipes --------------------------------------------------------

def add_point(scheme: Scheme, x: float, y: float, z: float) -> int:
    """Insert a point, merging with an existing one within the tolerance."""
    if not all(math.isfinite(c) for c in (x, y, z)):
        raise EditError("point coordinates must be finite")
    for pid, p in scheme.points.items():
        if dist3(p.as_tuple(), (x, y, z)) < model.MERGE_EPS:
            return pid
    return scheme.insert("points", Point3(x, y, z))


def add_pipe(scheme: Scheme, a: int, b: int, style: LineStyle | None = None) -> int:
    report = constraints.check_pipe_overlap(scheme, a, b)
    if report.verdict != constraints.OK:
        raise EditError(f"{report.rule}: {report.note}")
    if style is None:
        st = scheme.settings.pipe_style
        style = LineStyle(st.color, st.line_type)
    return scheme.insert("pipes", Pipe(a, b, style))


def move_point(scheme: Scheme, point_id: int, x: float, y: float, z: float) -> None:
    """Relocate a point, then resync slope texts of the pipes at it.

    The move is transactional: if any invariant would break (coincidence,
    zero-length or overlapping pipes, out-of-range anchors, a dimension left
    without a legal orientation), the point is restored and the edit rejected.
    """
    pt = scheme.point(point_id)
    if not all(math.isfinite(c) for c in (x, y, z)):
        raise EditError("point coordinates must be finite")
    old = (pt.x, pt.y, pt.z)
    pt.x, pt.y, pt.z = x, y, z
    problems = model.integrity_check(scheme)
    if problems:
        pt.x, pt.y, pt.z = old
        raise EditError("; ".join(
            f"{v.rule} {v.subject}: {v.message}" for v in problems[:3]))
    for pid, pipe in scheme.pipes.items():
        if point_id in (pipe.start, pipe.end):
            sync_slope_texts(scheme, pid)


# -- offsets -----------------------------------------------------------------

@dataclass
class GeneralOffsetSpec:
    axis: Axis
    plane_coord: float
    magnitude: float  # positive stretches, negative compresses
    toward_positive: bool = True  # displaced side lies on the +axis side


@dataclass
class LocalOffsetSpec:
    ort: Vec3
    magnitude: float
    breaks: list[tuple[int, float]]  # (pipe id, break position from start)
    displaced_seed: int              # a point on the displaced side


def add_offset(scheme: Scheme, spec: GeneralOffsetSpec | LocalOffsetSpec) -> int:
    """Add an offset with an auto-assigned letter.

    General offsets auto-create break lines with scheme defaults on every
    crossing pipe; local offsets derive their displaced point set from the
    seed point.  Legality violations reject the edit unchanged.
    """
    letter = next_offset_letter(scheme)
    st = scheme.settings.breaks
    if isinstance(spec, GeneralOffsetSpec):
        sign = 1.0 if spec.toward_positive else -1.0
        off = Offset(letter, mul3(spec.axis.unit(), sign), spec.magnitude,
                     OffsetKind.GENERAL, axis=spec.axis, plane_coord=spec.plane_coord)
        if spec.magnitude == 0.0:
            raise EditError("offset magnitude must be nonzero")
        oid = scheme.insert("offsets", off)
        for pid in scheme.pipes:
            if constraints.pipe_crosses_offset(scheme, off, pid):
                scheme.insert("breaks", BreakLine(
                    pid, oid, st.paper_len, 0.0,
                    st.label_shift_axial, st.label_shift_normal))
        bad = constraints.check_general_offset(scheme, oid)
        if bad:
            _remove_offset(scheme, oid)
            raise EditError("; ".join(f"{v.rule}: {v.note}" for v in bad))
        return oid

    if spec.magnitude == 0.0:
        raise EditError("offset magnitude must be nonzero")
    scheme.point(spec.displaced_seed)
    broken = {pipe for pipe, _ in spec.breaks}
    displaced = _reachable_points(scheme, spec.displaced_seed, broken)
    off = Offset(letter, spec.ort, spec.magnitude, OffsetKind.LOCAL,
                 displaced_points=displaced)
    oid = scheme.insert("offsets", off)
    for pipe, pos in spec.breaks:
        scheme.insert("breaks", BreakLine(
            pipe, oid, st.paper_len, pos,
            st.label_shift_axial, st.label_shift_normal))
    report = constraints.check_local_offset(scheme, oid)
    if report.verdict != constraints.OK:
        _remove_offset(scheme, oid)
        raise EditError(f"{report.rule}: {report.note}")
    return oid


def _remove_offset(scheme: Scheme, offset_id: int) -> None:
    for bid in [b for b, brk in scheme.breaks.items() if brk.offset == offset_id]:
        del scheme.breaks[bid]
    scheme.offsets.pop(offset_id, None)


def _reachable_points(scheme: Scheme, seed: int, broken_pipes: set[int]) -> set[int]:
    adjacency: dict[int, list[int]] = {}
    for pid, pipe in scheme.pipes.items():
        if pid in broken_pipes:
            continue
        adjacency.setdefault(pipe.start, []).append(pipe.end)
        adjacency.setdefault(pipe.end, []).append(pipe.start)
    seen = {seed}
    stack = [seed]
    while stack:
        for nxt in adjacency.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


# -- blocks -------------------------------------------------------------------

def place_block(scheme: Scheme, symbol: int, pipe: int, dist: float,
                flip: bool = False, updir: UpDir = UpDir.ZP,
                style: LineStyle | None = None,
                pipe2: int | None = None, pipe3: int | None = None,
                stretch: float | None = None) -> int:
    """Place a library symbol on a pipe; coverage is derived at render time."""
    sym = scheme.symbol(symbol)
    length = model.pipe_length(scheme, pipe)
    if not (0.0 <= dist <= length):
        raise EditError(f"attachment distance {dist} outside pipe of length {length}")
    if sym.attach in (Attach.ANGULAR, Attach.TEE) and pipe2 is None:
        raise EditError(f"{sym.attach.value} attach requires pipe2")
    if sym.attach is Attach.TEE and pipe3 is None:
        raise EditError("tee attach requires pipe3")
    if sym.attach is Attach.AXIAL and (pipe2 is not None or pipe3 is not None):
        raise EditError("axial attach takes no extra pipes")
    anchor = model.pipe_point_at(scheme, pipe, dist)
    for ref in (pipe2, pipe3):
        if ref is None:
            continue
        e0, e1 = model.pipe_ends(scheme, ref)
        if min(dist3(anchor, e0), dist3(anchor, e1)) > model.MERGE_EPS:
            raise EditError(f"attached pipe {ref} does not meet the attachment point")
    legal = constraints.enumerate_block_orientations(
        scheme, symbol, pipe, pipe2, pipe3, dist_from_start=dist)
    if (flip, updir) not in legal:
        raise EditError(f"orientation ({flip}, {updir.value}) is not legal here")
    if style is None:
        st = scheme.settings.block.style
        style = LineStyle(st.color, st.line_type)
    blk = model.Block(symbol, pipe, dist, pipe2, pipe3, style, flip, updir,
                      sym.stretch_default if stretch is None else stretch)
    return scheme.insert("blocks", blk)


# -- cascade deletion ---------------------------------------------------------

@dataclass
class DeletionReport:
    points: set[int] = field(default_factory=set)
    pipes: set[int] = field(default_factory=set)
    joints: set[int] = field(default_factory=set)
    breaks: set[int] = field(default_factory=set)
    offsets: set[int] = field(default_factory=set)
    blocks: set[int] = field(default_factory=set)
    texts: set[int] = field(default_factory=set)
    pipe_leaders: set[int] = field(default_factory=set)
    block_leaders: set[int] = field(default_factory=set)
    position_marks: set[int] = field(default_factory=set)
    spec_props: set[int] = field(default_factory=set)
    dimensions: set[int] = field(default_factory=set)
    elevation_marks: set[int] = field(default_factory=set)
    slope_marks: set[int] = field(default_factory=set)
    renumbered: dict[int, int] | None = None


def delete_point(scheme: Scheme, point_id: int) -> DeletionReport:
    """Delete a point and everything that transitively depends on it.

    Pipes at the point go, then their joints, break lines and blocks; leaders
    to removed targets (a text goes with its last leader); position marks on
    removed targets (spec props go with their last mark); elevation and slope
    marks on removed targets; dimension points from removed sources, taking
    the whole dimension when fewer than two remain.  Afterwards the scheme
    passes ``integrity_check``.
    """
    scheme.point(point_id)
    rep = DeletionReport(points={point_id})

    rep.pipes = {pid for pid, p in scheme.pipes.items()
                 if point_id in (p.start, p.end)}
    rep.joints = {jid for jid, j in scheme.joints.items()
                  if j.pipe_a in rep.pipes or j.pipe_b in rep.pipes}
    rep.breaks = {bid for bid, b in scheme.breaks.items() if b.pipe in rep.pipes}
    rep.blocks = {bid for bid, b in scheme.blocks.items()
                  if b.pipe in rep.pipes
                  or (b.pipe2 is not None and b.pipe2 in rep.pipes)
                  or (b.pipe3 is not None and b.pipe3 in rep.pipes)}

    rep.pipe_leaders = {lid for lid, ld in scheme.pipe_leaders.items()
                        if ld.pipe in rep.pipes}
    rep.block_leaders = {lid for lid, ld in scheme.block_leaders.items()
                         if ld.block in rep.blocks}

    # texts: drop with the last leader, else repair the main-leader reference
    for tid, txt in list(scheme.texts.items()):
        survivors = (
            [(TargetKind.PIPE, lid) for lid, ld in scheme.pipe_leaders.items()
             if ld.text == tid and lid not in rep.pipe_leaders]
            + [(TargetKind.BLOCK, lid) for lid, ld in scheme.block_leaders.items()
               if ld.text == tid and lid not in rep.block_leaders]
        )
        if not survivors:
            rep.texts.add(tid)
            continue
        main_kind, main_id = txt.main_leader
        main_gone = (main_kind is TargetKind.PIPE and main_id in rep.pipe_leaders) or (
            main_kind is TargetKind.BLOCK and main_id in rep.block_leaders)
        if main_gone:
            txt.main_leader = survivors[0]
            _fix_slope_format(scheme, tid, txt)

    rep.position_marks = {
        mid for mid, mark in scheme.position_marks.items()
        if (mark.target_kind is TargetKind.PIPE and mark.target in rep.pipes)
        or (mark.target_kind is TargetKind.BLOCK and mark.target in rep.blocks)
    }
    still_referenced: set[int] = set()
    for mid, mark in scheme.position_marks.items():
        if mid not in rep.position_marks:
            still_referenced.update(mark.props)
    rep.spec_props = set(scheme.spec_props) - still_referenced

    rep.elevation_marks = {
        eid for eid, mark in scheme.elevation_marks.items()
        if (mark.target_kind is TargetKind.PIPE and mark.target in rep.pipes)
        or (mark.target_kind is TargetKind.BLOCK and mark.target in rep.blocks)
    }
    rep.slope_marks = {sid for sid, mark in scheme.slope_marks.items()
                       if mark.pipe in rep.pipes}

    for did, dim in list(scheme.dimensions.items()):
        keep = [dp for dp in dim.points
                if not (dp.kind is DimPointKind.POINT and dp.ref == point_id)
                and not (dp.kind is DimPointKind.BLOCK and dp.ref in rep.blocks)]
        dir_gone = dim.dim_dir.along_pipe and dim.dim_dir.pipe in rep.pipes
        if len(keep) < 2 or dir_gone:
            rep.dimensions.add(did)
        else:
            dim.points = keep

    # local offsets: prune the deleted point; drop offsets left without breaks
    for oid, off in list(scheme.offsets.items()):
        if off.kind is not OffsetKind.LOCAL:
            continue
        off.displaced_points.discard(point_id)
        remaining = [b for bid, b in scheme.breaks.items()
                     if b.offset == oid and bid not in rep.breaks]
        if not remaining:
            rep.offsets.add(oid)

    for name in ("pipes", "joints", "breaks", "offsets", "blocks", "texts",
                 "pipe_leaders", "block_leaders", "position_marks",
                 "spec_props", "dimensions", "elevation_marks", "slope_marks"):
        store = getattr(scheme, name)
        for oid in getattr(rep, name):
            store.pop(oid, None)
    del scheme.points[point_id]

    if scheme.settings.autonumber and rep.spec_props:
        rep.renumbered = renumber_positions(scheme)
    return rep


def _fix_slope_format(scheme: Scheme, text_id: int, txt) -> None:
    has_sym = any(model.SLOPE_LEFT in ln or model.SLOPE_RIGHT in ln
                  for ln in txt.lines)
    want = txt.main_leader[0] is TargetKind.PIPE and has_sym
    if want and txt.slope_format is None:
        txt.slope_format = scheme.settings.slope.format
    if not want:
        txt.slope_format = None


# -- position numbering --------------------------------------------------------

def renumber_positions(scheme: Scheme) -> dict[int, int] | None:
    """Relabel positions order-preservingly onto 1..K; None in manual mode."""
    if not scheme.settings.autonumber:
        return None
    old = sorted(p.position for p in scheme.spec_props.values())
    mapping = {pos: i + 1 for i, pos in enumerate(old)}
    for props in scheme.spec_props.values():
        props.position = mapping[props.position]
    return mapping


# -- slope texts ----------------------------------------------------------------

@dataclass
class SlopeSyncReport:
    updated: int = 0
    flagged: list[int] = field(default_factory=list)  # text ids not updatable


def pipe_slope(scheme: Scheme, pipe_id: int) -> tuple[float, float]:
    """(rise, horizontal run) of a pipe, nature mm."""
    a, b = model.pipe_ends(scheme, pipe_id)
    return b[2] - a[2], math.hypot(b[0] - a[0], b[1] - a[1])


def format_slope(rise: float, run: float, fmt: SlopeFormat, precision: int) -> str | None:
    """Slope value text, or None when the format cannot express it."""
    if run == 0.0:
        if fmt is SlopeFormat.ANGLE:
            return f"{90.0:.{precision}f}" + model.DEGREE
        return None  # ratio/percent cannot express a vertical pipe
    slope = abs(rise) / run
    if slope == 0.0:
        if fmt is SlopeFormat.ANGLE:
            return "0" + model.DEGREE
        if fmt is SlopeFormat.PERCENT:
            return "0%"
        return None  # a level pipe has no 1:n ratio
    if fmt is SlopeFormat.ANGLE:
        return f"{math.degrees(math.atan(slope)):.{precision}f}" + model.DEGREE
    if fmt is SlopeFormat.PERCENT:
        return f"{slope * 100.0:.{precision}f}%"
    return f"1:{1.0 / slope:.{precision}f}"


_VALUE_RE = re.compile(rf"( ?)([0-9][0-9.:]*[%{model.DEGREE}]?|0[%{model.DEGREE}]?)")


def _rewrite_slope_line(line: str, value: str) -> tuple[str, bool]:
    for sym in (model.SLOPE_LEFT, model.SLOPE_RIGHT):
        idx = line.find(sym)
        if idx >= 0:
            head, rest = line[:idx + 1], line[idx + 1:]
            m = _VALUE_RE.match(rest)
            if m:
                return head + m.group(1) + value + rest[m.end():], True
            return head + value + rest, True
    return line, False


def sync_slope_texts(scheme: Scheme, changed_pipe: int) -> SlopeSyncReport:
    """Rewrite the slope value in every text led from the changed pipe.

    The direction symbol is kept as authored; only the numeric value changes,
    formatted per the text's stored format at the scheme-wide precision.
    Texts whose format cannot express the new slope are flagged untouched.
    """
    scheme.pipe(changed_pipe)
    rep = SlopeSyncReport()
    rise, run = pipe_slope(scheme, changed_pipe)
    precision = scheme.settings.slope.precision
    for tid, txt in scheme.texts.items():
        if txt.slope_format is None:
            continue
        kind, lid = txt.main_leader
        if kind is not TargetKind.PIPE:
            continue
        leader = scheme.pipe_leaders.get(lid)
        if leader is None or leader.pipe != changed_pipe:
            continue
        value = format_slope(rise, run, txt.slope_format, precision)
        if value is None:
            rep.flagged.append(tid)
            continue
        changed = False
        for i, line in enumerate(txt.lines):
            new_line, hit = _rewrite_slope_line(line, value)
            if hit:
                txt.lines[i] = new_line
                changed = True
        if changed:
            rep.updated += 1
    return rep
