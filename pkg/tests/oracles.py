"""Independent oracles for the property suites.

Each oracle restates its rule directly from first principles, structured
differently from the library implementation: the dimension oracle tests
every candidate pair against each textual rule separately using exact
integer arithmetic; the slice oracle re-reads the per-class membership
rules; the occlusion oracle brute-forces all segment pairs with orientation
predicates; the cascade oracle rescans every stored reference.
"""

from fractions import Fraction

from axoscheme.model import (
    Axis,
    DimDirection,
    DimPointKind,
    OffsetKind,
    Scheme,
    TargetKind,
)

AXES = (Axis.X, Axis.Y, Axis.Z)


# -- dimension orientation oracle (integer coordinates only) -------------------

def _icross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _isub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _collinear_dir(pts):
    """Integer direction if all points lie on one line, else None."""
    base = pts[0]
    d = None
    for p in pts[1:]:
        v = _isub(p, base)
        if v != (0, 0, 0):
            d = v
            break
    if d is None:
        return None  # all coincident (caught earlier)
    for p in pts:
        if _icross(_isub(p, base), d) != (0, 0, 0):
            return None
    return d


def _plane_normal_int(pts):
    """Integer normal if points are coplanar and not collinear, else None."""
    base = pts[0]
    n = None
    for i in range(1, len(pts)):
        for j in range(i + 1, len(pts)):
            c = _icross(_isub(pts[i], base), _isub(pts[j], base))
            if c != (0, 0, 0):
                n = c
                break
        if n is not None:
            break
    if n is None:
        return None
    for p in pts:
        v = _isub(p, base)
        if v[0] * n[0] + v[1] * n[1] + v[2] * n[2] != 0:
            return "skew"
    return n


def _axis_parallel(v) -> Axis | None:
    nz = [i for i, c in enumerate(v) if c != 0]
    if len(nz) == 1:
        return AXES[nz[0]]
    return None


def _pipe_line_int(scheme: Scheme, pid: int):
    p = scheme.pipes[pid]
    a = scheme.points[p.start]
    b = scheme.points[p.end]
    ai = (int(a.x), int(a.y), int(a.z))
    bi = (int(b.x), int(b.y), int(b.z))
    return ai, _isub(bi, ai)


def oracle_dimension_orientations(scheme: Scheme, pts):
    """Legal (ext, dim) set per the textual rules; integer lattice points."""
    pts = [tuple(int(c) for c in p) for p in pts]
    result = set()
    if len(pts) < 2:
        return result
    # rule: no coincident points
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if a == b:
                return result

    line_dir = _collinear_dir(pts)
    normal = None
    if line_dir is None:
        normal = _plane_normal_int(pts)
        if normal == "skew":
            return result  # rule: points must lie in one plane

    # rule: offsets moving part of the points must act within the plane/axis
    for off in scheme.offsets.values():
        flags = []
        for p in pts:
            if off.kind is OffsetKind.GENERAL:
                sign = 1 if off.ort[off.axis.index] > 0 else -1
                flags.append((p[off.axis.index] - off.plane_coord) * sign > 0)
            else:
                hit = False
                for pid in off.displaced_points:
                    sp = scheme.points[pid]
                    if (int(sp.x), int(sp.y), int(sp.z)) == p:
                        hit = True
                flags.append(hit)
        if any(flags) and not all(flags):
            ortf = tuple(Fraction(c).limit_denominator(10**9) for c in off.ort)
            if line_dir is not None:
                c = _icross(line_dir, ortf)
                if any(x != 0 for x in c):
                    return result
            else:
                dot = sum(Fraction(n) * o for n, o in zip(normal, ortf))
                if dot != 0:
                    return result

    collinear_pipes = []
    if line_dir is not None:
        for pid in scheme.pipes:
            base, d = _pipe_line_int(scheme, pid)
            if _icross(d, line_dir) != (0, 0, 0):
                continue
            if _icross(_isub(pts[0], base), d) != (0, 0, 0):
                continue
            collinear_pipes.append(pid)

    candidates = [DimDirection(axis=a) for a in AXES]
    candidates += [DimDirection(pipe=pid) for pid in scheme.pipes]
    for ext in AXES:
        for dim in candidates:
            if _candidate_legal(scheme, pts, ext, dim, line_dir, normal,
                                collinear_pipes):
                result.add((ext, dim))
    return result


def _candidate_legal(scheme, pts, ext, dim, line_dir, normal, collinear_pipes):
    # rule: extension direction must differ from the dimension direction
    if dim.axis is ext:
        return False
    if dim.pipe is not None:
        _, d = _pipe_line_int(scheme, dim.pipe)
        if _axis_parallel(d) is ext:
            return False

    if line_dir is None:
        # non-collinear: plane must parallel a coordinate plane, and neither
        # the dimension nor the extensions may run perpendicular to it
        perp = _axis_parallel(normal)
        if perp is None:
            return False
        if dim.pipe is not None:
            return False  # only the two in-plane axis alternations remain
        if dim.axis is perp or ext is perp:
            return False
        return True

    axis = _axis_parallel(line_dir)
    if axis is not None:
        # on a coordinate axis: the dimension may run only along it
        return dim.axis is axis and ext is not axis
    if not collinear_pipes:
        return False  # the line must be the axis of an existing pipe
    zero_axes = [a for a in AXES if line_dir[a.index] == 0]
    if not zero_axes:
        # parallel to no coordinate plane: dimension only along the pipe,
        # extensions along all three axes
        return dim.pipe in collinear_pipes
    perp = zero_axes[0]
    # parallel to one coordinate plane: its perpendicular axis is banned
    if ext is perp or dim.axis is perp:
        return False
    if dim.pipe is not None:
        return dim.pipe in collinear_pipes
    return True  # dim on one in-plane axis, ext forced onto the other


# -- slice membership oracle ----------------------------------------------------

def oracle_slice(scheme: Scheme, z_min, z_max):
    """Per-class membership restated rule by rule; None bounds mean all."""
    def inside(z):
        return z_min is None or (z_min <= z <= z_max)

    def pipe_touches(pid):
        if z_min is None:
            return True
        p = scheme.pipes[pid]
        za = scheme.points[p.start].z
        zb = scheme.points[p.end].z
        return not (max(za, zb) < z_min or min(za, zb) > z_max)

    pipes = {pid for pid in scheme.pipes if pipe_touches(pid)}
    joints = {jid for jid, j in scheme.joints.items()
              if j.pipe_a in pipes and j.pipe_b in pipes}
    breaks = {bid for bid, b in scheme.breaks.items() if b.pipe in pipes}

    def pos_on_pipe(pid, t):
        p = scheme.pipes[pid]
        a = scheme.points[p.start]
        b = scheme.points[p.end]
        length = ((b.x - a.x) ** 2 + (b.y - a.y) ** 2 + (b.z - a.z) ** 2) ** 0.5
        f = 0.0 if length == 0 else t / length
        return a.z + (b.z - a.z) * f

    def block_z(bid):
        blk = scheme.blocks[bid]
        return pos_on_pipe(blk.pipe, blk.dist_from_start)

    blocks = {bid for bid in scheme.blocks if inside(block_z(bid))}
    texts = set()
    pipe_leaders = set()
    block_leaders = set()
    for lid, ld in scheme.pipe_leaders.items():
        if ld.pipe in pipes:
            pipe_leaders.add(lid)
            texts.add(ld.text)
    for lid, ld in scheme.block_leaders.items():
        if ld.block in blocks:
            block_leaders.add(lid)
            texts.add(ld.text)
    marks = set()
    for mid, mk in scheme.position_marks.items():
        ok = (mk.target in pipes if mk.target_kind is TargetKind.PIPE
              else mk.target in blocks)
        if ok:
            marks.add(mid)
    dims = set()
    for did, dim in scheme.dimensions.items():
        for dp in dim.points:
            if dp.kind is DimPointKind.POINT:
                z = scheme.points[dp.ref].z
            else:
                z = block_z(dp.ref)
            if inside(z):
                dims.add(did)
                break
    elevations = set()
    for eid, mk in scheme.elevation_marks.items():
        z = (pos_on_pipe(mk.target, mk.t)
             if mk.target_kind is TargetKind.PIPE else block_z(mk.target))
        if inside(z):
            elevations.add(eid)
    slopes = {sid for sid, mk in scheme.slope_marks.items()
              if inside(pos_on_pipe(mk.pipe, mk.t))}
    grid = scheme.axis_grid is not None and inside(scheme.axis_grid.settings.plane_z)
    return {
        "pipes": pipes, "joints": joints, "breaks": breaks, "blocks": blocks,
        "texts": texts, "pipe_leaders": pipe_leaders,
        "block_leaders": block_leaders, "position_marks": marks,
        "dimensions": dims, "elevation_marks": elevations,
        "slope_marks": slopes, "grid": grid,
    }


# -- occlusion oracle -------------------------------------------------------------

def _ccw(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def oracle_occlusion(scheme: Scheme, proj):
    """(victim pipe, crossing centre in paper mm) for straight pipes without
    offsets, via orientation predicates and parametric intersection."""
    scale = scheme.settings.scale

    segs = {}
    for pid, pipe in scheme.pipes.items():
        a = scheme.points[pipe.start]
        b = scheme.points[pipe.end]
        pa = ((a.x, a.y, a.z))
        pb = ((b.x, b.y, b.z))

        def img(p):
            u = p[0] * proj.ex[0] + p[1] * proj.ey[0] + p[2] * proj.ez[0]
            v = p[0] * proj.ex[1] + p[1] * proj.ey[1] + p[2] * proj.ez[1]
            return (u * scale, v * scale)

        segs[pid] = (img(pa), img(pb), pa, pb)

    hits = []
    ids = sorted(segs)
    for i, pa_id in enumerate(ids):
        a0, a1, A0, A1 = segs[pa_id]
        for pb_id in ids[i + 1:]:
            b0, b1, B0, B1 = segs[pb_id]
            d1 = _ccw(a0, a1, b0)
            d2 = _ccw(a0, a1, b1)
            d3 = _ccw(b0, b1, a0)
            d4 = _ccw(b0, b1, a1)
            if not ((d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)):
                continue  # no strict interior crossing
            if 0 in (d1, d2, d3, d4):
                continue
            s = d3 / (d3 - d4)  # param on a
            t = d1 / (d1 - d2)  # param on b
            eps = 1e-9
            if not (eps < s < 1 - eps and eps < t < 1 - eps):
                continue

            def depth(P0, P1, f):
                p = tuple(P0[k] + (P1[k] - P0[k]) * f for k in range(3))
                return sum(p[k] * proj.view_dir[k] for k in range(3))

            da = depth(A0, A1, s)
            db = depth(B0, B1, t)
            if abs(da - db) <= 1e-9:
                continue
            if da < db:
                victim, f, (p0, p1) = pa_id, s, (a0, a1)
            else:
                victim, f, (p0, p1) = pb_id, t, (b0, b1)
            seg_len = ((p1[0] - p0[0]) ** 2 + (p1[1] - p0[1]) ** 2) ** 0.5
            hits.append((victim, f * seg_len))
    hits.sort()
    return hits


# -- cascade reachability oracle -----------------------------------------------

def oracle_dangling(scheme: Scheme) -> list[str]:
    """Every stored reference re-walked against the stores, plus orphan rules."""
    bad = []

    def need(store, ref, what):
        if ref is not None and ref not in store:
            bad.append(f"{what} -> {ref}")

    for pid, p in scheme.pipes.items():
        need(scheme.points, p.start, f"pipe {pid} start")
        need(scheme.points, p.end, f"pipe {pid} end")
    for jid, j in scheme.joints.items():
        need(scheme.pipes, j.pipe_a, f"joint {jid} a")
        need(scheme.pipes, j.pipe_b, f"joint {jid} b")
    for oid, off in scheme.offsets.items():
        for r in off.displaced_points:
            need(scheme.points, r, f"offset {oid} displaced")
        if off.kind is OffsetKind.LOCAL:
            if not any(b.offset == oid for b in scheme.breaks.values()):
                bad.append(f"offset {oid} has no breaks")
    for bid, b in scheme.breaks.items():
        need(scheme.pipes, b.pipe, f"break {bid} pipe")
        need(scheme.offsets, b.offset, f"break {bid} offset")
    for bid, b in scheme.blocks.items():
        need(scheme.symbols, b.symbol, f"block {bid} symbol")
        need(scheme.pipes, b.pipe, f"block {bid} pipe")
        need(scheme.pipes, b.pipe2, f"block {bid} pipe2")
        need(scheme.pipes, b.pipe3, f"block {bid} pipe3")
    leaders_per_text = {tid: 0 for tid in scheme.texts}
    for lid, ld in scheme.pipe_leaders.items():
        need(scheme.texts, ld.text, f"pipe leader {lid} text")
        need(scheme.pipes, ld.pipe, f"pipe leader {lid} pipe")
        if ld.text in leaders_per_text:
            leaders_per_text[ld.text] += 1
    for lid, ld in scheme.block_leaders.items():
        need(scheme.texts, ld.text, f"block leader {lid} text")
        need(scheme.blocks, ld.block, f"block leader {lid} block")
        if ld.text in leaders_per_text:
            leaders_per_text[ld.text] += 1
    for tid, count in leaders_per_text.items():
        if count == 0:
            bad.append(f"text {tid} has no leaders")
    for tid, t in scheme.texts.items():
        kind, lid = t.main_leader
        store = scheme.pipe_leaders if kind is TargetKind.PIPE else scheme.block_leaders
        if lid not in store or store[lid].text != tid:
            bad.append(f"text {tid} main leader invalid")
    referenced_props = set()
    for mid, mk in scheme.position_marks.items():
        store = scheme.pipes if mk.target_kind is TargetKind.PIPE else scheme.blocks
        need(store, mk.target, f"mark {mid} target")
        for r in mk.props:
            need(scheme.spec_props, r, f"mark {mid} props")
            referenced_props.add(r)
    for sid in scheme.spec_props:
        if sid not in referenced_props:
            bad.append(f"spec props {sid} unreferenced")
    for did, d in scheme.dimensions.items():
        if len(d.points) < 2:
            bad.append(f"dimension {did} has fewer than two points")
        for dp in d.points:
            store = scheme.points if dp.kind is DimPointKind.POINT else scheme.blocks
            need(store, dp.ref, f"dimension {did} point")
        if d.dim_dir.pipe is not None:
            need(scheme.pipes, d.dim_dir.pipe, f"dimension {did} direction")
    for eid, e in scheme.elevation_marks.items():
        store = scheme.pipes if e.target_kind is TargetKind.PIPE else scheme.blocks
        need(store, e.target, f"elevation {eid} target")
    for sid, sm in scheme.slope_marks.items():
        need(scheme.pipes, sm.pipe, f"slope {sid} pipe")
    return bad
