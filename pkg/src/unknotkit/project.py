"""Vertical projection of polygonal links and translation of elementary
moves into Reidemeister moves.

All geometry is exact: coordinates are ints or Fractions and every
predicate is a sign of a polynomial in them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

from .complex import PLCurve
from .diagram import (DiagramError, LinkDiagram, MoveScript as ReidemeisterScript,
                      applicable_moves, canonical_form, crossing_measure)


class ProjectionError(ValueError):
    pass


class TranslationError(RuntimeError):
    pass


# -- links in space -------------------------------------------------------------

@dataclass
class SpaceLink:
    """Closed polygons given by vertex ids, with a shared coordinate table."""
    paths: list
    coords: dict

    def __post_init__(self):
        self.paths = [tuple(p) for p in self.paths]

    @classmethod
    def of(cls, L, coords=None):
        if isinstance(L, SpaceLink):
            return L
        if isinstance(L, PLCurve):
            return cls([L.path], coords if coords is not None else L.host.coords)
        L = list(L)
        if L and isinstance(L[0], PLCurve):
            return cls([c.path for c in L], coords if coords is not None else L[0].host.coords)
        if L and isinstance(L[0], (tuple, list)) and L[0] and isinstance(L[0][0], (tuple, list)):
            # components given as point lists
            table, paths, k = {}, [], 0
            for comp in L:
                path = []
                for p in comp:
                    table[k] = tuple(p)
                    path.append(k)
                    k += 1
                paths.append(tuple(path))
            return cls(paths, table)
        return cls([tuple(L)], coords)

    def __len__(self):
        return sum(len(p) for p in self.paths)

    def point(self, v):
        return self.coords[v]

    def segments(self):
        """``(component, index, tail, head)`` for every segment."""
        out = []
        for k, p in enumerate(self.paths):
            n = len(p)
            for i in range(n):
                out.append((k, i, p[i], p[(i + 1) % n]))
        return out

    def replace(self, paths=None, coords=None):
        return SpaceLink(paths if paths is not None else self.paths,
                         coords if coords is not None else self.coords)


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _between(p, q, r):
    """r strictly inside the segment pq, given collinearity."""
    d = (q[0] - p[0], q[1] - p[1])
    t = (r[0] - p[0]) * d[0] + (r[1] - p[1]) * d[1]
    return 0 < t < d[0] * d[0] + d[1] * d[1]


def _on_closed(p, q, r):
    if _orient(p, q, r) != 0:
        return False
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


@dataclass
class Crossing:
    over: tuple         # (component, segment index, parameter along it)
    under: tuple
    point: tuple        # projected point
    z_over: Fraction
    z_under: Fraction


@dataclass
class ProjectionReport:
    link: SpaceLink
    regular: bool
    witness: tuple = None
    diagram: LinkDiagram = None
    crossing_list: list = field(default_factory=list)

    @property
    def measure(self):
        return crossing_measure(self.diagram)


def _irregular(L, why, *what):
    return ProjectionReport(L, False, (why,) + what)


def _angle(d):
    # exact counterclockwise angle key from the positive x axis
    x, y = d
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    r = Fraction(x, abs(x) + abs(y))
    return half, -r if half == 0 else r


def _vertex_crossings(L, P):
    """Pairs of vertices with a common shadow where the two strands pass
    through each other transversally.  Returns ``(pairs, witness)``."""
    where = {}
    for k, p in enumerate(L.paths):
        for i, v in enumerate(p):
            where[v] = (k, i)
    pairs = []
    groups = {}
    for v, p in P.items():
        groups.setdefault(p[:2], []).append(v)
    for pt, vs in groups.items():
        if len(vs) == 1:
            continue
        if len(vs) > 2:
            return None, ("triple point", tuple(vs))
        v, w = vs
        if P[v][2] == P[w][2]:
            return None, ("vertices coincide", v, w)
        darts = []
        for x in (v, w):
            k, i = where[x]
            p = L.paths[k]
            for y, role in ((p[i - 1], "in"), (p[(i + 1) % len(p)], "out")):
                if y in (v, w):
                    return None, ("vertical segment", x, y)
                q = P[y]
                darts.append((_angle((q[0] - pt[0], q[1] - pt[1])), x, role))
        darts.sort()
        if darts[0][1] == darts[1][1] or darts[1][1] == darts[2][1] or darts[2][1] == darts[3][1]:
            return None, ("tangency at a shared shadow", v, w)
        if len({a for a, _, _ in darts}) < 4:
            return None, ("overlapping strands at a shared shadow", v, w)
        pairs.append((v, w, pt, darts))
    return pairs, None


def project(L, coords=None, vertex_crossings=False):
    """Exact vertical projection with regularity test and the induced diagram.

    With ``vertex_crossings`` two vertices may share a shadow when the two
    strands cross transversally there; such a point is a crossing whose
    strands are the vertices themselves.  Everything else must still be in
    general position.
    """
    L = SpaceLink.of(L, coords)
    P = {v: L.point(v) for p in L.paths for v in p}
    for p in L.paths:
        if len(p) < 3 or len(set(p)) != len(p):
            raise ProjectionError("components need at least 3 distinct vertices")
    segs = L.segments()
    # vertical segments and coincident shadows
    for k, i, a, b in segs:
        if P[a][:2] == P[b][:2]:
            return _irregular(L, "vertical segment", (k, i))
    vx = []
    if vertex_crossings:
        vx, bad = _vertex_crossings(L, P)
        if bad:
            return _irregular(L, *bad)
    else:
        seen = {}
        for v, p in P.items():
            if p[:2] in seen:
                return _irregular(L, "vertices share a shadow", seen[p[:2]], v)
            seen[p[:2]] = v
    paired = {}
    for v, w, pt, _ in vx:
        paired[v], paired[w] = w, v
    # vertex shadows on other segments
    for v, pv in P.items():
        for k, i, a, b in segs:
            if v in (a, b):
                continue
            if v in paired and paired[v] in (a, b):
                continue
            if _on_closed(P[a], P[b], pv):
                return _irregular(L, "vertex over segment", v, (k, i))
    # adjacent segments folding back onto each other
    for k, p in enumerate(L.paths):
        n = len(p)
        for i in range(n):
            a, b, c = P[p[i - 1]], P[p[i]], P[p[(i + 1) % n]]
            if _orient(a, b, c) == 0 and (a[0] - b[0]) * (c[0] - b[0]) + (a[1] - b[1]) * (c[1] - b[1]) > 0:
                return _irregular(L, "adjacent segments overlap", (k, i))
    crossings = []
    points = {pt: (v, w) for v, w, pt, _ in vx}
    for x in range(len(segs)):
        k1, i1, a1, b1 = segs[x]
        p1, p2 = P[a1], P[b1]
        for y in range(x + 1, len(segs)):
            k2, i2, a2, b2 = segs[y]
            if {a1, b1} & {a2, b2}:
                continue
            if paired and ({a1, b1} & {paired.get(a2), paired.get(b2)}):
                continue
            q1, q2 = P[a2], P[b2]
            d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
            d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
            if (d1 > 0) == (d2 > 0) or (d3 > 0) == (d4 > 0):
                continue
            t = Fraction(d1, d1 - d2)
            u = Fraction(d3, d3 - d4)
            pt = (p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))
            z1 = p1[2] + t * (p2[2] - p1[2])
            z2 = q1[2] + u * (q2[2] - q1[2])
            if z1 == z2:
                return _irregular(L, "segments meet in space", (k1, i1), (k2, i2))
            if pt in points:
                return _irregular(L, "triple point", points[pt], (k1, i1), (k2, i2))
            points[pt] = ((k1, i1), (k2, i2))
            if z1 > z2:
                crossings.append(Crossing((k1, i1, t), (k2, i2, u), pt, z1, z2))
            else:
                crossings.append(Crossing((k2, i2, u), (k1, i1, t), pt, z2, z1))
    where = {v: (k, i) for k, p in enumerate(L.paths) for i, v in enumerate(p)}
    for v, w, pt, _ in vx:
        hi, lo = (v, w) if P[v][2] > P[w][2] else (w, v)
        crossings.append(Crossing(where[hi] + (Fraction(0),), where[lo] + (Fraction(0),),
                                  pt, Fraction(P[hi][2]), Fraction(P[lo][2])))
    rep = ProjectionReport(L, True, None, _diagram(L, P, crossings), crossings)
    if len(L) and rep.measure > len(L) ** 2:
        raise ProjectionError("crossing measure exceeds |L|^2")
    return rep


def _diagram(L, P, crossings):
    visits = {k: [] for k in range(len(L.paths))}
    for c, X in enumerate(crossings):
        for role, (k, i, t) in (("o", X.over), ("u", X.under)):
            visits[k].append((i, t, c, role))
    arcs_in, arcs_out, darts = {}, {}, {}
    label = count(1)
    loops = 0
    for k, p in enumerate(L.paths):
        vs = sorted(visits[k])
        if not vs:
            loops += 1
            continue
        labs = [next(label) for _ in vs]
        n = len(p)
        for j, (i, t, c, role) in enumerate(vs):
            arcs_in[(c, role)] = labs[j - 1]
            arcs_out[(c, role)] = labs[j]
            a, b = P[p[i]], P[p[(i + 1) % n]]
            pt = crossings[c].point
            if t == 0:
                # the strand turns at the crossing vertex
                a = P[p[i - 1]]
            darts[(c, role)] = ((a[0] - pt[0], a[1] - pt[1]), (b[0] - pt[0], b[1] - pt[1]))
    rows = []
    for c in range(len(crossings)):
        (ui, uo), (oi, oo) = darts[(c, "u")], darts[(c, "o")]
        ring = sorted([(_angle(ui), arcs_in[(c, "u")], 0), (_angle(oi), arcs_in[(c, "o")], 1),
                       (_angle(uo), arcs_out[(c, "u")], 2), (_angle(oo), arcs_out[(c, "o")], 3)])
        k = next(j for j, r in enumerate(ring) if r[2] == 0)
        ring = ring[k:] + ring[:k]
        rows.append(tuple(r[1] for r in ring))
    return LinkDiagram(rows, loops)


def perturb_regular(L, coords=None, start=None):
    """Shear ``(x, y, z) -> (x + z/N, y + z/N^2, z)`` with ``N`` a power of two,
    doubled until the projection is regular.

    Returns ``(link, N)``.  A regular link keeps its diagram once ``N`` is
    past the first value tried.
    """
    L = SpaceLink.of(L, coords)
    span = 1
    for p in L.coords.values():
        span = max(span, *(abs(Fraction(x)) for x in p))
    N = start or 1 << (int(4 * span).bit_length() + 1)
    for _ in range(64):
        sheared = {v: (Fraction(p[0]) + Fraction(p[2]) / N,
                       Fraction(p[1]) + Fraction(p[2]) / (N * N), p[2])
                   for v, p in L.coords.items()}
        S = L.replace(coords=sheared)
        if project(S).regular:
            return S, N
        N *= 2
    raise ProjectionError("shear did not reach a regular projection")


# -- sweeping an elementary move -----------------------------------------------------

SPLIT_FRACTIONS = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(3, 5),
                   Fraction(1, 4), Fraction(3, 4), Fraction(3, 7), Fraction(4, 7), Fraction(5, 11)]


@dataclass
class MoveTranslation:
    moves: list
    before: LinkDiagram
    after: LinkDiagram
    events: list
    bound: int
    link_size: int
    measure: int


def _locate(L, a, b):
    for k, p in enumerate(L.paths):
        n = len(p)
        for i in range(n):
            if p[i] == a and p[(i + 1) % n] == b:
                return k, i, 1
            if p[i] == b and p[(i + 1) % n] == a:
                return k, i, -1
    raise TranslationError("%s and %s are not consecutive on the link" % (a, b))


def apply_space_move(L, m, coords=None):
    """The link after elementary move ``m``; new vertices take their
    coordinates from ``coords`` (or ``L.coords``)."""
    table = dict(L.coords)
    if coords:
        table.update(coords)
    paths = list(L.paths)
    if m.kind in ("1", "2"):
        k, i, _ = _locate(L, m.a, m.b)
        p = paths[k]
        paths[k] = p[:i + 1] + (m.c,) + p[i + 1:]
    else:
        k = next((k for k, p in enumerate(paths) if m.c in p), None)
        if k is None:
            raise TranslationError("%s is not on the link" % (m.c,))
        p = paths[k]
        j = p.index(m.c)
        if {p[j - 1], p[(j + 1) % len(p)]} != {m.a, m.b}:
            raise TranslationError("%s does not sit between %s and %s" % (m.c, m.a, m.b))
        paths[k] = p[:j] + p[j + 1:]
    return SpaceLink(paths, table)


def _sub(p, q):
    return tuple(Fraction(p[j]) - Fraction(q[j]) for j in range(3))


def _clip(p, q, tri, drop):
    """Parameter interval of segment pq inside the planar triangle ``tri``
    after dropping coordinate ``drop``; None when empty."""
    keep = [j for j in range(3) if j != drop]
    P2 = [(Fraction(x[keep[0]]), Fraction(x[keep[1]])) for x in (p, q)]
    T2 = [(Fraction(x[keep[0]]), Fraction(x[keep[1]])) for x in tri]
    if _orient(*T2) < 0:
        T2 = T2[::-1]
    lo, hi = Fraction(0), Fraction(1)
    for k in range(3):
        a, b = T2[k], T2[(k + 1) % 3]
        f0, f1 = _orient(a, b, P2[0]), _orient(a, b, P2[1])
        if f0 < 0 and f1 < 0:
            return None
        if f0 < 0 or f1 < 0:
            t = f0 / (f0 - f1)
            if f0 < 0:
                lo = max(lo, t)
            else:
                hi = min(hi, t)
        if lo > hi:
            return None
    return lo, hi


def triangle_clear(L, a, b, c, coords=None):
    """The triangle ``abc`` meets ``L`` only along its side ``ab``."""
    P = dict(L.coords)
    if coords:
        P.update(coords)
    A, B, C = P[a], P[b], P[c]
    u, v = _sub(B, A), _sub(C, A)
    normal = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
    if normal == (0, 0, 0):
        return False
    drop = max(range(3), key=lambda j: abs(normal[j]))
    for k, i, x, y in L.segments():
        if {x, y} == {a, b}:
            continue
        X, Y = P[x], P[y]
        sx = sum(normal[j] * _sub(X, A)[j] for j in range(3))
        sy = sum(normal[j] * _sub(Y, A)[j] for j in range(3))
        if (sx > 0 and sy > 0) or (sx < 0 and sy < 0):
            continue
        if sx == 0 and sy == 0:
            span = _clip(X, Y, (A, B, C), drop)
            if span is None:
                continue
            lo, hi = span
        else:
            t = sx / (sx - sy)
            Z = tuple(Fraction(X[j]) + t * (Fraction(Y[j]) - Fraction(X[j])) for j in range(3))
            if _clip(Z, Z, (A, B, C), drop) is None:
                continue
            lo = hi = t
        if lo != hi:
            return False
        Z = tuple(Fraction(X[j]) + lo * (Fraction(Y[j]) - Fraction(X[j])) for j in range(3))
        shared = [P[w] for w in {x, y} & {a, b}]
        if not any(tuple(map(Fraction, s)) == Z for s in shared):
            return False
    return True


def _sweep_link(base, k, i, q_id, q):
    """``base`` with vertex ``q_id`` inserted after position ``i`` of component ``k``."""
    coords = dict(base.coords)
    coords[q_id] = q
    paths = list(base.paths)
    p = paths[k]
    paths[k] = p[:i + 1] + (q_id,) + p[i + 1:]
    return SpaceLink(paths, coords)


def _lin(p0, p1, s):
    return tuple(p0[j] + s * (p1[j] - p0[j]) for j in range(3))


def _events(base, k, i, a, b, q0, q1, qid):
    """Sweep parameters in (0, 1) where the projection of the moving pair
    ``a - q(s) - b`` changes combinatorially.  Returns ``(events, clean)``;
    ``clean`` is False when two events coincide or one is degenerate."""
    P = {v: base.point(v) for p in base.paths for v in p}
    A, B = P[a], P[b]
    out = []
    clean = True

    def roots(f0, f1):
        # f linear in s with f(0) = f0, f(1) = f1
        if f0 == f1:
            return [] if f0 else None
        s = Fraction(f0, f0 - f1)
        return [s] if 0 < s < 1 else []

    def q_at(s):
        return _lin(q0, q1, s)

    fixed_pts = [(v, P[v]) for v in P if v not in (a, b)]
    for v, pv in fixed_pts:
        for end in (A, B):
            f0 = _orient(end, q0, pv)
            f1 = _orient(end, q1, pv)
            rs = roots(f0, f1)
            if rs is None:
                clean = False
                continue
            for s in rs:
                q = q_at(s)
                if q[:2] == pv[:2]:
                    clean = False
                elif _between(end, q, pv):
                    out.append((s, "vertex", v))
    segs = [sg for sg in base.segments() if not (sg[0] == k and sg[1] == i)]
    for kk, ii, u, w in segs:
        U, W = P[u], P[w]
        rs = roots(_orient(U, W, q0), _orient(U, W, q1))
        if rs is None:
            clean = False
            continue
        for s in rs:
            q = q_at(s)
            if _between(U, W, q):
                out.append((s, "segment", (kk, ii)))
            elif q[:2] in (U[:2], W[:2]):
                clean = False
    rep = project(base)
    if not rep.regular:
        return None, False
    for X in rep.crossing_list:
        if (X.over[0], X.over[1]) == (k, i) or (X.under[0], X.under[1]) == (k, i):
            continue
        pt = X.point
        for end, e_id in ((A, a), (B, b)):
            # a crossing on a segment at this end is swept exactly when q
            # crosses that segment; the segment event covers it
            if any(e_id in (sg[2], sg[3]) and (sg[0], sg[1]) in (X.over[:2], X.under[:2])
                   for sg in base.segments()):
                continue
            rs = roots(_orient(end, q0, pt), _orient(end, q1, pt))
            if rs is None:
                clean = False
                continue
            for s in rs:
                q = q_at(s)
                if q[:2] == pt:
                    clean = False
                elif _between(end, q, pt):
                    out.append((s, "crossing", (X.over[:2], X.under[:2])))
    out.sort(key=lambda e: (e[0], e[1], str(e[2])))
    ss = [e[0] for e in out]
    if len(set(ss)) != len(ss):
        clean = False
    return out, clean


def _bridge(d, target, depth, prefer=()):
    """Moves from diagram ``d`` to one isomorphic to ``target`` (breadth first)."""
    key = canonical_form(target)
    if canonical_form(d) == key:
        return [], d
    frontier = [([], d)]
    seen = {canonical_form(d)}
    for _ in range(depth):
        nxt = []
        for moves, cur in frontier:
            options = applicable_moves(cur)
            options.sort(key=lambda mr: 0 if mr[0].kind in prefer else 1)
            for mv, new in options:
                ck = canonical_form(new)
                if ck == key:
                    return moves + [mv], new
                if ck not in seen:
                    seen.add(ck)
                    nxt.append((moves + [mv], new))
        frontier = nxt
    raise TranslationError("no Reidemeister sequence of length <= %d found" % depth)


def translate_move(L, m, report=None, coords=None):
    """Reidemeister moves carrying the projection of ``L`` to that of ``L``
    after the elementary move ``m``.

    The moving pair ``a - q - b`` is swept affinely: ``q`` travels between a
    point of segment ``ab`` and ``c``.  The diagram is re-projected between
    consecutive events and each change is matched with a move applied to
    the running diagram.  Returns a :class:`MoveTranslation`.
    """
    L = SpaceLink.of(L)
    if report is None:
        report = project(L)
    if not report.regular:
        raise TranslationError("projection before the move is irregular: %s" % (report.witness,))
    after = apply_space_move(L, m, coords)
    rep_after = project(after)
    if not rep_after.regular:
        raise TranslationError("projection after the move is irregular: %s" % (rep_after.witness,))
    D0 = report.diagram
    bound = 2 * len(L) + 2 * report.measure
    if m.kind in ("1", "1'"):
        if canonical_form(D0) != canonical_form(rep_after.diagram):
            raise TranslationError("a split move changed the diagram")
        return MoveTranslation([], D0, D0, [], bound, len(L), report.measure)
    if m.kind == "2":
        base, c_pt = L, after.point(m.c)
        a, b = m.a, m.b
    else:
        base, c_pt = after, L.point(m.c)
        a, b = m.a, m.b
    if not triangle_clear(base, a, b, m.c, {m.c: c_pt}):
        raise TranslationError("triangle of %s meets the link away from its base" % (m,))
    k, i, sgn = _locate(base, a, b)
    if sgn < 0:
        a, b = b, a
    A, B = base.point(a), base.point(b)
    qid = ("sweep", m.c)
    events = None
    for f in SPLIT_FRACTIONS:
        m0 = _lin(A, B, f)
        q0, q1 = (m0, c_pt) if m.kind == "2" else (c_pt, m0)
        if not project(_sweep_link(base, k, i, qid, q0)).regular:
            continue
        if not project(_sweep_link(base, k, i, qid, q1)).regular:
            continue
        events, clean = _events(base, k, i, a, b, q0, q1, qid)
        if events is not None and clean:
            break
    if events is None:
        raise TranslationError("no regular sweep found")
    # sample between events; a tie group becomes a single multi-move step
    times = sorted(set(e[0] for e in events))
    samples = [Fraction(0)]
    prev = Fraction(0)
    for t in times + [Fraction(1)]:
        samples.append((prev + t) / 2)
        prev = t
    samples.append(Fraction(1))
    def geometric(s):
        rep = project(_sweep_link(base, k, i, qid, _lin(q0, q1, s)))
        if not rep.regular:
            raise TranslationError("sweep sample at %s is irregular: %s" % (s, rep.witness))
        return rep.diagram

    def advance(cur, s0, s1, target, level=0):
        """Moves from ``cur`` (the diagram at ``s0``) to ``target`` at ``s1``."""
        inside = [e for e in events if s0 < e[0] < s1]
        prefer = ("III",) if inside and all(e[1] == "crossing" for e in inside) else ("I", "I-", "II", "II-")
        depth = max(1, len({e[0] for e in inside}))
        try:
            return _bridge(cur, target, depth, prefer)
        except TranslationError:
            pass
        if level < 12 and len({e[0] for e in inside}) != 1:
            # a change the event list did not predict: split the window
            mid = (s0 + s1) / 2
            times = sorted({e[0] for e in inside})
            if len(times) > 1:
                mid = (times[0] + times[1]) / 2
            elif times:
                mid = (s0 + times[0]) / 2
            dm = geometric(mid)
            if canonical_form(dm) != canonical_form(cur):
                m1, cur = advance(cur, s0, mid, dm, level + 1)
            else:
                m1 = []
            m2, cur = advance(cur, mid, s1, target, level + 1)
            return m1 + m2, cur
        # a single event whose local picture needs two moves
        return _bridge(cur, target, 2 * depth, prefer)

    cur = D0
    moves = []
    geom_prev = canonical_form(D0)
    for j in range(1, len(samples)):
        s = samples[j]
        target = geometric(s)
        key = canonical_form(target)
        if key == geom_prev:
            continue
        step, cur = advance(cur, samples[j - 1], s, target)
        moves += step
        geom_prev = key
    if canonical_form(cur) != canonical_form(rep_after.diagram):
        raise TranslationError("translated moves do not reach the diagram after the move")
    return MoveTranslation(moves, D0, cur, events, bound, len(L), report.measure)


@dataclass
class ScriptTranslation:
    script: ReidemeisterScript
    steps: list
    total: int
    bound: int
    n: int
    k: int
    shear: int = None

    def report(self):
        return {"n": self.n, "k": self.k, "total": self.total, "bound": self.bound,
                "shear": self.shear, "steps": self.steps,
                "margin": self.bound - self.total}


def translate_script(L, s, coords=None):
    """Translate a whole elementary-move script, with one global shear if any
    intermediate projection is irregular."""
    L = SpaceLink.of(L)
    table = dict(L.coords)
    if coords:
        table.update(coords)
    links = [L.replace(coords=table)]
    for mv in s.moves:
        links.append(apply_space_move(links[-1], mv))
    shear = None
    if not all(project(x).regular for x in links):
        span = max(abs(Fraction(c)) for p in table.values() for c in p)
        N = 1 << (int(4 * span).bit_length() + 1)
        for _ in range(64):
            sheared = {v: (Fraction(p[0]) + Fraction(p[2]) / N,
                           Fraction(p[1]) + Fraction(p[2]) / (N * N), p[2]) for v, p in table.items()}
            if all(project(x.replace(coords=sheared)).regular for x in links):
                break
            N *= 2
        else:
            raise ProjectionError("no shear makes every step regular")
        table = sheared
        links = [x.replace(coords=table) for x in links]
        shear = N
    k = len(s.moves)
    n = max(len(links[0]), len(links[-1]))
    rep = project(links[0])
    start = rep.diagram
    cur_moves = []
    steps = []
    total = 0
    for idx, mv in enumerate(s.moves):
        Li = links[idx]
        if len(Li) > n + min(idx, k - idx):
            raise TranslationError("|L_%d| exceeds n + min(i, k - i)" % idx)
        if rep.measure > len(Li) ** 2:
            raise TranslationError("|D_%d| exceeds |L_%d|^2" % (idx, idx))
        tr = translate_move(Li, mv, rep)
        if len(tr.moves) > tr.bound:
            raise TranslationError("step %d used %d moves, above 2|L| + 2|D| = %d"
                                   % (idx, len(tr.moves), tr.bound))
        steps.append({"i": idx, "L": len(Li), "D": rep.measure, "events": len(tr.events),
                      "moves": len(tr.moves), "bound": tr.bound})
        total += len(tr.moves)
        cur_moves += tr.moves
        nxt = project(links[idx + 1])
        # carry the running labels forward: the next step starts from the
        # diagram reached by replay, which is isomorphic to the projection
        nxt.diagram = tr.after
        rep = nxt
    bound = 2 * k * (n + Fraction(k, 2) + 1) ** 2
    if total > bound:
        raise TranslationError("script total %d exceeds 2k(n + k/2 + 1)^2" % total)
    script = ReidemeisterScript(start, cur_moves)
    end = script.replay() if cur_moves else start
    if canonical_form(end) != canonical_form(project(links[-1]).diagram):
        raise TranslationError("script translation does not reach the final diagram")
    return ScriptTranslation(script, steps, total, int(bound) if bound.denominator == 1 else bound, n, k, shear)
