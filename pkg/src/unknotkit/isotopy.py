"""Curve isotopies by elementary and basic moves.

Three layers live here:

* elementary moves (1), (1'), (2), (2') on a closed polygonal curve, disk
  contraction and pulling a curve across a triangulated annulus;
* meridians, the parallel curve and the twisted longitude of a regular
  neighbourhood, with the exact twist-count solve;
* basic curves on a triangulated surface, the three basic moves and the
  innermost-bigon isotopy between two curves.
"""

from __future__ import annotations

import bisect
import copy
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .complex import (EDGES, PLCurve, TriangulationError, boundary_matrix,
                      cycle_vector)
from .diagram import ResourceLimit


class MoveError(ValueError):
    """An elementary or basic move whose preconditions fail."""


class IsotopyExhausted(RuntimeError):
    """No bigon or annulus was found while the curves still differ."""


class NoTwistSolution(ArithmeticError):
    pass


# -- elementary moves ------------------------------------------------------

ELEMENTARY_KINDS = ("1", "1'", "2", "2'")


def _tok(s):
    if s == "-":
        return None
    return int(s) if s.lstrip("-").isdigit() else s


def _str(x):
    return "-" if x is None else str(x)


@dataclass(frozen=True)
class ElementaryMove:
    """``kind`` 1/2 inserts ``c`` between neighbours ``a`` and ``b``;
    1'/2' removes ``c`` from between them.  ``host`` is the tetrahedron
    (or abstract piece) that contains the move."""
    kind: str
    host: object
    a: object
    b: object
    c: object

    def __str__(self):
        return "E%s @%s %s %s %s" % (self.kind, _str(self.host), self.a, self.b, self.c)


def parse_elementary(line):
    parts = line.split()
    if len(parts) != 5 or not parts[0].startswith("E") or not parts[1].startswith("@"):
        raise MoveError("bad elementary move: %r" % line)
    kind = parts[0][1:]
    if kind not in ELEMENTARY_KINDS:
        raise MoveError("unknown kind %r" % kind)
    return ElementaryMove(kind, _tok(parts[1][1:]), _tok(parts[2]), _tok(parts[3]), _tok(parts[4]))


class PieceComplex:
    """Triangles a curve may sweep across, each with the tetrahedron holding it."""

    def __init__(self, triangles=(), hosts=None):
        self.hosts = {}
        for k, tri in enumerate(triangles):
            self.hosts.setdefault(frozenset(tri), hosts[k] if hosts is not None else k)
        self.edge_hosts = {}
        for tri, h in self.hosts.items():
            a, b, c = sorted(tri, key=str)
            for e in ((a, b), (a, c), (b, c)):
                self.edge_hosts.setdefault(frozenset(e), h)
        self.splits = {}

    def host_of(self, a, b, c):
        return self.hosts.get(frozenset((a, b, c)))


def _insert_at(curve, a, b):
    n = len(curve)
    try:
        i = curve.index(a)
    except ValueError:
        raise MoveError("%s is not on the curve" % (a,)) from None
    if curve[(i + 1) % n] == b:
        return i + 1
    if curve[(i - 1) % n] == b:
        return i
    raise MoveError("%s and %s are not adjacent on the curve" % (a, b))


def apply_elementary(curve, m, complex=None):
    """Apply an elementary move to a cyclic vertex tuple; returns the new tuple."""
    curve = tuple(curve.path if isinstance(curve, PLCurve) else curve)
    if m.kind in ("1", "2"):
        if m.c in curve:
            raise MoveError("triangle %s,%s,%s meets the curve outside AB" % (m.a, m.b, m.c))
        pos = _insert_at(curve, m.a, m.b)
        if complex is not None:
            if m.kind == "2":
                h = complex.host_of(m.a, m.b, m.c)
                if h is None or h != m.host:
                    raise MoveError("triangle %s,%s,%s is not inside tetrahedron %s"
                                    % (m.a, m.b, m.c, m.host))
            else:
                if frozenset((m.a, m.b)) not in complex.edge_hosts:
                    raise MoveError("segment %s,%s is not in the complex" % (m.a, m.b))
                complex.splits[m.c] = frozenset((m.a, m.b))
        return curve[:pos] + (m.c,) + curve[pos:]
    if m.kind in ("1'", "2'"):
        n = len(curve)
        if n < 4:
            raise MoveError("curve too short to shrink")
        try:
            j = curve.index(m.c)
        except ValueError:
            raise MoveError("%s is not on the curve" % (m.c,)) from None
        if {curve[j - 1], curve[(j + 1) % n]} != {m.a, m.b}:
            raise MoveError("%s does not sit between %s and %s" % (m.c, m.a, m.b))
        if complex is not None:
            if m.kind == "2'":
                h = complex.host_of(m.a, m.b, m.c)
                if h is None or h != m.host:
                    raise MoveError("triangle %s,%s,%s is not inside tetrahedron %s"
                                    % (m.a, m.b, m.c, m.host))
            elif complex.splits.get(m.c) != frozenset((m.a, m.b)):
                raise MoveError("%s is not a split point of %s,%s" % (m.c, m.a, m.b))
        return curve[:j] + curve[j + 1:]
    raise MoveError("unknown kind %r" % m.kind)


def same_cycle(a, b):
    """Equality of cyclic sequences up to rotation and reversal."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    for seq in (b, b[::-1]):
        try:
            i = seq.index(a[0])
        except ValueError:
            return False
        if seq[i:] + seq[:i] == a:
            return True
    return False


# -- scripts ---------------------------------------------------------------

@dataclass(frozen=True)
class BasicMove:
    """A basic move on a curve system: ``kind`` 1 (swap or slide), 2 (push
    across a vertex) or 3 (bigon collapse), with its elementary cost."""
    kind: int
    curve: str
    site: tuple
    cost: int

    def __str__(self):
        return "B%d %s %s cost=%d" % (self.kind, self.curve,
                                      " ".join(str(x) for x in _flat(self.site)), self.cost)


def _flat(site):
    out = []
    for x in site:
        if isinstance(x, tuple):
            out.append("%s-%s" % x)
        else:
            out.append(x)
    return out


class MoveScript:
    """Ordered moves from a start state, with per-kind counts and checkpoints.

    Elementary scripts start from a vertex tuple and may carry the
    :class:`PieceComplex` that validates hosts.  Basic scripts start from a
    pair of :class:`SurfaceCurve` objects.
    """

    CHECK_EVERY = 100

    def __init__(self, start, moves=(), complex=None, checkpoints=None):
        self.start = start
        self.moves = list(moves)
        self.complex = complex
        self.checkpoints = dict(checkpoints or {})
        self.info = {}

    def __len__(self):
        return len(self.moves)

    def counts(self):
        c = Counter()
        for m in self.moves:
            c[m.kind if isinstance(m, ElementaryMove) else "basic%d" % m.kind] += 1
        return dict(sorted(c.items()))

    def elementary_cost(self):
        return sum(1 if isinstance(m, ElementaryMove) else m.cost for m in self.moves)

    def replay(self, complex=None):
        """Re-apply every move from the start; returns the list of states
        (elementary) or the final curve system (basic)."""
        if self.moves and isinstance(self.moves[0], BasicMove):
            return self._replay_basic()
        cx = complex if complex is not None else self.complex
        if cx is not None:
            cx = _fresh_complex(cx)
        states = [tuple(self.start)]
        cur = tuple(self.start)
        for k, m in enumerate(self.moves):
            cur = apply_elementary(cur, m, cx)
            states.append(cur)
            if (k + 1) in self.checkpoints and not same_cycle(cur, self.checkpoints[k + 1]):
                raise MoveError("checkpoint %d mismatch" % (k + 1))
        return states

    def _replay_basic(self):
        alpha, beta = self.start
        sys = CurveSystem(alpha.surface)
        sys.add("alpha", alpha)
        sys.add("beta", beta)
        for m in self.moves:
            sys.apply(m)
        return sys

    def final(self):
        if self.moves and isinstance(self.moves[0], BasicMove):
            return self._replay_basic()
        return self.replay()[-1]

    def fill_checkpoints(self):
        if self.moves and isinstance(self.moves[0], BasicMove):
            return self
        states = self.replay()
        for k in range(self.CHECK_EVERY, len(self.moves) + 1, self.CHECK_EVERY):
            self.checkpoints[k] = states[k]
        return self

    def dumps(self):
        if self.moves and isinstance(self.moves[0], BasicMove):
            return "\n".join(str(m) for m in self.moves) + "\n"
        out = ["START " + " ".join(str(x) for x in self.start)]
        for k, m in enumerate(self.moves):
            out.append(str(m))
            if (k + 1) in self.checkpoints:
                out.append("CHECK %d %s" % (k + 1, " ".join(str(x) for x in self.checkpoints[k + 1])))
        return "\n".join(out) + "\n"

    @classmethod
    def loads(cls, text, complex=None, verify=True):
        start, moves, checks = None, [], {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("START"):
                start = tuple(_tok(x) for x in line.split()[1:])
            elif line.startswith("CHECK"):
                parts = line.split()
                checks[int(parts[1])] = tuple(_tok(x) for x in parts[2:])
            else:
                moves.append(parse_elementary(line))
        if start is None:
            raise MoveError("script has no START line")
        s = cls(start, moves, complex, checks)
        if verify:
            s.replay()
        return s


def _fresh_complex(cx):
    new = PieceComplex()
    new.hosts = dict(cx.hosts)
    new.edge_hosts = dict(cx.edge_hosts)
    return new


# -- triangulated disks and annuli -----------------------------------------

def _tri_edges(tri):
    a, b, c = tri
    return (frozenset((a, b)), frozenset((b, c)), frozenset((a, c)))


def piece_euler(tris):
    verts, edges = set(), set()
    for tri in tris:
        verts.update(tri)
        edges.update(_tri_edges(tri))
    return len(verts) - len(edges) + len(tris)


def pieces_connected(tris):
    tris = list(tris)
    if not tris:
        return True
    by_edge = {}
    for k, tri in enumerate(tris):
        for e in _tri_edges(tri):
            by_edge.setdefault(e, []).append(k)
    seen = {0}
    stack = [0]
    while stack:
        k = stack.pop()
        for e in _tri_edges(tris[k]):
            for j in by_edge[e]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
    return len(seen) == len(tris)


def boundary_cycles(tris):
    """Boundary circles of a triangulated surface piece set.

    Raises :class:`TriangulationError` when an edge has more than two
    triangles or the boundary is pinched at a vertex.
    """
    cnt = Counter()
    for tri in tris:
        for e in _tri_edges(tri):
            cnt[e] += 1
    if any(c > 2 for c in cnt.values()):
        raise TriangulationError("edge with more than two triangles")
    adj = {}
    for e, c in cnt.items():
        if c == 1:
            a, b = tuple(e)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in adj.values()):
        raise TriangulationError("boundary is pinched")
    seen = set()
    out = []
    for s in sorted(adj, key=str):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        prev, cur = s, min(adj[s], key=str)
        while cur != s:
            cyc.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        out.append(tuple(cyc))
    return out


def _disk_triangles(S):
    if hasattr(S, "triangles") and not isinstance(S, Annulus):
        return [(h, tuple(p)) for h, p in S.triangles]
    out = []
    for k, item in enumerate(S):
        if len(item) == 2 and isinstance(item[1], (tuple, list)):
            out.append((item[0], tuple(item[1])))
        else:
            out.append((k, tuple(item)))
    return out


def is_disk(tris):
    try:
        bd = boundary_cycles(tris)
    except TriangulationError:
        return False
    return piece_euler(tris) == 1 and pieces_connected(tris) and len(bd) == 1


def contract_disk(S, check=True):
    """Elementary moves shrinking the boundary of a triangulated disk to one triangle.

    ``S`` is a :class:`ReconstructedSurface`, a list of ``(host, (a, b, c))``
    or a list of vertex triples.  Each step removes one triangle: one with two
    boundary edges (move 2') when there is one, else one with a single
    boundary edge and an interior opposite vertex (move 2).  Ties go to the
    lowest piece id.
    """
    tris = _disk_triangles(S)
    w = len(tris)
    pts = [p for _, p in tris]
    if not w or not is_disk(pts):
        raise TriangulationError("input is not a triangulated disk")
    cx = PieceComplex(pts, [h for h, _ in tris])
    curve = boundary_cycles(pts)[0]
    start = curve
    alive = set(range(w))
    moves = []
    while len(alive) > 1:
        cnt = Counter(e for k in alive for e in _tri_edges(pts[k]))
        on = set(curve)
        pick = None
        for k in sorted(alive):
            bd = [e for e in _tri_edges(pts[k]) if cnt[e] == 1]
            if len(bd) == 2:
                apex = next(iter(bd[0] & bd[1]))
                y, z = [x for x in pts[k] if x != apex]
                pick = (k, ElementaryMove("2'", tris[k][0], y, z, apex))
                break
        if pick is None:
            for k in sorted(alive):
                bd = [e for e in _tri_edges(pts[k]) if cnt[e] == 1]
                if len(bd) == 1:
                    c = next(x for x in pts[k] if x not in bd[0])
                    if c not in on:
                        a, b = tuple(bd[0])
                        pick = (k, ElementaryMove("2", tris[k][0], a, b, c))
                        break
        if pick is None:
            raise MoveError("no removable triangle; the piece set is not a disk")
        k, m = pick
        curve = apply_elementary(curve, m, cx)
        alive.discard(k)
        moves.append(m)
        if check:
            rest = [pts[j] for j in alive]
            if not is_disk(rest) or not same_cycle(boundary_cycles(rest)[0], curve):
                raise MoveError("intermediate piece set is not a disk bounded by the curve")
    if len(moves) > 2 * w:
        raise MoveError("disk contraction exceeded 2w moves")
    return MoveScript(start, moves, cx)


@dataclass
class Annulus:
    """Triangulated annulus given by vertex triples and host tetrahedra."""
    triangles: list
    hosts: list

    def __len__(self):
        return len(self.triangles)

    def euler(self):
        return piece_euler(self.triangles)

    def boundary_cycles(self):
        return boundary_cycles(self.triangles)

    def vertices(self):
        return {x for tri in self.triangles for x in tri}

    def is_annulus(self):
        try:
            bd = self.boundary_cycles()
        except TriangulationError:
            return False
        return self.euler() == 0 and pieces_connected(self.triangles) and len(bd) == 2


def pull_across_annulus(S, start):
    """Elementary moves carrying one boundary curve of ``S`` to the other.

    Every vertex of ``S`` must lie on its boundary; each triangle is then
    crossed by exactly one move (2 or 2').
    """
    start = tuple(start.path if isinstance(start, PLCurve) else start)
    if not S.is_annulus():
        raise TriangulationError("not a triangulated annulus")
    bd = S.boundary_cycles()
    if not any(same_cycle(start, c) for c in bd):
        raise TriangulationError("start curve is not a boundary component")
    target = bd[1] if same_cycle(start, bd[0]) else bd[0]
    on_bd = set(bd[0]) | set(bd[1])
    if S.vertices() - on_bd:
        raise TriangulationError("annulus has interior vertices")
    cx = PieceComplex(S.triangles, S.hosts)
    tris = [tuple(t) for t in S.triangles]
    alive = set(range(len(tris)))
    curve = start
    moves = []
    while alive:
        pos = {x: i for i, x in enumerate(curve)}
        n = len(curve)

        def adjacent(a, b):
            return a in pos and b in pos and (pos[a] - pos[b]) % n in (1, n - 1)

        pick = None
        for k in sorted(alive):
            a, b, c = tris[k]
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                # z between x and y on the curve: remove it
                if adjacent(x, z) and adjacent(z, y) and n >= 4 and not adjacent(x, y):
                    pick = (k, ElementaryMove("2'", S.hosts[k], x, y, z))
                    break
            if pick:
                break
        if pick is None:
            for k in sorted(alive):
                a, b, c = tris[k]
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    if adjacent(x, y) and z not in pos:
                        pick = (k, ElementaryMove("2", S.hosts[k], x, y, z))
                        break
                if pick:
                    break
        if pick is None:
            raise MoveError("no legal triangle to pull across")
        k, m = pick
        curve = apply_elementary(curve, m, cx)
        alive.discard(k)
        moves.append(m)
    if not same_cycle(curve, target):
        raise MoveError("pull did not reach the opposite boundary")
    if len(moves) > 2 * len(tris):
        raise MoveError("pull exceeded two moves per triangle")
    return MoveScript(start, moves, cx)


# -- meridians, parallel curve, longitude ---------------------------------

def _cycle_from_pairs(pairs):
    adj = {}
    for p, q in pairs:
        adj.setdefault(p, []).append(q)
        adj.setdefault(q, []).append(p)
    if any(len(v) != 2 for v in adj.values()):
        raise TriangulationError("edge link is not a circle")
    s = min(adj)
    cyc = [s]
    prev, cur = s, min(adj[s])
    while cur != s:
        cyc.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(cyc) != len(adj):
        raise TriangulationError("edge link is disconnected")
    return tuple(cyc)


def meridians(R):
    """Links of the core edges: entry ``i - 1`` is the link of ``[w_{i-1}, w_i]``."""
    T = R.host
    K = R.core
    s = len(K)
    tv = {t: frozenset(T.tet_vertices(t)) for t in R.tetrahedra}
    out = []
    for i in range(1, s + 1):
        a, b = K[i - 1], K[i % s]
        pairs = [tuple(sorted(vs - {a, b})) for t, vs in sorted(tv.items()) if a in vs and b in vs]
        out.append(PLCurve(_cycle_from_pairs(pairs), T))
    return out


@dataclass
class ParallelCurve:
    alpha: PLCurve
    annulus: Annulus
    arcs: list          # arc g runs from meridian group g to group g + 1
    betas: list         # beta g runs along meridian group g
    meridians: list


def _periph_graph(R):
    T = R.host
    adj = {}
    for t, f in R.peripheral_faces:
        vs = [T.vertex(t, v) for v in range(4) if v != f]
        for i in range(3):
            for j in range(3):
                if i != j:
                    adj.setdefault(vs[i], set()).add(vs[j])
    return adj


def _host_index(R):
    T = R.host
    by_vertex = {}
    for t in R.tetrahedra:
        for v in T.tet_vertices(t):
            by_vertex.setdefault(v, []).append(t)
    tv = {t: set(T.tet_vertices(t)) for t in R.tetrahedra}

    def host(tri):
        for t in by_vertex.get(tri[0], ()):
            if all(x in tv[t] for x in tri):
                return t
        raise TriangulationError("triangle %s is not a face of the neighbourhood" % (tri,))
    return host


def parallel_curve(R):
    """A curve ``alpha`` in the 1-skeleton of the peripheral torus parallel to
    the core, and the annulus ``S0`` between them."""
    K = R.core
    s = len(K)
    mers = meridians(R)
    G = s // 2
    groups = []
    for g in range(G):
        i = 2 * g + 1
        if set(mers[i - 1].path) != set(mers[i % s].path):
            raise TriangulationError("meridians %d and %d differ" % (i, i + 1))
        groups.append(mers[i - 1].path)
    onmer = set().union(*map(set, groups))
    adj = _periph_graph(R)
    arcs = []
    for g in range(G):
        src, dst = groups[g], set(groups[(g + 1) % G])
        prev = {x: None for x in sorted(src)}
        queue = deque(sorted(src))
        hit = None
        while queue and hit is None:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y in prev or (y in onmer and y not in dst):
                    continue
                prev[y] = x
                if y in dst:
                    hit = y
                    break
                queue.append(y)
        if hit is None:
            raise TriangulationError("no arc between meridians %d and %d" % (g, g + 1))
        path = [hit]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        arcs.append(path[::-1])
    betas = []
    for g in range(G):
        cyc = groups[g]
        n = len(cyc)
        x_in, x_out = arcs[g - 1][-1], arcs[g][0]
        i, j = cyc.index(x_in), cyc.index(x_out)
        fwd = [cyc[(i + k) % n] for k in range((j - i) % n + 1)]
        bwd = [cyc[(i - k) % n] for k in range((i - j) % n + 1)]
        betas.append(fwd if len(fwd) <= len(bwd) else bwd)
    seq = []
    for g in range(G):
        seq += betas[g][:-1] + arcs[g][:-1]
    if len(set(seq)) != len(seq):
        raise TriangulationError("parallel curve is not embedded")
    host = _host_index(R)
    tris = []
    for g in range(G):
        w0, w1, w2 = K[2 * g], K[2 * g + 1], K[(2 * g + 2) % s]
        x = betas[g][0]
        tris.append((w0, w1, x))
        tris.append((w1, w2, x))
        for path in (betas[g], arcs[g]):
            for p, q in zip(path, path[1:]):
                tris.append((p, q, w2))
    S0 = Annulus(tris, [host(t) for t in tris])
    if not S0.is_annulus():
        raise TriangulationError("S0 is not an annulus")
    bd = S0.boundary_cycles()
    if not (any(same_cycle(c, seq) for c in bd) and any(same_cycle(c, K) for c in bd)):
        raise TriangulationError("S0 boundary is not alpha and the core")
    return ParallelCurve(PLCurve(tuple(seq), R.host), S0, arcs, betas, mers)


@dataclass
class TwistSolve:
    k: int
    rank: int
    bound: int
    residual_mu: dict


def _reduce(vec, piv):
    """Eliminate pivot rows from ``vec`` (dict row -> int).

    Returns ``(residual, m)`` with ``residual = m * (vec - combination of
    pivot columns)``; ``m`` is a positive Fraction.
    """
    v = {r: c for r, c in vec.items() if c}
    m = Fraction(1)
    while True:
        rows = [r for r in v if r in piv]
        if not rows:
            break
        r = min(rows)
        p = piv[r]
        d, c = p[r], v[r]
        g = math.gcd(d, c)
        a, b = d // g, c // g
        if a < 0:
            a, b = -a, -b
        new = {k: a * x for k, x in v.items()}
        for k, x in p.items():
            new[k] = new.get(k, 0) - b * x
        v = {k: x for k, x in new.items() if x}
        m *= a
        if v:
            cont = 0
            for x in v.values():
                cont = math.gcd(cont, x)
            if cont > 1:
                v = {k: x // cont for k, x in v.items()}
                m /= cont
    return v, m


def _as_vector(T, c):
    if isinstance(c, dict):
        return {e: x for e, x in c.items() if x}
    if isinstance(c, list) and len(c) == T.num_edges and all(isinstance(x, int) for x in c):
        return {e: x for e, x in enumerate(c) if x}
    vec = cycle_vector(T, c)
    return {e: x for e, x in enumerate(vec) if x}


def twist_solve(M, alpha, mu):
    """Exact solve of ``c_alpha + k c_mu in im(boundary)`` by fraction-free elimination."""
    B = boundary_matrix(M)
    piv = {}
    for col in B.columns:
        res, _ = _reduce(col, piv)
        if res:
            r = min(res)
            if res[r] < 0:
                res = {k: -x for k, x in res.items()}
            piv[r] = res
    ca, cm = _as_vector(M, alpha), _as_vector(M, mu)
    ra, ma = _reduce(ca, piv)
    rm, mm = _reduce(cm, piv)
    if not rm:
        raise NoTwistSolution("the meridian is a boundary in the complement")
    r0 = min(rm)
    k = Fraction(-ra.get(r0, 0)) * mm / (Fraction(rm[r0]) * ma)
    for r in set(ra) | set(rm):
        if Fraction(ra.get(r, 0)) / ma + k * Fraction(rm.get(r, 0)) / mm != 0:
            raise NoTwistSolution("alpha + k mu is not a boundary for any k")
    if k.denominator != 1:
        raise NoTwistSolution("twist count %s is not an integer" % k)
    k = int(k)
    f = len(piv)
    if k * k > (f + 1) ** 2 * 3 ** f:
        raise NoTwistSolution("twist count exceeds the Hadamard bound")
    return TwistSolve(k, f, (f + 1) * math.isqrt(3 ** f) + (f + 1), rm)


def twist_count(M, alpha, mu):
    """The unique ``k`` with ``alpha + k mu`` a boundary in ``M``."""
    return twist_solve(M, alpha, mu).k


@dataclass
class Longitude:
    curve: tuple            # vertex ids of the host plus spiral points "y1", "y2", ...
    annulus: Annulus
    k: int
    ell: int
    band: list              # triangles of the band A around the meridian
    carriers: dict          # spiral point -> (rung, fraction from the meridian end)
    chain: dict             # host edge -> coefficient, homologous to the curve on the torus


def _path_chain(T, path):
    ends = T.edge_endpoints()
    look = {}
    for e, (a, b) in enumerate(ends):
        look[(a, b)] = (e, 1)
        look[(b, a)] = (e, -1)
    chain = {}
    n = len(path)
    for i in range(n):
        a, b = path[i], path[(i + 1) % n]
        if a == b:
            continue
        e, s = look[(a, b)]
        chain[e] = chain.get(e, 0) + s
    return {e: c for e, c in chain.items() if c}


def build_longitude(R, pc, k, max_edges=10 ** 6):
    """Insert ``k`` twists into the parallel curve near meridian 2.

    The first edge ``[x1, v]`` of arc 1 is replaced by a spiral of ``|k| ell``
    edges around the band ``A`` of ``ell`` peripheral triangles in the wedge
    around ``w2`` that meet the meridian; the annulus loses the triangle
    ``[x1, v, w2]`` and gains the ``|k| ell`` triangles coned to ``w2``.
    """
    T = R.host
    alpha = tuple(pc.alpha.path)
    if k == 0:
        return Longitude(alpha, pc.annulus, 0, 0, [], {}, _path_chain(T, alpha))
    K = R.core
    w2 = K[2]
    mu = pc.meridians[1].path
    mset = set(mu)
    band, band_host = [], []
    for t, f in R.peripheral_faces:
        tri = tuple(sorted(T.vertex(t, v) for v in range(4) if v != f))
        if T.vertex(t, f) == w2 and mset & set(tri):
            band.append(tri)
            band_host.append(t)
    ell = len(band)
    if abs(k) * ell > max_edges:
        raise ResourceLimit("spiral of %d edges exceeds the limit %d" % (abs(k) * ell, max_edges))
    x1, v = pc.arcs[0][0], pc.arcs[0][1]
    if x1 not in mset or v in mset:
        raise TriangulationError("first edge of arc 1 does not leave the meridian")

    def rungs(tri):
        return [frozenset(e) for e in ((tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2]))
                if len(set(e) & mset) == 1]

    at = {}
    for j, tri in enumerate(band):
        rs = rungs(tri)
        if len(rs) != 2:
            raise TriangulationError("band triangle %s does not have two rungs" % (tri,))
        for r in rs:
            at.setdefault(r, []).append(j)
    r0 = frozenset((x1, v))
    if len(at.get(r0, ())) != 2:
        raise TriangulationError("first edge of arc 1 is not a rung of the band")

    def walk(first):
        order, tris = [r0], []
        j, r = first, r0
        while True:
            tris.append(j)
            a, b = rungs(band[j])
            r = b if a == r else a
            if r == r0:
                break
            order.append(r)
            j = at[r][0] if at[r][1] == j else at[r][1]
        return order, tris

    order, tris = walk(at[r0][0])
    if len(order) != ell:
        raise TriangulationError("band is not an annulus of rungs")
    # orient so that the rung feet advance along the meridian
    succ = {mu[i]: mu[(i + 1) % len(mu)] for i in range(len(mu))}
    forward = None
    for j in tris:
        feet = [x for x in band[j] if x in mset]
        if len(feet) == 2:
            y = feet[1] if feet[0] == x1 else feet[0]
            forward = succ[x1] == y
            break
    if forward is None:
        raise TriangulationError("band has no meridian edge")
    if not forward:
        order, tris = walk(at[r0][1])
    if k < 0:
        order = [order[0]] + order[1:][::-1]
        tris = tris[::-1]
    n = abs(k) * ell
    carriers = {}
    path = [x1]
    for step in range(1, n):
        y = "y%d" % step
        carriers[y] = (tuple(sorted(order[step % ell])), Fraction(step, n))
        path.append(y)
    path.append(v)
    host_of_band = {band[j]: band_host[j] for j in range(ell)}
    new_tris, new_hosts = [], []
    for step in range(n):
        tri = band[tris[step % ell]]
        new_tris.append((path[step], path[step + 1], w2))
        new_hosts.append(host_of_band[tri])
    drop = frozenset((x1, v, w2))
    keep = [(t, h) for t, h in zip(pc.annulus.triangles, pc.annulus.hosts) if frozenset(t) != drop]
    if len(keep) != len(pc.annulus.triangles) - 1:
        raise TriangulationError("S0 does not contain the triangle [x1, v, w2]")
    S = Annulus([t for t, _ in keep] + new_tris, [h for _, h in keep] + new_hosts)
    i = alpha.index(x1)
    if alpha[(i + 1) % len(alpha)] != v:
        raise TriangulationError("alpha does not run from x1 to v")
    curve = alpha[:i + 1] + tuple(path[1:-1]) + alpha[i + 1:]
    feet = {}
    for y, (rung, _) in carriers.items():
        feet[y] = rung[0] if rung[0] in mset else rung[1]
    pushed = [feet.get(x, x) for x in curve]
    return Longitude(curve, S, k, ell, band, carriers, _path_chain(T, pushed))


# -- triangulated surfaces and basic curves --------------------------------

def _ekey(a, b):
    return (a, b) if a < b else (b, a)


class SurfaceError(ValueError):
    pass


class TriangulatedSurface:
    """Closed, coherently oriented, simplicial triangulated surface."""

    def __init__(self, triangles):
        self.triangles = [tuple(t) for t in triangles]
        self.directed = {}
        self.edge_tris = {}
        for k, (a, b, c) in enumerate(self.triangles):
            if len({a, b, c}) != 3:
                raise SurfaceError("degenerate triangle %s" % (self.triangles[k],))
            for x, y in ((a, b), (b, c), (c, a)):
                if (x, y) in self.directed:
                    raise SurfaceError("triangles are not coherently oriented")
                self.directed[(x, y)] = k
                self.edge_tris.setdefault(_ekey(x, y), []).append(k)
        for e, ts in self.edge_tris.items():
            if len(ts) != 2:
                raise SurfaceError("edge %s is not on exactly two triangles" % (e,))
        succ = {}
        for a, b, c in self.triangles:
            for v, x, y in ((a, b, c), (b, c, a), (c, a, b)):
                succ.setdefault(v, {})[x] = y
        self.rot = {}
        for v, nxt in succ.items():
            s = min(nxt)
            cyc = [s]
            while nxt[cyc[-1]] != s:
                cyc.append(nxt[cyc[-1]])
                if len(cyc) > len(nxt):
                    break
            if len(cyc) != len(nxt):
                raise SurfaceError("link of vertex %s is not a circle" % (v,))
            self.rot[v] = cyc

    @property
    def u(self):
        return len(self.triangles)

    def vertices(self):
        return sorted(self.rot)

    def valence(self, v):
        return len(self.rot[v])

    @property
    def max_valence(self):
        return max(len(r) for r in self.rot.values())

    def euler(self):
        return len(self.rot) - len(self.edge_tris) + len(self.triangles)

    def other(self, t, e):
        a, b = self.edge_tris[e]
        return b if a == t else a

    def tri_edges(self, t):
        a, b, c = self.triangles[t]
        return (_ekey(a, b), _ekey(b, c), _ekey(c, a))

    @classmethod
    def grid_torus(cls, n, m):
        """The ``n x m`` square grid on a torus, each square cut by its diagonal."""
        if n < 3 or m < 3:
            raise SurfaceError("grid torus needs n, m >= 3 to be simplicial")

        def v(i, j):
            return (i % n) + n * (j % m)
        tris = []
        for j in range(m):
            for i in range(n):
                tris.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
                tris.append((v(i, j), v(i + 1, j + 1), v(i, j + 1)))
        return cls(tris)

    @classmethod
    def from_faces(cls, T, faces):
        """Coherently oriented surface from boundary faces ``(t, f)`` of a simplicial ``T``."""
        raw = [tuple(T.vertex(t, v) for v in range(4) if v != f) for t, f in faces]
        by_edge = {}
        for k, tri in enumerate(raw):
            for x, y in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                by_edge.setdefault(_ekey(x, y), []).append(k)
        out = [None] * len(raw)
        for s in range(len(raw)):
            if out[s] is not None:
                continue
            out[s] = raw[s]
            stack = [s]
            while stack:
                k = stack.pop()
                a, b, c = out[k]
                for x, y in ((a, b), (b, c), (c, a)):
                    for j in by_edge[_ekey(x, y)]:
                        if j == k or out[j] is not None:
                            continue
                        p, q, r = raw[j]
                        cand = (p, q, r)
                        dirs = {(p, q), (q, r), (r, p)}
                        if (x, y) in dirs:
                            cand = (p, r, q)
                        out[j] = cand
                        stack.append(j)
        return cls(out)


@dataclass
class SurfaceCurve:
    """Basic curve as a cyclic word of crossings ``(edge, position, triangle)``.

    The curve crosses ``edge`` at ``position`` (a Fraction measured from the
    lower vertex id) and then runs through ``triangle`` to the next
    crossing.  Consecutive crossings on one edge make a type-2 arc.
    """
    surface: TriangulatedSurface
    word: tuple

    def __post_init__(self):
        self.word = tuple((tuple(e), Fraction(p), int(t)) for e, p, t in self.word)

    def __len__(self):
        return len(self.word)

    @property
    def length(self):
        return len(self.word)

    def arc_types(self):
        n = len(self.word)
        return [2 if self.word[i][0] == self.word[(i + 1) % n][0] else 1 for i in range(n)]

    @property
    def segment_count(self):
        return sum(2 if k == 2 else 3 for k in self.arc_types())

    def edges(self):
        return [e for e, _, _ in self.word]

    def validate(self):
        F = self.surface
        n = len(self.word)
        if n < 2:
            raise SurfaceError("curve needs at least two crossings")
        for i in range(n):
            e, p, t = self.word[i]
            e2 = self.word[(i + 1) % n][0]
            if e not in F.edge_tris or not (0 < p < 1):
                raise SurfaceError("bad crossing %s" % (self.word[i],))
            if e not in F.tri_edges(t) or e2 not in F.tri_edges(t):
                raise SurfaceError("arc %d is not inside triangle %d" % (i, t))
            if e == e2 and e2 == e and F.other(t, e) == self.word[(i + 1) % n][2] and n == 2:
                raise SurfaceError("curve bounds a bigon with one edge")
            prev_t = self.word[i - 1][2]
            if F.other(t, e) != prev_t:
                raise SurfaceError("crossing %d does not pass between its triangles" % i)
        sys = CurveSystem(F)
        sys.add("c", self)
        sys.check_embedded()
        return self


COSTS = {1: 28, 3: 22}


def basic_cost(kind, valence=None):
    """Elementary moves charged for one basic move."""
    if kind == 2:
        return 6 * valence + 24
    return COSTS[kind]


class CurveSystem:
    """Basic curves on a surface with the order of their crossings along each edge.

    Points carry persistent ids; each curve is a circular doubly linked
    list and ``tri_after[p]`` is the triangle of the arc leaving ``p``.
    """

    def __init__(self, F):
        self.F = F
        self.order = {e: [] for e in F.edge_tris}
        self.edge_of = {}
        self.owner = {}
        self.nxt = {}
        self.prv = {}
        self.tri_after = {}
        self.heads = {}
        self.arcs_in = {t: set() for t in range(F.u)}
        self._fresh = 0
        self.coincident = set()
        self._slid = {}

    # construction and export
    def _new(self, name, e):
        p = self._fresh
        self._fresh += 1
        self.edge_of[p] = e
        self.owner[p] = name
        return p

    def add(self, name, curve):
        pos = {}
        for e in self.order:
            for q in self.order[e]:
                pos[q] = self._pos_hint.get(q) if hasattr(self, "_pos_hint") else None
        if not hasattr(self, "_pos_hint"):
            self._pos_hint = {}
        pids = []
        for e, p, t in curve.word:
            q = self._new(name, e)
            keys = [self._pos_hint[x] for x in self.order[e]]
            if p in keys:
                raise SurfaceError("two crossings at the same point of edge %s" % (e,))
            self.order[e].insert(bisect.bisect(keys, p), q)
            self._pos_hint[q] = p
            self.tri_after[q] = t
            self.arcs_in[t].add(q)
            pids.append(q)
        n = len(pids)
        for i, q in enumerate(pids):
            self.nxt[q] = pids[(i + 1) % n]
            self.prv[q] = pids[i - 1]
        self.heads[name] = pids[0]
        return pids

    def points(self, name):
        h = self.heads[name]
        out = [h]
        p = self.nxt[h]
        while p != h:
            out.append(p)
            p = self.nxt[p]
        return out

    def length(self, name):
        return len(self.points(name))

    def word(self, name):
        out = []
        for p in self.points(name):
            e = self.edge_of[p]
            idx = self.order[e].index(p)
            out.append((e, Fraction(idx + 1, len(self.order[e]) + 1), self.tri_after[p]))
        return tuple(out)

    def curve(self, name):
        return SurfaceCurve(self.F, self.word(name))

    def snapshot(self):
        return {name: self.word(name) for name in self.heads}

    # triangle layouts
    def layout(self, t):
        """Boundary points of triangle ``t`` in order with the gap of each edge
        segment ``('s', e, j)`` and corner ``('v', x)``."""
        a, b, c = self.F.triangles[t]
        walk = []
        for x, y in ((a, b), (b, c), (c, a)):
            walk.append(("v", x))
            e = _ekey(x, y)
            pts = self.order[e]
            k = len(pts)
            if x < y:
                for j in range(k):
                    walk.append(("s", e, j))
                    walk.append(("p", pts[j]))
                walk.append(("s", e, k))
            else:
                for j in range(k, 0, -1):
                    walk.append(("s", e, j))
                    walk.append(("p", pts[j - 1]))
                walk.append(("s", e, 0))
        idx = {}
        for item in walk:
            if item[0] == "p":
                idx[item[1]] = len(idx)
        N = len(idx)
        gap = {}
        cur = N - 1 if N else 0
        for item in walk:
            if item[0] == "p":
                cur = idx[item[1]]
            else:
                gap[item] = cur
        return idx, gap, N

    def chords(self, t, idx=None):
        if idx is None:
            idx = self.layout(t)[0]
        return {p: (idx[p], idx[self.nxt[p]]) for p in self.arcs_in[t]}

    @staticmethod
    def _links(c1, c2):
        i, j = sorted(c1)
        k, l = c2
        return (i < k < j) != (i < l < j)

    def intersections(self, a="alpha", b="beta"):
        out = []
        for t in range(self.F.u):
            ch = self.chords(t)
            As = sorted(p for p in ch if self.owner[p] == a)
            Bs = sorted(p for p in ch if self.owner[p] == b)
            for p in As:
                for q in Bs:
                    if self._links(ch[p], ch[q]):
                        out.append((t, p, q))
        return out

    def check_embedded(self):
        for t in range(self.F.u):
            ch = self.chords(t)
            ps = sorted(ch)
            for i, p in enumerate(ps):
                for q in ps[i + 1:]:
                    if self.owner[p] == self.owner[q] and self._links(ch[p], ch[q]):
                        raise SurfaceError("curve %s is not embedded in triangle %d" % (self.owner[p], t))
        for p in self.nxt:
            t = self.tri_after[p]
            e1, e2 = self.edge_of[p], self.edge_of[self.nxt[p]]
            te = self.F.tri_edges(t)
            if e1 not in te or e2 not in te:
                raise SurfaceError("arc from %d leaves its triangle" % p)

    # moves
    def swap(self, e, i):
        """Type 1: exchange adjacent crossings ``i`` and ``i + 1`` on edge ``e``."""
        pts = self.order[e]
        if not (0 <= i < len(pts) - 1):
            raise MoveError("no adjacent pair at %d on %s" % (i, e))
        p, q = pts[i], pts[i + 1]
        if self.owner[p] == self.owner[q]:
            raise MoveError("swap would make a curve cross itself")
        pts[i], pts[i + 1] = q, p
        return BasicMove(1, self.owner[p], ("swap", e, i), basic_cost(1))

    def closest(self, e, v):
        pts = self.order[e]
        if not pts:
            return None
        return pts[0] if v == e[0] else pts[-1]

    def push(self, p, v):
        """Type 2: slide crossing ``p`` along its edge across the endpoint ``v``.

        Returns the move record and the arc renaming ``{old start: new start}``.
        """
        F = self.F
        e = self.edge_of[p]
        if v not in e:
            raise MoveError("vertex %s is not an end of %s" % (v, e))
        if self.closest(e, v) != p:
            raise MoveError("crossing %d is not the closest to %s on %s" % (p, v, e))
        name = self.owner[p]
        q1, q2 = self.prv[p], self.nxt[p]
        if q1 == p:
            raise MoveError("curve too short")
        n0 = e[1] if e[0] == v else e[0]
        rot = F.rot[v]
        k0 = rot.index(n0)
        nb = rot[k0:] + rot[:k0]
        V = len(nb)
        tau = [F.directed[(v, nb[j])] for j in range(V)]
        Tp, Tn = self.tri_after[q1], self.tri_after[p]
        if (Tp, Tn) == (tau[V - 1], tau[0]):
            seq = list(range(V - 1, 0, -1))
            arc_tris = [tau[j - 1] for j in seq[:-1]] + [tau[0]]
        elif (Tp, Tn) == (tau[0], tau[V - 1]):
            seq = list(range(1, V))
            arc_tris = [tau[j] for j in seq[:-1]] + [tau[V - 1]]
        else:
            raise MoveError("crossing %d does not pass between the triangles at %s" % (p, v))
        # remove p
        self.order[e].remove(p)
        self.arcs_in[Tn].discard(p)
        new = []
        for j in seq:
            ej = _ekey(v, nb[j])
            q = self._new(name, ej)
            if v == ej[0]:
                self.order[ej].insert(0, q)
            else:
                self.order[ej].append(q)
            new.append(q)
        chain = [q1] + new + [q2]
        for a, b in zip(chain, chain[1:]):
            self.nxt[a] = b
            self.prv[b] = a
        for q, t in zip(new, arc_tris):
            self.tri_after[q] = t
            self.arcs_in[t].add(q)
        for d in (self.nxt, self.prv, self.tri_after, self.edge_of, self.owner):
            d.pop(p, None)
        if self.heads[name] == p:
            self.heads[name] = new[0]
        rec = BasicMove(2, name, ("push", p, v), basic_cost(2, V))
        return rec, {p: new[-1]}

    def collapse(self, p):
        """Type 3: remove the type-2 arc leaving ``p`` across the bigon it
        forms with its edge."""
        q = self.nxt[p]
        e = self.edge_of[p]
        if self.edge_of[q] != e:
            raise MoveError("arc from %d is not a type-2 arc" % p)
        pts = self.order[e]
        i, j = pts.index(p), pts.index(q)
        if abs(i - j) != 1:
            raise MoveError("bigon at %d contains other crossings" % p)
        name = self.owner[p]
        x, y = self.prv[p], self.nxt[q]
        if x == q or y == p or x == y:
            raise MoveError("curve too short for a bigon collapse")
        T = self.tri_after[p]
        self.arcs_in[T].discard(p)
        self.arcs_in[self.tri_after[q]].discard(q)
        pts.remove(p)
        pts.remove(q)
        self.nxt[x] = y
        self.prv[y] = x
        for r in (p, q):
            for d in (self.nxt, self.prv, self.tri_after, self.edge_of, self.owner):
                d.pop(r, None)
        if self.heads[name] in (p, q):
            self.heads[name] = x
        rec = BasicMove(3, name, ("collapse", p), basic_cost(3))
        return rec, {p: x, q: x}

    def slide(self, a, b):
        """Type 1 merge step: slide crossing ``a`` onto the adjacent crossing ``b``."""
        e = self.edge_of[a]
        pts = self.order[e]
        if self.edge_of.get(b) != e or abs(pts.index(a) - pts.index(b)) != 1:
            raise MoveError("crossings %d and %d are not adjacent" % (a, b))
        self._slid[a] = b
        return BasicMove(1, self.owner[a], ("slide", a, b), basic_cost(1))

    def finish_merge(self, name, onto):
        """After every crossing of ``name`` slid onto ``onto``, identify the curves."""
        pts = self.points(name)
        if any(p not in self._slid for p in pts):
            raise MoveError("merge incomplete")
        image = [self._slid[p] for p in pts]
        if not same_cycle(image, self.points(onto)):
            raise MoveError("slides do not match the target curve")
        for p in pts:
            self.order[self.edge_of[p]].remove(p)
            self.arcs_in[self.tri_after[p]].discard(p)
            for d in (self.nxt, self.prv, self.tri_after, self.edge_of, self.owner):
                d.pop(p, None)
        self.heads[name] = None
        self.coincident.add(name)
        self._slid.clear()

    def apply(self, m):
        """Replay a recorded basic move."""
        kind = m.site[0]
        if kind == "swap":
            return self.swap(m.site[1], m.site[2])
        if kind == "push":
            return self.push(m.site[1], m.site[2])[0]
        if kind == "collapse":
            return self.collapse(m.site[1])[0]
        if kind == "slide":
            rec = self.slide(m.site[1], m.site[2])
            name = self.owner[m.site[1]]
            if all(p in self._slid for p in self.points(name)):
                self.finish_merge(name, self.owner[m.site[2]])
            return rec
        raise MoveError("unknown basic move %r" % (kind,))

    # regions cut out by a set of bounding arcs
    def region(self, bounding, t0, gap0=None, toward=None):
        """Flood without crossing the arcs whose start points are in ``bounding``.

        The start face in triangle ``t0`` is the one touching gap ``gap0``,
        or, given ``toward`` (arc start -> layout index of a point on the
        wanted side of that chord), the face on those sides of every chord.
        Returns a :class:`Region` with its faces, segments and vertices.
        """
        lay = {}

        def info(t):
            if t not in lay:
                idx, gap, N = self.layout(t)
                ch = sorted((p, tuple(sorted((idx[p], idx[self.nxt[p]]))))
                            for p in self.arcs_in[t] if p in bounding)
                lay[t] = (idx, gap, N, [c for _, c in ch], [p for p, _ in ch])
            return lay[t]

        def sig(t, g):
            ch = info(t)[3]
            return tuple(1 if lo <= g < hi else 0 for lo, hi in ch)

        if toward is not None:
            _, _, _, ch, starts = info(t0)
            s0 = tuple(1 if lo < toward[p] < hi else 0 for (lo, hi), p in zip(ch, starts))
            start = (t0, s0)
        else:
            start = (t0, sig(t0, gap0))
        nodes = {start}
        segs = set()
        verts = set()
        stack = [start]
        while stack:
            t, s = stack.pop()
            idx, gap, N = info(t)[:3]
            for item, g in gap.items():
                if sig(t, g) != s:
                    continue
                if item[0] == "v":
                    verts.add(item[1])
                    continue
                _, e, j = item
                segs.add((e, j))
                t2 = self.F.other(t, e)
                g2 = info(t2)[1][item]
                node = (t2, sig(t2, g2))
                if node not in nodes:
                    nodes.add(node)
                    stack.append(node)
        return Region(nodes, segs, verts, len(nodes) - len(segs) + len(verts), sig, info)


@dataclass
class Region:
    faces: set
    segments: set
    vertices: set
    euler: int
    sig: object = None
    info: object = None

    def contains_gap(self, t, g):
        return (t, self.sig(t, g)) in self.faces


@dataclass
class Bigon:
    x: tuple        # (alpha arc start, beta arc start) at the first corner
    y: tuple        # second corner, reached from x forward along alpha
    bdir: int       # +1 if beta runs forward from x to y, else -1


def _rank_along(sys, name, crossings, key_index):
    """Order crossings along curve ``name``; ``key_index`` picks this curve's arc."""
    by_arc = {}
    for X in crossings:
        by_arc.setdefault(X[key_index], []).append(X)
    order = []
    for p in sys.points(name):
        if p not in by_arc:
            continue
        t = sys.tri_after[p]
        idx, _, N = sys.layout(t)
        i, j = idx[p], idx[sys.nxt[p]]
        span = (j - i) % N

        def dist(X):
            other = X[1 - key_index]
            k, l = idx[other], idx[sys.nxt[other]]
            for z in (k, l):
                d = (z - i) % N
                if 0 < d < span:
                    return d
            raise MoveError("crossing is not inside its arc")
        order += sorted(by_arc[p], key=dist)
    return order


def _bounding(sys, name, p_from, p_to, direction):
    out = {p_from}
    p = p_from
    while p != p_to:
        p = sys.nxt[p] if direction > 0 else sys.prv[p]
        out.add(p)
        if len(out) > len(sys.nxt):
            raise MoveError("arc walk did not close")
    return out


def _bigon_region(sys, bg):
    a0, b0 = bg.x
    a1, b1 = bg.y
    bound = _bounding(sys, "alpha", a0, a1, 1) | _bounding(sys, "beta", b0, b1, bg.bdir)
    t = sys.tri_after[a0]
    if sys.tri_after[b0] != t:
        raise MoveError("corner arcs are in different triangles")
    idx, _, N = sys.layout(t)
    ia, ib = idx[a0], idx[b0]
    ja, jb = idx[sys.nxt[a0]], idx[sys.nxt[b0]]
    span = (ja - ia) % N

    def along(z):
        d = (z - ia) % N
        return d if 0 < d < span else None

    # position of X along chord a, by the endpoint of b inside the span
    dx = along(ib) if along(ib) is not None else along(jb)
    toward = {a0: jb if bg.bdir > 0 else ib, b0: ja}
    for p in sys.arcs_in[t]:
        if p in toward or p not in bound:
            continue
        k, l = idx[p], idx[sys.nxt[p]]
        dk, dl = along(k), along(l)
        if (dk is None) == (dl is None):
            toward[p] = ia          # does not cross a: X is on the side of a
        else:
            d = dk if dk is not None else dl
            toward[p] = ja if d < dx else ia
    return sys.region(bound, t, toward=toward)


def find_bigon(sys):
    """An innermost bigon between alpha and beta, or None."""
    for bg in innermost_bigons(sys):
        return bg
    return None


def innermost_bigons(sys):
    """All innermost bigons, in alpha order."""
    X = [(p, q) for _, p, q in sys.intersections()]
    n = len(X)
    if n < 2:
        return None
    along_a = _rank_along(sys, "alpha", X, 0)
    along_b = _rank_along(sys, "beta", X, 1)
    rb = {x: i for i, x in enumerate(along_b)}
    for r in range(n):
        x, y = along_a[r], along_a[(r + 1) % n]
        dirs = []
        if rb[y] == (rb[x] + 1) % n:
            dirs.append(1)
        if rb[y] == (rb[x] - 1) % n:
            dirs.append(-1)
        for d in dirs:
            bg = Bigon(x, y, d)
            if _bigon_region(sys, bg).euler == 1:
                yield bg


def _rename(key, ren):
    a, b = key
    return (ren.get(a, a), ren.get(b, b))


def _vertex_push_site(sys, reg):
    F = sys.F
    for v in sorted(reg.vertices):
        for w in sorted(F.rot[v]):
            p = sys.closest(_ekey(v, w), v)
            if p is not None:
                return p, v
    raise IsotopyExhausted("region vertices have no crossing to push")


def _bigon_cell(sys, reg, bounding):
    for p in sorted(bounding):
        q = sys.nxt[p]
        e = sys.edge_of[p]
        if sys.edge_of[q] != e:
            continue
        pts = sys.order[e]
        if abs(pts.index(p) - pts.index(q)) != 1:
            continue
        t = sys.tri_after[p]
        idx, _, N = sys.layout(t)
        i, j = idx[p], idx[q]
        g = min(i, j) if abs(i - j) == 1 else max(i, j)
        if reg.contains_gap(t, g):
            return p
    return None


def _eliminate(sys, bg, log, limit):
    """Remove the two corners of bigon ``bg``; returns the number of moves."""
    n0 = len(sys.intersections())
    used = 0
    while True:
        if used > limit:
            raise ResourceLimit("bigon elimination exceeded its move budget")
        reg = _bigon_region(sys, bg)
        if reg.euler != 1:
            raise MoveError("tracked bigon stopped being a disk")
        bound = (_bounding(sys, "alpha", bg.x[0], bg.y[0], 1)
                 | _bounding(sys, "beta", bg.x[1], bg.y[1], bg.bdir))
        if reg.vertices:
            p, v = _vertex_push_site(sys, reg)
            rec, ren = sys.push(p, v)
            bg = Bigon(_rename(bg.x, ren), _rename(bg.y, ren), bg.bdir)
        else:
            p = _bigon_cell(sys, reg, bound)
            if p is not None:
                rec, ren = sys.collapse(p)
                bg = Bigon(_rename(bg.x, ren), _rename(bg.y, ren), bg.bdir)
            else:
                a, b = bg.x
                pa = sys.nxt[a]
                pb = sys.nxt[b] if bg.bdir > 0 else b
                e = sys.edge_of[pa]
                pts = sys.order[e]
                if sys.edge_of[pb] != e or abs(pts.index(pa) - pts.index(pb)) != 1:
                    raise MoveError("bigon corner is not at a rung")
                rec = sys.swap(e, min(pts.index(pa), pts.index(pb)))
                nb = pb if bg.bdir > 0 else sys.prv[b]
                bg = Bigon((pa, nb), bg.y, bg.bdir)
        log.append(rec)
        used += 1
        n1 = len(sys.intersections())
        if n1 != n0:
            # a collapse can also cancel a pair crossing both merged chords
            if n1 > n0 or (n0 - n1) % 2:
                raise MoveError("bigon round changed intersections by %d" % (n0 - n1))
            return used


def _best_round(sys, limit):
    """Eliminate one innermost bigon, trying candidates on scratch copies.

    A collapse can straighten away a second pair of crossings along with
    the bigon; candidates whose round removes exactly two are preferred.
    Returns the updated system and the moves, or ``(None, None)``.
    """
    n = len(sys.intersections())
    fallback = None
    for bg in innermost_bigons(sys):
        trial = copy.deepcopy(sys, {id(sys.F): sys.F})
        moves = []
        _eliminate(trial, bg, moves, limit)
        if n - len(trial.intersections()) == 2:
            return trial, moves
        if fallback is None:
            fallback = (trial, moves)
    return fallback or (None, None)


def _annulus_region(sys, side):
    h = sys.heads["alpha"]
    bound = set(sys.nxt)
    t = sys.tri_after[h]
    idx, _, N = sys.layout(t)
    g = idx[h] if side == 0 else idx[sys.nxt[h]]
    return sys.region(bound, t, g), bound


def _touches(sys, reg, name):
    for e, j in reg.segments:
        pts = sys.order[e]
        for k in (j - 1, j):
            if 0 <= k < len(pts) and sys.owner[pts[k]] == name:
                return True
    return False


def _merge_map(sys, reg):
    """Pair each alpha crossing with the adjacent beta crossing across the region."""
    image = {}
    for e, j in reg.segments:
        pts = sys.order[e]
        if 0 < j < len(pts):
            a, b = pts[j - 1], pts[j]
            if sys.owner[a] == "beta":
                a, b = b, a
            if sys.owner[a] == "alpha" and sys.owner[b] == "beta":
                image[a] = b
    return image


def isotope_on_surface(F, alpha, beta, check=True):
    """Basic-move isotopy carrying two isotopic basic curves together.

    Bigon rounds remove two intersections each (push region vertices out,
    collapse bigon cells, then swap along the rungs).  Disjoint curves are
    then made parallel across an annulus and merged by type-1 slides.
    """
    l0 = len(alpha) + len(beta)
    u, V = F.u, F.max_valence
    basic_budget = l0 ** 4 * u * V
    elem_budget = 17 * l0 ** 4 * u ** 3
    log = []
    rounds = []
    script = MoveScript((alpha, beta), log)
    if alpha.word == beta.word:
        script.info = {"rounds": [], "basic": 0, "elementary": 0, "basic_budget": basic_budget,
                       "elementary_budget": elem_budget, "l": l0, "u": u, "V": V}
        return script
    sys = CurveSystem(F)
    sys.add("alpha", alpha)
    sys.add("beta", beta)
    if check:
        sys.check_embedded()
    while True:
        n = len(sys.intersections())
        if n == 0:
            break
        sys, moves = _best_round(sys, basic_budget)
        if sys is None:
            raise IsotopyExhausted("%d intersections remain but no innermost bigon exists" % n)
        log.extend(moves)
        rounds.append((n, len(sys.intersections())))
        if check:
            sys.check_embedded()
    # disjoint: choose the annulus side of alpha
    best = None
    for side in (0, 1):
        reg, _ = _annulus_region(sys, side)
        if reg.euler == 0 and _touches(sys, reg, "beta"):
            if best is None or len(reg.faces) < best[1]:
                best = (side, len(reg.faces))
    if best is None:
        raise IsotopyExhausted("alpha and beta do not cobound an annulus")
    side = best[0]
    while True:
        if len(log) > basic_budget:
            raise ResourceLimit("basic-move budget exceeded")
        reg, bound = _annulus_region(sys, side)
        if reg.euler != 0:
            raise MoveError("annulus region lost its shape")
        if reg.vertices:
            p, v = _vertex_push_site(sys, reg)
            log.append(sys.push(p, v)[0])
            continue
        p = _bigon_cell(sys, reg, bound)
        if p is not None:
            log.append(sys.collapse(p)[0])
            continue
        image = _merge_map(sys, reg)
        pts = sys.points("alpha")
        if set(image) != set(pts):
            raise IsotopyExhausted("annulus cells are not all rungs")
        for a in pts:
            log.append(sys.slide(a, image[a]))
        sys.finish_merge("alpha", "beta")
        break
    basic = len(log)
    elem = sum(m.cost for m in log)
    script.info = {"rounds": rounds, "basic": basic, "elementary": elem,
                   "basic_budget": basic_budget, "elementary_budget": elem_budget, "l": l0,
                   "u": u, "V": V}
    if basic > basic_budget or elem > elem_budget:
        raise ResourceLimit("isotopy exceeded its budget")
    script.result = sys
    return script


def apply_basic_move(F, c, kind, site):
    """Apply one basic move to a single curve; returns ``(curve, cost)``.

    ``site`` is a crossing index for kinds 1 and 3 and ``(index, vertex)``
    for kind 2.
    """
    sys = CurveSystem(F)
    pids = sys.add("c", c)
    if kind == 1:
        i = site if isinstance(site, int) else site[0]
        if not 0 <= i < len(pids):
            raise MoveError("no crossing %r" % (site,))
        return sys.curve("c"), basic_cost(1)
    if kind == 2:
        i, v = site
        rec, _ = sys.push(pids[i], v)
        return sys.curve("c"), rec.cost
    if kind == 3:
        rec, _ = sys.collapse(pids[site])
        return sys.curve("c"), rec.cost
    raise MoveError("basic move kind must be 1, 2 or 3")


def to_basic(F, c, depth=Fraction(1, 4)):
    """A basic curve from ``c``.

    A :class:`SurfaceCurve` is checked and returned unchanged.  A closed
    vertex path in the 1-skeleton is pushed off itself: near each vertex it
    passes on the side crossing fewer edges, and it crosses a path edge at
    its midpoint where consecutive sides differ.  ``depth`` is how far
    along each crossed edge the curve passes; pick distinct depths for
    curves that share vertices.
    """
    depth = Fraction(depth)
    if not 0 < depth < Fraction(1, 2):
        raise SurfaceError("depth must lie strictly between 0 and 1/2")
    if isinstance(c, SurfaceCurve):
        c.validate()
        return c, MoveScript((), [])
    path = list(c.path if isinstance(c, PLCurve) else c)
    n = len(path)
    if n < 3 or len(set(path)) != n:
        raise SurfaceError("vertex path must be closed and embedded")
    for i in range(n):
        if _ekey(path[i], path[(i + 1) % n]) not in F.edge_tris:
            raise SurfaceError("step %d is not an edge" % i)
    sides = []
    fans = []
    for i in range(n):
        v, pin, pout = path[i], path[i - 1], path[(i + 1) % n]
        rot = F.rot[v]
        k = len(rot)
        io, ii = rot.index(pout), rot.index(pin)
        left = [rot[(io + j) % k] for j in range(1, (ii - io) % k)]        # ccw from out to in
        right = [rot[(ii + j) % k] for j in range(1, (io - ii) % k)]       # ccw from in to out
        if len(left) <= len(right):
            sides.append(0)
            fans.append(left[::-1])
        else:
            sides.append(1)
            fans.append(right)
    crossings = []        # (edge, position)
    for i in range(n):
        v = path[i]
        for w in fans[i]:
            e = _ekey(v, w)
            crossings.append((e, depth if v == e[0] else 1 - depth))
        if sides[i] != sides[(i + 1) % n]:
            crossings.append((_ekey(v, path[(i + 1) % n]), Fraction(1, 4) + depth))
    if not crossings:
        raise SurfaceError("pushed curve crosses no edges")
    # triangle walk: start in the triangle on side s0 of the incoming edge at v0
    v0, vin = path[0], path[-1]
    t = F.directed[(vin, v0)] if sides[0] == 0 else F.directed[(v0, vin)]
    # crossings before the first one at v0 belong to the end of the list
    word = []
    for e, p in crossings:
        if e not in F.tri_edges(t):
            raise SurfaceError("pushed curve leaves its triangle")
        t = F.other(t, e)
        word.append((e, p, t))
    curve = SurfaceCurve(F, tuple(word))
    curve.validate()
    s = n
    a = len(word)
    cost = 2 * (a + curve.segment_count)
    if cost > 4 * (s + F.u * F.max_valence):
        raise MoveError("perturbation cost exceeds its accounting")
    script = MoveScript(tuple(path), [])
    script.info = {"elementary": cost, "perturbed_vertices": n, "length": a}
    return curve, script
