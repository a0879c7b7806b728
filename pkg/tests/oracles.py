"""Independent oracles and fixture generators used by the tests.

Nothing here calls the routines it checks: ray sets come from support
enumeration, homology from sympy's Smith normal form, Euler
characteristics from explicit cell counts.
"""

import itertools
import random
from fractions import Fraction

from unknotkit.complex import Triangulation, TriangulationError, boundary_matrix
from unknotkit.normalsurf import matching_system

PERMS = list(itertools.permutations(range(4)))


# -- random triangulations ----------------------------------------------------

def random_gluing(t, rng, close_prob=0.5, tries=200):
    """A connected manifold triangulation with t tetrahedra.

    Grows a tree of tetrahedra (a ball) and then glues some pairs of free
    faces, keeping only gluings that pass the manifold check.
    """
    for _ in range(tries):
        glu = [[None] * 4 for _ in range(t)]
        for new in range(1, t):
            free = [(a, f) for a in range(new) for f in range(4) if glu[a][f] is None]
            a, f = rng.choice(free)
            f2 = rng.randrange(4)
            p = list(rng.choice([q for q in PERMS if q[f] == f2]))
            glu[a][f] = (new, f2, tuple(p))
            inv = [0] * 4
            for i in range(4):
                inv[p[i]] = i
            glu[new][f2] = (a, f, tuple(inv))
        free = [(a, f) for a in range(t) for f in range(4) if glu[a][f] is None]
        rng.shuffle(free)
        while len(free) >= 2 and rng.random() < close_prob:
            (a, f), (b, g) = free.pop(), free.pop()
            p = rng.choice([q for q in PERMS if q[f] == g])
            inv = [0] * 4
            for i in range(4):
                inv[p[i]] = i
            trial = [row[:] for row in glu]
            trial[a][f] = (b, g, tuple(p))
            trial[b][g] = (a, f, tuple(inv))
            try:
                Triangulation(trial)
            except TriangulationError:
                free += [(a, f), (b, g)]
                break
            glu = trial
        try:
            return Triangulation(glu)
        except TriangulationError:
            continue
    raise RuntimeError("no manifold gluing found")


def random_fixtures(count, max_t, seed=0):
    rng = random.Random(seed)
    return [random_gluing(rng.randint(1, max_t), rng) for _ in range(count)]


# -- exact linear algebra -------------------------------------------------------

def nullspace(rows, ncols):
    """Basis of the rational null space (list of Fraction vectors)."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(v)
    return basis


def primitive(v):
    from math import gcd
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def brute_force_rays(T):
    """Admissible extreme rays of the normal cone by support enumeration.

    A ray of ``{x >= 0, Ax = 0}`` is extreme exactly when the columns on its
    support have a one-dimensional null space spanned by a positive
    vector; such supports are minimal.  Supports run over sets using at
    most one quad type per tetrahedron, in order of size, skipping any
    support on which some matching row has a single strict sign.
    """
    t = T.size
    rows = matching_system(T).rows
    per_tet = []
    for i in range(t):
        opts = []
        for tri_mask in range(16):
            tris = [7 * i + k for k in range(4) if tri_mask >> k & 1]
            opts.append(tris)
            for q in range(3):
                opts.append(tris + [7 * i + 4 + q])
        per_tet.append(opts)
    supports = [sum(c, []) for c in itertools.product(*per_tet)]
    supports = [s for s in supports if s]
    supports.sort(key=len)
    found = []
    minimal = []
    for S in supports:
        Sset = set(S)
        if any(m <= Sset for m in minimal):
            continue
        sub = [[r[c] for c in S] for r in rows]
        sub = [r for r in sub if any(r)]
        # a row with one strict sign on S cannot vanish on a positive vector
        if any(min(r) >= 0 or max(r) <= 0 for r in sub):
            continue
        ns = nullspace(sub, len(S)) if sub else [[Fraction(int(i == j)) for i in range(len(S))]
                                                  for j in range(len(S))]
        if len(ns) != 1:
            continue
        v = ns[0]
        if all(x > 0 for x in v) or all(x < 0 for x in v):
            full = [0] * (7 * t)
            for c, x in zip(S, primitive([abs(x) for x in v])):
                full[c] = x
            found.append(tuple(full))
            minimal.append(Sset)
    return sorted(set(found))


# -- homology -------------------------------------------------------------------

P = (1 << 61) - 1


def rank_mod_p(columns, p=P):
    """Rank of a sparse integer matrix given as column dicts, modulo p."""
    piv = {}
    rank = 0
    for col in columns:
        v = {r: c % p for r, c in col.items() if c % p}
        while v:
            r = min(v)
            if r not in piv:
                inv = pow(v[r], p - 2, p)
                piv[r] = {k: x * inv % p for k, x in v.items()}
                rank += 1
                break
            f = v[r]
            for k, x in piv[r].items():
                v[k] = (v.get(k, 0) - f * x) % p
                if not v[k]:
                    del v[k]
    return rank


def betti_1(T, p=P):
    """First Betti number from ranks modulo a large prime (fast, for big complexes)."""
    B = boundary_matrix(T)
    return B.num_edges - rank_mod_p(B.edge_columns, p) - rank_mod_p(B.columns, p)


def first_homology(T):
    """(free rank, torsion coefficients) of H_1 via Smith normal form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    B = boundary_matrix(T)
    d2 = Matrix(B.dense()) if B.num_faces else Matrix.zeros(B.num_edges, 1)
    d1 = Matrix.zeros(T.num_vertices, B.num_edges)
    for e, col in enumerate(B.edge_columns):
        for v, c in col.items():
            d1[v, e] += c
    r1 = d1.rank()
    snf = smith_normal_form(d2, domain=ZZ)
    diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    r2 = len(diag)
    free = B.num_edges - r1 - r2
    torsion = [int(x) for x in diag if x != 1]
    return free, torsion


def euler_characteristic_cells(T):
    return T.num_vertices - T.num_edges + T.num_faces - T.size


# -- surfaces -------------------------------------------------------------------

def random_disk(w, rng):
    """A triangulated disk with w triangles, as vertex triples.

    Each step either glues a fresh triangle onto a boundary edge, or fills
    the notch between two boundary edges that meet at a vertex, which
    turns that vertex interior.
    """
    tris = [(0, 1, 2)]
    bd = [0, 1, 2]          # boundary cycle
    edges = {frozenset(e) for e in ((0, 1), (1, 2), (0, 2))}
    nxt = 3
    while len(tris) < w:
        i = rng.randrange(len(bd))
        a, b, c = bd[i - 1], bd[i], bd[(i + 1) % len(bd)]
        if len(bd) > 3 and frozenset((a, c)) not in edges and rng.random() < 0.4:
            tris.append((a, b, c))
            edges.add(frozenset((a, c)))
            bd.pop(i)
        else:
            tris.append((b, c, nxt))
            edges |= {frozenset((b, nxt)), frozenset((c, nxt))}
            bd.insert(i + 1, nxt)
            nxt += 1
    return tris


def stair(n, m, rng):
    """A vertex path on the n x m grid torus winding once around the first factor."""
    hs = [rng.randrange(m - 1) for _ in range(n)]

    def v(i, j):
        return (i % n) + n * (j % m)
    p = []
    for i in range(n):
        h, h2 = hs[i], hs[(i + 1) % n]
        p.append(v(i, h))
        step = 1 if h2 > h else -1
        p.append(v(i + 1, h))
        if h2 != h:
            for j in range(h + step, h2 + step, step):
                p.append(v(i + 1, j))
        p.pop()
    return p


def wiggle(F, c, rng, k):
    """Push random points of a basic curve across vertices k times."""
    from unknotkit.isotopy import CurveSystem, MoveError, SurfaceCurve
    sys_ = CurveSystem(F)
    sys_.add("c", c)
    for _ in range(k):
        p = rng.choice(sys_.points("c"))
        e = sys_.edge_of[p]
        v = rng.choice(e)
        if sys_.closest(e, v) != p:
            continue
        try:
            sys_.push(p, v)
        except MoveError:
            pass
    word = sys_.word("c")
    return SurfaceCurve(F, tuple((e, (p * 1000 + Fraction(1, 7)) / Fraction(1001), t)
                                 for e, p, t in word))


# -- space links --------------------------------------------------------------------

def pl_trefoil():
    """A nine-vertex integer polygon tied as a trefoil."""
    import math
    ts = [2 * math.pi * k / 9 + 0.1 for k in range(9)]
    return [(round(10 * (math.sin(t) + 2 * math.sin(2 * t))),
             round(10 * (math.cos(t) - 2 * math.cos(2 * t))),
             round(-10 * math.sin(3 * t))) for t in ts]


def pl_hopf():
    """Two linked integer quadrilaterals."""
    return [[(0, 0, 0), (10, 0, 0), (10, 10, 0), (0, 10, 0)],
            [(5, 5, -5), (15, 4, -5), (16, 6, 5), (6, 6, 5)]]


def random_space_script(L, rng, steps, tag=0, spread=12, kinds=("2", "2'")):
    """Random elementary moves on a space link whose triangles miss the rest
    of the link and whose results project regularly.

    Returns ``(moves, coords)`` with coordinates for the new vertices.
    """
    from unknotkit.isotopy import ElementaryMove
    from unknotkit.project import apply_space_move, project, triangle_clear
    cur = L
    moves, coords = [], {}
    for step in range(steps):
        for _ in range(200):
            p = rng.choice(cur.paths)
            if kinds == ("2",) or (len(kinds) > 1 and (rng.random() < 0.5 or len(p) <= 4)):
                i = rng.randrange(len(p))
                a, b = p[i], p[(i + 1) % len(p)]
                cid = ("n", tag, step)
                A, B = cur.point(a), cur.point(b)
                c = tuple((A[j] + B[j]) // 2 + rng.randint(-spread, spread) for j in range(3))
                mv, cc = ElementaryMove("2", None, a, b, cid), {cid: c}
            else:
                i = rng.randrange(len(p))
                mv, cc = ElementaryMove("2'", None, p[i - 1], p[(i + 1) % len(p)], p[i]), {}
            try:
                nxt = apply_space_move(cur, mv, cc)
            except Exception:
                continue
            base = cur if mv.kind == "2" else nxt
            tbl = dict(base.coords)
            tbl.update(cc)
            tbl.update(cur.coords)
            if not triangle_clear(base.replace(coords=tbl), mv.a, mv.b, mv.c):
                continue
            if not project(nxt).regular:
                continue
            break
        else:
            continue
        coords.update(cc)
        moves.append(mv)
        cur = nxt
    return moves, coords


# -- normal surfaces -------------------------------------------------------------

def normal_euler(T, coords):
    """Euler characteristic of a normal surface by counting normal arcs.

    Triangles contribute 3 arcs and quads 4; interior arcs are shared by
    two discs, boundary arcs are not, so E = (arcs + boundary arcs) / 2.
    Vertices are edge weights, one per triangulation edge.  Quad q splits
    the corners as in ``QUADS[q]`` (layout 4 triangles then 3 quads per
    tetrahedron).
    """
    from unknotkit.normalsurf import QUADS
    t_n = T.size
    tri = [[coords[7 * t + u] for u in range(4)] for t in range(t_n)]
    quad = [[coords[7 * t + 4 + q] for q in range(3)] for t in range(t_n)]
    F = sum(coords)
    arcs = sum(3 * sum(tri[t]) + 4 * sum(quad[t]) for t in range(t_n))
    bd = sum(sum(tri[t][u] for u in range(4) if u != f) + sum(quad[t])
             for t, f in T.boundary_faces())
    assert (arcs + bd) % 2 == 0
    E = (arcs + bd) // 2
    weight = {}
    for t in range(t_n):
        for a, b in itertools.combinations(range(4), 2):
            w = tri[t][a] + tri[t][b]
            w += sum(quad[t][q] for q, (s1, s2) in enumerate(QUADS) if (a in s1) != (b in s1))
            e = T.edge(t, a, b)[0]
            assert weight.setdefault(e, w) == w, "edge weights disagree"
    return sum(weight.values()) - E + F
