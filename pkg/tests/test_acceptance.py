"""One check per headline criterion; each records a PASS/FAIL line that the
terminal summary prints at the end of the run."""

import random
import time
from fractions import Fraction

import pytest

from unknotkit import fixture
from unknotkit.complex import parse_triangulation
from unknotkit.diagram import (FIGURE_EIGHT, TREFOIL, MoveScript as ReidemeisterScript,
                               applicable_moves, apply_move, bfs_untangle, canonical_form,
                               inverse_move, is_isomorphic, is_trivial, parse_diagram)
from unknotkit.embed import build_complement_input
from unknotkit.isotopy import (MoveScript, TriangulatedSurface, contract_disk, isotope_on_surface,
                               same_cycle, to_basic, twist_solve)
from unknotkit.normalsurf import (NormalVector, certify_unknot, matching_system,
                                  vertex_link_vector, vertex_rays)
from unknotkit.project import (SpaceLink, apply_space_move, project, translate_move,
                               translate_script)

from conftest import ACCEPTANCE
from oracles import (brute_force_rays, euler_characteristic_cells, first_homology, normal_euler,
                     pl_hopf, pl_trefoil, random_disk, random_fixtures, random_space_script,
                     stair, wiggle)
from test_diagram import small_knot_diagrams


def record(name, ok, detail):
    ACCEPTANCE[name] = ("PASS" if ok else "FAIL", detail)


# -- 1. polytope construction for the trefoil ---------------------------------------

@pytest.fixture(scope="module")
def trefoil_build():
    d = parse_diagram(TREFOIL)
    t0 = time.time()
    ec = build_complement_input(d)
    return d, ec, time.time() - t0


def test_c1_construction(trefoil_build):
    d, ec, secs = trefoil_build
    c = ec.certificate
    T = ec.polytope
    m, t = c["m"], T.size
    T.check_manifold()
    pts = [T.coords[v] for v in range(T.num_vertices)]
    in_box = all(0 <= x <= 90 and 0 <= y <= 90 and -6 <= z <= 6 for x, y, z in pts)
    rep = project([ec.knot], vertex_crossings=True)
    iso = rep.regular and is_isomorphic(rep.diagram, d)
    rest = t <= 2520 and in_box and iso and secs < 10
    exact = t == 84 * (m + 1)
    record("1 trefoil construction", rest and exact,
           "m=%d t=%d (84(m+1)=%d, exact count %s; the framed graph has 2m+1 bounded faces, "
           "so t=42(2m+1)); t<=2520 %s, box %s, projection isomorphic %s, %.2fs"
           % (m, t, 84 * (m + 1), "met" if exact else "UNMET", t <= 2520, in_box, iso, secs))
    assert t <= 2520 and in_box and iso and secs < 10
    assert t == 42 * c["bounded_faces"] and c["bounded_faces"] == 2 * m + 1


@pytest.mark.xfail(strict=True, reason="42 x (2m+1) tetrahedra is never 84(m+1); see notes")
def test_c1_exact_tetrahedron_count(trefoil_build):
    _, ec, _ = trefoil_build
    assert ec.polytope.size == 84 * (ec.certificate["m"] + 1)


# -- 2. matching system ---------------------------------------------------------------

def test_c2_matching_system():
    fixtures = random_fixtures(20, 6, seed=2024)
    bad = 0
    for T in fixtures:
        S = matching_system(T)
        interior = (4 * T.size - len(T.boundary_faces())) // 2
        ok = len(S) == 3 * interior <= 6 * T.size
        ok &= all(sum(x * x for x in r) <= 4 for r in S.rows)
        for v in range(T.num_vertices):
            x = vertex_link_vector(T, v).coords
            ok &= all(sum(a * b for a, b in zip(r, x)) == 0 for r in S.rows)
        bad += not ok
    record("2 matching system", bad == 0, "%d fixtures (t<=6), %d failures" % (len(fixtures), bad))
    assert bad == 0


# -- 3. cone enumeration vs brute force ---------------------------------------------------

def test_c3_vertex_rays_vs_oracle():
    fixtures = [parse_triangulation(fixture("lst.tri"))] + random_fixtures(12, 3, seed=31)
    bad, slow, worst = 0, 0, 0.0
    for T in fixtures:
        t0 = time.time()
        rays = vertex_rays(T)
        got = sorted(r.coords for r in rays)
        dt = time.time() - t0
        worst = max(worst, dt)
        slow += dt >= 60
        ok = got == brute_force_rays(T)
        ok &= all(max(r) <= 2 ** (7 * T.size - 1) for r in got)
        bad += not ok
    sizes = sorted(T.size for T in fixtures)
    record("3 cone enumeration", bad == 0 and slow == 0,
           "%d fixtures (t=%s), set equality and 2^(7t-1) bound, %d failures, slowest %.2fs"
           % (len(fixtures), sizes, bad, worst))
    assert bad == 0 and slow == 0


# -- 4. unknot certification --------------------------------------------------------------

def test_c4_certification():
    lst = parse_triangulation(fixture("lst.tri"))
    tref = parse_triangulation(fixture("trefoil_exterior.tri"))
    # fixtures first: each must look like a knot exterior before it is used
    for T in (lst, tref):
        assert first_homology(T) == (1, [])
        assert T.census()["boundary_genus"] == [1]
        assert euler_characteristic_cells(T) == 0
    t0 = time.time()
    a = certify_unknot(lst)
    ta = time.time() - t0
    w = NormalVector.loads(lst, a["witness"]["vector"])
    disk = (a["verdict"] == "UNKNOTTED" and normal_euler(lst, w.coords) == 1
            and a["witness"]["euler"] == 1 and any(a["witness"]["boundary_class"])
            and abs(a["intersection_with_meridian"]) == 1)
    t0 = time.time()
    b = certify_unknot(tref)
    tb = time.time() - t0
    # exhaustive scan: the only chi = 1 vertex rays are vertex links, whose
    # boundary curves are trivial on the torus
    rays = vertex_rays(tref)
    links = {tuple(vertex_link_vector(tref, v).coords) for v in range(tref.num_vertices)}
    no_disk = all(tuple(r.coords) in links for r in rays if normal_euler(tref, r.coords) == 1)
    knotted = b["verdict"] == "KNOTTED" and b["ray_count"] == len(rays) and no_disk
    ok = disk and knotted and ta < 600 and tb < 600
    record("4 unknot certification", ok,
           "solid torus %s (chi=1 disk, boundary %s, meridian intersection %d) %.1fs; "
           "trefoil exterior %s over %d vertex rays %.1fs"
           % (a["verdict"], a["witness"]["boundary_class"], a["intersection_with_meridian"], ta,
              b["verdict"], len(rays), tb))
    assert ok


# -- 5. disk contraction ------------------------------------------------------------------------

def _tri_euler(tris):
    verts = {v for t in tris for v in t}
    edges = {frozenset(e) for a, b, c in tris for e in ((a, b), (b, c), (a, c))}
    return len(verts) - len(edges) + len(tris)


def _boundary(tris):
    cnt = {}
    for a, b, c in tris:
        for e in ((a, b), (b, c), (a, c)):
            cnt[frozenset(e)] = cnt.get(frozenset(e), 0) + 1
    return {e for e, k in cnt.items() if k == 1}


def test_c5_disk_contraction():
    rng = random.Random(55)
    bad = 0
    longest = 0
    for _ in range(200):
        w = rng.randint(1, 50)
        tris = random_disk(w, rng)
        sc = contract_disk(tris)
        curves = sc.replay()
        ok = len(sc) <= 2 * w and len(curves) == len(sc) + 1
        alive = [frozenset(t) for t in tris]
        for i, mv in enumerate(sc.moves):
            alive.remove(frozenset((mv.a, mv.b, mv.c)))
            rest = [tuple(t) for t in alive]
            c = curves[i + 1]
            ok &= _tri_euler(rest) == 1
            ok &= _boundary(rest) == {frozenset((c[k], c[(k + 1) % len(c)])) for k in range(len(c))}
        ok &= len(alive) == 1 and same_cycle(curves[-1], tuple(alive[0]))
        longest = max(longest, Fraction(len(sc), w))
        bad += not ok
    record("5 disk contraction", bad == 0,
           "200 disks (w<=50), every step a disk matching the replayed curve, "
           "max length/w = %s, %d failures" % (longest, bad))
    assert bad == 0


# -- 6. surface isotopy budgets --------------------------------------------------------

def test_c6_surface_isotopy():
    bad = 0
    rounds = 0
    cases = 0
    worst = 0
    for seed in range(60):
        rng = random.Random(600 + seed)
        n, m = rng.choice([(3, 3), (4, 4), (5, 4), (5, 6)])
        F = TriangulatedSurface.grid_torus(n, m)
        a, _ = to_basic(F, stair(n, m, rng))
        b, _ = to_basic(F, stair(n, m, rng), Fraction(1, 3))
        k = rng.randrange(0, 15)
        while k and len(a) + len(wiggle(F, b, random.Random(seed), k)) > 40:
            k -= 1
        if k:
            b = wiggle(F, b, random.Random(seed), k)
        l = len(a) + len(b)
        if l > 40:
            continue
        cases += 1
        sc = isotope_on_surface(F, a, b)
        info = sc.info
        u, V = F.u, F.max_valence
        ok = info["basic"] <= l ** 4 * u * V and info["elementary"] <= 17 * l ** 4 * u ** 3
        ok &= all(x - y == 2 for x, y in info["rounds"])
        sc.replay()
        rounds += len(info["rounds"])
        if info["basic"]:
            worst = max(worst, Fraction(info["basic"], l ** 4 * u * V))
        bad += not ok
    record("6 surface isotopy", bad == 0 and cases > 0,
           "%d torus pairs (l<=40), %d bigon rounds all dropping 2, "
           "max basic/(l^4 u V) = %.2e, %d failures" % (cases, rounds, float(worst), bad))
    assert bad == 0 and cases > 0


# -- 7. twist solve -----------------------------------------------------------------------

def test_c7_twist_solve():
    T = parse_triangulation(fixture("lst.tri"))
    got = {}
    ok = True
    for j in range(-3, 4):
        sol = twist_solve(T, {2: -2 + j, 1: 1}, {2: 1})
        got[j] = sol.k
        ok &= sol.k == -j and abs(sol.k) <= sol.bound
    record("7 twist solve", ok, "j -> k: %s, Hadamard bound %d" % (got, sol.bound))
    assert ok


# -- 8. projection and translation ---------------------------------------------------------

def test_c8_translation():
    links = [SpaceLink.of([pl_trefoil()]), SpaceLink.of(pl_hopf()),
             SpaceLink.of([[(0, 0, 0), (10, 0, 0), (10, 10, 0), (0, 10, 0)]])]
    rng = random.Random(8)
    singles = bad = 0
    most = Fraction(0)
    while singles < 50:
        L = links[singles % len(links)]
        moves, coords = random_space_script(L, rng, 1, tag=singles, kinds=("2",))
        if not moves:
            continue
        before = project(L)
        tr = translate_move(L, moves[0], before, coords)
        after = project(apply_space_move(L, moves[0], coords))
        replayed = ReidemeisterScript(before.diagram, tr.moves).replay() if tr.moves else before.diagram
        bound = 2 * len(L) + 2 * before.measure
        ok = canonical_form(replayed) == canonical_form(after.diagram) and len(tr.moves) <= bound
        most = max(most, Fraction(len(tr.moves), bound))
        bad += not ok
        singles += 1
    scripts = sbad = 0
    for seed in range(20):
        L = links[seed % 2]
        moves, coords = random_space_script(L, random.Random(800 + seed), 5, tag=1000 + seed)
        if not moves:
            continue
        st = translate_script(L, MoveScript(L.paths[0], moves), coords)
        k = len(moves)
        ok = st.total <= 2 * k * (st.n + Fraction(k, 2) + 1) ** 2
        ok &= all(s["D"] <= s["L"] ** 2 for s in st.steps)
        ok &= st.total == sum(s["moves"] for s in st.steps)
        scripts += 1
        sbad += not ok
    ok = bad == 0 and sbad == 0
    record("8 projection/translation", ok,
           "50 single type-2 moves (max used/bound %s), %d scripts within 2k(n+k/2+1)^2, "
           "%d + %d failures" % (most, scripts, bad, sbad))
    assert ok


# -- 9. Reidemeister engine ---------------------------------------------------------------

def test_c9_reidemeister_engine():
    ds = [parse_diagram("L[]")] + small_knot_diagrams(1) + small_knot_diagrams(2)
    solved = sum(1 for d in ds if (lambda s: s is not None and is_trivial(s.replay()))(
        bfs_untangle(d, 6, 4)))
    rng = random.Random(99)
    pool = [parse_diagram(x) for x in (TREFOIL, FIGURE_EIGHT, "K[X(1,1,2,2)]", "L[]")]
    trips = 0
    for _ in range(500):
        d = rng.choice(pool)
        m, after = rng.choice(applicable_moves(d))
        trips += is_isomorphic(apply_move(after, inverse_move(d, m, after)), d)
        if len(after.crossings) <= 6:
            pool.append(after)
    ok = solved == len(ds) and trips == 500
    record("9 Reidemeister engine", ok,
           "%d/%d diagrams with <=2 crossings untangled at depth 4, %d/500 round trips"
           % (solved, len(ds), trips))
    assert ok
