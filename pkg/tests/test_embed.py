import random
import time

import pytest

from unknotkit.complex import PLCurve
from unknotkit.diagram import FIGURE_EIGHT, HOPF, TREFOIL, is_isomorphic, parse_diagram
from unknotkit.embed import (EmbedError, _rot_from_faces, augment, build_complement_input,
                             check_drawing, grid_embed, schnyder_embed, segments_cross)
from unknotkit.project import project


def random_sphere_triangulation(n, rng, flips=0):
    """Stacked triangulation on n vertices, then random edge flips away from
    the outer face (0, 2, 1)."""
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(1, len(faces)))
        faces += [(a, b, v), (b, c, v), (c, a, v)]
    outer = {0, 1, 2}
    for _ in range(flips):
        i = rng.randrange(len(faces))
        f = faces[i]
        k = rng.randrange(3)
        a, b, c = f[k], f[(k + 1) % 3], f[(k + 2) % 3]
        j = next(j for j, g in enumerate(faces)
                 if (b, a) in ((g[0], g[1]), (g[1], g[2]), (g[2], g[0])))
        g = faces[j]
        d = next(x for x in g if x not in (a, b))
        if set(f) == outer or set(g) == outer:
            continue
        if any(c in h and d in h for h in faces):
            continue
        faces[i], faces[j] = (a, d, c), (d, b, c)
    return faces


def test_segments_cross_basics():
    assert segments_cross((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_cross((0, 0), (1, 0), (2, 0), (3, 0))
    assert not segments_cross((0, 0), (1, 1), (1, 1), (2, 0))   # shared endpoint


def test_schnyder_k4():
    rot = _rot_from_faces(random_sphere_triangulation(4, random.Random(0)))
    coords, N = schnyder_embed(rot, 0, 2, 1)
    assert check_drawing(rot, coords)
    assert coords[3] == (1, 1)


@pytest.mark.parametrize("seed", range(12))
def test_schnyder_random(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 40)
    rot = _rot_from_faces(random_sphere_triangulation(n, rng, flips=3 * n))
    coords, N = schnyder_embed(rot, 0, 2, 1)
    assert check_drawing(rot, coords)
    assert all(0 <= x <= N - 2 and 0 <= y <= N - 2 for x, y in coords.values())
    assert len(set(coords.values())) == n


def test_bad_drawing_detected():
    rot = _rot_from_faces(random_sphere_triangulation(5, random.Random(1)))
    coords, _ = schnyder_embed(rot, 0, 2, 1)
    coords[3], coords[4] = coords[4], coords[3]
    with pytest.raises(EmbedError):
        check_drawing(rot, coords)


def test_augmented_graph_is_simple_triangulation():
    g = augment(parse_diagram(TREFOIL))
    assert g.n == 3 and g.m == 15
    assert len(g.faces) == 2 * len(g.rot) - 4
    e = grid_embed(g)
    assert e.side <= 10 * g.n - 1


@pytest.mark.parametrize("text", [TREFOIL, FIGURE_EIGHT, "K[X(1,1,2,2)]", "L[]"])
def test_build_certificate(text):
    d = parse_diagram(text)
    t0 = time.time()
    ec = build_complement_input(d)
    assert time.time() - t0 < 10
    c = ec.certificate
    assert c["tetrahedra"] == ec.polytope.size == 42 * c["bounded_faces"]
    assert c["bounded_faces"] == 2 * c["m"] + 1
    assert c["tetrahedra"] <= 840 * max(c["n"], 1)
    (x0, x1), (y0, y1), (z0, z1) = c["box"]
    nb = max(c["n"], 1)
    assert x0 >= 0 and y0 >= 0 and x1 <= 30 * nb and y1 < 30 * nb and z0 >= -6 and z1 <= 6
    # independent re-projection of the routed knot
    rep = project([ec.knot], vertex_crossings=True)
    assert rep.regular and is_isomorphic(rep.diagram, d)
    assert not set(ec.knot.path) & ec.polytope.boundary_vertices()


def test_trefoil_numbers():
    c = build_complement_input(parse_diagram(TREFOIL)).certificate
    assert (c["n"], c["m"], c["tetrahedra"], c["grid_side"]) == (3, 15, 1302, 16)
    assert c["box"] == [[0, 48], [0, 48], [-6, 6]]


def test_two_component_link():
    ec = build_complement_input(parse_diagram(HOPF))
    assert isinstance(ec.knot, tuple) and len(ec.knot) == 2
    assert all(isinstance(k, PLCurve) for k in ec.knot)
    rep = project(list(ec.knot), vertex_crossings=True)
    assert is_isomorphic(rep.diagram, parse_diagram(HOPF))
