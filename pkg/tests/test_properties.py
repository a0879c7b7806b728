"""Property checks driven by hypothesis."""

import random

import itertools

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from unknotkit.diagram import (FIGURE_EIGHT, TREFOIL, applicable_moves, canonical_form,
                               link_components, parse_diagram, serialize)
from unknotkit.isotopy import contract_disk
from unknotkit.project import SpaceLink, perturb_regular, project

from oracles import random_disk

START = [parse_diagram(x) for x in (TREFOIL, FIGURE_EIGHT, "K[X(1,1,2,2)]", "L[]")]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.lists(st.integers(0, 10 ** 6), max_size=4))
def test_moves_keep_component_count_and_serialize(start, picks):
    d = START[start]
    comps = len(link_components(d))
    for p in picks:
        opts = applicable_moves(d)
        _, d = opts[p % len(opts)]
        assert len(link_components(d)) == comps
    assert canonical_form(parse_diagram(serialize(d))) == canonical_form(d)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 50), st.integers(0, 2 ** 32))
def test_disk_contraction_length(w, seed):
    sc = contract_disk(random_disk(w, random.Random(seed)))
    assert len(sc) <= 2 * w


point = st.tuples(st.integers(-15, 15), st.integers(-15, 15), st.integers(-15, 15))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def general_position(pts):
    """No three points collinear and no four coplanar, so the polygon is embedded."""
    for a, b, c in itertools.combinations(pts, 3):
        if _cross(_sub(b, a), _sub(c, a)) == (0, 0, 0):
            return False
    for a, b, c, d in itertools.combinations(pts, 4):
        n = _cross(_sub(b, a), _sub(c, a))
        if sum(x * y for x, y in zip(n, _sub(d, a))) == 0:
            return False
    return True


@settings(max_examples=60, deadline=None)
@given(st.lists(point, min_size=3, max_size=8, unique=True))
def test_projection_measure_bound(pts):
    assume(general_position(pts))
    L = SpaceLink.of([pts])
    rep = project(L)
    if not rep.regular:
        L, _ = perturb_regular(L)
        rep = project(L)
        assert rep.regular
    assert rep.measure <= len(pts) ** 2
