import pytest

from unknotkit import fixture
from unknotkit.complex import parse_triangulation
from unknotkit.normalsurf import (DimensionLimit, NormalVector, certify_unknot, euler_characteristic,
                                  is_admissible, matching_system, reconstruct, vertex_link_vector,
                                  vertex_rays)

from oracles import brute_force_rays, random_fixtures


def interior_faces(T):
    return (4 * T.size - len(T.boundary_faces())) // 2


@pytest.fixture(scope="module")
def lst():
    return parse_triangulation(fixture("lst.tri"))


@pytest.fixture(scope="module")
def trefoil():
    return parse_triangulation(fixture("trefoil_exterior.tri"))


def test_matching_rows_shape():
    for T in random_fixtures(15, 5, seed=7):
        S = matching_system(T)
        assert len(S) == 3 * interior_faces(T) <= 6 * T.size
        for row in S.rows:
            assert sum(x * x for x in row) <= 4


def test_vertex_links_satisfy_matching():
    for T in random_fixtures(15, 5, seed=8):
        S = matching_system(T)
        for v in range(T.num_vertices):
            assert S.satisfied_by(vertex_link_vector(T, v).coords)


def test_vertex_link_euler():
    for T in random_fixtures(10, 4, seed=9):
        bd = T.boundary_vertices()
        for v in range(T.num_vertices):
            chi = euler_characteristic(vertex_link_vector(T, v))
            assert chi == (1 if v in bd else 2)


def test_rays_match_oracle():
    for T in random_fixtures(8, 3, seed=10):
        got = sorted(r.coords for r in vertex_rays(T))
        assert got == brute_force_rays(T)


def test_rays_admissible_and_bounded(trefoil):
    rays = vertex_rays(trefoil)
    assert rays
    for r in rays:
        assert is_admissible(r)
        assert max(r.coords) <= 2 ** (7 * trefoil.size - 1)


def test_dimension_guard(trefoil):
    with pytest.raises(DimensionLimit):
        vertex_rays(trefoil, max_dim=20)


def test_vector_text_round_trip(lst):
    v = vertex_link_vector(lst, 0)
    assert NormalVector.loads(lst, v.dumps()) == v


def test_reconstruct_vertex_link(lst):
    S = reconstruct(vertex_link_vector(lst, 0))
    assert S.components == 1
    assert S.euler_characteristic == euler_characteristic(vertex_link_vector(lst, 0))


def test_lst_is_unknotted(lst):
    cert = certify_unknot(lst)
    assert cert["verdict"] == "UNKNOTTED"
    assert cert["witness"]["euler"] == 1
    assert any(cert["witness"]["boundary_class"])
    assert abs(cert["intersection_with_meridian"]) == 1


def test_trefoil_is_knotted(trefoil):
    cert = certify_unknot(trefoil)
    assert cert["verdict"] == "KNOTTED"
    assert cert["ray_count"] > 0


def test_oversize_is_indeterminate(trefoil):
    assert certify_unknot(trefoil, max_dim=14)["verdict"] == "INDETERMINATE"
