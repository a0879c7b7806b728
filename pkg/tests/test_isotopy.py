import random
from fractions import Fraction

import pytest

from unknotkit import fixture
from unknotkit.complex import parse_triangulation
from unknotkit.isotopy import (ElementaryMove, IsotopyExhausted, MoveScript, TriangulatedSurface,
                               apply_elementary, contract_disk, is_disk, isotope_on_surface,
                               parse_elementary, same_cycle, to_basic, twist_count, twist_solve)

from oracles import random_disk, stair, wiggle


def test_elementary_text_round_trip():
    m = ElementaryMove("2", 5, 1, 2, 7)
    assert parse_elementary(str(m)) == m


def test_random_disks_contract_within_2w():
    rng = random.Random(5)
    for _ in range(40):
        w = rng.randint(1, 50)
        tris = random_disk(w, rng)
        assert is_disk(tris)
        sc = contract_disk(tris)
        assert len(sc) <= 2 * w
        final = sc.replay()[-1]
        assert len(final) == 3


def test_contract_script_round_trip():
    sc = contract_disk(random_disk(12, random.Random(1)))
    s2 = MoveScript.loads(sc.fill_checkpoints().dumps())
    assert len(s2) == len(sc) and same_cycle(s2.final(), sc.final())


def test_non_disk_rejected():
    annulus = [(0, 1, 3), (1, 4, 3), (1, 2, 4), (2, 5, 4), (2, 0, 5), (0, 3, 5)]
    assert not is_disk(annulus)
    with pytest.raises(Exception):
        contract_disk(annulus)


def test_move_2_inserts_vertex():
    c = apply_elementary([0, 1, 2], ElementaryMove("2", 0, 0, 1, 9))
    assert same_cycle(c, [0, 9, 1, 2])


def torus_pair(seed, wig=True):
    rng = random.Random(seed)
    n, m = rng.choice([(3, 3), (4, 4), (5, 4), (5, 6)])
    F = TriangulatedSurface.grid_torus(n, m)
    a, _ = to_basic(F, stair(n, m, rng))
    b, _ = to_basic(F, stair(n, m, rng), Fraction(1, 3))
    if wig:
        k = rng.randrange(1, 15)
        while True:
            c = wiggle(F, b, random.Random(seed), k)
            if len(a) + len(c) <= 40 or k == 0:
                break
            k -= 1
        b = c
        b.validate()
    return F, a, b


@pytest.mark.parametrize("seed", range(25))
def test_torus_isotopy_budgets(seed):
    F, a, b = torus_pair(seed)
    sc = isotope_on_surface(F, a, b)
    info = sc.info
    assert info["l"] == len(a) + len(b) <= 40
    for before, after in info["rounds"]:
        assert before - after == 2
    assert info["basic"] <= info["basic_budget"]
    assert info["elementary"] <= info["elementary_budget"]
    sc.replay()


def test_identical_curves_need_no_moves():
    F, a, _ = torus_pair(3, wig=False)
    assert isotope_on_surface(F, a, a).info["basic"] == 0


def test_grid_torus_is_torus():
    F = TriangulatedSurface.grid_torus(4, 5)
    assert F.euler() == 0 and F.max_valence == 6


def test_non_isotopic_curves_fail():
    F = TriangulatedSurface.grid_torus(4, 4)
    row = to_basic(F, [0, 1, 2, 3])[0]
    col = to_basic(F, [0, 4, 8, 12], Fraction(1, 3))[0]
    with pytest.raises((IsotopyExhausted, Exception)):
        isotope_on_surface(F, row, col)


@pytest.mark.parametrize("j", range(-3, 4))
def test_lst_twist_count(j):
    T = parse_triangulation(fixture("lst.tri"))
    sol = twist_solve(T, {2: -2 + j, 1: 1}, {2: 1})
    assert sol.k == -j
    assert abs(sol.k) <= sol.bound
    assert twist_count(T, {2: -2 + j, 1: 1}, {2: 1}) == -j
