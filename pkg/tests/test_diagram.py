import itertools
import random

import pytest

from unknotkit.diagram import (FIGURE_EIGHT, HOPF, TREFOIL, DiagramError, DiagramSyntaxError,
                               DiagramValidityError, LinkDiagram, MoveScript, PatternMismatch,
                               applicable_moves, apply_move, bfs_untangle, canonical_form,
                               crossing_measure, inverse_move, is_isomorphic, is_trivial,
                               link_components, parse_diagram, parse_move, relabel, serialize,
                               writhe)

CURL = "K[X(1,1,2,2)]"


def small_knot_diagrams(n):
    """Every valid one-component PD code on n crossings with labels 1..2n."""
    labels = [l for l in range(1, 2 * n + 1) for _ in range(2)]
    seen = set()
    out = []
    for perm in set(itertools.permutations(labels)):
        rows = [perm[4 * k:4 * k + 4] for k in range(n)]
        try:
            d = LinkDiagram(rows)
        except DiagramError:
            continue
        if len(link_components(d)) != 1:
            continue
        key = canonical_form(d)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


def test_parse_serialize_round_trip():
    for text in (TREFOIL, FIGURE_EIGHT, CURL, "L[]"):
        d = parse_diagram(text)
        assert is_isomorphic(parse_diagram(serialize(d)), d)


def test_trivial_loop():
    d = parse_diagram("L[]")
    assert is_trivial(d)
    assert crossing_measure(d) == 0


def test_trefoil_measure_and_writhe():
    d = parse_diagram(TREFOIL)
    assert crossing_measure(d) == 3
    assert abs(writhe(d)) == 3


def test_hopf_has_two_components():
    d = parse_diagram(HOPF)
    assert len(link_components(d)) == 2
    assert crossing_measure(d) == 2


def test_bad_cyclic_order_rejected():
    with pytest.raises(DiagramValidityError):
        parse_diagram("K[V(1:o,1:o,2:u,2:u)]")


def test_syntax_errors():
    for bad in ("K[X(1,2,3)]", "X(1,1,2,2)", "K[X(1,1,2,2),]", "K[X(a,1,2,2)]"):
        with pytest.raises(DiagramSyntaxError):
            parse_diagram(bad)


def test_label_used_once_rejected():
    with pytest.raises(DiagramError):
        parse_diagram("K[X(1,2,3,4)]")


def test_relabel_is_isomorphic():
    d = parse_diagram(FIGURE_EIGHT)
    assert is_isomorphic(relabel(d), d)
    assert not is_isomorphic(d, parse_diagram(TREFOIL))


def test_curl_untangles_in_one_move():
    s = bfs_untangle(parse_diagram(CURL), 4, 2)
    assert len(s) == 1 and s.moves[0].kind == "I-"
    assert is_trivial(s.replay())


def test_trefoil_not_untangled_in_shallow_search():
    assert bfs_untangle(parse_diagram(TREFOIL), 4, 2) is None


def test_script_dump_load():
    d = parse_diagram(FIGURE_EIGHT)
    moves = []
    cur = d
    rng = random.Random(3)
    for _ in range(5):
        m, cur = rng.choice(applicable_moves(cur))
        moves.append(m)
    s = MoveScript(d, moves)
    s2 = MoveScript.loads(s.dumps())
    assert canonical_form(s2.replay()) == canonical_form(cur)


def test_move_text_round_trip():
    for line in ("R1+ @face:2 arc:0 sign:-1", "R2+ @face:1 arcs:0,2 over:1", "R3 @face:4", "R1- @face:0"):
        assert str(parse_move(line)) == line


def test_pattern_mismatch():
    d = parse_diagram(TREFOIL)
    faces = d.faces()
    big = next(k for k, f in enumerate(faces) if len(f) == 3)
    from unknotkit.diagram import ReidemeisterMove
    with pytest.raises(PatternMismatch):
        apply_move(d, ReidemeisterMove("II-", big))


def test_all_small_unknot_diagrams_untangle():
    # every knot diagram with at most 2 crossings is an unknot
    ds = [parse_diagram("L[]")] + small_knot_diagrams(1) + small_knot_diagrams(2)
    assert len(ds) > 3
    for d in ds:
        s = bfs_untangle(d, 6, 4)
        assert s is not None and is_trivial(s.replay())


def test_move_inverse_round_trips():
    rng = random.Random(11)
    pool = [parse_diagram(x) for x in (TREFOIL, FIGURE_EIGHT, CURL, "L[]")]
    done = 0
    while done < 150:
        d = rng.choice(pool)
        opts = applicable_moves(d)
        m, after = rng.choice(opts)
        back = inverse_move(d, m, after)
        assert is_isomorphic(apply_move(after, back), d)
        done += 1
        if len(after.crossings) <= 6:
            pool.append(after)
