import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgrack import corpus
from mgrack.diagram import (MERGE, SPLIT, Arc, Crossing, Diagram, Vertex, circle, from_dict, isomorphic, parse,
                            serialize, theta, validate)
from mgrack.errors import DiagramError, FormatError, MoveError
from mgrack.moves import MoveSpec, apply_move, connected_sum, reverse_circle


def test_circle_and_theta_validate():
    assert validate(circle()).ok
    assert validate(theta()).ok
    assert validate(Diagram()).ok


@pytest.mark.parametrize("D, fragment", [
    (Diagram((Arc("a"), Arc("a", True))), "duplicate"),
    (Diagram((Arc("a"),), (Crossing("z", "a", "a", 1),)), "unknown arc"),
    (Diagram((Arc("a"),), (Crossing("a", "a", "a", 2),)), "sign"),
    (Diagram((Arc("a", True),), (Crossing("a", "a", "a", 1),)), "closed arc"),
    (Diagram((Arc("a"),)), "head"),
    (Diagram((Arc("a"), Arc("b"), Arc("c")), (), (Vertex(MERGE, "a", "b", "c"),)), "head"),
    (Diagram((Arc("a", True),), marked_arc="b"), "marked"),
])
def test_validate_reports_first_problem(D, fragment):
    report = validate(D)
    assert not report.ok
    assert fragment in report.violation


def test_parse_rejects_bad_input():
    good = json.loads(serialize(theta()))
    bad = json.loads(json.dumps(good))
    bad["vertices"][0]["kind"] = "sink"
    with pytest.raises(FormatError):
        from_dict(bad)
    hopf = json.loads(serialize(corpus.hopf()))
    del hopf["crossings"][0]["sign"]
    with pytest.raises(FormatError):
        from_dict(hopf)
    with pytest.raises(FormatError):
        from_dict({**good, "colour": "red"})
    with pytest.raises(FormatError):
        parse("{not json")


def test_parse_theta_matches_hand_built():
    text = json.dumps({
        "arcs": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        "vertices": [{"kind": "merge", "left": "a", "right": "b", "stem": "c"},
                     {"kind": "split", "left": "a", "right": "b", "stem": "c"}],
    })
    assert parse(text) == theta()


def all_corpus_diagrams():
    out = list(corpus.base_diagrams().values())
    for D, m in corpus.move_pairs().values():
        out += [D, apply_move(D, m)]
    out += [D for D, _ in corpus.connected_sums().values()]
    return out


def test_round_trip_on_corpus():
    for D in all_corpus_diagrams():
        assert parse(serialize(D)) == D
        assert serialize(parse(serialize(D))) == serialize(D)


def test_moves_keep_diagrams_valid():
    for name, (D, m) in corpus.move_pairs().items():
        assert validate(apply_move(D, m)).ok, name


def test_r2_add_then_remove_restores():
    for D, over, under in [(corpus.two_circles(), "o1", "o2"), (theta(), "a", "c"), (corpus.hopf(), "A", "B")]:
        for variant in "+-":
            E = apply_move(D, MoveSpec("R2_ADD", {"over": over, "under": under}, variant))
            assert len(E.crossings) == len(D.crossings) + 2
            back = apply_move(E, MoveSpec("R2_REMOVE", {"arc": f"{under}~1"}))
            assert isomorphic(back, D)


def test_moves_are_local():
    D = Diagram(corpus.theta_strand_under().arcs + (Arc("far", True),), corpus.theta_strand_under().crossings,
                corpus.theta_strand_under().vertices)
    E = apply_move(D, MoveSpec("R5", {"vertex": 0, "crossing": 0}, "under_to_branches"))
    assert Arc("far", True) in E.arcs
    assert E.vertices == D.vertices


def test_site_mismatch_errors():
    with pytest.raises(MoveError, match="pass under the stem"):
        apply_move(corpus.theta_strand_over(), MoveSpec("R5", {"vertex": 0, "crossing": 0}, "under_to_branches"))
    with pytest.raises(MoveError, match="R2 bigon|twice"):
        apply_move(corpus.hopf(), MoveSpec("R2_REMOVE", {"arc": "A"}))
    with pytest.raises(MoveError, match="curl"):
        apply_move(theta(), MoveSpec("R6", {"vertex": 0}, "unwind"))
    with pytest.raises(MoveError, match="vertices"):
        reverse_circle(theta(), "a")
    with pytest.raises(DiagramError):
        apply_move(Diagram((Arc("a"),)), MoveSpec("REVERSE", {"arc": "a"}))


def test_r6_wind_inverts_unwind():
    for builder in (corpus.theta_curl_merge, corpus.theta_curl_split):
        for sign in (1, -1):
            D = builder(sign)
            vi = 0 if builder is corpus.theta_curl_merge else 1
            E = apply_move(D, MoveSpec("R6", {"vertex": vi}, "unwind"))
            assert len(E.crossings) == 4
            assert isomorphic(apply_move(E, MoveSpec("R6", {"vertex": vi}, "wind")), D)


def test_r3_is_an_involution_on_the_corpus_triangles():
    for t in (1, -1):
        for m in (1, -1):
            D, spec = corpus.r3_triangle(t, m)
            E = apply_move(D, spec)
            assert not isomorphic(D, E) or D == E
            assert isomorphic(apply_move(E, corpus._r3_spec(E)), D)


def test_reverse_twice_is_identity():
    for D, arc in [(corpus.hopf(), "A"), (corpus.curl(1), "k"), (corpus.theta_strand_over(), "s")]:
        assert reverse_circle(reverse_circle(D, arc), arc) == D


def test_connected_sum_shape():
    D = connected_sum(circle(), circle(), ("o", "o"))
    assert validate(D).ok
    assert D.marked_arc == "alpha"
    uses = [slot for v in D.vertices for slot in (v.left, v.right, v.stem) if slot == "alpha"]
    assert len(uses) == 2
    assert not any("alpha" in (c.over, c.under_in, c.under_out) for c in D.crossings)
    assert sorted(v.kind for v in D.vertices) == [MERGE, SPLIT]


def test_connected_sum_of_open_arcs():
    D = connected_sum(theta(), corpus.curl(1), ("c", "k"))
    assert validate(D).ok
    assert len(D.arcs) == 3 + 1 + 2 + 1


def test_bundled_corpus_matches_generator():
    expected = corpus.build_corpus()
    on_disk = {str(p.relative_to(corpus.BUNDLED)): p.read_text()
               for sub in ("diagrams", "pairs", "sums") for p in corpus.BUNDLED.glob(f"{sub}/*.json")}
    assert set(on_disk) == set(expected)
    for rel, obj in expected.items():
        assert on_disk[rel] == corpus.dumps(obj), rel


def test_bundled_pairs_are_move_results():
    _, pairs, sums = corpus.load_corpus(corpus.BUNDLED)
    assert len(pairs) >= 40 and len(sums) >= 5
    kinds = {m.move for _, m, _ in pairs.values()}
    assert kinds == {"R2_ADD", "R2_REMOVE", "R3", "R5", "R6", "REVERSE"}
    variants = {m.variant for _, m, _ in pairs.values() if m.move in ("R5", "R6")}
    assert variants == {"under_to_branches", "under_to_stem", "over_to_branches", "over_to_stem", "unwind", "wind"}
    for name, (before, m, after) in pairs.items():
        assert isomorphic(apply_move(before, m), after), name


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.sampled_from("+-")), max_size=5))
def test_random_r2_sequences_stay_valid(steps):
    D = corpus.three_circles()
    for i, j, variant in steps:
        ids = D.arc_ids
        D = apply_move(D, MoveSpec("R2_ADD", {"over": ids[i % len(ids)], "under": ids[j % len(ids)]}, variant))
        assert validate(D).ok
