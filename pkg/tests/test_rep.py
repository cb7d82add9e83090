import json

import pytest

from invcat import (
    CompositionError,
    InputSyntaxError,
    Matrix,
    RATIONALS,
    ValidationError,
    evaluate_word,
    parse_representation,
    quiver_shape,
)
from invcat.rep import Generator, RepObject, Representation


def test_parse_trisection(trisection):
    assert len(trisection.objects) == 4
    assert len(trisection.generators) == 3
    assert trisection.object_dim("center") == 2
    assert not quiver_shape(trisection).has_undirected_cycle


def test_parse_bisection(bisection):
    assert len(bisection.objects) == 1
    assert quiver_shape(bisection).has_undirected_cycle


def test_shape_mismatch_rejected():
    doc = {
        "field": {"kind": "rational"},
        "objects": [{"id": "a", "dim": 2}, {"id": "b", "dim": 2}],
        "generators": [
            {"id": "f", "dom": "a", "cod": "b", "matrix": [[1, 0, 0], [0, 1, 0]]}
        ],
    }
    with pytest.raises(ValidationError) as exc:
        parse_representation(json.dumps(doc))
    assert "matrix" in exc.value.detail.get("path", "")


def test_malformed_json_is_syntax_error():
    with pytest.raises(InputSyntaxError):
        parse_representation("{not json")


def test_duplicate_ids_rejected():
    doc = {
        "field": {"kind": "rational"},
        "objects": [{"id": "a", "dim": 1}, {"id": "a", "dim": 2}],
        "generators": [],
    }
    with pytest.raises(ValidationError):
        parse_representation(json.dumps(doc))


def test_unknown_endpoint_rejected():
    doc = {
        "field": {"kind": "rational"},
        "objects": [{"id": "a", "dim": 1}],
        "generators": [{"id": "f", "dom": "a", "cod": "zz", "matrix": [[1]]}],
    }
    with pytest.raises(ValidationError):
        parse_representation(json.dumps(doc))


def test_prime_field_and_fraction_entries():
    doc = {
        "field": {"kind": "prime", "p": 5},
        "objects": [{"id": "a", "dim": 1}],
        "generators": [{"id": "f", "dom": "a", "cod": "a", "matrix": [[7]]}],
    }
    rep = parse_representation(json.dumps(doc))
    assert rep.generator("f").matrix.entries[0][0] == 2
    doc2 = {
        "field": {"kind": "rational"},
        "objects": [{"id": "a", "dim": 1}],
        "generators": [{"id": "f", "dom": "a", "cod": "a", "matrix": [["1/2"]]}],
    }
    rep2 = parse_representation(json.dumps(doc2))
    assert rep2.generator("f").matrix.to_json() == [["1/2"]]


def test_roundtrip_serialization(trisection, bisection):
    for rep in (trisection, bisection):
        again = parse_representation(rep.serialize())
        assert again == rep


def test_parallel_edges_count_as_cycle():
    rep = Representation(
        RATIONALS,
        (RepObject("a", 1), RepObject("b", 1)),
        (
            Generator("f", "a", "b", Matrix.identity(RATIONALS, 1)),
            Generator("g", "a", "b", Matrix.identity(RATIONALS, 1)),
        ),
    )
    assert quiver_shape(rep).has_undirected_cycle


def test_undirected_cycle_ignores_orientation():
    ident = Matrix.identity(RATIONALS, 1)
    rep = Representation(
        RATIONALS,
        (RepObject("a", 1), RepObject("b", 1), RepObject("c", 1)),
        (
            Generator("f", "a", "b", ident),
            Generator("g", "c", "b", ident),
            Generator("h", "a", "c", ident),
        ),
    )
    assert quiver_shape(rep).has_undirected_cycle


def test_tree_is_acyclic(trisection):
    assert not quiver_shape(trisection).has_undirected_cycle


# --- word evaluation -------------------------------------------------------------


def test_empty_word_is_identity(trisection):
    m = evaluate_word(trisection, [], at="center")
    assert m == Matrix.identity(RATIONALS, 2)


def test_empty_word_needs_object(trisection):
    with pytest.raises(CompositionError):
        evaluate_word(trisection, [])


def test_bisection_loop_squares_to_zero(bisection):
    m = evaluate_word(bisection, ["shift", "shift"])
    assert m.is_zero


def test_single_generator(trisection):
    assert evaluate_word(trisection, ["diag"]) == trisection.generator("diag").matrix


def test_incomposable_word(trisection):
    with pytest.raises(CompositionError):
        evaluate_word(trisection, ["diag", "horiz"])


def test_functoriality(bisection):
    w1, w2 = ["shift"], ["shift", "shift"]
    assert (
        evaluate_word(bisection, w1 + w2)
        == evaluate_word(bisection, w1) @ evaluate_word(bisection, w2)
    )
