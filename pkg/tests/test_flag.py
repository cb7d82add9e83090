import random

import pytest

from invcat import (
    ClosureDivergence,
    ClosureLimits,
    GF,
    Matrix,
    RATIONALS,
    Subspace,
    compute_flag,
    evaluate_word,
    map_image,
    map_preimage,
    sub_intersect,
)
from invcat.rep import Generator, RepObject, Representation

from conftest import interval_corpus_instance, random_matrix

X_AXIS = Subspace.span(RATIONALS, 2, [[1, 0]])
Y_AXIS = Subspace.span(RATIONALS, 2, [[0, 1]])
DIAG = Subspace.span(RATIONALS, 2, [[1, 1]])


def test_trisection_flag(trisection):
    flag = compute_flag(trisection)
    center = flag.posets["center"]
    assert set(center.elements) == {
        Subspace.zero(RATIONALS, 2), X_AXIS, Y_AXIS, DIAG, Subspace.full(RATIONALS, 2),
    }
    for oid in ("top", "left", "right"):
        assert len(flag.posets[oid]) == 2
    assert flag.rounds <= 3


def test_bisection_raw_flag_is_a_chain(bisection):
    # the generator alone only reaches {0, x-axis, full}; the fourth element
    # of the published diamond appears after saturation (pipeline tests).
    flag = compute_flag(bisection)
    assert [s.dim for s in flag.posets["plane"].elements] == [0, 1, 2]
    assert flag.rounds <= 3


def test_identity_generators_give_trivial_flags():
    rep = Representation(
        RATIONALS,
        (RepObject("a", 3),),
        (Generator("e", "a", "a", Matrix.identity(RATIONALS, 3)),),
    )
    flag = compute_flag(rep)
    assert len(flag.posets["a"]) == 2


def test_provenance_witnesses_cover_everything(trisection):
    flag = compute_flag(trisection)
    for oid, p in flag.posets.items():
        for s in p.elements:
            w = flag.provenance[oid][s]
            assert w.rule in ("seed", "image", "preimage", "intersect")
            if w.rule == "seed":
                assert s.is_zero or s.is_full
            if w.rule in ("image", "preimage"):
                assert w.generator is not None and len(w.sources) == 1
            if w.rule == "intersect":
                assert len(w.sources) == 2
                assert sub_intersect(*w.sources) == s


def test_fixpoint_reapplication_adds_nothing(trisection, bisection, rng):
    cases = [trisection, bisection]
    for _ in range(5):
        rep, _ = interval_corpus_instance(rng)
        cases.append(rep)
    for rep in cases:
        flag = compute_flag(rep)
        for g in rep.generators:
            dom, cod = flag.posets[g.dom], flag.posets[g.cod]
            for a in dom.elements:
                assert map_image(g.matrix, a) in set(cod.elements)
            for b in cod.elements:
                assert map_preimage(g.matrix, b) in set(dom.elements)
        for p in flag.posets.values():
            elems = set(p.elements)
            for a in elems:
                for b in elems:
                    assert sub_intersect(a, b) in elems


def test_monotone_in_generators(rng):
    for _ in range(10):
        rep, _ = interval_corpus_instance(rng, max_vertices=4)
        flag = compute_flag(rep)
        if len(rep.objects) < 2:
            continue
        src, dst = rep.objects[0], rep.objects[1]
        extra = Generator(
            "extra", src.id, dst.id, random_matrix(rng, RATIONALS, dst.dim, src.dim, span=2)
        )
        bigger = Representation(rep.field, rep.objects, rep.generators + (extra,))
        flag2 = compute_flag(bigger)
        for oid in flag.posets:
            assert set(flag.posets[oid].elements) <= set(flag2.posets[oid].elements)


def test_generator_sufficiency_on_composites(rng):
    """Closure under generators implies closure along any composite word."""
    for _ in range(8):
        rep, _ = interval_corpus_instance(rng, max_vertices=5)
        flag = compute_flag(rep)
        gens = list(rep.generators)
        for _ in range(10):
            word = [rng.choice(gens)]
            for _ in range(rng.randint(0, 3)):
                nxt = [h for h in gens if h.dom == word[0].cod]
                if not nxt:
                    break
                word.insert(0, rng.choice(nxt))
            ids = [g.id for g in word]
            m = evaluate_word(rep, ids)
            dom, cod = word[-1].dom, word[0].cod
            for a in flag.posets[dom].elements:
                assert map_image(m, a) in set(flag.posets[cod].elements)
            for b in flag.posets[cod].elements:
                assert map_preimage(m, b) in set(flag.posets[dom].elements)


def test_prime_field_closure_terminates(rng):
    for p in (2, 3):
        field = GF(p)
        rep = Representation(
            field,
            (RepObject("a", 2), RepObject("b", 2)),
            (
                Generator("f", "a", "b", random_matrix(rng, field, 2, 2)),
                Generator("g", "a", "b", random_matrix(rng, field, 2, 2)),
            ),
        )
        flag = compute_flag(rep)
        assert flag.total_elements >= 4


def test_round_limit_raises():
    rep = Representation(
        RATIONALS,
        (RepObject("a", 2),),
        (Generator("f", "a", "a", Matrix.build(RATIONALS, 2, 2, [[0, 1], [0, 0]])),),
    )
    with pytest.raises(ClosureDivergence) as exc:
        compute_flag(rep, ClosureLimits(max_rounds=1))
    assert exc.value.detail["rule"] == "rounds"


def test_element_limit_raises():
    rep = Representation(
        RATIONALS,
        (RepObject("a", 2), RepObject("b", 2)),
        (
            Generator("f", "a", "b", Matrix.build(RATIONALS, 2, 2, [[1, 0], [0, 0]])),
            Generator("g", "a", "b", Matrix.build(RATIONALS, 2, 2, [[0, 1], [1, 0]])),
        ),
    )
    with pytest.raises(ClosureDivergence) as exc:
        compute_flag(rep, ClosureLimits(max_elements_per_object=2))
    assert exc.value.detail["rule"] in ("image", "preimage", "intersect")
    assert exc.value.detail["partial_size"] > 2


def test_flag_report_json(bisection):
    flag = compute_flag(bisection)
    doc = flag.to_json()
    assert doc["objects"]["plane"]["poset_size"] == 3
    assert doc["rounds"] == flag.rounds
    assert doc["saturated"] is False
