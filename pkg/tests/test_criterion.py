import pytest

from invcat import (
    ElementNotInPoset,
    GF,
    RATIONALS,
    Subspace,
    analyze,
    build_poset,
    check_representation,
    compute_flag,
    evaluate_pair,
    mobius,
)

from conftest import (
    conjugate_representation,
    direct_sum,
    interval_corpus_instance,
)

ZERO2 = Subspace.zero(RATIONALS, 2)
FULL2 = Subspace.full(RATIONALS, 2)
X_AXIS = Subspace.span(RATIONALS, 2, [[1, 0]])
Y_AXIS = Subspace.span(RATIONALS, 2, [[0, 1]])
DIAG = Subspace.span(RATIONALS, 2, [[1, 1]])


def test_trisection_pair_value(trisection):
    a = analyze(trisection)
    p = a.flag.posets["center"]
    mu = mobius(p)
    assert evaluate_pair(p, mu, FULL2, ZERO2, "standard") == -1


def test_trisection_fails_with_witness(trisection):
    a = analyze(trisection)
    assert not a.report.passed
    keyed = {(w.b, w.c): w.value for w in a.report.witnesses}
    assert keyed[(FULL2, ZERO2)] == -1


def test_bisection_passes_with_zero_pair(bisection):
    a = analyze(bisection)
    assert a.report.passed
    p = a.flag.posets["plane"]
    mu = mobius(p)
    assert evaluate_pair(p, mu, FULL2, ZERO2, "standard") == 0


def test_pair_vanishes_when_b_below_c():
    p = build_poset([ZERO2, X_AXIS, FULL2])
    mu = mobius(p)
    assert evaluate_pair(p, mu, X_AXIS, FULL2, "standard") == 0
    assert evaluate_pair(p, mu, X_AXIS, X_AXIS, "standard") == 0


def test_mu_mode_divergence_pins_diamond(bisection):
    a = analyze(bisection)  # saturated diamond
    p = a.flag.posets["plane"]
    mu = mobius(p)
    assert evaluate_pair(p, mu, X_AXIS, Y_AXIS, "literal") == -1
    assert evaluate_pair(p, mu, X_AXIS, Y_AXIS, "standard") == 1


def test_element_not_in_poset(bisection):
    a = analyze(bisection)
    p = a.flag.posets["plane"]
    mu = mobius(p)
    stranger = Subspace.span(RATIONALS, 2, [[1, 2]])
    with pytest.raises(ElementNotInPoset):
        evaluate_pair(p, mu, stranger, ZERO2)


def test_chains_always_pass_standard(rng):
    for _ in range(20):
        n = rng.randint(1, 4)
        field = rng.choice([RATIONALS, GF(2), GF(3)])
        dims = sorted(rng.sample(range(0, n + 1), k=rng.randint(2, n + 1)))
        if dims[0] != 0:
            dims = [0] + dims
        if dims[-1] != n:
            dims = dims + [n]
        chain = [
            Subspace.span(
                field, n, [[field.one if i == j else field.zero for j in range(n)] for i in range(d)]
            )
            for d in dims
        ]
        p = build_poset(chain)
        mu = mobius(p)
        for b in p.elements:
            for c in p.elements:
                assert evaluate_pair(p, mu, b, c, "standard") >= 0


def test_witnesses_are_exhaustive_and_sorted(trisection):
    a = analyze(trisection)
    ws = a.report.witnesses
    # the four negative pairs at the center: (full, 0) and (full, each line)
    assert len(ws) == 4
    assert all(w.object_id == "center" and w.b == FULL2 for w in ws)
    keys = [(w.object_id, w.b.sort_key, w.c.sort_key) for w in ws]
    assert keys == sorted(keys)


def test_report_json_shape(trisection):
    a = analyze(trisection)
    doc = a.report.to_json()
    assert doc["verdict"] == "fail"
    assert doc["poset_sizes"]["center"] == 5
    assert "timing" not in doc and "timing_ms" not in doc
    assert doc["witnesses"][0]["object"] == "center"


def test_direct_sums_of_blockcodes_pass(rng):
    for _ in range(10):
        rep, _ = interval_corpus_instance(rng)
        assert analyze(rep).report.passed


def test_verdict_invariant_under_change_of_basis(trisection, rng):
    for _ in range(3):
        assert not analyze(conjugate_representation(rng, trisection)).report.passed
    for _ in range(5):
        rep, _ = interval_corpus_instance(rng, max_vertices=4)
        conj = conjugate_representation(rng, rep)
        assert analyze(rep).report.passed == analyze(conj).report.passed is True


def test_pass_plus_pass_stays_pass(rng):
    for _ in range(5):
        rep, _ = interval_corpus_instance(rng, max_vertices=4)
        assert analyze(direct_sum(rep, rep)).report.passed


def test_fail_plus_pass_surfaces_realization_gap(trisection):
    """Summing a failing diagram with a passing one can push every Moebius
    sum back to nonnegative even though no projection family exists: the
    score only sees dimensions of meets with family members, and the summand
    that would witness the clash (the span of two of the lines) is not in
    the flag.  The pipeline keeps the (honest) criterion verdict but must
    surface that realization failed."""
    import json

    from invcat import parse_representation

    doc = json.loads(trisection.serialize())
    doc["generators"][0]["matrix"] = [[0], [0]]
    doc["generators"][2]["matrix"] = [[0], [0]]
    passing = parse_representation(json.dumps(doc))
    assert analyze(passing).report.passed
    combined = analyze(direct_sum(trisection, passing))
    assert combined.report.passed  # the sums really are all nonnegative
    assert combined.families is None
    assert "ConstructionFailure" in (combined.saturation_note or "")


def test_criterion_is_not_sufficient_for_realizability():
    """Three coplanar lines inside a strictly larger ambient space: every
    pair scores nonnegative, yet multiplicativity forces ker(pi) of the
    third line to be the plane of the first two, which meets the third
    line.  Pinned here because it bounds what the verdict can promise."""
    from invcat import OracleInstance, oracle_exists_family
    from invcat.criterion import poset_passes
    from invcat.realize import realize_projections

    field = GF(2)
    lines = [
        Subspace.span(field, 3, [[1, 0, 0]]),
        Subspace.span(field, 3, [[0, 1, 0]]),
        Subspace.span(field, 3, [[1, 1, 0]]),
    ]
    family = [Subspace.zero(field, 3), *lines, Subspace.full(field, 3)]
    p = build_poset(family)
    assert poset_passes(p)
    found, _ = oracle_exists_family(OracleInstance(field, 3, tuple(family)))
    assert not found
    with pytest.raises(Exception) as exc:
        realize_projections(p, object_id="counterexample")
    assert exc.value.code == "ConstructionFailure"
    # same poset shape with the third line off the plane: realizable
    off_plane = [
        Subspace.zero(field, 3),
        lines[0],
        lines[1],
        Subspace.span(field, 3, [[0, 0, 1]]),
        Subspace.full(field, 3),
    ]
    p2 = build_poset(off_plane)
    assert poset_passes(p2)
    found2, _ = oracle_exists_family(OracleInstance(field, 3, tuple(off_plane)))
    assert found2
    realize_projections(p2, object_id="ok")


def test_mode_disagreements_reported(bisection):
    a = analyze(bisection)
    assert a.report.mode_disagreements > 0
    assert all(w.mu_mode == "literal" for w in a.report.disagreement_examples)


def test_check_representation_unsaturated(bisection):
    flag = compute_flag(bisection)
    report = check_representation(bisection, flag, "standard")
    assert report.passed
    assert report.poset_sizes["plane"] == 3
