import itertools
import json
from fractions import Fraction

import pytest

from fuzzybisim import (
    GOEDEL,
    LUKASIEWICZ,
    ONE,
    PRODUCT,
    FuzzyRelation,
    approx_from_greatest,
    bisim_norm,
    check_crisp_bisimulation,
    check_crisp_simulation,
    check_fuzzy_bisimulation,
    check_fuzzy_simulation,
    check_lambda_approx_bisimulation,
    check_lambda_approx_simulation,
    converse,
    greatest_fuzzy_bisimulation,
    greatest_fuzzy_simulation,
    identity_rel,
    max_approx_lambda,
    pointwise_leq,
    refinement_steps,
    report_from_obj,
    report_to_obj,
    resolve_max_iters,
    scalar_meet,
    sim_norm,
    verify_preservation,
)
from fuzzybisim.errors import InputError, NonConvergenceError

GREATEST_SIM_GODEL = FuzzyRelation({
    ("u", "u'"): "7/10",
    ("v", "v'"): "1",
    ("v", "w'"): "1",
    ("w", "v'"): "3/5",
    ("w", "w'"): "1",
})

GREATEST_BISIM_GODEL = FuzzyRelation({
    ("u", "u'"): "3/5",
    ("v", "v'"): "1",
    ("v", "w'"): "3/5",
    ("w", "v'"): "3/5",
    ("w", "w'"): "1",
})


def test_greatest_simulation_godel(aut_a, aut_ap):
    report = greatest_fuzzy_simulation(GOEDEL, aut_a, aut_ap)
    assert report.relation == GREATEST_SIM_GODEL
    assert report.norm == Fraction(3, 5)
    assert report.kind == "simulation"
    assert report.converged


def test_greatest_bisimulation_godel(aut_a, aut_ap):
    report = greatest_fuzzy_bisimulation(GOEDEL, aut_a, aut_ap)
    assert report.relation == GREATEST_BISIM_GODEL
    assert report.norm == Fraction(3, 5)
    assert report.converged


def test_greatest_simulation_product(aut_a, aut_ap):
    report = greatest_fuzzy_simulation(PRODUCT, aut_a, aut_ap)
    assert report.relation.degree("u", "u'") == Fraction(7, 8)
    assert report.relation.degree("w", "v'") == Fraction(6, 7)
    assert report.norm == Fraction(3, 4)


def test_greatest_bisimulation_product(aut_a, aut_ap):
    report = greatest_fuzzy_bisimulation(PRODUCT, aut_a, aut_ap)
    assert report.relation.degree("u", "u'") == Fraction(6, 7)
    assert report.relation.degree("v", "w'") == Fraction(6, 7)
    assert report.norm == Fraction(36, 49)


def test_checks_accept_computed_relations(aut_a, aut_ap):
    for lat in (GOEDEL, LUKASIEWICZ, PRODUCT):
        sim = greatest_fuzzy_simulation(lat, aut_a, aut_ap).relation
        bisim = greatest_fuzzy_bisimulation(lat, aut_a, aut_ap).relation
        assert check_fuzzy_simulation(lat, aut_a, aut_ap, sim)
        assert check_fuzzy_bisimulation(lat, aut_a, aut_ap, bisim)
        # every bisimulation is in particular a simulation
        assert check_fuzzy_simulation(lat, aut_a, aut_ap, bisim)


def test_check_rejects_inflated_entry(aut_a, aut_ap):
    bumped = dict(GREATEST_SIM_GODEL.items())
    bumped[("w", "v'")] = Fraction(7, 10)
    assert not check_fuzzy_simulation(GOEDEL, aut_a, aut_ap, FuzzyRelation(bumped))
    extra = dict(GREATEST_BISIM_GODEL.items())
    extra[("u", "v'")] = Fraction(1, 10)
    assert not check_fuzzy_bisimulation(GOEDEL, aut_a, aut_ap, FuzzyRelation(extra))


def test_empty_relation_is_a_simulation(aut_a, aut_ap):
    empty = FuzzyRelation()
    assert check_fuzzy_simulation(GOEDEL, aut_a, aut_ap, empty)
    assert check_fuzzy_bisimulation(GOEDEL, aut_a, aut_ap, empty)
    assert not check_crisp_simulation(GOEDEL, aut_a, aut_ap, empty)


def test_scalar_cut_stays_a_simulation_godel(aut_a, aut_ap):
    cut = scalar_meet(Fraction(2, 5), GREATEST_SIM_GODEL)
    assert check_fuzzy_simulation(GOEDEL, aut_a, aut_ap, cut)


def test_crisp_checks_reject_reference_pair(aut_a, aut_ap):
    # the norm is below 1, so initial coverage must fail
    assert not check_crisp_simulation(GOEDEL, aut_a, aut_ap, GREATEST_SIM_GODEL)
    assert not check_crisp_bisimulation(GOEDEL, aut_a, aut_ap, GREATEST_BISIM_GODEL)


def test_identity_is_an_auto_bisimulation(aut_a):
    ident = identity_rel(aut_a.states)
    assert check_fuzzy_bisimulation(GOEDEL, aut_a, aut_a, ident)
    assert check_crisp_bisimulation(GOEDEL, aut_a, aut_a, ident)
    assert bisim_norm(GOEDEL, aut_a, aut_a, ident) == ONE


def test_relation_validation(aut_a, aut_ap):
    with pytest.raises(InputError):
        check_fuzzy_simulation(GOEDEL, aut_a, aut_ap, FuzzyRelation({("z", "u'"): "1"}))
    with pytest.raises(InputError):
        sim_norm(GOEDEL, aut_a, aut_ap, FuzzyRelation({("u", "z"): "1"}))


def test_norms(aut_a, aut_ap):
    assert sim_norm(GOEDEL, aut_a, aut_ap, GREATEST_SIM_GODEL) == Fraction(3, 5)
    assert bisim_norm(GOEDEL, aut_a, aut_ap, GREATEST_BISIM_GODEL) == Fraction(3, 5)
    # converse of a bisimulation has the same norm, with the roles swapped
    assert bisim_norm(GOEDEL, aut_ap, aut_a, converse(GREATEST_BISIM_GODEL)) == Fraction(3, 5)


def test_norm_monotone_under_scalar_cuts(aut_a, aut_ap):
    base = greatest_fuzzy_simulation(GOEDEL, aut_a, aut_ap)
    norms = []
    for i in range(11):
        cut = scalar_meet(Fraction(i, 10), base.relation)
        assert check_fuzzy_simulation(GOEDEL, aut_a, aut_ap, cut)
        norms.append(sim_norm(GOEDEL, aut_a, aut_ap, cut))
    for lo, hi in itertools.pairwise(norms):
        assert lo <= hi
    assert norms[-1] == base.norm


def test_lifting_greatest_at_its_norm_stays_approximate(aut_a, aut_ap):
    for compute, check in (
        (greatest_fuzzy_simulation, check_lambda_approx_simulation),
        (greatest_fuzzy_bisimulation, check_lambda_approx_bisimulation),
    ):
        report = compute(GOEDEL, aut_a, aut_ap)
        lifted = approx_from_greatest(report.relation, report.norm)
        assert pointwise_leq(report.relation, lifted)
        assert lifted.degree("u", "u'") == ONE
        assert check(GOEDEL, aut_a, aut_ap, lifted, report.norm)


def test_greatest_auto_relations_are_crisp(aut_a, aut_ap):
    for aut in (aut_a, aut_ap):
        for lat in (GOEDEL, PRODUCT):
            srep = greatest_fuzzy_simulation(lat, aut, aut)
            brep = greatest_fuzzy_bisimulation(lat, aut, aut)
            assert srep.norm == ONE
            assert brep.norm == ONE
            assert check_crisp_simulation(lat, aut, aut, srep.relation)
            assert check_crisp_bisimulation(lat, aut, aut, brep.relation)


def test_refinement_steps_decrease_to_fixpoint(aut_a, aut_ap):
    steps = list(refinement_steps(GOEDEL, aut_a, aut_ap, kind="sim"))
    assert steps[0].degree("u", "u'") == ONE
    for earlier, later in itertools.pairwise(steps):
        assert pointwise_leq(later, earlier)
    assert steps[-1] == steps[-2] == GREATEST_SIM_GODEL
    bsteps = list(refinement_steps(GOEDEL, aut_a, aut_ap, kind="bisim"))
    assert bsteps[-1] == GREATEST_BISIM_GODEL


def test_unconverged_report(aut_a, aut_ap):
    report = greatest_fuzzy_simulation(GOEDEL, aut_a, aut_ap, max_iters=1)
    assert not report.converged
    assert report.iterations == 1
    # the first iterate is already the fixpoint here, so one sweep finds it
    # but cannot yet certify it
    assert report.relation == GREATEST_SIM_GODEL


def test_resolve_max_iters(monkeypatch):
    monkeypatch.delenv("FUZZYBISIM_MAX_ITERS", raising=False)
    assert resolve_max_iters() == 10000
    monkeypatch.setenv("FUZZYBISIM_MAX_ITERS", "3")
    assert resolve_max_iters() == 3
    assert resolve_max_iters(7) == 7
    monkeypatch.setenv("FUZZYBISIM_MAX_ITERS", "zero")
    with pytest.raises(InputError):
        resolve_max_iters()
    monkeypatch.setenv("FUZZYBISIM_MAX_ITERS", "-1")
    with pytest.raises(InputError):
        resolve_max_iters()
    monkeypatch.delenv("FUZZYBISIM_MAX_ITERS")
    # a zero cap is allowed: it means "run no sweeps"
    assert resolve_max_iters(0) == 0


def test_zero_sweep_cap_reports_seed_unconverged(aut_a, aut_ap):
    report = greatest_fuzzy_simulation(GOEDEL, aut_a, aut_ap, max_iters=0)
    assert not report.converged
    assert report.iterations == 0
    steps = refinement_steps(GOEDEL, aut_a, aut_ap, kind="sim")
    assert report.relation == next(steps)


def test_kind_validation(aut_a, aut_ap):
    with pytest.raises(InputError):
        list(refinement_steps(GOEDEL, aut_a, aut_ap, kind="cosimulation"))
    with pytest.raises(InputError):
        verify_preservation(GOEDEL, aut_a, aut_ap, FuzzyRelation(), 1, kind="none")


def test_lambda_approx_checks(aut_a, aut_ap):
    relaxed = approx_from_greatest(GREATEST_SIM_GODEL, Fraction(3, 5))
    assert relaxed == FuzzyRelation({key: ONE for key in GREATEST_SIM_GODEL.support()})
    assert check_lambda_approx_simulation(GOEDEL, aut_a, aut_ap, relaxed, "3/5")
    assert not check_lambda_approx_simulation(GOEDEL, aut_a, aut_ap, relaxed, "61/100")
    brelaxed = approx_from_greatest(GREATEST_BISIM_GODEL, Fraction(3, 5))
    assert check_lambda_approx_bisimulation(GOEDEL, aut_a, aut_ap, brelaxed, "3/5")
    assert not check_lambda_approx_bisimulation(GOEDEL, aut_a, aut_ap, brelaxed, "61/100")


def test_lambda_approx_needs_min_tnorm(aut_a, aut_ap):
    for lat in (LUKASIEWICZ, PRODUCT):
        with pytest.raises(InputError):
            check_lambda_approx_simulation(lat, aut_a, aut_ap, FuzzyRelation(), "1/2")
        with pytest.raises(InputError):
            max_approx_lambda(lat, aut_a, aut_ap, "sim")


def test_max_approx_lambda(aut_a, aut_ap):
    assert max_approx_lambda(GOEDEL, aut_a, aut_ap, "sim") == Fraction(3, 5)
    assert max_approx_lambda(GOEDEL, aut_a, aut_ap, "bisim") == Fraction(3, 5)
    with pytest.raises(NonConvergenceError):
        max_approx_lambda(GOEDEL, aut_a, aut_ap, "sim", max_iters=1)


def test_verify_preservation(aut_a, aut_ap):
    report = verify_preservation(GOEDEL, aut_a, aut_ap, GREATEST_SIM_GODEL, 3, kind="sim")
    assert report.pointwise_ok and report.global_ok and report.exact
    assert report.global_degree == Fraction(3, 5)
    shallow = verify_preservation(GOEDEL, aut_a, aut_ap, GREATEST_SIM_GODEL, 0, kind="sim")
    assert shallow.pointwise_ok and shallow.global_ok
    assert not shallow.exact
    with pytest.raises(InputError):
        verify_preservation(GOEDEL, aut_a, aut_ap, GREATEST_SIM_GODEL, -1)


def test_verify_preservation_flags_bad_relation(aut_a, aut_ap):
    all_ones = FuzzyRelation({
        (x, xp): ONE for x in aut_a.states for xp in aut_ap.states})
    report = verify_preservation(GOEDEL, aut_a, aut_ap, all_ones, 2, kind="sim")
    assert not report.pointwise_ok


def test_report_round_trip(aut_a, aut_ap):
    report = greatest_fuzzy_simulation(GOEDEL, aut_a, aut_ap)
    obj = report_to_obj(report)
    assert list(obj) == ["kind", "relation", "norm", "iterations", "converged"]
    assert report_from_obj(json.loads(json.dumps(obj))) == report


@pytest.mark.parametrize("mutate", [
    lambda o: o.pop("norm"),
    lambda o: o.update(extra=1),
    lambda o: o.update(kind="partial"),
    lambda o: o.update(iterations=True),
    lambda o: o.update(iterations=-1),
    lambda o: o.update(converged="yes"),
])
def test_report_from_obj_rejects(aut_a, aut_ap, mutate):
    obj = report_to_obj(greatest_fuzzy_simulation(GOEDEL, aut_a, aut_ap))
    mutate(obj)
    with pytest.raises(InputError):
        report_from_obj(obj)


def test_alphabet_union_blocks_unmatched_symbols(aut_a):
    from fuzzybisim import FuzzyAutomaton
    other = FuzzyAutomaton(
        name="B", states=["p"], alphabet=["t"],
        delta={("p", "t", "p"): "1/2"}, sigma={"p": "1"}, tau={"p": "1"})
    # aut_a moves on s but the other side cannot, so (u, p) must die;
    # leaf states of aut_a have nothing to match and survive
    report = greatest_fuzzy_simulation(GOEDEL, aut_a, other)
    assert report.relation == FuzzyRelation({("v", "p"): "1", ("w", "p"): "1"})
    # the mirrored condition kills the leaves too: p moves on t, they cannot
    bisim = greatest_fuzzy_bisimulation(GOEDEL, aut_a, other)
    assert bisim.relation == FuzzyRelation()
