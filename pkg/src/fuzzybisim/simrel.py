"""Checking and computing (greatest) fuzzy simulations and bisimulations.

A fuzzy relation phi between the states of A and A' is a fuzzy simulation
when, for every symbol s,

    phi^-1 o delta_s <= delta'_s o phi^-1      (forward step condition)
    phi^-1 o tau     <= tau'                   (forward terminal condition)

and a fuzzy bisimulation when phi^-1 is a fuzzy simulation in the other
direction as well.  The plain ("crisp") notions additionally require the
initial sets to be covered: sigma <= sigma' o phi^-1 (and symmetrically).

The greatest such relation is computed by chaotic iteration downward from
the terminal-residuum candidate

    phi_0(x, x') = tau(x) -> tau'(x')          (<-> for bisimulations)

refining every pair each sweep with

    phi(x, x') <= delta_s(x, y) -> (delta'_s o phi^-1)(x', y)

(for all s and y, plus the mirrored constraint for bisimulations) until the
iterate stabilizes exactly.  Exact rational arithmetic makes the
stabilization test a plain equality.

When the two automata have different alphabets, every condition quantifies
over the union, with a missing symbol contributing the empty relation.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from .automata import FuzzyAutomaton, delta_rel, max_live_word_length, UNBOUNDED
from .errors import InputError, NonConvergenceError
from .fuzzyrel import (
    FuzzyRelation,
    compose_rel_rel,
    compose_rel_set,
    compose_set_rel,
    compose_set_set,
    converse,
    pointwise_leq,
    relation_json_array,
    relation_from_obj,
    subsethood,
)
from .lattice import ONE, ZERO, ResiduatedLattice, format_degree, meet, parse_degree

DEFAULT_MAX_ITERS = 10000

_EMPTY_REL = FuzzyRelation()


@dataclass(frozen=True)
class SimReport:
    """Result of a greatest-relation computation.

    When converged is True the relation is exactly a fixpoint of the
    refinement operator, hence the greatest fuzzy simulation
    (bisimulation).  Otherwise it is the max_iters-th iterate: still an
    upper bound on every fuzzy simulation (bisimulation), but possibly not
    itself one.  The norm field always holds the initial-matching degree of
    the reported relation.
    """

    relation: FuzzyRelation
    norm: Fraction
    kind: str
    iterations: int
    converged: bool


@dataclass(frozen=True)
class PreservationReport:
    """Bounded-word verification of the language preservation bounds.

    exact is True when the word bound provably covers every live word of
    both automata, making the truncated infima the true ones.
    """

    pointwise_ok: bool
    global_ok: bool
    exact: bool
    global_degree: Fraction


def resolve_max_iters(max_iters=None) -> int:
    """Explicit argument, else FUZZYBISIM_MAX_ITERS, else the default cap."""
    if max_iters is None:
        env = os.environ.get("FUZZYBISIM_MAX_ITERS")
        if env is None:
            return DEFAULT_MAX_ITERS
        try:
            max_iters = int(env)
        except ValueError:
            raise InputError(f"FUZZYBISIM_MAX_ITERS must be an integer, got {env!r}") from None
    if max_iters < 0:
        raise InputError("iteration cap must be >= 0")
    return max_iters


def _norm_kind(kind) -> str:
    k = str(kind).lower()
    if k in ("sim", "simulation"):
        return "simulation"
    if k in ("bisim", "bisimulation"):
        return "bisimulation"
    raise InputError(f"unknown kind {kind!r}; expected sim or bisim")


def _union_symbols(a: FuzzyAutomaton, ap: FuzzyAutomaton) -> list:
    return sorted(set(a.alphabet) | set(ap.alphabet))


def _dr(aut: FuzzyAutomaton, s: str) -> FuzzyRelation:
    return delta_rel(aut, s) if s in aut.alphabet else _EMPTY_REL


def _validate_rel(phi: FuzzyRelation, a: FuzzyAutomaton, ap: FuzzyAutomaton) -> None:
    states_a = set(a.states)
    states_ap = set(ap.states)
    for (x, xp) in phi.support():
        if x not in states_a:
            raise InputError(f"relation references unknown state {x!r} of automaton {a.name!r}")
        if xp not in states_ap:
            raise InputError(f"relation references unknown state {xp!r} of automaton {ap.name!r}")


# ---------------------------------------------------------------- checks

def check_fuzzy_simulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                           ap: FuzzyAutomaton, phi: FuzzyRelation) -> bool:
    _validate_rel(phi, a, ap)
    return _forward_conditions_hold(lat, a, ap, phi)


def check_fuzzy_bisimulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                             ap: FuzzyAutomaton, phi: FuzzyRelation) -> bool:
    _validate_rel(phi, a, ap)
    return (_forward_conditions_hold(lat, a, ap, phi)
            and _backward_conditions_hold(lat, a, ap, phi))


def check_crisp_simulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                           ap: FuzzyAutomaton, phi: FuzzyRelation) -> bool:
    _validate_rel(phi, a, ap)
    return (_initial_covered(lat, a, ap, phi)
            and _forward_conditions_hold(lat, a, ap, phi))


def check_crisp_bisimulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                             ap: FuzzyAutomaton, phi: FuzzyRelation) -> bool:
    _validate_rel(phi, a, ap)
    return (_initial_covered(lat, a, ap, phi)
            and _initial_covered(lat, ap, a, converse(phi))
            and _forward_conditions_hold(lat, a, ap, phi)
            and _backward_conditions_hold(lat, a, ap, phi))


def _initial_covered(lat, a, ap, phi) -> bool:
    return pointwise_leq(a.sigma, compose_set_rel(lat, ap.sigma, converse(phi)))


def _forward_conditions_hold(lat, a, ap, phi) -> bool:
    inv = converse(phi)
    for s in _union_symbols(a, ap):
        lhs = compose_rel_rel(lat, inv, _dr(a, s))
        rhs = compose_rel_rel(lat, _dr(ap, s), inv)
        if not pointwise_leq(lhs, rhs):
            return False
    return pointwise_leq(compose_rel_set(lat, inv, a.tau), ap.tau)


def _backward_conditions_hold(lat, a, ap, phi) -> bool:
    for s in _union_symbols(a, ap):
        lhs = compose_rel_rel(lat, phi, _dr(ap, s))
        rhs = compose_rel_rel(lat, _dr(a, s), phi)
        if not pointwise_leq(lhs, rhs):
            return False
    return pointwise_leq(compose_rel_set(lat, phi, ap.tau), a.tau)


# ---------------------------------------------------------------- norms

def sim_norm(lat: ResiduatedLattice, a: FuzzyAutomaton,
             ap: FuzzyAutomaton, phi: FuzzyRelation) -> Fraction:
    """S(sigma, sigma' o phi^-1): the degree to which initial states are matched.

    Defined for any relation; meaningful when phi passes the simulation check.
    """
    _validate_rel(phi, a, ap)
    return subsethood(lat, a.sigma, compose_set_rel(lat, ap.sigma, converse(phi)))


def bisim_norm(lat: ResiduatedLattice, a: FuzzyAutomaton,
               ap: FuzzyAutomaton, phi: FuzzyRelation) -> Fraction:
    _validate_rel(phi, a, ap)
    return meet(sim_norm(lat, a, ap, phi),
                subsethood(lat, ap.sigma, compose_set_rel(lat, a.sigma, phi)))


# ---------------------------------------------------------------- fixpoint

class _PairContext:
    """Per-(A, A') precomputation shared by all refinement sweeps."""

    __slots__ = ("lat", "a", "ap", "symbols", "da_items", "dap_items",
                 "da_by_src", "dap_by_src")

    def __init__(self, lat, a, ap):
        self.lat = lat
        self.a = a
        self.ap = ap
        self.symbols = _union_symbols(a, ap)
        self.da_items = {s: _dr(a, s).items() for s in self.symbols}
        self.dap_items = {s: _dr(ap, s).items() for s in self.symbols}
        self.da_by_src = {s: _group_by_src(self.da_items[s]) for s in self.symbols}
        self.dap_by_src = {s: _group_by_src(self.dap_items[s]) for s in self.symbols}


def _group_by_src(items) -> dict:
    out: dict = {}
    for (x, y), d in items:
        out.setdefault(x, []).append((y, d))
    return out


def _initial_candidate(lat, a, ap, bidir: bool) -> dict:
    out: dict = {}
    for x in a.states:
        tx = a.tau.degree(x)
        for xp in ap.states:
            txp = ap.tau.degree(xp)
            v = lat.biresiduum(tx, txp) if bidir else lat.residuum(tx, txp)
            if v != ZERO:
                out[(x, xp)] = v
    return out


def _refine_once(ctx: _PairContext, cur: dict, bidir: bool) -> dict:
    lat = ctx.lat
    phi_by_second: dict = {}
    phi_by_first: dict = {}
    for (y, yp), d in cur.items():
        phi_by_second.setdefault(yp, []).append((y, d))
        if bidir:
            phi_by_first.setdefault(y, []).append((yp, d))

    # (delta'_s o phi^-1)(x', y) and, for bisimulations, (delta_s o phi)(x, y')
    comp_fwd: dict = {}
    comp_bwd: dict = {}
    for s in ctx.symbols:
        fwd: dict = {}
        for (xp, yp), dd in ctx.dap_items[s]:
            for y, d in phi_by_second.get(yp, ()):
                v = lat.tnorm(dd, d)
                key = (xp, y)
                if v > fwd.get(key, ZERO):
                    fwd[key] = v
        comp_fwd[s] = fwd
        if bidir:
            bwd: dict = {}
            for (x, y), dd in ctx.da_items[s]:
                for yp, d in phi_by_first.get(y, ()):
                    v = lat.tnorm(dd, d)
                    key = (x, yp)
                    if v > bwd.get(key, ZERO):
                        bwd[key] = v
            comp_bwd[s] = bwd

    nxt: dict = {}
    for (x, xp), v in cur.items():
        for s in ctx.symbols:
            if v == ZERO:
                break
            fwd = comp_fwd[s]
            for y, dd in ctx.da_by_src[s].get(x, ()):
                r = lat.residuum(dd, fwd.get((xp, y), ZERO))
                if r < v:
                    v = r
                    if v == ZERO:
                        break
            if bidir and v != ZERO:
                bwd = comp_bwd[s]
                for yp, dd in ctx.dap_by_src[s].get(xp, ()):
                    r = lat.residuum(dd, bwd.get((x, yp), ZERO))
                    if r < v:
                        v = r
                        if v == ZERO:
                            break
        if v != ZERO:
            nxt[(x, xp)] = v
    return nxt


def refinement_steps(lat: ResiduatedLattice, a: FuzzyAutomaton,
                     ap: FuzzyAutomaton, kind="sim"):
    """Yield phi_0, phi_1, ... up to and including the first repeated iterate.

    The generator stops only on exact stabilization; callers that cannot
    rely on termination should bound it themselves.
    """
    bidir = _norm_kind(kind) == "bisimulation"
    ctx = _PairContext(lat, a, ap)
    cur = _initial_candidate(lat, a, ap, bidir)
    yield FuzzyRelation(cur)
    while True:
        nxt = _refine_once(ctx, cur, bidir)
        yield FuzzyRelation(nxt)
        if nxt == cur:
            return
        cur = nxt


def _greatest(lat, a, ap, kind: str, max_iters) -> SimReport:
    kindn = _norm_kind(kind)
    bidir = kindn == "bisimulation"
    cap = resolve_max_iters(max_iters)
    ctx = _PairContext(lat, a, ap)
    cur = _initial_candidate(lat, a, ap, bidir)
    sweeps = 0
    converged = False
    while sweeps < cap:
        nxt = _refine_once(ctx, cur, bidir)
        sweeps += 1
        if nxt == cur:
            converged = True
            break
        cur = nxt
    relation = FuzzyRelation(cur)
    norm = (bisim_norm if bidir else sim_norm)(lat, a, ap, relation)
    return SimReport(relation=relation, norm=norm, kind=kindn,
                     iterations=sweeps, converged=converged)


def greatest_fuzzy_simulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                              ap: FuzzyAutomaton, max_iters=None) -> SimReport:
    return _greatest(lat, a, ap, "simulation", max_iters)


def greatest_fuzzy_bisimulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                                ap: FuzzyAutomaton, max_iters=None) -> SimReport:
    return _greatest(lat, a, ap, "bisimulation", max_iters)


# ---------------------------------------------------------------- lambda-approximate notions

def _require_heyting(lat: ResiduatedLattice) -> None:
    # t-norm must coincide with the lattice meet; of the three kinds only min does
    if lat.kind != "godel":
        raise InputError(
            f"lambda-approximate notions need a Heyting algebra; "
            f"the {lat.kind} lattice is not one, use godel"
        )


def _approx_degrees(lat, a, ap, phi) -> tuple:
    """The three inclusion degrees of the approximate-simulation conditions."""
    inv = converse(phi)
    d_init = subsethood(lat, a.sigma, compose_set_rel(lat, ap.sigma, inv))
    d_trans = ONE
    for s in _union_symbols(a, ap):
        lhs = compose_rel_rel(lat, inv, _dr(a, s))
        rhs = compose_rel_rel(lat, _dr(ap, s), inv)
        d_trans = meet(d_trans, subsethood(lat, lhs, rhs))
    d_term = subsethood(lat, compose_rel_set(lat, inv, a.tau), ap.tau)
    return d_init, d_trans, d_term


def check_lambda_approx_simulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                                   ap: FuzzyAutomaton, phi: FuzzyRelation,
                                   lam) -> bool:
    _require_heyting(lat)
    _validate_rel(phi, a, ap)
    lam = parse_degree(lam)
    return all(lam <= d for d in _approx_degrees(lat, a, ap, phi))


def check_lambda_approx_bisimulation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                                     ap: FuzzyAutomaton, phi: FuzzyRelation,
                                     lam) -> bool:
    _require_heyting(lat)
    _validate_rel(phi, a, ap)
    lam = parse_degree(lam)
    degrees = _approx_degrees(lat, a, ap, phi) + _approx_degrees(lat, ap, a, converse(phi))
    return all(lam <= d for d in degrees)


def approx_from_greatest(phi: FuzzyRelation, lam) -> FuzzyRelation:
    """Raise every stored entry >= lam to 1, keeping the rest.

    Applied to the greatest fuzzy simulation (bisimulation) with lam equal
    to its norm, the result is a lam-approximate simulation (bisimulation).
    """
    lam = parse_degree(lam)
    return FuzzyRelation({key: (ONE if d >= lam else d) for key, d in phi.items()})


def max_approx_lambda(lat: ResiduatedLattice, a: FuzzyAutomaton,
                      ap: FuzzyAutomaton, kind, max_iters=None) -> Fraction:
    """The largest lambda admitting a lambda-approximate relation of the kind.

    Equals the norm of the greatest fuzzy simulation (bisimulation).
    """
    _require_heyting(lat)
    report = _greatest(lat, a, ap, kind, max_iters)
    if not report.converged:
        raise NonConvergenceError(
            f"greatest {report.kind} did not stabilize within {report.iterations} sweeps"
        )
    return report.norm


# ---------------------------------------------------------------- preservation

def _back_vector(lat, aut, word):
    """FuzzySet v with v(x) = degree of the word from state x."""
    vec = aut.tau
    for s in reversed(word):
        vec = compose_rel_set(lat, _dr(aut, s), vec)
    return vec


def verify_preservation(lat: ResiduatedLattice, a: FuzzyAutomaton,
                        ap: FuzzyAutomaton, phi: FuzzyRelation, k: int,
                        kind="sim") -> PreservationReport:
    """Check the language bounds implied by a (bi)simulation on words of length <= k.

    For simulations: phi(x, x') <= S(L(A, x), L(A', x')) pointwise, and
    norm(phi) <= S(L(A), L(A')).  For bisimulations the same with E in
    place of S and the bisimulation norm.  The infima are truncated to
    words of length <= k; exact is True when both automata certify that no
    longer word is live.
    """
    if k < 0:
        raise InputError("word length bound must be >= 0")
    _validate_rel(phi, a, ap)
    bidir = _norm_kind(kind) == "bisimulation"
    op = lat.biresiduum if bidir else lat.residuum

    symbols = _union_symbols(a, ap)
    words = [()]
    for n in range(1, k + 1):
        words.extend(itertools.product(symbols, repeat=n))

    vectors = [(_back_vector(lat, a, w), _back_vector(lat, ap, w)) for w in words]

    pointwise_ok = True
    for (x, xp), d in phi.items():
        bound = ONE
        for va, vap in vectors:
            r = op(va.degree(x), vap.degree(xp))
            if r < bound:
                bound = r
        if d > bound:
            pointwise_ok = False
            break

    global_degree = ONE
    for va, vap in vectors:
        r = op(compose_set_set(lat, a.sigma, va), compose_set_set(lat, ap.sigma, vap))
        if r < global_degree:
            global_degree = r
    normval = (bisim_norm if bidir else sim_norm)(lat, a, ap, phi)
    global_ok = normval <= global_degree

    live_a = max_live_word_length(a)
    live_ap = max_live_word_length(ap)
    exact = (live_a is not UNBOUNDED and live_a <= k
             and live_ap is not UNBOUNDED and live_ap <= k)

    return PreservationReport(pointwise_ok=pointwise_ok, global_ok=global_ok,
                              exact=exact, global_degree=global_degree)


# ---------------------------------------------------------------- serialization

def report_to_obj(report: SimReport) -> dict:
    return {
        "kind": report.kind,
        "relation": relation_json_array(report.relation),
        "norm": format_degree(report.norm),
        "iterations": report.iterations,
        "converged": report.converged,
    }


def report_from_obj(obj) -> SimReport:
    if not isinstance(obj, dict):
        raise InputError("report JSON must be an object")
    expected = {"kind", "relation", "norm", "iterations", "converged"}
    if set(obj) != expected:
        raise InputError(f"report fields must be exactly {sorted(expected)}")
    kind = _norm_kind(obj["kind"])
    iterations = obj["iterations"]
    converged = obj["converged"]
    if not isinstance(iterations, int) or isinstance(iterations, bool) or iterations < 0:
        raise InputError(f"iterations must be a nonnegative integer, got {iterations!r}")
    if not isinstance(converged, bool):
        raise InputError(f"converged must be a boolean, got {converged!r}")
    return SimReport(relation=relation_from_obj(obj["relation"]),
                     norm=parse_degree(obj["norm"]),
                     kind=kind, iterations=iterations, converged=converged)


def preservation_to_obj(report: PreservationReport) -> dict:
    return {
        "pointwise_ok": report.pointwise_ok,
        "global_ok": report.global_ok,
        "exact": report.exact,
        "global_degree": format_degree(report.global_degree),
    }
