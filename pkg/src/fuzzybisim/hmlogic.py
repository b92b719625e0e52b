"""Hennessy-Milner formulas over fuzzy automata.

Grammar (text syntax in parentheses):

    w ::= Tau ("T")                   the terminal-set atom
        | Step(s, w)    ("<s> w")     one transition step
        | Implies(a, w) ("(a -> w)")  constant guard, simulation fragment
        | Iff(a, w)     ("(a <-> w)") constant guard, bisimulation fragment
        | And(w1, w2)   ("(w1 & w2)") pointwise conjunction

The simulation fragment admits no Iff node, the bisimulation fragment no
Implies node.  A formula evaluates on an automaton to a fuzzy set over all
states; the per-pair readout residuum(w(x), w(x')) (biresiduum for the
bisimulation fragment), met over every fragment formula, recovers the
greatest fuzzy simulation (bisimulation) degree of the pair.

The bounded enumeration behind hm_degree_bounded exploits two readout
facts that hold in the linear lattices shipped here: a top-level guard
never lowers a readout (b -> c is below (a -> b) -> (a -> c), likewise for
biresidua), and a top-level conjunction never drops below the meet of its
conjuncts' readouts.  The infimum over all formulas of step-depth <= d is
therefore realized on the atoms: Tau plus the single-step formulas over
the depth-(d-1) inner set.  Inner sets are still closed under meets and
guards, because guards inside a step do matter; closure is deduplicated by
evaluation vector over the two state spaces, with at most one guard
applied directly to any subformula (guard stacking collapses for -> and is
cut from the search space for <->).
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .automata import FuzzyAutomaton, delta_rel
from .errors import InputError, NonConvergenceError
from .fuzzyrel import FuzzyRelation, FuzzySet
from .lattice import ONE, ZERO, ResiduatedLattice, format_degree, parse_degree
from .simrel import greatest_fuzzy_bisimulation, greatest_fuzzy_simulation

DEFAULT_POOL_CAP = 64


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class Step:
    symbol: str
    body: "Formula"


@dataclass(frozen=True)
class Implies:
    constant: Fraction
    body: "Formula"


@dataclass(frozen=True)
class Iff:
    constant: Fraction
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


Formula = Union[Tau, Step, Implies, Iff, And]

TAU = Tau()


def _fragment_bidir(fragment) -> bool:
    f = str(fragment).lower()
    if f in ("sim", "simulation"):
        return False
    if f in ("bisim", "bisimulation"):
        return True
    raise InputError(f"unknown fragment {fragment!r}; expected sim or bisim")


# ---------------------------------------------------------------- semantics

def eval_formula(lat: ResiduatedLattice, aut: FuzzyAutomaton, w: Formula) -> FuzzySet:
    """The fuzzy set of states satisfying w, computed bottom-up over all states."""
    return FuzzySet(_eval_map(lat, aut, w, strict=True))


def _eval_map(lat, aut, w, strict: bool) -> dict:
    # dense map over aut.states: guards turn absent-0 into nonzero degrees,
    # so sparse evaluation would be wrong
    if isinstance(w, Tau):
        return {x: aut.tau.degree(x) for x in aut.states}
    if isinstance(w, Step):
        if w.symbol in aut.alphabet:
            rel = delta_rel(aut, w.symbol)
        elif strict:
            raise InputError(f"formula steps over unknown symbol {w.symbol!r}")
        else:
            rel = None
        sub = _eval_map(lat, aut, w.body, strict)
        out = {x: ZERO for x in aut.states}
        if rel is not None:
            for (x, y), d in rel.items():
                v = lat.tnorm(d, sub[y])
                if v > out[x]:
                    out[x] = v
        return out
    if isinstance(w, Implies):
        c = parse_degree(w.constant)
        sub = _eval_map(lat, aut, w.body, strict)
        return {x: lat.residuum(c, sub[x]) for x in aut.states}
    if isinstance(w, Iff):
        c = parse_degree(w.constant)
        sub = _eval_map(lat, aut, w.body, strict)
        return {x: lat.biresiduum(c, sub[x]) for x in aut.states}
    if isinstance(w, And):
        left = _eval_map(lat, aut, w.left, strict)
        right = _eval_map(lat, aut, w.right, strict)
        return {x: min(left[x], right[x]) for x in aut.states}
    raise InputError(f"not a formula node: {w!r}")


# ---------------------------------------------------------------- enumeration

def constant_pool(lat: ResiduatedLattice, a: FuzzyAutomaton, ap: FuzzyAutomaton,
                  depth: int, cap: int = DEFAULT_POOL_CAP) -> list:
    """Guard constants for the bounded enumeration.

    Every degree occurring in the transition and terminal structure of the
    two automata, plus 0 and 1, closed under tnorm, residuum and meet for
    `depth` rounds.  The cap is a safety valve on pathological closures;
    base degrees always survive it before closure values do.
    """
    if cap < 2:
        raise InputError("constant pool cap must be at least 2")
    base = {ZERO, ONE}
    for aut in (a, ap):
        base.update(d for _x, d in aut.tau.items())
        base.update(d for _key, d in aut.transitions())
    pool = sorted(base)[:cap]
    for _ in range(max(depth, 0)):
        known = set(pool)
        room = cap - len(pool)
        if room <= 0:
            break
        new = set()
        for x in pool:
            for y in pool:
                for v in (lat.tnorm(x, y), lat.residuum(x, y), min(x, y)):
                    if v not in known:
                        new.add(v)
        if not new:
            break
        pool = sorted(known | set(sorted(new)[:room]))
    return pool


def _apply_step(lat, aut, s, sub: dict) -> dict:
    out = {x: ZERO for x in aut.states}
    if s in aut.alphabet:
        for (x, y), d in delta_rel(aut, s).items():
            v = lat.tnorm(d, sub[y])
            if v > out[x]:
                out[x] = v
    return out


def _closure(lat, a, ap, seeds, pool, bidir: bool) -> list:
    """Close seed items under guards and pairwise meets, deduplicating by
    joint evaluation vector. Items are (formula, map over A, map over A')."""
    guard_cls = Iff if bidir else Implies
    guard_op = lat.biresiduum if bidir else lat.residuum
    items: dict = {}
    order: list = []
    queue = deque()

    def vkey(va, vb):
        return (tuple(va[x] for x in a.states)
                + tuple(vb[x] for x in ap.states))

    def add(formula, va, vb):
        k = vkey(va, vb)
        if k in items:
            return
        items[k] = (formula, va, vb)
        order.append(k)
        queue.append(k)

    for formula, va, vb in seeds:
        add(formula, va, vb)
    while queue:
        k = queue.popleft()
        formula, va, vb = items[k]
        if not isinstance(formula, (Implies, Iff)):
            for c in pool:
                gva = {x: guard_op(c, va[x]) for x in a.states}
                gvb = {x: guard_op(c, vb[x]) for x in ap.states}
                add(guard_cls(c, formula), gva, gvb)
        for k2 in list(order):
            formula2, va2, vb2 = items[k2]
            mva = {x: min(va[x], va2[x]) for x in a.states}
            mvb = {x: min(vb[x], vb2[x]) for x in ap.states}
            add(And(formula2, formula), mva, mvb)
    return [items[k] for k in order]


def _tau_item(a, ap):
    return (TAU,
            {x: a.tau.degree(x) for x in a.states},
            {x: ap.tau.degree(x) for x in ap.states})


def _step_items(lat, a, ap, reps, symbols) -> list:
    out = []
    for formula, va, vb in reps:
        for s in symbols:
            out.append((Step(s, formula),
                        _apply_step(lat, a, s, va),
                        _apply_step(lat, ap, s, vb)))
    return out


def _top_atoms(lat, a, ap, depth, bidir, pool) -> list:
    """Tau plus the step formulas over the depth-(d-1) inner set: the atoms
    whose readouts realize the bounded infimum."""
    symbols = sorted(set(a.alphabet) | set(ap.alphabet))
    tau_item = _tau_item(a, ap)
    if depth == 0:
        return [tau_item]
    reps = _closure(lat, a, ap, [tau_item], pool, bidir)
    for _ in range(depth - 1):
        seeds = [tau_item] + _step_items(lat, a, ap, reps, symbols)
        reps = _closure(lat, a, ap, seeds, pool, bidir)
    return [tau_item] + _step_items(lat, a, ap, reps, symbols)


def hm_degree_bounded(lat: ResiduatedLattice, a: FuzzyAutomaton, ap: FuzzyAutomaton,
                      depth: int, fragment, pool_cap: int = DEFAULT_POOL_CAP) -> FuzzyRelation:
    """Per-pair infimum of formula readouts over the fragment, truncated at
    the given step-depth.  Antitone in depth; always above the true degree."""
    if depth < 0:
        raise InputError("depth must be >= 0")
    bidir = _fragment_bidir(fragment)
    op = lat.biresiduum if bidir else lat.residuum
    pool = constant_pool(lat, a, ap, depth, pool_cap)
    atoms = _top_atoms(lat, a, ap, depth, bidir, pool)
    out: dict = {}
    for x in a.states:
        for xp in ap.states:
            v = ONE
            for _formula, va, vb in atoms:
                r = op(va[x], vb[xp])
                if r < v:
                    v = r
                    if v == ZERO:
                        break
            if v != ZERO:
                out[(x, xp)] = v
    return FuzzyRelation(out)


def enumerate_formulas(lat: ResiduatedLattice, a: FuzzyAutomaton, ap: FuzzyAutomaton,
                       depth: int, fragment, pool_cap: int = DEFAULT_POOL_CAP) -> list:
    """The atom formulas whose readouts realize hm_degree_bounded."""
    if depth < 0:
        raise InputError("depth must be >= 0")
    bidir = _fragment_bidir(fragment)
    pool = constant_pool(lat, a, ap, depth, pool_cap)
    return [formula for formula, _va, _vb in _top_atoms(lat, a, ap, depth, bidir, pool)]


@dataclass(frozen=True)
class HMAgreementReport:
    relation: FuzzyRelation
    matches_fixpoint: bool


def hm_agreement(lat: ResiduatedLattice, a: FuzzyAutomaton, ap: FuzzyAutomaton,
                 depth: int, fragment, max_iters=None,
                 pool_cap: int = DEFAULT_POOL_CAP) -> HMAgreementReport:
    """Compare the bounded formula infimum against the greatest fixpoint."""
    bidir = _fragment_bidir(fragment)
    relation = hm_degree_bounded(lat, a, ap, depth, fragment, pool_cap)
    compute = greatest_fuzzy_bisimulation if bidir else greatest_fuzzy_simulation
    report = compute(lat, a, ap)
    if not report.converged:
        raise NonConvergenceError(
            f"greatest {report.kind} did not stabilize within {report.iterations} sweeps"
        )
    return HMAgreementReport(relation=relation,
                             matches_fixpoint=(relation == report.relation))


def distinguishing_formula(lat: ResiduatedLattice, a: FuzzyAutomaton, ap: FuzzyAutomaton,
                           x: str, xp: str, target, depth: int, fragment,
                           pool_cap: int = DEFAULT_POOL_CAP):
    """A fragment formula whose readout at (x, x') is <= target, or None.

    Searches the enumerated atoms (sufficient: any formula achieving the
    target has an atom of its decomposition achieving it too) and never
    returns a candidate without re-verifying it by direct evaluation.
    """
    if x not in a.states:
        raise InputError(f"unknown state {x!r} for automaton {a.name!r}")
    if xp not in ap.states:
        raise InputError(f"unknown state {xp!r} for automaton {ap.name!r}")
    if depth < 0:
        raise InputError("depth must be >= 0")
    target = parse_degree(target)
    bidir = _fragment_bidir(fragment)
    op = lat.biresiduum if bidir else lat.residuum
    pool = constant_pool(lat, a, ap, depth, pool_cap)
    for formula, va, vb in _top_atoms(lat, a, ap, depth, bidir, pool):
        if op(va[x], vb[xp]) <= target:
            ea = _eval_map(lat, a, formula, strict=False)
            eb = _eval_map(lat, ap, formula, strict=False)
            if op(ea[x], eb[xp]) <= target:
                return formula
    return None


# ---------------------------------------------------------------- text syntax

def format_formula(w: Formula) -> str:
    if isinstance(w, Tau):
        return "T"
    if isinstance(w, Step):
        return f"<{w.symbol}> {format_formula(w.body)}"
    if isinstance(w, Implies):
        return f"({format_degree(w.constant)} -> {format_formula(w.body)})"
    if isinstance(w, Iff):
        return f"({format_degree(w.constant)} <-> {format_formula(w.body)})"
    if isinstance(w, And):
        return f"({format_formula(w.left)} & {format_formula(w.right)})"
    raise InputError(f"not a formula node: {w!r}")


_TOKEN_RE = re.compile(r"""
    \s*(?:
      (?P<lpar>\()
    | (?P<rpar>\))
    | (?P<amp>&)
    | (?P<iff><->)
    | (?P<arrow>->)
    | (?P<step><\s*(?P<sym>[^<>\s]+)\s*>)
    | (?P<tau>T\b)
    | (?P<rat>\d+(?:\.\d+)?(?:/\d+)?)
    )""", re.VERBOSE)


def _lex(text: str) -> list:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            if text[i:].strip() == "":
                break
            raise InputError(f"cannot read formula at {text[i:i + 20]!r}")
        i = m.end()
        if m.group("lpar"):
            tokens.append(("lpar", "("))
        elif m.group("rpar"):
            tokens.append(("rpar", ")"))
        elif m.group("amp"):
            tokens.append(("amp", "&"))
        elif m.group("iff"):
            tokens.append(("iff", "<->"))
        elif m.group("arrow"):
            tokens.append(("arrow", "->"))
        elif m.group("step"):
            tokens.append(("step", m.group("sym")))
        elif m.group("tau"):
            tokens.append(("tau", "T"))
        else:
            tokens.append(("rat", m.group("rat")))
    return tokens


def parse_formula(text: str) -> Formula:
    """Parse the CLI text syntax; inverse of format_formula."""
    tokens = _lex(text)
    if not tokens:
        raise InputError("empty formula")
    node, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise InputError(f"trailing input after formula: {tokens[pos][1]!r}")
    return node


def _expect(tokens, i, kind):
    if i >= len(tokens) or tokens[i][0] != kind:
        found = tokens[i][1] if i < len(tokens) else "end of input"
        raise InputError(f"expected {kind!r} in formula, found {found!r}")
    return i + 1


def _parse(tokens, i):
    if i >= len(tokens):
        raise InputError("unexpected end of formula")
    kind, value = tokens[i]
    if kind == "tau":
        return TAU, i + 1
    if kind == "step":
        body, j = _parse(tokens, i + 1)
        return Step(value, body), j
    if kind == "lpar":
        if (i + 2 < len(tokens) and tokens[i + 1][0] == "rat"
                and tokens[i + 2][0] in ("arrow", "iff")):
            constant = parse_degree(tokens[i + 1][1])
            guard_cls = Implies if tokens[i + 2][0] == "arrow" else Iff
            body, j = _parse(tokens, i + 3)
            j = _expect(tokens, j, "rpar")
            return guard_cls(constant, body), j
        left, j = _parse(tokens, i + 1)
        j = _expect(tokens, j, "amp")
        right, j = _parse(tokens, j)
        j = _expect(tokens, j, "rpar")
        return And(left, right), j
    raise InputError(f"unexpected token {value!r} in formula")
