"""Exact arithmetic for complete residuated lattices on the rational unit interval.

Degrees are `fractions.Fraction` values in [0, 1], so every comparison and
every fixpoint stabilization test is exact.  Three structures are provided,
one per t-norm:

==============  =====================  ================================
kind            a (x) b                a -> b
==============  =====================  ================================
godel           min(a, b)              1 if a <= b else b
lukasiewicz     max(0, a + b - 1)      min(1, 1 - a + b)
product         a * b                  1 if a <= b else b / a
==============  =====================  ================================

Each pairing satisfies the adjunction: a (x) b <= c  iff  a <= (b -> c).
All three are linear (the order is the usual one on rationals), so the
lattice meet and join are plain min and max.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import InputError

LatticeValue = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_KINDS = ("godel", "lukasiewicz", "product")


def parse_degree(value) -> Fraction:
    """Parse a rational literal into an exact degree in [0, 1].

    Accepts strings like "3/5", "0.7" or "1" (decimals convert exactly),
    plain ints, and Fraction values.  Floats are rejected: binary floats
    are inexact and would poison every downstream comparison.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational literal: {value!r}")
    if isinstance(value, Fraction):
        degree = value
    elif isinstance(value, int):
        degree = Fraction(value)
    elif isinstance(value, float):
        raise InputError(
            f"refusing inexact float degree {value!r}: write it as a string, e.g. \"7/10\""
        )
    elif isinstance(value, str):
        try:
            degree = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {value!r}") from exc
    else:
        raise InputError(f"not a rational literal: {value!r}")
    if degree < ZERO or degree > ONE:
        raise InputError(f"degree {value!r} outside [0, 1]")
    return degree


def format_degree(degree: Fraction) -> str:
    """Canonical text form: reduced "p/q", or "0"/"1" for the bounds. Never decimal."""
    return str(degree)


class ResiduatedLattice:
    """One of the three unit-interval residuated lattices, chosen by t-norm.

    Instances are immutable descriptors; all operations are pure.  Use the
    module constants GOEDEL, LUKASIEWICZ and PRODUCT, or `by_name`.
    """

    __slots__ = ("kind",)

    def __init__(self, kind: str):
        if kind not in _KINDS:
            raise InputError(f"unknown lattice kind {kind!r}; expected one of {list(_KINDS)}")
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("ResiduatedLattice is immutable")

    def __repr__(self) -> str:
        return f"ResiduatedLattice({self.kind!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ResiduatedLattice) and self.kind == other.kind

    def __hash__(self) -> int:
        return hash(("ResiduatedLattice", self.kind))

    def tnorm(self, a: Fraction, b: Fraction) -> Fraction:
        if self.kind == "godel":
            return a if a <= b else b
        if self.kind == "lukasiewicz":
            s = a + b - 1
            return s if s > ZERO else ZERO
        return a * b

    def residuum(self, a: Fraction, b: Fraction) -> Fraction:
        if a <= b:
            return ONE
        # below here a > b, in particular a > 0
        if self.kind == "godel":
            return b
        if self.kind == "lukasiewicz":
            return 1 - a + b
        return b / a

    def biresiduum(self, a: Fraction, b: Fraction) -> Fraction:
        return meet(self.residuum(a, b), self.residuum(b, a))


GOEDEL = ResiduatedLattice("godel")
LUKASIEWICZ = ResiduatedLattice("lukasiewicz")
PRODUCT = ResiduatedLattice("product")


def by_name(name: str) -> ResiduatedLattice:
    """Look up a lattice by its CLI name: godel, lukasiewicz or product."""
    if name == "godel":
        return GOEDEL
    if name == "lukasiewicz":
        return LUKASIEWICZ
    if name == "product":
        return PRODUCT
    raise InputError(f"unknown lattice kind {name!r}; expected one of {list(_KINDS)}")


def meet(a: Fraction, b: Fraction) -> Fraction:
    return a if a <= b else b


def join(a: Fraction, b: Fraction) -> Fraction:
    return a if a >= b else b


def inf(values: Iterable[Fraction]) -> Fraction:
    """Infimum of a finite collection; the empty infimum is 1 (the top)."""
    out = ONE
    for v in values:
        if v < out:
            out = v
    return out


def sup(values: Iterable[Fraction]) -> Fraction:
    """Supremum of a finite collection; the empty supremum is 0 (the bottom)."""
    out = ZERO
    for v in values:
        if v > out:
            out = v
    return out
