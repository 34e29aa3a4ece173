"""Exact and windowed Banach densities.

Everything here is exact rational arithmetic; no floats.  Exact answers exist
for unions of cosets (where upper and lower Banach density coincide with the
count over one fundamental domain); for arbitrary membership predicates a
finite window can only certify a lower bound for the translate-sup, and the
interval output says so instead of pretending otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .configs import CosetSet
from .errors import UnknownMembership
from .groups import Element, FiniteSubset, SubgroupChain, add, ball

MembershipPredicate = Callable[[Element], "bool | None"]

WINDOW_CAVEAT = (
    "window sup underestimates the sup over the whole group; "
    "lower is a certified lower bound for the translate-sup density, "
    "upper only accounts for Unknown cells inside the window"
)


@dataclass(frozen=True)
class IntervalEstimate:
    """A density bracket [lower, upper] with an exactness claim.

    ``exact`` implies lower == upper; the converse is deliberately not
    claimed (a collapsed window bracket still proves nothing globally).
    """

    lower: Fraction
    upper: Fraction
    exact: bool
    method: str
    caveat: str | None = None

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError(f"bad interval [{self.lower}, {self.upper}]")
        if self.exact and self.lower != self.upper:
            raise ValueError("exact estimates must have lower == upper")

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError("no single value for an inexact interval")
        return self.lower

    @staticmethod
    def of(value: Fraction, method: str) -> "IntervalEstimate":
        value = Fraction(value)
        return IntervalEstimate(value, value, True, method)


def density_in(F: FiniteSubset, member: MembershipPredicate) -> Fraction:
    """D_F(A) = |A ∩ F| / |F| for a predicate decidable everywhere on F."""
    if not F:
        raise ValueError("F must be nonempty")
    hits = 0
    for g in F:
        m = member(g)
        if m is None:
            raise UnknownMembership(f"membership Unknown at {g}; use density_interval_in")
        hits += bool(m)
    return Fraction(hits, len(F))


def density_interval_in(F: FiniteSubset, member: MembershipPredicate) -> tuple[Fraction, Fraction]:
    """[confirmed, confirmed+unknown] / |F| over F."""
    if not F:
        raise ValueError("F must be nonempty")
    hits = unknown = 0
    for g in F:
        m = member(g)
        if m is None:
            unknown += 1
        else:
            hits += bool(m)
    return Fraction(hits, len(F)), Fraction(hits + unknown, len(F))


def banach_density_exact(B: CosetSet) -> IntervalEstimate:
    """Banach density of a union of cosets: |reps| / |F_n|, exact.

    Upper and lower Banach densities agree on such sets, so a single exact
    rational is the complete answer.
    """
    return IntervalEstimate.of(B.density(), "exact-coset")


def lower_banach_density(B: CosetSet) -> IntervalEstimate:
    """D_*(B) = 1 - D*(complement); the complement of a coset union is one too."""
    comp = banach_density_exact(B.complement())
    return IntervalEstimate.of(1 - comp.value, "exact-coset")


def banach_density_windowed(
    member: MembershipPredicate,
    chain: SubgroupChain,
    n: int,
    radius: int,
) -> IntervalEstimate:
    """Windowed proxy for D*_{F_n}: max over translates g in ball(radius).

    lower counts confirmed members only; upper additionally counts Unknown
    cells as members.  The finite max is one-sided: the true translate-sup
    can exceed it, and the caveat field records that.
    """
    F = chain.domain(n)
    lower = upper = Fraction(0)
    for g in ball(chain.rank, radius):
        lo, hi = density_interval_in(tuple(add(f, g) for f in F), member)
        lower = max(lower, lo)
        upper = max(upper, hi)
    return IntervalEstimate(lower, upper, False, "windowed", WINDOW_CAVEAT)


def coset_membership(B: CosetSet) -> MembershipPredicate:
    return lambda g: g in B


def set_membership(A: Sequence[Element]) -> MembershipPredicate:
    table = set(A)
    return lambda g: g in table
