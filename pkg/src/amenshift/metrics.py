"""Weyl-type pseudometrics between shift configurations.

For symbolic configurations with the discrete letter metric the Weyl
pseudometric equals the upper Banach density of the disagreement set, the
Besicovitch pseudometric along a Følner sequence equals the plain Følner
average of the disagreement indicator, and the fixed-point form
D_W'(x,z) = inf{ε : D*({g : ρ(x_g,z_g) > ε}) < ε} collapses to the same
disagreement density.  Exact rationals are produced whenever the pair has
coset structure; anything windowed is labelled with its bracket direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .configs import (
    Alphabet,
    Configuration,
    CosetDisagreement,
    Periodic,
    ToeplitzTable,
    disagreement_set,
    evaluate,
    require_known,
)
from .densities import IntervalEstimate, WINDOW_CAVEAT
from .errors import NotAKCover
from .groups import Element, FiniteSubset, SubgroupChain, add, ball


@dataclass(frozen=True)
class PseudometricReport:
    value: IntervalEstimate
    basis: str
    params: dict


def _exact_pair(x: Configuration, z: Configuration) -> bool:
    return (
        isinstance(x, (Periodic, ToeplitzTable))
        and isinstance(z, (Periodic, ToeplitzTable))
        and x.chain == z.chain
    )


def dstar_distance(
    x: Configuration,
    z: Configuration,
    n: int | None = None,
    radius: int | None = None,
    chain: SubgroupChain | None = None,
) -> PseudometricReport:
    """D* of the disagreement set {g : x_g ≠ z_g}.

    Exact bracket (collapsed unless cells are unresolved) for same-chain
    coset-structured pairs; otherwise a window scan with level n and
    translate radius must be supplied (and a chain, when neither side
    carries one).
    """
    if _exact_pair(x, z):
        dis = disagreement_set(x, z)
        assert isinstance(dis, CosetDisagreement)
        lower = dis.confirmed.density()
        upper = lower + dis.unresolved.density()
        value = IntervalEstimate(lower, upper, dis.exact, "exact-coset")
        return PseudometricReport(value, "exact-coset", {"level": dis.confirmed.level})
    if n is None or radius is None:
        raise ValueError("non-coset pair: supply level n and window radius")
    for side in (x, z):
        if chain is None and isinstance(side, (Periodic, ToeplitzTable)):
            chain = side.chain
    if chain is None:
        raise ValueError("two boxed oracles: supply the chain for the window shape")
    F = chain.domain(n)
    lower = upper = Fraction(0)
    for g in ball(chain.rank, radius):
        hits = unknown = 0
        for f in F:
            a, b = evaluate(x, add(f, g)), evaluate(z, add(f, g))
            if a is None or b is None:
                unknown += 1
            elif a != b:
                hits += 1
        lower = max(lower, Fraction(hits, len(F)))
        upper = max(upper, Fraction(hits + unknown, len(F)))
    value = IntervalEstimate(lower, upper, False, "windowed", WINDOW_CAVEAT)
    return PseudometricReport(value, "window-bracket", {"level": n, "radius": radius})


def _window_sum(x, z, F: FiniteSubset, g: Element) -> int:
    total = 0
    for f in F:
        h = add(f, g)
        a = require_known(evaluate(x, h), h)
        b = require_known(evaluate(z, h), h)
        total += Alphabet.distance(a, b)
    return total


def _common_period_level(x: Configuration, z: Configuration) -> int | None:
    if isinstance(x, Periodic) and isinstance(z, Periodic) and x.chain == z.chain:
        return max(x.level, z.level)
    return None


def delta_star_exact(x: Periodic, z: Periodic, F: FiniteSubset) -> int:
    """Δ*_F(x,z) = sup_g Σ_{f∈F} ρ(x_{f+g}, z_{f+g}), exact by one full period scan.

    The summand is periodic in g with period q_p, so the sup over the whole
    group is attained on F_p.
    """
    p = _common_period_level(x, z)
    if p is None:
        raise ValueError("exact Δ* needs a same-chain periodic pair")
    return max(_window_sum(x, z, F, g) for g in x.chain.domain(p))


@dataclass(frozen=True)
class WeylBound:
    """H(F)/|F| material: a window proxy and, when available, the exact value.

    ``window_proxy`` is a lower bound for sup_g Δ_{F+g}/|F| (which itself
    bounds the Weyl pseudometric from above); ``exact`` is the true
    sup, available for same-chain periodic pairs via a full period scan.
    """

    window_proxy: Fraction
    exact: Fraction | None
    params: dict


def weyl_upper_bound(
    x: Configuration,
    z: Configuration,
    F: FiniteSubset,
    radius: int = 0,
) -> WeylBound:
    """Window proxy for H(F)/|F| with H(F) = Δ*_F, plus the exact value when periodic."""
    if not F:
        raise ValueError("F must be nonempty")
    rank = len(F[0])
    proxy_num = max(_window_sum(x, z, F, g) for g in ball(rank, radius))
    exact = None
    if _common_period_level(x, z) is not None:
        exact = Fraction(delta_star_exact(x, z, F), len(F))
    return WeylBound(Fraction(proxy_num, len(F)), exact, {"radius": radius, "F_size": len(F)})


@dataclass(frozen=True)
class BesicovitchTrace:
    """Følner averages of the pointwise distance over a run of levels."""

    levels: tuple[int, ...]
    averages: tuple[Fraction, ...]
    running_max: Fraction

    def report(self) -> PseudometricReport:
        value = IntervalEstimate(
            Fraction(0),
            self.running_max if self.running_max <= 1 else Fraction(1),
            False,
            "windowed",
            "running max of finitely many Følner averages proxies the limsup",
        )
        return PseudometricReport(value, "window-bracket", {"levels": self.levels})


def besicovitch_estimate(
    x: Configuration,
    z: Configuration,
    chain: SubgroupChain,
    n_lo: int,
    n_hi: int,
) -> BesicovitchTrace:
    """Averages (1/|F_n|) Σ_{g∈F_n} ρ(x_g, z_g) for n in [n_lo, n_hi]."""
    if not 0 <= n_lo <= n_hi <= chain.depth:
        raise ValueError("bad level range")
    levels = tuple(range(n_lo, n_hi + 1))
    averages = []
    for n in levels:
        F = chain.domain(n)
        averages.append(Fraction(_window_sum(x, z, F, (0,) * chain.rank), len(F)))
    return BesicovitchTrace(levels, tuple(averages), max(averages))


def dw_prime_estimate(
    x: Configuration,
    z: Configuration,
    n: int | None = None,
    radius: int | None = None,
    chain: SubgroupChain | None = None,
) -> PseudometricReport:
    """inf{ε > 0 : D*({g : ρ(x_g, z_g) > ε}) < ε}.

    With the discrete letter metric the inner set is the disagreement set for
    every ε in (0,1), so the infimum is the disagreement density itself
    (including the boundary case density 1, where only ε ≥ 1 qualifies).
    """
    base = dstar_distance(x, z, n, radius, chain)
    value = IntervalEstimate(
        base.value.lower,
        base.value.upper,
        base.value.exact,
        base.value.method,
        base.value.caveat,
    )
    params = dict(base.params)
    params["form"] = "fixed-point inf{eps : d < eps} with discrete letter metric"
    return PseudometricReport(value, base.basis, params)


def validate_k_cover(F: FiniteSubset, cover: Sequence[FiniteSubset], k: int) -> None:
    if k < 1:
        raise NotAKCover("k must be at least 1")
    for g in F:
        hits = sum(1 for K in cover if g in K)
        if hits < k:
            raise NotAKCover(f"{g} covered {hits} < {k} times")


def shearer_values(
    x: Configuration,
    z: Configuration,
    F: FiniteSubset,
    cover: Sequence[FiniteSubset],
    k: int,
    radius: int = 0,
) -> tuple[Fraction, list[Fraction]]:
    """H(F) and the H(K_i), exact for periodic pairs, else window proxies at one shared radius."""
    validate_k_cover(F, cover, k)
    if _common_period_level(x, z) is not None:
        hf = Fraction(delta_star_exact(x, z, F))
        hks = [Fraction(delta_star_exact(x, z, tuple(K))) for K in cover]
    else:
        rank = len(F[0])
        window = ball(rank, radius)
        hf = Fraction(max(_window_sum(x, z, F, g) for g in window))
        hks = [Fraction(max(_window_sum(x, z, tuple(K), g) for g in window)) for K in cover]
    return hf, hks


def shearer_oracle(
    x: Configuration,
    z: Configuration,
    F: FiniteSubset,
    cover: Sequence[FiniteSubset],
    k: int,
    radius: int = 0,
) -> bool:
    """Whether H(F) ≤ (1/k) Σ H(K_i) holds on this instance."""
    hf, hks = shearer_values(x, z, F, cover, k, radius)
    return hf <= Fraction(sum(hks), k)
