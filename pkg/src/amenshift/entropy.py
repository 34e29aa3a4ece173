"""Pattern-counting entropy, the binary-entropy tail bound, and
density-relaxed separated/spanning brute force on tiny sampled systems.

Log conventions: topological entropy estimates are reported in nats
(natural log of the pattern count over the window size), while the binary
entropy E_S(ε) = -ε log₂ ε - (1-ε) log₂(1-ε) is kept in bits because the
tail bound is the base-2 statement Σ_{j≤⌊nε⌋} C(n,j) ≤ 2^{n·E_S(ε)}.  The
two meet in the continuity bound 2δ·ln|𝒜| + ln2·E_S(2δ), where the ln 2
factor performs the conversion.  Both inequalities also ship as exact
big-integer comparators so tests never trust floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .configs import Configuration, Oracle, Periodic, ToeplitzTable, evaluate, require_known
from .errors import DeltaOutOfRange, SystemTooLarge
from .groups import FiniteSubset, SubgroupChain, add, ball

SYSTEM_CAP = 20

Pattern = tuple[str, ...]


@dataclass(frozen=True)
class PatternSet:
    """Distinct windows of a fixed shape found in a configuration."""

    level: int
    patterns: frozenset[Pattern]
    exact: bool
    window_radius: int | None

    def __len__(self) -> int:
        return len(self.patterns)


@dataclass(frozen=True)
class EntropyEstimate:
    level: int
    window_radius: int | None
    pattern_count: int
    value: float  # nats: ln(pattern_count) / |F_level|
    saturated: bool
    exact: bool

    def __post_init__(self):
        if self.pattern_count < 1:
            raise ValueError("pattern count must be positive")
        if self.value < 0:
            raise ValueError("entropy estimate cannot be negative")


def _resolve_chain(x: Configuration, chain: SubgroupChain | None) -> SubgroupChain:
    if isinstance(x, (Periodic, ToeplitzTable)):
        return x.chain
    if chain is None:
        raise ValueError("oracle configurations need an explicit chain for the shape")
    return chain


def _window(x: Configuration, shape: FiniteSubset, g) -> Pattern:
    return tuple(require_known(evaluate(x, add(f, g)), add(f, g)) for f in shape)


def pattern_set(
    x: Configuration,
    n: int,
    radius: int | None = None,
    chain: SubgroupChain | None = None,
) -> PatternSet:
    """All distinct restrictions of x to translates of the level-n box.

    Periodic configurations (and fully resolved coset tables, which are
    periodic at their deepest level) are scanned over one full period, giving
    the complete pattern set; otherwise translates range over ball(radius)
    and the count is a certified lower bound only.
    """
    ch = _resolve_chain(x, chain)
    shape = ch.domain(n)
    period_level = None
    if isinstance(x, Periodic):
        period_level = x.level
        lookup = x.word
    elif isinstance(x, ToeplitzTable) and x.fully_resolved():
        period_level = x.max_level
        lookup = x.value_table(period_level)
    if period_level is not None:
        # values repeat with period q_{period_level}, so one domain of
        # translates sees every window
        found = frozenset(
            tuple(lookup[ch.coset_rep(add(f, g), period_level)] for f in shape)
            for g in ch.domain(period_level)
        )
        return PatternSet(n, found, True, None)
    if radius is None:
        raise ValueError("non-periodic configuration: supply a window radius")
    rank = x.rank if isinstance(x, Oracle) else ch.rank
    found = frozenset(_window(x, shape, g) for g in ball(rank, radius))
    return PatternSet(n, found, False, radius)


def entropy_estimate(
    x: Configuration,
    n: int,
    radius: int | None = None,
    chain: SubgroupChain | None = None,
) -> EntropyEstimate:
    """ln(pattern count) / |F_n| in nats; a lower bound unless the scan was exact."""
    ch = _resolve_chain(x, chain)
    ps = pattern_set(x, n, radius, chain)
    size = ch.domain_size(n)
    count = len(ps)
    return EntropyEstimate(
        level=n,
        window_radius=ps.window_radius,
        pattern_count=count,
        value=math.log(count) / size,
        saturated=count == len(x.alphabet) ** size,
        exact=ps.exact,
    )


def estimate_from_count(
    count: int, level: int, domain_size: int, alphabet_size: int, exact: bool = False
) -> EntropyEstimate:
    return EntropyEstimate(
        level=level,
        window_radius=None,
        pattern_count=count,
        value=math.log(count) / domain_size,
        saturated=count == alphabet_size**domain_size,
        exact=exact,
    )


# ---------------------------------------------------------------------------
# binary entropy and the exact inequality comparators
# ---------------------------------------------------------------------------


def es_entropy(eps) -> float:
    """E_S(ε) = -ε log₂ ε - (1-ε) log₂(1-ε) in bits; 0 at both endpoints."""
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise ValueError("eps must lie in [0,1]")
    if eps in (0, 1):
        return 0.0
    e = float(eps)
    return -e * math.log2(e) - (1 - e) * math.log2(1 - e)


def binomial_tail(n: int, eps) -> int:
    """Σ_{j=0}^{⌊nε⌋} C(n,j), exact."""
    eps = Fraction(eps)
    top = math.floor(n * eps)
    return sum(math.comb(n, j) for j in range(top + 1))


def es_binomial_bound_holds(n: int, eps) -> bool:
    """Exact check of Σ_{j≤⌊nε⌋} C(n,j) ≤ 2^{n·E_S(ε)} for 0 < ε ≤ 1/2, n ≥ 1.

    With ε = p/q in lowest terms, 2^{qn·E_S} = q^{qn} / (p^{pn} (q-p)^{(q-p)n}),
    so raising both sides to the q-th power keeps everything integral.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    eps = Fraction(eps)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError("bound is stated for 0 < eps <= 1/2")
    p, q = eps.numerator, eps.denominator
    lhs = binomial_tail(n, eps)
    return lhs**q * p ** (p * n) * (q - p) ** ((q - p) * n) <= q ** (q * n)


def pattern_counting_bound_holds(
    bounded_count: int, base_count: int, d, domain_size: int, alphabet_size: int
) -> bool:
    """Exact check of bounded_count ≤ |𝒜|^{2d·|F|} · 2^{E_S(2d)·|F|} · base_count.

    d must be a multiple of 1/|F| (a coset disagreement density), which makes
    2d·|F| integral and the E_S factor a rational power with integer exponents.
    """
    d = Fraction(d)
    if not 0 <= d < Fraction(1, 2):
        raise ValueError("need 0 <= d < 1/2 so that 2d < 1")
    two_j = 2 * d * domain_size
    if two_j.denominator != 1:
        raise ValueError("d must be a multiple of 1/|F|")
    two_j = int(two_j)
    if d == 0:
        return bounded_count <= base_count
    p, q = (2 * d).numerator, (2 * d).denominator
    m = domain_size // q  # q divides |F| because 2d·|F| is an integer and gcd(p,q)=1
    lhs = bounded_count * p ** (m * p) * (q - p) ** (m * (q - p))
    rhs = base_count * alphabet_size**two_j * q ** (m * q)
    return lhs <= rhs


def entropy_continuity_bound(delta, alphabet_size: int) -> float:
    """2δ·ln|𝒜| + ln2·E_S(2δ) in nats, for 0 < δ < 1/4."""
    delta = Fraction(delta)
    if not 0 < delta < Fraction(1, 4):
        raise DeltaOutOfRange("bound requires 0 < delta < 1/4")
    return 2 * float(delta) * math.log(alphabet_size) + math.log(2) * es_entropy(2 * delta)


# ---------------------------------------------------------------------------
# density-relaxed separated / spanning sets, exhaustive on tiny systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledSystem:
    """Finitely many symbolic points restricted to a common window.

    ``diff_counts[i][j]`` is the number of window positions where points i
    and j differ; with the discrete letter metric this determines every
    (F, ε, δ) separation/spanning question about the sample.
    """

    window_size: int
    diff_counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.diff_counts)
        for i in range(m):
            if len(self.diff_counts[i]) != m or self.diff_counts[i][i] != 0:
                raise ValueError("diff table must be square with zero diagonal")
            for j in range(m):
                if self.diff_counts[i][j] != self.diff_counts[j][i]:
                    raise ValueError("diff table must be symmetric")
                if not 0 <= self.diff_counts[i][j] <= self.window_size:
                    raise ValueError("diff counts must lie in [0, window size]")

    def __len__(self) -> int:
        return len(self.diff_counts)

    @classmethod
    def from_points(cls, points: Sequence[Sequence[str]]) -> "SampledSystem":
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValueError("need at least one point")
        size = len(pts[0])
        if any(len(p) != size for p in pts):
            raise ValueError("points must share a common window")
        table = tuple(
            tuple(sum(a != b for a, b in zip(p, r)) for r in pts) for p in pts
        )
        return cls(size, table)

    @classmethod
    def from_configs(cls, configs: Sequence[Configuration], F: FiniteSubset) -> "SampledSystem":
        points = [
            tuple(require_known(evaluate(x, g), g) for g in F) for x in configs
        ]
        return cls.from_points(points)

    def rho_F(self, i: int, j: int) -> int:
        """max over the window of the discrete distance: 1 iff the points differ."""
        return 1 if self.diff_counts[i][j] > 0 else 0


def _effective_counts(sys: SampledSystem, eps) -> tuple[tuple[int, ...], ...]:
    # positions with pointwise distance > eps: all differing positions when
    # eps < 1, none at all once eps >= 1 (discrete metric).
    if Fraction(eps) >= 1:
        m = len(sys)
        return tuple((0,) * m for _ in range(m))
    return sys.diff_counts


def _check_params(sys: SampledSystem, eps, delta) -> Fraction:
    if len(sys) > SYSTEM_CAP:
        raise SystemTooLarge(f"{len(sys)} points exceed the cap {SYSTEM_CAP}")
    eps, delta = Fraction(eps), Fraction(delta)
    if eps <= 0 or not 0 < delta <= 1:
        raise ValueError("need eps > 0 and delta in (0, 1]")
    return delta


def separated_max(sys: SampledSystem, eps, delta) -> int:
    """Largest subset in which every pair differs on more than δ|F| positions."""
    delta = _check_params(sys, eps, delta)
    counts = _effective_counts(sys, eps)
    threshold = delta * sys.window_size
    m = len(sys)
    adj = [0] * m
    for i in range(m):
        for j in range(m):
            if i != j and counts[i][j] > threshold:
                adj[i] |= 1 << j

    best = 1  # a singleton is vacuously separated

    def grow(chosen_size: int, allowed: int, start: int) -> None:
        nonlocal best
        best = max(best, chosen_size)
        i = start
        rest = allowed >> start
        while rest:
            if rest & 1:
                grow(chosen_size + 1, allowed & adj[i], i + 1)
            rest >>= 1
            i += 1

    grow(0, (1 << m) - 1, 0)
    return best


def spanning_min(sys: SampledSystem, eps, delta) -> int:
    """Smallest subset Z such that every point agrees with some z ∈ Z on more
    than (1-δ)|F| positions."""
    delta = _check_params(sys, eps, delta)
    counts = _effective_counts(sys, eps)
    threshold = delta * sys.window_size
    m = len(sys)
    covers = [0] * m
    for z in range(m):
        for i in range(m):
            if counts[z][i] < threshold:
                covers[z] |= 1 << i
    full = (1 << m) - 1
    for size in range(1, m + 1):
        for subset in combinations(range(m), size):
            mask = 0
            for z in subset:
                mask |= covers[z]
            if mask == full:
                return size
    raise AssertionError("the whole sample always spans itself")
