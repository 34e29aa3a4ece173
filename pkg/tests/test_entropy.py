import math
import random
from fractions import Fraction

import pytest

from amenshift.configs import BINARY, Periodic, champernowne_binary
from amenshift.entropy import (
    SampledSystem,
    binomial_tail,
    entropy_continuity_bound,
    entropy_estimate,
    es_binomial_bound_holds,
    es_entropy,
    pattern_counting_bound_holds,
    pattern_set,
    separated_max,
    spanning_min,
)
from amenshift.errors import DeltaOutOfRange, SystemTooLarge, UnknownMembership
from amenshift.groups import make_chain

CHAIN = make_chain(1, [2, 4, 8, 16, 32, 64])
EVENS = Periodic(CHAIN, 1, {(0,): "1", (1,): "0"}, BINARY)


# --- pattern sets -------------------------------------------------------------


def test_constant_config_has_one_pattern():
    ones = Periodic(CHAIN, 1, {(0,): "1", (1,): "1"}, BINARY)
    for n in (1, 2, 3):
        assert len(pattern_set(ones, n)) == 1


def test_even_indicator_two_patterns_at_level_two():
    ps = pattern_set(EVENS, 2)
    assert ps.exact
    assert ps.patterns == {("1", "0", "1", "0"), ("0", "1", "0", "1")}


def test_champernowne_saturates_level_two():
    x = champernowne_binary(256)
    ps = pattern_set(x, 2, radius=200, chain=CHAIN)
    assert len(ps) == 16
    assert not ps.exact


def test_pattern_set_monotone_in_radius():
    x = champernowne_binary(256)
    counts = [len(pattern_set(x, 2, radius=r, chain=CHAIN)) for r in (4, 16, 64, 200)]
    assert all(a <= b for a, b in zip(counts, counts[1:]))


def test_pattern_set_unknown_outside_box():
    x = champernowne_binary(4)
    with pytest.raises(UnknownMembership):
        pattern_set(x, 2, radius=16, chain=CHAIN)


def test_entropy_estimate_bounds_and_saturation():
    x = champernowne_binary(512)
    est = entropy_estimate(x, 2, radius=400, chain=CHAIN)
    assert est.saturated
    assert est.value == pytest.approx(math.log(16) / 4)
    assert 0 <= est.value <= math.log(2)


def test_periodic_entropy_tends_to_zero():
    values = [entropy_estimate(EVENS, n).value for n in range(1, 7)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert values[-1] < 0.05
    # pattern count stays bounded by the period while |F_n| grows
    assert entropy_estimate(EVENS, 6).pattern_count <= 2


# --- binary entropy -----------------------------------------------------------


def test_es_entropy_values():
    assert es_entropy(Fraction(1, 2)) == pytest.approx(1.0)
    assert es_entropy(Fraction(1, 10**6)) < 3e-5
    assert es_entropy(0) == 0.0 and es_entropy(1) == 0.0
    assert es_entropy(Fraction(1, 4)) == pytest.approx(0.8112781244591)


def test_binomial_tail_spot_value():
    # C(20,0)+...+C(20,5) computed directly
    assert binomial_tail(20, Fraction(1, 4)) == 21700
    rhs = 2 ** (20 * es_entropy(Fraction(1, 4)))
    assert rhs == pytest.approx(76626.86, abs=0.2)
    assert 21700 <= rhs


def test_es_binomial_bound_exact_grid():
    for n in range(1, 31):
        for k in range(1, 11):
            assert es_binomial_bound_holds(n, Fraction(k, 20))


def test_es_binomial_bound_oracle_comparison():
    # float evaluation of both sides agrees with the exact comparator
    rng = random.Random(2)
    for _ in range(50):
        n = rng.randrange(1, 40)
        eps = Fraction(rng.randrange(1, 10), 20)
        float_holds = binomial_tail(n, eps) <= 2 ** (n * es_entropy(eps)) * (1 + 1e-9)
        assert es_binomial_bound_holds(n, eps) == float_holds


def test_counting_bound_comparator_against_floats():
    rng = random.Random(3)
    for _ in range(200):
        size = rng.choice((16, 32, 64))
        j = rng.randrange(0, size // 4)
        d = Fraction(j, size)
        cx = rng.randrange(1, 200)
        cz = rng.randrange(1, 200)
        exact = pattern_counting_bound_holds(cz, cx, d, size, 2)
        rhs_log = math.log(cx) + 2 * float(d) * size * math.log(2)
        if d > 0:
            rhs_log += math.log(2) * es_entropy(2 * d) * size
        float_holds = math.log(cz) <= rhs_log + 1e-9
        assert exact == float_holds


def test_continuity_bound_values():
    assert entropy_continuity_bound(Fraction(1, 1024), 2) < 0.02
    assert entropy_continuity_bound(Fraction(1, 8), 2) == pytest.approx(0.7356219, abs=1e-6)
    grid = [Fraction(k, 64) for k in range(1, 16)]
    values = [entropy_continuity_bound(d, 2) for d in grid]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_continuity_bound_rejects_large_delta():
    with pytest.raises(DeltaOutOfRange):
        entropy_continuity_bound(Fraction(1, 4), 2)
    with pytest.raises(DeltaOutOfRange):
        entropy_continuity_bound(Fraction(1, 2), 2)


# --- sampled systems ----------------------------------------------------------


def test_identical_points_extremes():
    sys = SampledSystem.from_points([("1", "0")] * 4)
    assert separated_max(sys, Fraction(1, 2), Fraction(1, 4)) == 1
    assert spanning_min(sys, Fraction(1, 2), Fraction(1, 4)) == 1


def test_two_points_differing_everywhere():
    sys = SampledSystem.from_points([("0", "0"), ("1", "1")])
    assert separated_max(sys, Fraction(1, 2), Fraction(1, 2)) == 2


def test_sampled_system_from_configs():
    zeros = Periodic(CHAIN, 1, {(0,): "0", (1,): "0"}, BINARY)
    sys = SampledSystem.from_configs([EVENS, zeros], CHAIN.domain(2))
    assert sys.diff_counts[0][1] == 2
    assert sys.rho_F(0, 1) == 1 and sys.rho_F(0, 0) == 0


def test_spanning_at_most_separated():
    rng = random.Random(17)
    for _ in range(50):
        m = rng.randrange(2, 11)
        size = rng.randrange(3, 9)
        pts = [tuple(rng.choice("01") for _ in range(size)) for _ in range(m)]
        sys = SampledSystem.from_points(pts)
        delta = Fraction(2 * rng.randrange(0, size) + 1, 2 * size)  # never integral·|F|
        assert spanning_min(sys, Fraction(1, 2), delta) <= separated_max(
            sys, Fraction(1, 2), delta
        )


def test_monotonicity_in_eps_and_delta():
    rng = random.Random(19)
    pts = [tuple(rng.choice("01") for _ in range(8)) for _ in range(8)]
    sys = SampledSystem.from_points(pts)
    deltas = [Fraction(2 * j + 1, 16) for j in range(8)]
    seps = [separated_max(sys, Fraction(1, 2), d) for d in deltas]
    spans = [spanning_min(sys, Fraction(1, 2), d) for d in deltas]
    assert all(a >= b for a, b in zip(seps, seps[1:]))
    assert all(a >= b for a, b in zip(spans, spans[1:]))
    # eps beyond the alphabet diameter: separation impossible, spanning free
    assert separated_max(sys, Fraction(3, 2), deltas[0]) == 1
    assert spanning_min(sys, Fraction(3, 2), deltas[0]) == 1


def test_system_cap():
    pts = [tuple("01"[i % 2] for _ in range(3)) for i in range(21)]
    sys = SampledSystem.from_points(pts)
    with pytest.raises(SystemTooLarge):
        separated_max(sys, Fraction(1, 2), Fraction(1, 3))
