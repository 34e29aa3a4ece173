"""Property tests for the structural invariants that hold for *every* input,
not just the worked examples."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from amenshift.configs import BINARY, CosetSet, Periodic, evaluate, per_set, shift
from amenshift.densities import banach_density_exact, coset_membership, density_in
from amenshift.groups import make_chain, translate
from amenshift.measures import EmpiricalMeasure, prokhorov_distance, total_variation
from amenshift.metrics import delta_star_exact, dstar_distance, weyl_upper_bound
from amenshift.toeplitz import psi_path

CHAIN = make_chain(1, [2, 4, 8, 16])

rationals_01 = st.fractions(min_value=0, max_value=1, max_denominator=64)

words2 = st.tuples(*(st.sampled_from("01") for _ in range(4)))


def periodic_from(bits) -> Periodic:
    return Periodic(CHAIN, 2, {(i,): b for i, b in enumerate(bits)}, BINARY)


@settings(max_examples=60, deadline=None)
@given(rationals_01, rationals_01)
def test_psi_one_sides_nest_for_all_rationals(s, t):
    s, t = min(s, t), max(s, t)
    ps, pt = psi_path(s, CHAIN), psi_path(t, CHAIN)
    for n in range(1, 5):
        assert ps.d_repset(n) <= pt.d_repset(n)
    assert ps.d_density <= pt.d_density


@settings(max_examples=60, deadline=None)
@given(rationals_01, rationals_01)
def test_psi_disagreement_lipschitz_for_all_rationals(s, t):
    s, t = min(s, t), max(s, t)
    ps, pt = psi_path(s, CHAIN), psi_path(t, CHAIN)
    slack = Fraction(1, CHAIN.domain_size(4))
    # the one-side symmetric difference obeys the tight slack of one coset
    sym_diff = ps.d_repset(4) ^ pt.d_repset(4)
    assert Fraction(len(sym_diff), 16) <= (t - s) + slack
    # the disagreement bracket: confirmed cells undershoot the true density
    # t - s, and the pessimistic upper end may carry both residual cosets
    rep = dstar_distance(ps.table, pt.table).value
    assert rep.lower <= t - s
    assert rep.upper <= (t - s) + 2 * slack


@settings(max_examples=40, deadline=None)
@given(words2, words2, words2)
def test_dstar_is_a_pseudometric(a, b, c):
    x, z, w = periodic_from(a), periodic_from(b), periodic_from(c)
    dxz = dstar_distance(x, z).value.value
    assert dxz == dstar_distance(z, x).value.value
    assert dxz <= dstar_distance(x, w).value.value + dstar_distance(w, z).value.value
    assert (dxz == 0) == (a == b)


@settings(max_examples=40, deadline=None)
@given(words2, words2)
def test_window_proxy_never_exceeds_full_sup(a, b):
    x, z = periodic_from(a), periodic_from(b)
    F = CHAIN.domain(1)
    bound = weyl_upper_bound(x, z, F, radius=3)
    assert bound.window_proxy <= bound.exact
    # and the block average dominates the disagreement density
    assert bound.exact >= dstar_distance(x, z).value.value


@settings(max_examples=40, deadline=None)
@given(words2, words2)
def test_block_averages_decrease_toward_disagreement_density(a, b):
    x, z = periodic_from(a), periodic_from(b)
    target = dstar_distance(x, z).value.value
    values = [
        Fraction(delta_star_exact(x, z, CHAIN.domain(m)), CHAIN.domain_size(m))
        for m in (1, 2, 3, 4)
    ]
    assert all(u >= v for u, v in zip(values, values[1:]))
    assert values[-1] == target


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 7), max_size=8))
def test_coset_density_complement(reps):
    cs = CosetSet.make(CHAIN, 3, [(r,) for r in reps])
    d = banach_density_exact(cs).value
    assert d == Fraction(len(reps), 8)
    assert d + banach_density_exact(cs.complement()).value == 1
    # and the density is what any fundamental-domain count says
    assert density_in(CHAIN.domain(3), coset_membership(cs)) == d
    assert density_in(translate(CHAIN.domain(3), (5,)), coset_membership(cs)) == d


@settings(max_examples=40, deadline=None)
@given(words2, st.integers(-8, 8), st.integers(-8, 8))
def test_shift_composition_pointwise(bits, h1, h2):
    x = periodic_from(bits)
    lhs = shift(h1, shift(h2, x))
    rhs = shift(h1 + h2, x)
    for g in range(-4, 4):
        assert evaluate(lhs, g) == evaluate(rhs, g)


@settings(max_examples=40, deadline=None)
@given(words2, st.integers(1, 4))
def test_per_sets_nest_upward(bits, n):
    x = periodic_from(bits)
    coarse = per_set(x, max(1, n - 1))
    fine = per_set(x, n)
    assert fine.contains_set(coarse)


weights4 = st.lists(st.integers(1, 5), min_size=1, max_size=4)


def measure_from(weights) -> EmpiricalMeasure:
    atoms = "abcd"[: len(weights)]
    total = sum(weights)
    return EmpiricalMeasure(
        tuple((a, Fraction(w, total)) for a, w in zip(atoms, weights))
    )


@settings(max_examples=60, deadline=None)
@given(weights4, weights4)
def test_prokhorov_discrete_collapses_to_tv(wa, wb):
    mu, nu = measure_from(wa), measure_from(wb)
    tv = total_variation(mu, nu)
    dp = prokhorov_distance(mu, nu)
    assert dp == min(tv, 1) if tv < 1 else dp <= 1
    assert dp == prokhorov_distance(nu, mu)
