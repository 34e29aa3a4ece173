"""Toeplitz machinery: skeleton checks, regularity profiles, periodic
approximation, odometer coordinates, the binary path Ψ, interpolation, and
the positive-entropy builder.

The path Ψ(t) splits the group into a "one" side D(t) and a "zero" side
E(t), built level by level: at stage m the single undecided coset of the
previous level splits into k fresh cosets of H_m (each of Banach density
1/|F_m|), a maximal prefix of them joins D(t) subject to D*'s budget t, the
suffix joins E(t), and at most one coset stays undecided.  The quota at
stage m is q = max{0 ≤ l ≤ k : l/|F_m| ≤ t - D*(D(t))}, i.e. fresh cosets
are weighted by their own density.  (The variant that weights them by 1/k
instead is available behind ``literal_quota=True``; on the dyadic chain with
t = 1/4 it stalls with D(t) empty and the origin in neither side, which is
why it is not the default.)

Enumeration order everywhere is the canonical lexicographic order of the
translates v in H_{m-1} ∩ F_m applied to the undecided representative, so
the whole construction is deterministic and s ≤ t gives the nesting
D_m(s) ⊆ D_m(t) at every level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .configs import (
    Alphabet,
    CosetSet,
    Letter,
    Oracle,
    Periodic,
    ToeplitzTable,
    evaluate,
    per_set,
    per_set_letter,
)
from .entropy import EntropyEstimate, estimate_from_count
from .errors import ChainMismatch, ChainTooShallow, InconsistentCylinders, UnresolvedCells
from .groups import Element, SubgroupChain, add, aselem, identity, sub


# ---------------------------------------------------------------------------
# skeleton and regularity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkeletonReport:
    """Per-level skeleton diagnostics for a configuration.

    ``nonempty[n-1]`` records Per_{H_n} ≠ ∅; ``coverage`` is the exact
    fraction of F_N lying in ∪_{m≤N} Per_{H_m} (= Per_{H_N} by monotonicity);
    ``separation_failures`` lists pairs (n, g) of a level and a nonidentity
    representative whose shift leaves every Per_{H_n}(·, a) unchanged.
    """

    depth: int
    nonempty: tuple[bool, ...]
    coverage: Fraction
    separation_failures: tuple[tuple[int, Element], ...]

    @property
    def all_nonempty(self) -> bool:
        return all(self.nonempty)

    @property
    def separation_ok(self) -> bool:
        return not self.separation_failures

    @property
    def covers(self) -> bool:
        return self.coverage == 1


def verify_skeleton(x: Periodic | ToeplitzTable, N: int) -> SkeletonReport:
    """Check the three skeleton conditions for levels 1..N, exactly."""
    chain = x.chain
    chain._check_level(N)
    nonempty = []
    failures: list[tuple[int, Element]] = []
    letters = x.alphabet.letters
    for n in range(1, N + 1):
        nonempty.append(not per_set(x, n).is_empty)
        by_letter = {a: per_set_letter(x, n, a).reps for a in letters}
        for g in chain.domain(n):
            if g == identity(chain.rank):
                continue
            shifted_equal = all(
                frozenset(chain.coset_rep(sub(r, g), n) for r in reps) == reps
                for reps in by_letter.values()
            )
            if shifted_equal:
                failures.append((n, g))
    coverage = per_set(x, N).density()
    return SkeletonReport(N, tuple(nonempty), coverage, tuple(failures))


@dataclass(frozen=True)
class RegularityProfile:
    """Exact densities of the confirmed periodic part, level by level."""

    levels: tuple[int, ...]
    densities: tuple[Fraction, ...]
    tolerance: Fraction
    regular: bool


def regularity_profile(
    x: Periodic | ToeplitzTable,
    N: int,
    tolerance: Fraction = Fraction(1, 1024),
) -> RegularityProfile:
    """D*(Per_{H_n}(x)) for n = 1..N; flagged regular when the profile
    reaches 1 - tolerance.  The raw profile is always returned: regularity at
    finite depth is a judgment call and the flag is only a default reading."""
    densities = tuple(per_set(x, n).density() for n in range(1, N + 1))
    regular = bool(densities) and densities[-1] >= 1 - tolerance
    return RegularityProfile(tuple(range(1, N + 1)), densities, Fraction(tolerance), regular)


def periodic_approximation(x: Periodic | ToeplitzTable, n: int) -> Periodic:
    """The level-n periodic configuration agreeing with x on F_n.

    Its disagreement with x is contained in the complement of Per_{H_n}(x),
    so D*(x^{(n)}, x) ≤ 1 - D*(Per_{H_n}(x)) with both sides exact.
    """
    chain = x.chain
    chain._check_level(n)
    word = {}
    for f in chain.domain(n):
        v = evaluate(x, f)
        if v is None:
            raise UnresolvedCells(f"no value at {f}; cannot build a level-{n} word")
        word[f] = v
    return Periodic(chain, n, word, x.alphabet)


# ---------------------------------------------------------------------------
# odometer coordinates
# ---------------------------------------------------------------------------


def odometer_phi(g, chain: SubgroupChain, N: int | None = None) -> tuple[Element, ...]:
    """φ(g): the residue of g in each quotient G/H_n for n = 1..N."""
    N = chain.depth if N is None else N
    chain._check_level(N)
    g = aselem(g, chain.rank)
    return tuple(chain.coset_rep(g, n) for n in range(1, N + 1))


def odometer_compatible(chain: SubgroupChain, residues: Sequence[Element]) -> bool:
    """Projection consistency of an inverse-limit point: r_{n+1} ≡ r_n mod H_n."""
    residues = [aselem(r, chain.rank) for r in residues]
    for n, (r, r_next) in enumerate(zip(residues, residues[1:]), start=1):
        if chain.coset_rep(r_next, n) != r:
            return False
    return all(
        chain.coset_rep(r, n) == r for n, r in enumerate(residues, start=1)
    )


def toeplitz_from_table(
    chain: SubgroupChain,
    cylinder_letters: Mapping[tuple[int, Element], Letter],
    alphabet: Alphabet,
) -> ToeplitzTable:
    """The configuration η(g) = f(φ(g)) for f constant on the given cylinders.

    A cylinder is named by (level k, residue in F_k).  Nested cylinders must
    agree; overlapping cylinders of the same name are deduplicated.
    """
    normalized: dict[tuple[int, Element], Letter] = {}
    for (k, r), a in cylinder_letters.items():
        chain._check_level(k)
        if k < 1:
            raise InconsistentCylinders("cylinder levels start at 1")
        key = (k, chain.coset_rep(r, k))
        if normalized.get(key, a) != a:
            raise InconsistentCylinders(f"cylinder {key} assigned two letters")
        normalized[key] = a
    items = sorted(normalized.items())
    for i, ((k, r), a) in enumerate(items):
        for (k2, r2), a2 in items[:i]:
            if k2 <= k and chain.coset_rep(r, k2) == r2 and a2 != a:
                raise InconsistentCylinders(
                    f"cylinder ({k}, {r}) lies inside ({k2}, {r2}) with a different letter"
                )
    assignments = tuple((k, r, a) for (k, r), a in items)
    return ToeplitzTable(chain, assignments, alphabet)


# ---------------------------------------------------------------------------
# the path t ↦ Ψ(t)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PsiPath:
    """The two-sided coset split behind Ψ(t), with its exact bookkeeping.

    ``d_cosets``/``e_cosets`` hold (level, representative) pairs in
    construction order; ``residual`` is the single still-undecided
    representative at ``depth`` (None once the split terminated, i.e.
    D(t) ∪ E(t) is everything).  D*(D(t)) ≤ t holds exactly at every level,
    with t - D*(D_m(t)) < 1/|F_m| after every stage.
    """

    t: Fraction
    chain: SubgroupChain
    depth: int
    d_cosets: tuple[tuple[int, Element], ...]
    e_cosets: tuple[tuple[int, Element], ...]
    residual: Element | None
    terminated: bool
    d_density: Fraction
    table: ToeplitzTable

    def _repset(self, cosets, level: int) -> frozenset[Element]:
        self.chain._check_level(level)
        reps = set()
        for lvl, r in cosets:
            if lvl <= level:
                for v in self.chain.subgroup_in_domain(lvl, level):
                    reps.add(add(r, v))
        return frozenset(reps)

    def d_repset(self, level: int) -> frozenset[Element]:
        """D_level(t) as a set of level-`level` representatives."""
        return self._repset(self.d_cosets, level)

    def e_repset(self, level: int) -> frozenset[Element]:
        return self._repset(self.e_cosets, level)

    def d_coset_set(self, level: int | None = None) -> CosetSet:
        level = self.depth if level is None else level
        return CosetSet(self.chain, level, self.d_repset(level))

    def d_density_at(self, level: int) -> Fraction:
        return sum(
            (Fraction(1, self.chain.domain_size(lvl)) for lvl, _ in self.d_cosets if lvl <= level),
            Fraction(0),
        )


def psi_path(
    t,
    chain: SubgroupChain,
    depth: int | None = None,
    literal_quota: bool = False,
) -> PsiPath:
    """Run the D/E split for the parameter t down to the given depth.

    Ψ(0) is all zeros, Ψ(1) all ones, and for s ≤ t the one-sides nest:
    D_m(s) ⊆ D_m(t) at every level.  The exact density of D(t) reaches t
    whenever the recursion terminates and approaches it within 1/|F_depth|
    otherwise.
    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    depth = chain.depth if depth is None else depth
    chain._check_level(depth)
    if depth < 1:
        raise ValueError("need depth at least 1")

    d_cosets: list[tuple[int, Element]] = []
    e_cosets: list[tuple[int, Element]] = []
    d_density = Fraction(0)
    residual: Element | None = identity(chain.rank)
    terminated = False

    for m in range(1, depth + 1):
        fresh = [add(v, residual) for v in chain.subgroup_in_domain(m - 1, m)]
        k = len(fresh)
        # quota_unit is what the budget comparison l·unit ≤ t - D*(D) uses;
        # the density of each fresh coset is 1/|F_m| regardless.
        density_unit = Fraction(1, chain.domain_size(m))
        quota_unit = Fraction(1, k) if literal_quota else density_unit
        budget = t - d_density
        q = min(k, int(budget / quota_unit))  # largest l with l·quota_unit ≤ budget
        d_cosets.extend((m, f) for f in fresh[:q])
        exact_here = d_density + q * quota_unit == t
        d_density += q * density_unit
        if exact_here:
            e_cosets.extend((m, f) for f in fresh[q:])
            residual = None
            terminated = True
            break
        e_cosets.extend((m, f) for f in fresh[q + 1 :])
        residual = fresh[q]

    assignments = tuple((lvl, r, "1") for lvl, r in d_cosets) + tuple(
        (lvl, r, "0") for lvl, r in e_cosets
    )
    table = ToeplitzTable(chain, assignments, Alphabet(("0", "1")))
    return PsiPath(
        t=t,
        chain=chain,
        depth=depth,
        d_cosets=tuple(d_cosets),
        e_cosets=tuple(e_cosets),
        residual=residual,
        terminated=terminated,
        d_density=d_density,
        table=table,
    )


def _select_on_coset(src: ToeplitzTable, level: int, rep: Element):
    """Assignments describing src restricted to the coset rep + H_level."""
    chain = src.chain
    for lvl, s, a in src.assignments:
        if lvl <= level and chain.coset_rep(rep, lvl) == s:
            # the whole target coset sits inside one assigned coset
            return [(level, rep, a)]
    pieces = []
    for lvl, s, a in src.assignments:
        if lvl > level and chain.coset_rep(s, level) == rep:
            pieces.append((lvl, s, a))
    return pieces


def toeplitz_interpolate(
    z: ToeplitzTable,
    z_prime: ToeplitzTable,
    t,
    depth: int | None = None,
) -> ToeplitzTable:
    """The mixture that follows z on the one-side of Ψ(t) and z' on the zero-side.

    At t = 1 this reproduces z, at t = 0 it reproduces z'; every resolved
    cell keeps a finite period (the intersection of the Ψ-coset with the
    source assignment), and its disagreement stays dominated by that of Ψ.
    """
    if z.chain != z_prime.chain:
        raise ChainMismatch("interpolation endpoints use different chains")
    chain = z.chain
    path = psi_path(t, chain, depth)
    pieces: list[tuple[int, Element, Letter]] = []
    for lvl, r in path.d_cosets:
        pieces.extend(_select_on_coset(z, lvl, r))
    for lvl, r in path.e_cosets:
        pieces.extend(_select_on_coset(z_prime, lvl, r))
    if path.residual is not None:
        # on the undecided coset the mixture is determined wherever the two
        # sources agree, whichever way the split would have gone
        level = max(path.depth, z.max_level, z_prime.max_level)
        tz = z.value_table(level)
        tzp = z_prime.value_table(level)
        for v in chain.subgroup_in_domain(path.depth, level):
            f = add(path.residual, v)
            f = chain.coset_rep(f, level)
            if tz[f] is not None and tz[f] == tzp[f]:
                pieces.append((level, f, tz[f]))
    letters = tuple(dict.fromkeys(z.alphabet.letters + z_prime.alphabet.letters))
    return ToeplitzTable(chain, tuple(pieces), Alphabet(letters))


# ---------------------------------------------------------------------------
# the positive-entropy builder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BuilderStage:
    """One round of the positive-entropy construction.

    Round n reserves G_n (``claimed``, quota r_n = ⌊(1-γ)|F_{k_n}|/2^n⌋) as
    cosets of H_{k_n}, then realizes every letter pattern on the free part
    S_n of F_{k_n} inside F_{k_{n+1}} by planting it on a fresh tiling
    translate.  ``window_count`` is the re-scanned number of distinct
    complete windows of shape F_{k_n}, the exact certificate
    window_count ≥ |𝒜|^{|S_n|} ≥ |𝒜|^{γ|F_{k_n}|}.
    """

    index: int
    level: int
    quota: int
    claimed: tuple[Element, ...]
    arbitrary_cells: tuple[Element, ...]
    free_cells: int
    next_level: int | None
    planted: int
    window_count: int


@dataclass(frozen=True)
class KriegerResult:
    gamma: Fraction
    chain: SubgroupChain
    alphabet: Alphabet
    levels: tuple[int, ...]
    stages: tuple[BuilderStage, ...]
    skeleton: ToeplitzTable
    cells: Mapping[Element, Letter]

    def value_at(self, g) -> Letter | None:
        g = aselem(g, self.chain.rank)
        v = self.skeleton.lookup(g)
        if v is not None:
            return v
        return self.cells.get(g)

    def as_oracle(self) -> Oracle:
        """The constructed block as a boxed configuration on F_{k_last}."""
        side = self.chain.scale(self.levels[-1])
        return Oracle(
            rank=self.chain.rank,
            lo=(0,) * self.chain.rank,
            hi=(side - 1,) * self.chain.rank,
            rule=lambda g: self.value_at(g),
            alphabet=self.alphabet,
            name=f"krieger(gamma={self.gamma})",
        )

    def claimed_cells_within(self, n: int) -> int:
        """Σ_{i≤n} r_i · |F_{k_n}| / |F_{k_i}|: skeleton cells inside F_{k_n}."""
        size_n = self.chain.domain_size(self.levels[n])
        return sum(
            st.quota * size_n // self.chain.domain_size(st.level)
            for st in self.stages[: n + 1]
        )

    def entropy_at(self, n: int) -> EntropyEstimate:
        """Certified lower-bound entropy estimate at construction level k_n."""
        st = self.stages[n]
        return estimate_from_count(
            st.window_count,
            st.level,
            self.chain.domain_size(st.level),
            len(self.alphabet),
            exact=False,
        )


def meets_power_bound(count: int, exponent: Fraction, base: int) -> bool:
    """Exact check of count ≥ base^exponent for a rational exponent ≥ 0."""
    exponent = Fraction(exponent)
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    return count ** exponent.denominator >= base**exponent.numerator


def krieger_construct(
    gamma,
    chain: SubgroupChain,
    alphabet: Alphabet,
    stages: int = 2,
) -> KriegerResult:
    """Build a coset table whose pattern counts certify entropy ≥ γ·log|𝒜|.

    Runs the reserve-and-plant loop for the requested number of rounds,
    starting from k_0 = 0 (so r_0 = ⌊(1-γ)·1⌋ = 0 and the reserved fraction
    Σ r_i/|F_{k_i}| stays below (1-γ) — the i = 0 term vanishes, which is
    exactly what keeps the free part of every F_{k_n} at least γ|F_{k_n}|).
    Raises ChainTooShallow when no level offers enough tiling translates.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    if stages < 1:
        raise ValueError("need at least one stage")
    nletters = len(alphabet)
    if nletters < 2:
        raise ValueError("need at least two letters")
    letters = alphabet.letters

    rank = chain.rank
    cells: dict[Element, Letter] = {identity(rank): letters[0]}  # arbitrary seed
    claims: list[tuple[int, Element, Letter]] = []

    def value_at(g: Element) -> Letter | None:
        for lvl, rep, a in claims:
            if chain.coset_rep(g, lvl) == rep:
                return a
        return cells.get(g)

    def in_claimed(g: Element) -> bool:
        return any(chain.coset_rep(g, lvl) == rep for lvl, rep, _ in claims)

    levels = [0]
    quotas = [0]  # r_0 = floor((1-gamma)·|F_0|) = 0 for gamma in (0,1)
    claimed_per_stage: list[tuple[Element, ...]] = [()]
    arbitrary_per_stage: list[tuple[Element, ...]] = [()]
    records: list[BuilderStage] = []

    for n in range(stages):
        k_n = levels[n]
        dom = chain.domain(k_n)
        free = [f for f in dom if not in_claimed(f)]
        s_n = len(free)
        want_patterns = nletters**s_n
        existing = tuple(cells.get(f) for f in free)
        have_existing = all(v is not None for v in existing)
        needed_fresh = want_patterns - (1 if have_existing else 0)

        k_next = None
        for m in range(k_n + 1, chain.depth + 1):
            copies = chain.domain_size(m) // chain.domain_size(k_n)
            if copies >= nletters ** len(dom) and copies - 1 >= needed_fresh:
                k_next = m
                break
        if k_next is None:
            raise ChainTooShallow(
                f"no level offers {nletters ** len(dom)} tiling copies of F_{k_n}"
            )

        translates = chain.subgroup_in_domain(k_n, k_next)
        fresh_translates = [v for v in translates if v != identity(rank)]
        patterns = [
            p for p in itertools.product(letters, repeat=s_n) if p != existing
        ]
        assert len(patterns) == needed_fresh <= len(fresh_translates)
        for v, pattern in zip(fresh_translates, patterns):
            for f, letter in zip(free, pattern):
                cell = add(f, v)
                assert cell not in cells, "planting would overwrite a defined cell"
                cells[cell] = letter
        planted = len(patterns)

        windows = set()
        for v in translates:
            values = tuple(value_at(add(f, v)) for f in dom)
            if all(x is not None for x in values):
                windows.add(values)
        window_count = len(windows)
        assert window_count >= want_patterns

        # reserve G_{n+1} inside F_{k_next}: first r cells avoiding older claims
        r = int((1 - gamma) * chain.domain_size(k_next) / 2 ** (n + 1))
        reserved: list[Element] = []
        arbitrary: list[Element] = []
        for f in chain.domain(k_next):
            if len(reserved) == r:
                break
            if in_claimed(f):
                continue
            val = value_at(f)
            if val is None:
                val = letters[0]
                arbitrary.append(f)
            cells[f] = val
            claims.append((k_next, f, val))
            reserved.append(f)

        levels.append(k_next)
        quotas.append(r)
        claimed_per_stage.append(tuple(reserved))
        arbitrary_per_stage.append(tuple(arbitrary))
        records.append(
            BuilderStage(
                index=n,
                level=k_n,
                quota=quotas[n],
                claimed=claimed_per_stage[n],
                arbitrary_cells=arbitrary_per_stage[n],
                free_cells=s_n,
                next_level=k_next,
                planted=planted,
                window_count=window_count,
            )
        )

    # terminal record for the last reached level (no planting beyond it)
    records.append(
        BuilderStage(
            index=stages,
            level=levels[-1],
            quota=quotas[-1],
            claimed=claimed_per_stage[-1],
            arbitrary_cells=arbitrary_per_stage[-1],
            free_cells=sum(1 for f in chain.domain(levels[-1]) if not in_claimed(f)),
            next_level=None,
            planted=0,
            window_count=0,
        )
    )

    skeleton = ToeplitzTable(chain, tuple(claims), alphabet)
    return KriegerResult(
        gamma=gamma,
        chain=chain,
        alphabet=alphabet,
        levels=tuple(levels),
        stages=tuple(records),
        skeleton=skeleton,
        cells=dict(cells),
    )


def regular_table(
    chain: SubgroupChain,
    letters: Sequence[Letter] = ("a", "b"),
    depth: int | None = None,
    resolve_tail: bool = True,
) -> ToeplitzTable:
    """A regular coset table: one undecided coset per level, shrinking to
    density 1/|F_n|, letters alternating by level.

    With ``resolve_tail`` the final level assigns everything, so the table is
    fully resolved (and therefore periodic at the last level); without it,
    the last residual coset stays Unknown and the confirmed periodic part has
    density exactly 1 - 1/|F_n| at every level.
    """
    if len(set(letters)) < 2:
        raise ValueError("need at least two distinct letters to alternate")
    depth = chain.depth if depth is None else depth
    chain._check_level(depth)
    if depth < 1:
        raise ValueError("need depth at least 1")
    assignments = []
    residual = identity(chain.rank)
    for n in range(1, depth + 1):
        fresh = [add(v, residual) for v in chain.subgroup_in_domain(n - 1, n)]
        letter = letters[(n - 1) % len(letters)]
        keep = fresh if (n == depth and resolve_tail) else fresh[:-1]
        assignments.extend((n, f, letter) for f in keep)
        residual = fresh[-1]
    return ToeplitzTable(chain, tuple(assignments), Alphabet(tuple(dict.fromkeys(letters))))
