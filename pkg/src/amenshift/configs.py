"""Finite descriptions of shift configurations and their periodicity structure.

A configuration is a point of 𝒜^G for G = Z^d, described in one of three
finite ways:

* ``Periodic`` — a total word on the level-k fundamental domain, repeated on
  every coset of H_k;
* ``ToeplitzTable`` — a list of coset assignments (level, representative,
  letter); cells covered by no assignment are explicitly Unknown;
* ``Oracle`` — an evaluation rule on a declared finite box, Unknown outside.

Unknown is the value ``None``, never an exception: any aggregate over a
region containing Unknown must report an interval instead of guessing.

The shift action follows (h·x)(g) = x(g+h), so shifting by h moves the
pattern of x at g+h to g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import ChainMismatch, InexactVariant, UnknownMembership
from .groups import (
    Element,
    FiniteSubset,
    SubgroupChain,
    add,
    aselem,
    rect,
    sub,
)

UNKNOWN = None

Letter = str


@dataclass(frozen=True)
class Alphabet:
    """Finite set of letters with the discrete metric ρ(a,b) = [a ≠ b].

    The discrete metric separates distinct cylinders at distance 1 > 1/2 and
    keeps every Δ_F sum an integer, so all densities stay rational.
    """

    letters: tuple[Letter, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("alphabet letters must be distinct")

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, a: Letter) -> bool:
        return a in self.letters

    @staticmethod
    def distance(a: Letter, b: Letter) -> int:
        return 0 if a == b else 1


BINARY = Alphabet(("0", "1"))


@dataclass(frozen=True)
class CosetSet:
    """A union of cosets of H_n, stored as level + representatives in F_n.

    Such sets are exactly the sets whose upper and lower Banach densities
    coincide and equal |reps| / |F_n|.
    """

    chain: SubgroupChain
    level: int
    reps: frozenset[Element]

    def __post_init__(self):
        dom = set(self.chain.domain(self.level))
        if not set(self.reps) <= dom:
            raise ValueError("representatives must lie in the fundamental domain")

    @classmethod
    def make(cls, chain: SubgroupChain, level: int, reps) -> "CosetSet":
        return cls(chain, level, frozenset(aselem(r, chain.rank) for r in reps))

    @classmethod
    def empty(cls, chain: SubgroupChain, level: int) -> "CosetSet":
        return cls(chain, level, frozenset())

    @classmethod
    def full(cls, chain: SubgroupChain, level: int) -> "CosetSet":
        return cls(chain, level, frozenset(chain.domain(level)))

    @property
    def is_empty(self) -> bool:
        return not self.reps

    def __contains__(self, g) -> bool:
        return self.chain.coset_rep(g, self.level) in self.reps

    def density(self) -> Fraction:
        return Fraction(len(self.reps), self.chain.domain_size(self.level))

    def complement(self) -> "CosetSet":
        dom = frozenset(self.chain.domain(self.level))
        return CosetSet(self.chain, self.level, dom - self.reps)

    def at_level(self, m: int) -> "CosetSet":
        """The same set re-represented at a deeper level m ≥ level."""
        if m < self.level:
            raise ValueError("can only refine to a deeper level")
        shifts = self.chain.subgroup_in_domain(self.level, m)
        reps = frozenset(add(r, v) for r in self.reps for v in shifts)
        return CosetSet(self.chain, m, reps)

    def _aligned(self, other: "CosetSet") -> tuple["CosetSet", "CosetSet"]:
        if self.chain != other.chain:
            raise ChainMismatch("coset sets live over different chains")
        m = max(self.level, other.level)
        return self.at_level(m), other.at_level(m)

    def union(self, other: "CosetSet") -> "CosetSet":
        a, b = self._aligned(other)
        return CosetSet(a.chain, a.level, a.reps | b.reps)

    def intersect(self, other: "CosetSet") -> "CosetSet":
        a, b = self._aligned(other)
        return CosetSet(a.chain, a.level, a.reps & b.reps)

    def difference(self, other: "CosetSet") -> "CosetSet":
        a, b = self._aligned(other)
        return CosetSet(a.chain, a.level, a.reps - b.reps)

    def contains_set(self, other: "CosetSet") -> bool:
        a, b = self._aligned(other)
        return b.reps <= a.reps


# ---------------------------------------------------------------------------
# configuration variants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Periodic:
    """x(g) = word(g mod q_k): a total word on F_k repeated on H_k-cosets."""

    chain: SubgroupChain
    level: int
    word: Mapping[Element, Letter]
    alphabet: Alphabet

    def __post_init__(self):
        dom = self.chain.domain(self.level)
        normalized = {aselem(k, self.chain.rank): v for k, v in self.word.items()}
        if set(normalized) != set(dom):
            raise ValueError(f"word must be total on the level-{self.level} domain")
        bad = [v for v in normalized.values() if v not in self.alphabet]
        if bad:
            raise ValueError(f"letters {bad} not in alphabet")
        object.__setattr__(self, "word", normalized)

    @property
    def rank(self) -> int:
        return self.chain.rank


@dataclass(frozen=True)
class ToeplitzTable:
    """Coset assignments (level n ≥ 1, representative in F_n, letter).

    Assignments at equal level are disjoint; an assignment nested inside a
    coarser one must agree with it.  Cells covered by no assignment are
    Unknown, and every aggregate over them is reported as an interval.
    """

    chain: SubgroupChain
    assignments: tuple[tuple[int, Element, Letter], ...]
    alphabet: Alphabet

    def __post_init__(self):
        seen: dict[tuple[int, Element], Letter] = {}
        normalized = []
        for level, r, a in self.assignments:
            if not 1 <= level <= self.chain.depth:
                raise ValueError(f"assignment level {level} outside 1..{self.chain.depth}")
            r = self.chain.coset_rep(r, level)
            if a not in self.alphabet:
                raise ValueError(f"letter {a!r} not in alphabet")
            key = (level, r)
            if key in seen:
                if seen[key] != a:
                    raise ValueError(f"conflicting letters on coset {key}")
                continue
            seen[key] = a
            normalized.append((level, r, a))
        # nested assignments must agree: a deeper coset inside an assigned
        # coarser coset carries the coarser letter already.
        by_level = sorted(normalized)
        for i, (ln, rn, an) in enumerate(by_level):
            for lm, rm, am in by_level[:i]:
                if ln > lm and self.chain.coset_rep(rn, lm) == rm and an != am:
                    raise ValueError(
                        f"level-{ln} assignment at {rn} conflicts with level-{lm} at {rm}"
                    )
        object.__setattr__(self, "assignments", tuple(by_level))

    @property
    def rank(self) -> int:
        return self.chain.rank

    @property
    def max_level(self) -> int:
        return max((lvl for lvl, _, _ in self.assignments), default=1)

    def lookup(self, g) -> Letter | None:
        """Letter of the deepest assignment whose coset contains g."""
        g = aselem(g, self.chain.rank)
        best = None
        for level, r, a in self.assignments:
            if self.chain.coset_rep(g, level) == r:
                best = a  # assignments are sorted by level, deepest wins
        return best

    def value_table(self, level: int) -> dict[Element, Letter | None]:
        """Values on F_level, one entry per H_level-coset (Unknown = None).

        Requires level ≥ max assignment level so the table is coset-constant.
        """
        if level < self.max_level:
            raise ValueError(f"need level >= {self.max_level} to tabulate")
        table: dict[Element, Letter | None] = {f: None for f in self.chain.domain(level)}
        for lvl, r, a in self.assignments:  # by level, deepest written last
            for v in self.chain.subgroup_in_domain(lvl, level):
                table[add(r, v)] = a
        return table

    def unresolved_set(self, level: int) -> CosetSet:
        table = self.value_table(level)
        return CosetSet(self.chain, level, frozenset(f for f, v in table.items() if v is None))

    def fully_resolved(self, level: int | None = None) -> bool:
        level = self.max_level if level is None else level
        return not self.unresolved_set(level).reps


@dataclass(frozen=True)
class Oracle:
    """A rule on a declared box [lo, hi]; Unknown outside, never a guess.

    Exists to express hand-built counterexample configurations; exact Per
    sets and densities are undecidable from a bounded window, so the exact
    operations reject this variant.
    """

    rank: int
    lo: Element
    hi: Element
    rule: Callable[[Element], Letter]
    alphabet: Alphabet
    name: str = "custom"
    offset: Element = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.offset is None:
            object.__setattr__(self, "offset", (0,) * self.rank)
        if len(self.lo) != self.rank or len(self.hi) != self.rank:
            raise ValueError("box bounds must match rank")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("declared box is empty")

    def in_box(self, g: Element) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lo, g, self.hi))

    def box_elements(self) -> FiniteSubset:
        return rect(self.lo, self.hi)


Configuration = Periodic | ToeplitzTable | Oracle


def evaluate(x: Configuration, g) -> Letter | None:
    """Point evaluation; returns None (Unknown) where x is undetermined."""
    if isinstance(x, Periodic):
        g = aselem(g, x.chain.rank)
        return x.word[x.chain.coset_rep(g, x.level)]
    if isinstance(x, ToeplitzTable):
        return x.lookup(g)
    if isinstance(x, Oracle):
        g = aselem(g, x.rank)
        if not x.in_box(g):
            return UNKNOWN
        return x.rule(add(g, x.offset))
    raise TypeError(f"not a configuration: {x!r}")


def shift(h, x: Configuration) -> Configuration:
    """The shifted configuration h·x with (h·x)(g) = x(g+h); variant preserved."""
    if isinstance(x, Periodic):
        h = aselem(h, x.chain.rank)
        word = {f: x.word[x.chain.coset_rep(add(f, h), x.level)] for f in x.word}
        return Periodic(x.chain, x.level, word, x.alphabet)
    if isinstance(x, ToeplitzTable):
        h = aselem(h, x.chain.rank)
        moved = tuple(
            (lvl, x.chain.coset_rep(sub(r, h), lvl), a) for lvl, r, a in x.assignments
        )
        return ToeplitzTable(x.chain, moved, x.alphabet)
    if isinstance(x, Oracle):
        h = aselem(h, x.rank)
        return Oracle(
            rank=x.rank,
            lo=sub(x.lo, h),
            hi=sub(x.hi, h),
            rule=x.rule,
            alphabet=x.alphabet,
            name=x.name,
            offset=add(x.offset, h),
        )
    raise TypeError(f"not a configuration: {x!r}")


# ---------------------------------------------------------------------------
# periodicity structure
# ---------------------------------------------------------------------------


def _exact_chain(x: Configuration) -> SubgroupChain:
    if isinstance(x, Oracle):
        raise InexactVariant("exact Per sets are undecidable from a bounded window")
    return x.chain


def _coset_values(x: Periodic | ToeplitzTable, f: Element, n: int, depth: int) -> list:
    """Values of x on the H_n-coset of f, sampled one per H_depth-subcoset."""
    chain = x.chain
    return [evaluate(x, add(f, v)) for v in chain.subgroup_in_domain(n, depth)]


def per_set(x: Configuration, n: int) -> CosetSet:
    """Per_{H_n}(x): positions whose whole H_n-coset is determined and constant.

    For a partial coset table a coset with Unknown cells is never counted;
    the result is the confirmed periodic part.
    """
    chain = _exact_chain(x)
    chain._check_level(n)
    if isinstance(x, Periodic) and n >= x.level:
        return CosetSet.full(chain, n)
    depth = x.level if isinstance(x, Periodic) else max(n, x.max_level)
    reps = []
    for f in chain.domain(n):
        vals = _coset_values(x, f, n, depth)
        if vals[0] is not None and all(v == vals[0] for v in vals):
            reps.append(f)
    return CosetSet(chain, n, frozenset(reps))


def per_set_letter(x: Configuration, n: int, a: Letter) -> CosetSet:
    """Per_{H_n}(x, a): positions whose whole H_n-coset is constantly a."""
    chain = _exact_chain(x)
    chain._check_level(n)
    depth = x.level if isinstance(x, Periodic) else max(n, x.max_level)
    depth = max(depth, n)
    reps = []
    for f in chain.domain(n):
        vals = _coset_values(x, f, n, depth)
        if all(v == a for v in vals):
            reps.append(f)
    return CosetSet(chain, n, frozenset(reps))


# ---------------------------------------------------------------------------
# disagreement sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetDisagreement:
    """Exact disagreement structure of two same-chain configurations.

    ``confirmed`` holds the cosets where both sides are determined and differ;
    ``unresolved`` the cosets where at least one side is Unknown.  The true
    disagreement set lies between ``confirmed`` and their union.
    """

    confirmed: CosetSet
    unresolved: CosetSet

    @property
    def exact(self) -> bool:
        return self.unresolved.is_empty


@dataclass(frozen=True)
class SampledDisagreement:
    """Pointwise disagreement flags over a finite window (None = unresolved)."""

    window: FiniteSubset
    flags: Mapping[Element, bool | None]


def _full_table(x: Periodic | ToeplitzTable, level: int) -> dict[Element, Letter | None]:
    if isinstance(x, Periodic):
        chain = x.chain
        return {f: x.word[chain.coset_rep(f, x.level)] for f in chain.domain(level)}
    return x.value_table(level)


def disagreement_set(x: Configuration, z: Configuration, window: FiniteSubset | None = None):
    """Where two configurations differ.

    Exact (a :class:`CosetDisagreement`) when both sides are Periodic or
    coset tables over the same chain; otherwise a window must be supplied and
    a :class:`SampledDisagreement` over it is returned.
    """
    exact_kinds = (Periodic, ToeplitzTable)
    if isinstance(x, exact_kinds) and isinstance(z, exact_kinds):
        if x.chain != z.chain:
            if isinstance(x, ToeplitzTable) and isinstance(z, ToeplitzTable):
                raise ChainMismatch("coset tables use different chains")
        else:
            lev = lambda c: c.level if isinstance(c, Periodic) else c.max_level
            level = max(lev(x), lev(z))
            tx, tz = _full_table(x, level), _full_table(z, level)
            confirmed, unresolved = [], []
            for f in x.chain.domain(level):
                a, b = tx[f], tz[f]
                if a is None or b is None:
                    unresolved.append(f)
                elif a != b:
                    confirmed.append(f)
            return CosetDisagreement(
                CosetSet(x.chain, level, frozenset(confirmed)),
                CosetSet(x.chain, level, frozenset(unresolved)),
            )
    if window is None:
        raise ValueError("pair admits no exact disagreement set; supply a window")
    flags: dict[Element, bool | None] = {}
    for g in window:
        a, b = evaluate(x, g), evaluate(z, g)
        flags[g] = None if a is None or b is None else (a != b)
    return SampledDisagreement(tuple(window), flags)


def require_known(value: Letter | None, g: Element) -> Letter:
    if value is None:
        raise UnknownMembership(f"configuration is Unknown at {g}")
    return value


# ---------------------------------------------------------------------------
# builtin oracle rules
# ---------------------------------------------------------------------------


def geometric_box_lengths(eps: Fraction, count: int, base: int = 1) -> list[int]:
    """Box lengths L_n with L_n/L_{n+1} → 1-eps: L_{n+1} = round(L_n/(1-eps)).

    Rounding is to the nearest integer (ties up) with a floor of L_n + 1 so
    the boxes stay strictly nested.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    ratio = 1 / (1 - eps)
    lengths = [base]
    for _ in range(count):
        nxt = lengths[-1] * ratio
        rounded = int(nxt) + (1 if nxt - int(nxt) >= Fraction(1, 2) else 0)
        lengths.append(max(rounded, lengths[-1] + 1))
    return lengths


def block_alternating(eps, radius: int, levels: int = 64) -> Oracle:
    """Ones on F_1 and on the odd shells F_{2n+1} \\ F_{2n} of geometric boxes.

    The boxes are [0, L_n) with geometric lengths of ratio 1/(1-eps); along
    that sequence the letter-1 frequency oscillates between 1/(2-eps) (odd
    levels) and (1-eps)/(2-eps) (even levels), so the distribution measures
    split into two separated clusters.
    """
    eps = Fraction(eps)
    lengths = geometric_box_lengths(eps, levels)

    def rule(g: Element) -> Letter:
        (n,) = g
        if n < 0:
            return "0"
        if n < lengths[1]:  # F_1
            return "1"
        for k in range(2, len(lengths) - 1):
            if lengths[k] <= n < lengths[k + 1]:
                return "1" if (k % 2 == 0) else "0"  # shell F_{k+1} \ F_k, odd k+1
        return "0"

    return Oracle(
        rank=1,
        lo=(-radius,),
        hi=(radius,),
        rule=rule,
        alphabet=BINARY,
        name=f"block_alternating({eps})",
    )


def _champernowne_digit(n: int, _cache: dict = {}) -> str:
    """Digit n (0-based) of the binary concatenation 1 10 11 100 101 ..."""
    digits = _cache.setdefault("digits", [])
    nums = _cache.setdefault("next", [1])
    while n >= len(digits):
        digits.extend(bin(nums[0])[2:])
        nums[0] += 1
    return digits[n]


def champernowne_binary(radius: int) -> Oracle:
    """Binary Champernowne-style concatenation on Z+, the letter 0 on Z-.

    Contains every finite binary word, so its pattern counts saturate and
    its entropy estimates approach log 2.
    """

    def rule(g: Element) -> Letter:
        (n,) = g
        return "0" if n < 0 else _champernowne_digit(n)

    return Oracle(
        rank=1,
        lo=(-radius,),
        hi=(radius,),
        rule=rule,
        alphabet=BINARY,
        name="champernowne_binary",
    )


BUILTIN_ORACLES = {
    "champernowne_binary": champernowne_binary,
    "block_alternating": block_alternating,
}


# ---------------------------------------------------------------------------
# JSON descriptors
# ---------------------------------------------------------------------------


def _parse_element(raw, rank: int) -> Element:
    if isinstance(raw, str):
        raw = [int(c) for c in raw.split(",")]
    return aselem(raw, rank)


def _element_key(g: Element) -> str:
    return ",".join(str(c) for c in g)


def config_from_descriptor(desc: Mapping, chain: SubgroupChain | None) -> Configuration:
    """Build a configuration from its JSON descriptor.

    Periodic: {"variant":"periodic","level":k,"word":{"0":"a","1":"b"}}
    Table:    {"variant":"toeplitz","assignments":[[n,rep,letter],...]}
    Oracle:   {"variant":"oracle","box":R,"rule":"champernowne_binary"}
              or rule "block_alternating(1/2)"
    Word keys and representatives are ints or comma-joined coordinates.
    """
    variant = desc.get("variant")
    if variant == "periodic":
        if chain is None:
            raise ValueError("periodic descriptor needs a chain")
        word = {
            _parse_element(k, chain.rank): str(v) for k, v in desc["word"].items()
        }
        letters = tuple(sorted(set(word.values())))
        return Periodic(chain, int(desc["level"]), word, Alphabet(letters))
    if variant == "toeplitz":
        if chain is None:
            raise ValueError("toeplitz descriptor needs a chain")
        assignments = tuple(
            (int(n), _parse_element(rep, chain.rank), str(a))
            for n, rep, a in desc["assignments"]
        )
        letters = tuple(sorted({a for _, _, a in assignments}))
        return ToeplitzTable(chain, assignments, Alphabet(letters))
    if variant == "oracle":
        radius = int(desc["box"])
        rule = str(desc["rule"])
        if rule == "champernowne_binary":
            return champernowne_binary(radius)
        if rule.startswith("block_alternating(") and rule.endswith(")"):
            eps = Fraction(rule[len("block_alternating(") : -1])
            return block_alternating(eps, radius)
        raise ValueError(f"unknown oracle rule {rule!r}")
    raise ValueError(f"unknown configuration variant {variant!r}")


def config_descriptor(x: Configuration) -> dict:
    """The JSON descriptor of a configuration (inverse of config_from_descriptor)."""
    if isinstance(x, Periodic):
        return {
            "variant": "periodic",
            "level": x.level,
            "word": {_element_key(k): v for k, v in sorted(x.word.items())},
        }
    if isinstance(x, ToeplitzTable):
        return {
            "variant": "toeplitz",
            "assignments": [[n, _element_key(r), a] for n, r, a in x.assignments],
        }
    if isinstance(x, Oracle):
        radius = max(max(abs(c) for c in x.lo), max(abs(c) for c in x.hi))
        return {"variant": "oracle", "box": radius, "rule": x.name}
    raise TypeError(f"not a configuration: {x!r}")
