"""Group arithmetic in Z^d, box Følner sets and validated subgroup chains.

Elements of Z^d are plain int tuples; the group operation is componentwise
addition and the identity is the zero vector.  Finite subsets are kept in the
canonical enumeration (lexicographic on coordinates), so every scan in the
package is deterministic.

A chain with scales q_1 | q_2 | ... | q_N describes the nested finite-index
subgroups H_n = (q_n Z)^d with fundamental domains F_n = [0, q_n)^d.  Level 0
is the whole group with F_0 = {e}.  Construction machine-checks the four
conditions: nesting, nested domains, fundamental-domain property, and the
tiling F_{i+1} = ⊔_{v ∈ F_{i+1} ∩ H_i} (F_i + v).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import LevelOutOfRange, NonDividingScales

Element = tuple[int, ...]
FiniteSubset = tuple[Element, ...]


def aselem(g, rank: int) -> Element:
    """Normalize an element: a bare int is accepted when rank is 1."""
    if isinstance(g, int):
        g = (g,)
    g = tuple(int(c) for c in g)
    if len(g) != rank:
        raise ValueError(f"element {g} has rank {len(g)}, expected {rank}")
    return g


def identity(rank: int) -> Element:
    return (0,) * rank


def add(g: Element, h: Element) -> Element:
    return tuple(a + b for a, b in zip(g, h))


def neg(g: Element) -> Element:
    return tuple(-a for a in g)


def sub(g: Element, h: Element) -> Element:
    return tuple(a - b for a, b in zip(g, h))


def canonical(elements: Iterable[Element]) -> FiniteSubset:
    """Deduplicate and sort into the canonical (lexicographic) enumeration."""
    return tuple(sorted(set(elements)))


def box(rank: int, side: int) -> FiniteSubset:
    """The box [0, side)^rank in canonical order."""
    if side <= 0:
        raise ValueError("box side must be positive")
    return tuple(itertools.product(range(side), repeat=rank))


def rect(lo: Element, hi: Element) -> FiniteSubset:
    """Product of the inclusive intervals [lo_i, hi_i], canonical order."""
    if any(a > b for a, b in zip(lo, hi)):
        raise ValueError(f"empty rectangle {lo}..{hi}")
    return tuple(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))))


def ball(rank: int, radius: int) -> FiniteSubset:
    """The centered box [-radius, radius]^rank; contains e, closed under negation."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    return rect((-radius,) * rank, (radius,) * rank)


def translate(F: Sequence[Element], g: Element) -> FiniteSubset:
    return tuple(add(f, g) for f in F)


def folner_invariance_ratio(F: Sequence[Element], g: Element) -> Fraction:
    """|(g+F) △ F| / |F|, the Følner defect of F under the translation g."""
    base = set(F)
    shifted = {add(f, g) for f in F}
    return Fraction(len(base ^ shifted), len(base))


@dataclass(frozen=True)
class SubgroupChain:
    """Validated chain H_0 ⊃ H_1 ⊃ ... with box fundamental domains.

    Immutable after construction; use :func:`make_chain` so the chain
    conditions are actually checked.
    """

    rank: int
    scales: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.scales)

    def _check_level(self, n: int) -> None:
        if not 0 <= n <= self.depth:
            raise LevelOutOfRange(f"level {n} outside 0..{self.depth}")

    def scale(self, n: int) -> int:
        """q_n, with q_0 = 1."""
        self._check_level(n)
        return 1 if n == 0 else self.scales[n - 1]

    def domain(self, n: int) -> FiniteSubset:
        """The fundamental domain F_n = [0, q_n)^d in canonical order."""
        return box(self.rank, self.scale(n))

    def domain_size(self, n: int) -> int:
        return self.scale(n) ** self.rank

    def coset_rep(self, g, n: int) -> Element:
        """The unique element of F_n in the coset H_n + g (componentwise mod q_n)."""
        g = aselem(g, self.rank)
        q = self.scale(n)
        return tuple(c % q for c in g)

    def in_subgroup(self, g, n: int) -> bool:
        g = aselem(g, self.rank)
        q = self.scale(n)
        return all(c % q == 0 for c in g)

    def subgroup_in_domain(self, n: int, m: int) -> FiniteSubset:
        """H_n ∩ F_m for n ≤ m, canonical order."""
        self._check_level(n)
        self._check_level(m)
        if n > m:
            raise LevelOutOfRange(f"need n <= m, got {n} > {m}")
        qn, qm = self.scale(n), self.scale(m)
        return tuple(itertools.product(range(0, qm, qn), repeat=self.rank))

    def to_json(self) -> dict:
        return {"rank": self.rank, "scales": list(self.scales)}


def make_chain(rank: int, scales: Sequence[int]) -> SubgroupChain:
    """Build and validate a chain from scales q_1 | q_2 | ... | q_N.

    Raises NonDividingScales when some q_i does not divide q_{i+1}; that is
    exactly the situation in which the tiling condition (4) must fail.
    """
    if rank < 1:
        raise ValueError("rank must be a positive integer")
    scales = tuple(int(q) for q in scales)
    if not scales or any(q < 1 for q in scales):
        raise ValueError("scales must be positive integers")
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise ValueError(f"scales must be strictly increasing: {scales}")
    for a, b in zip((1,) + scales, scales):
        if b % a != 0:
            raise NonDividingScales(f"{a} does not divide {b}")

    chain = SubgroupChain(rank=rank, scales=scales)
    _verify_chain_conditions(chain)
    return chain


def _verify_chain_conditions(chain: SubgroupChain) -> None:
    """Exhaustively check the four chain conditions on every level."""
    # (2) F_0 = {e} and nested domains.
    assert chain.domain(0) == (identity(chain.rank),)
    for i in range(chain.depth):
        lower, upper = set(chain.domain(i)), set(chain.domain(i + 1))
        if not lower <= upper:
            raise NonDividingScales(f"F_{i} not contained in F_{i + 1}")
    for i in range(chain.depth + 1):
        dom = chain.domain(i)
        # (3) F_i meets every coset of H_i exactly once.
        reps = {chain.coset_rep(f, i) for f in dom}
        if len(reps) != len(dom) or reps != set(dom):
            raise NonDividingScales(f"F_{i} is not a fundamental domain for H_{i}")
        if i == 0:
            continue
        # (1) H_i within the window is contained in H_{i-1}.
        for v in chain.subgroup_in_domain(i, i):
            if not chain.in_subgroup(v, i - 1):
                raise NonDividingScales(f"H_{i} not contained in H_{i - 1}")
    # (4) F_{i+1} decomposes as the disjoint union of translates F_i + v.
    for i in range(chain.depth):
        tiles: set[Element] = set()
        block = chain.domain(i)
        for v in chain.subgroup_in_domain(i, i + 1):
            piece = set(translate(block, v))
            if tiles & piece:
                raise NonDividingScales(f"translates of F_{i} overlap inside F_{i + 1}")
            tiles |= piece
        if tiles != set(chain.domain(i + 1)):
            raise NonDividingScales(f"translates of F_{i} do not exhaust F_{i + 1}")


def folner_set(chain: SubgroupChain, n: int) -> FiniteSubset:
    """The level-n Følner box of the chain."""
    return chain.domain(n)


def box_sequence(rank: int, lengths: Sequence[int]) -> list[FiniteSubset]:
    """Nested boxes [0, L)^rank for a nondecreasing length sequence."""
    lengths = [int(L) for L in lengths]
    if any(L <= 0 for L in lengths):
        raise ValueError("box lengths must be positive")
    if any(b < a for a, b in zip(lengths, lengths[1:])):
        raise ValueError("box lengths must be nondecreasing")
    return [box(rank, L) for L in lengths]
