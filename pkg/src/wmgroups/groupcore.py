"""Group descriptions and generic element operations.

A `GroupDesc` is an immutable, recursive description of a group together
with the operations on its elements.  Elements themselves are plain
immutable payloads (ints, `Permutation`s, lamp/wreath records defined in
the construction modules); they carry no back-pointer, so every operation
takes the description explicitly or is a method on it.

Public operations validate their arguments once and then run on the
underscore-prefixed raw implementations, which assume canonical elements;
recursive constructions call the raw layer directly so that validation
cost stays linear in the element, not exponential in nesting depth.

Concrete base groups here: the integers, finite permutation groups given
by generators, and the finitary even permutations of the positive
integers.  The wreath/HNN/tower descriptions live in `lamplighter` and
`theta`.
"""

from __future__ import annotations

import enum
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterator

from .errors import CapabilityError, ResourceLimitError, VariantMismatchError
from .perms import IDENTITY_PERM, Permutation


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    def __str__(self) -> str:
        return self.value


class GroupDesc(ABC):
    """Immutable description of a group; all operations are pure."""

    @abstractmethod
    def identity(self) -> Any: ...

    @abstractmethod
    def check(self, a) -> None:
        """Raise VariantMismatchError unless `a` is a canonical element."""

    # raw layer: assumes canonical inputs
    @abstractmethod
    def _mul(self, a, b): ...

    @abstractmethod
    def _inv(self, a): ...

    def _eq(self, a, b) -> bool:
        return a == b

    def _is_identity(self, a) -> bool:
        return self._eq(a, self.identity())

    def _is_positive(self, a) -> bool:
        raise CapabilityError(f"{self} carries no order")

    # public layer: validates once, then delegates
    def mul(self, a, b):
        self.check(a)
        self.check(b)
        return self._mul(a, b)

    def inv(self, a):
        self.check(a)
        return self._inv(a)

    def eq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        return self._eq(a, b)

    def is_identity(self, a) -> bool:
        self.check(a)
        return self._is_identity(a)

    @property
    def is_ordered(self) -> bool:
        return False

    @property
    def order_two_sided(self) -> bool:
        return False

    def is_positive(self, a) -> bool:
        """Membership of `a` in the positive cone."""
        self.check(a)
        return self._is_positive(a)

    def compare(self, a, b) -> Ordering:
        """Trichotomy via positivity of a * b^-1."""
        if not self.is_ordered:
            raise CapabilityError(f"{self} carries no order")
        self.check(a)
        self.check(b)
        d = self._mul(a, self._inv(b))
        if self._is_identity(d):
            return Ordering.EQUAL
        return Ordering.GREATER if self._is_positive(d) else Ordering.LESS

    def pow(self, a, n: int):
        """a**n by repeated squaring; n may be negative."""
        self.check(a)
        if n < 0:
            a, n = self._inv(a), -n
        acc = self.identity()
        while n:
            if n & 1:
                acc = self._mul(acc, a)
            a = self._mul(a, a)
            n >>= 1
        return acc

    def commutator(self, a, b):
        """[a, b] = a b a^-1 b^-1."""
        self.check(a)
        self.check(b)
        return self._mul(self._mul(self._mul(a, b), self._inv(a)), self._inv(b))

    def conj(self, a, b):
        """Conjugate of a by b: b a b^-1."""
        self.check(a)
        self.check(b)
        return self._mul(self._mul(b, a), self._inv(b))

    def order_of_element(self, a, bound: int) -> int | None:
        """Least n <= bound with a**n = identity, else None."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        self.check(a)
        x = a
        for n in range(1, bound + 1):
            if self._is_identity(x):
                return n
            x = self._mul(x, a)
        return None

    # deterministic structural key; used for canonical support ordering and
    # stable output, independent of any group order
    @abstractmethod
    def sort_key(self, a): ...

    @abstractmethod
    def random_element(self, rng: random.Random): ...

    def random_nontrivial(self, rng: random.Random):
        for _ in range(1000):
            a = self.random_element(rng)
            if not self._is_identity(a):
                return a
        raise ResourceLimitError(f"could not sample a nontrivial element of {self}")

    @abstractmethod
    def format_element(self, a) -> str: ...

    def __str__(self) -> str:  # DSL spelling, overridden per variant
        return type(self).__name__


@dataclass(frozen=True)
class Integers(GroupDesc):
    """The infinite cyclic group, written additively; ordered both-sided."""

    def identity(self) -> int:
        return 0

    def check(self, a) -> None:
        if type(a) is not int:
            raise VariantMismatchError(f"{a!r} is not an integer element")

    def _mul(self, a: int, b: int) -> int:
        return a + b

    def _inv(self, a: int) -> int:
        return -a

    def _is_identity(self, a: int) -> bool:
        return a == 0

    @property
    def is_ordered(self) -> bool:
        return True

    @property
    def order_two_sided(self) -> bool:
        return True

    def _is_positive(self, a: int) -> bool:
        return a > 0

    def sort_key(self, a: int):
        return a

    def random_element(self, rng: random.Random) -> int:
        return rng.randint(-9, 9)

    def generators(self) -> tuple[int, ...]:
        return (1,)

    def format_element(self, a: int) -> str:
        return str(a)

    def __str__(self) -> str:
        return "Z"


@dataclass(frozen=True)
class FinitePermutationGroup(GroupDesc):
    """Subgroup of Sym(1..degree) given by generators.

    Membership of elements in the generated subgroup is not enforced on
    arithmetic (only support and, for alternating labels, parity); the
    `elements` closure is available where full enumeration is required.
    """

    degree: int
    generators: tuple[Permutation, ...]
    label: str = ""

    def identity(self) -> Permutation:
        return IDENTITY_PERM

    def check(self, a) -> None:
        if not isinstance(a, Permutation):
            raise VariantMismatchError(f"{a!r} is not a permutation element")
        if a.pairs and (a.pairs[0][0] < 1 or a.pairs[-1][0] > self.degree):
            raise VariantMismatchError(
                f"support of {a} exceeds degree {self.degree}"
            )

    def _mul(self, a: Permutation, b: Permutation) -> Permutation:
        return a * b

    def _inv(self, a: Permutation) -> Permutation:
        return a.inverse()

    def _is_identity(self, a: Permutation) -> bool:
        return not a.pairs

    def sort_key(self, a: Permutation):
        return a.pairs

    def random_element(self, rng: random.Random) -> Permutation:
        word_len = rng.randrange(0, 9)
        out = IDENTITY_PERM
        for _ in range(word_len):
            g = rng.choice(self.generators)
            if rng.random() < 0.5:
                g = g.inverse()
            out = out * g
        return out

    def elements(self, cap: int = 10_000) -> list[Permutation]:
        """Full closure of the generators, in BFS discovery order."""
        seen = {IDENTITY_PERM}
        frontier = [IDENTITY_PERM]
        order = [IDENTITY_PERM]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = x * g
                    if y not in seen:
                        seen.add(y)
                        order.append(y)
                        nxt.append(y)
                        if len(seen) > cap:
                            raise ResourceLimitError(
                                f"group closure exceeded cap {cap}"
                            )
            frontier = nxt
        return order

    def format_element(self, a: Permutation) -> str:
        return str(a)

    def __str__(self) -> str:
        if self.label:
            return self.label
        gens = ", ".join(str(g) for g in self.generators)
        return f"perm({self.degree}; {gens})"


def symmetric_group(n: int) -> FinitePermutationGroup:
    if n < 1:
        raise ValueError("degree must be >= 1")
    gens: list[Permutation] = []
    if n >= 2:
        gens.append(Permutation.from_cycles([[1, 2]]))
    if n >= 3:
        gens.append(Permutation.from_cycles([list(range(1, n + 1))]))
    return FinitePermutationGroup(n, tuple(gens), label=f"S({n})")


def alternating_group(n: int) -> FinitePermutationGroup:
    if n < 3:
        return FinitePermutationGroup(max(n, 1), (), label=f"A({n})")
    gens = tuple(
        Permutation.from_cycles([[1, 2, k]]) for k in range(3, n + 1)
    )
    return FinitePermutationGroup(n, gens, label=f"A({n})")


@dataclass(frozen=True)
class AltFin(GroupDesc):
    """Finitary even permutations of the positive integers.

    Infinite, simple, locally finite; not orderable.  Elements are even
    `Permutation`s with arbitrary finite support.
    """

    def identity(self) -> Permutation:
        return IDENTITY_PERM

    def check(self, a) -> None:
        if not isinstance(a, Permutation):
            raise VariantMismatchError(f"{a!r} is not a permutation element")
        if a.parity != 1:
            raise VariantMismatchError(f"{a} is odd; altfin elements are even")

    def _mul(self, a: Permutation, b: Permutation) -> Permutation:
        return a * b

    def _inv(self, a: Permutation) -> Permutation:
        return a.inverse()

    def _is_identity(self, a: Permutation) -> bool:
        return not a.pairs

    def sort_key(self, a: Permutation):
        return a.pairs

    def random_element(self, rng: random.Random, window: int = 7) -> Permutation:
        pts = list(range(1, window + 1))
        rng.shuffle(pts)
        p = Permutation.from_mapping(dict(zip(range(1, window + 1), pts)))
        if p.parity != 1:
            # compose with a transposition of the first two window points
            p = p * Permutation.from_cycles([[1, 2]])
        return p

    def format_element(self, a: Permutation) -> str:
        return str(a)

    def __str__(self) -> str:
        return "altfin"


def iter_random(desc: GroupDesc, rng: random.Random, count: int) -> Iterator[Any]:
    for _ in range(count):
        yield desc.random_element(rng)
