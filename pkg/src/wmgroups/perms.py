"""Finitely supported permutations of the positive integers.

Composition follows (p*q)(x) = p(q(x)).  The canonical representation keeps
only moved points, sorted, so equality and hashing are structural.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import WordSyntaxError


@dataclass(frozen=True)
class Permutation:
    # sorted (point, image) pairs; fixed points never stored
    pairs: tuple[tuple[int, int], ...]

    @staticmethod
    def from_mapping(mapping: dict[int, int]) -> "Permutation":
        moved = {x: y for x, y in mapping.items() if x != y}
        if set(moved.keys()) != set(moved.values()):
            raise ValueError("mapping is not a bijection of its support")
        if any(x < 1 for x in moved):
            raise ValueError("points must be positive integers")
        return Permutation(tuple(sorted(moved.items())))

    @staticmethod
    def from_cycles(cycles: list[list[int]]) -> "Permutation":
        """Product of the given cycles, left factor applied last."""
        result = Permutation(())
        for cyc in cycles:
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            mapping = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
            result = result * Permutation.from_mapping(mapping)
        return result

    def __call__(self, x: int) -> int:
        for p, q in self.pairs:
            if p == x:
                return q
        return x

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def __mul__(self, other: "Permutation") -> "Permutation":
        left, right = self.as_dict(), other.as_dict()
        points = set(left) | set(right)
        return Permutation.from_mapping(
            {x: left.get(right.get(x, x), right.get(x, x)) for x in points}
        )

    def inverse(self) -> "Permutation":
        return Permutation(tuple(sorted((q, p) for p, q in self.pairs)))

    def is_identity(self) -> bool:
        return not self.pairs

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles, each rotated to start at its least point,
        listed in order of least point."""
        mapping = self.as_dict()
        seen: set[int] = set()
        out = []
        for start in sorted(mapping):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = mapping[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = mapping[x]
            out.append(tuple(cyc))
        return tuple(out)

    @property
    def parity(self) -> int:
        """+1 for even permutations, -1 for odd."""
        sign = 1
        for cyc in self.cycles():
            if len(cyc) % 2 == 0:
                sign = -sign
        return sign

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(x) for x in cyc) + ")" for cyc in cycs)

    __repr__ = __str__


IDENTITY_PERM = Permutation(())


def parse_permutation(text: str) -> Permutation:
    """Parse disjoint-cycle notation, e.g. "(1 2)(3 4 5)"; "()" is the identity.

    Non-disjoint cycles are accepted and composed left-to-right as written.
    """
    i, n = 0, len(text)
    cycles: list[list[int]] = []
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise WordSyntaxError("expected '(' in cycle notation", i)
        i += 1
        cyc: list[int] = []
        while True:
            while i < n and (text[i].isspace() or text[i] == ","):
                i += 1
            if i >= n:
                raise WordSyntaxError("unterminated cycle", i)
            if text[i] == ")":
                i += 1
                break
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j == i:
                raise WordSyntaxError(f"unexpected character {text[i]!r} in cycle", i)
            point = int(text[i:j])
            if point < 1:
                raise WordSyntaxError("points must be positive", i)
            cyc.append(point)
            i = j
        if cyc:
            cycles.append(cyc)
    return Permutation.from_cycles(cycles)
