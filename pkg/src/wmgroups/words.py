"""Freely reduced words over indexed generators, with a small parser.

Words are stored as tuples of (generator index, +-1) with no adjacent
inverse pairs.  The parser understands juxtaposition products, integer
powers `a^3`, conjugation sugar `a^b` = b^-1 a b, commutators `[u, v]`,
parentheses, and `u = v` as shorthand for the relator u v^-1.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .errors import WordSyntaxError


@dataclass(frozen=True)
class FreeWord:
    letters: tuple[tuple[int, int], ...]

    @staticmethod
    def from_letters(letters) -> "FreeWord":
        out: list[tuple[int, int]] = []
        for gen, exp in letters:
            if exp not in (1, -1):
                raise ValueError("letters carry exponent +1 or -1")
            if gen < 1:
                raise ValueError("generator indices are 1-based")
            if out and out[-1][0] == gen and out[-1][1] == -exp:
                out.pop()
            else:
                out.append((gen, exp))
        return FreeWord(tuple(out))

    @staticmethod
    def identity() -> "FreeWord":
        return FreeWord(())

    @staticmethod
    def generator(i: int, exp: int = 1) -> "FreeWord":
        return FreeWord.from_letters([(i, 1)] * exp if exp >= 0 else [(i, -1)] * (-exp))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord.from_letters(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "FreeWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = FreeWord.identity()
        for _ in range(n):
            out = out * self
        return out

    def commutator(self, other: "FreeWord") -> "FreeWord":
        return self * other * self.inverse() * other.inverse()

    def conjugate_by(self, other: "FreeWord") -> "FreeWord":
        """self^other = other^-1 self other."""
        return other.inverse() * self * other

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)

    def exponent_sum(self, i: int) -> int:
        return sum(e for g, e in self.letters if g == i)

    def evaluate(self, desc, images):
        """Image under the homomorphism sending generator i to images[i-1]."""
        out = desc.identity()
        for g, e in self.letters:
            x = images[g - 1]
            out = desc.mul(out, x if e == 1 else desc.inv(x))
        return out

    def format(self, names: list[str] | None = None) -> str:
        if not self.letters:
            return "1"
        def name(i: int) -> str:
            return names[i - 1] if names else f"x{i}"
        parts = []
        run_gen, run_exp, run_len = None, 0, 0
        for g, e in self.letters + ((0, 0),):
            if g == run_gen and e == run_exp:
                run_len += 1
                continue
            if run_gen is not None:
                total = run_exp * run_len
                parts.append(name(run_gen) if total == 1 else f"{name(run_gen)}^{total}")
            run_gen, run_exp, run_len = g, e, 1
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()


def random_word(rng: random.Random, rank: int, max_len: int) -> FreeWord:
    n = rng.randrange(0, max_len + 1)
    letters = [(rng.randrange(1, rank + 1), rng.choice((1, -1))) for _ in range(n)]
    return FreeWord.from_letters(letters)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>-?\d+)|(?P<punct>[\^\(\)\[\],=*|<>]))"
)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        if not self.text[self.pos:].strip():
            return None, None, len(self.text)
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m:
            stripped = self.text[self.pos:].lstrip()
            at = len(self.text) - len(stripped)
            raise WordSyntaxError(f"unexpected character {stripped[0]!r}", at)
        kind = m.lastgroup
        return kind, m.group(kind), m.end()

    def next(self):
        kind, value, end = self.peek()
        if kind is None:
            return None, None
        self.pos = end
        return kind, value

    def expect_punct(self, symbol: str):
        kind, value = self.next()
        if kind != "punct" or value != symbol:
            raise WordSyntaxError(f"expected {symbol!r}", self.pos)

    def at_end(self) -> bool:
        return not self.text[self.pos:].strip()


class WordParser:
    """Parser for words over a fixed generator-name list."""

    def __init__(self, names: list[str]):
        self.names = list(names)
        self.index = {n: i + 1 for i, n in enumerate(self.names)}

    def parse(self, text: str) -> FreeWord:
        toks = _Tokens(text)
        word = self._word(toks)
        if not toks.at_end():
            raise WordSyntaxError("trailing input after word", toks.pos)
        return word

    def _word(self, toks: _Tokens) -> FreeWord:
        out = FreeWord.identity()
        while True:
            kind, value, _ = toks.peek()
            if kind is None or (kind == "punct" and value in ")],=|>"):
                return out
            if kind == "punct" and value == "*":
                toks.next()
                continue
            out = out * self._factor(toks)

    def _factor(self, toks: _Tokens) -> FreeWord:
        # a run of juxtaposed letters like "abab"; any exponent binds to
        # the last atom of the run, so "ab^2" reads a * b^2
        seq = self._atom_seq(toks)
        last = seq[-1]
        while True:
            kind, value, _ = toks.peek()
            if kind == "punct" and value == "^":
                toks.next()
                kind2, value2, _ = toks.peek()
                if kind2 == "int":
                    toks.next()
                    last = last ** int(value2)
                else:
                    last = last.conjugate_by(self._atom_single(toks))
            else:
                break
        out = FreeWord.identity()
        for w in seq[:-1]:
            out = out * w
        return out * last

    def _atom_seq(self, toks: _Tokens) -> list[FreeWord]:
        pos = toks.pos
        kind, value = toks.next()
        if kind == "name":
            if value == "id":
                return [FreeWord.identity()]
            if value in self.index:
                return [FreeWord.generator(self.index[value])]
            if all(ch in self.index for ch in value):
                return [FreeWord.generator(self.index[ch]) for ch in value]
            raise WordSyntaxError(f"unknown generator {value!r}", pos)
        if kind == "int" and value == "1":
            return [FreeWord.identity()]
        if kind == "punct" and value == "(":
            inner = self._word(toks)
            toks.expect_punct(")")
            return [inner]
        if kind == "punct" and value == "[":
            left = self._word(toks)
            toks.expect_punct(",")
            right = self._word(toks)
            toks.expect_punct("]")
            return [left.commutator(right)]
        raise WordSyntaxError("expected a generator, '(', or '['", pos)

    def _atom_single(self, toks: _Tokens) -> FreeWord:
        seq = self._atom_seq(toks)
        out = FreeWord.identity()
        for w in seq:
            out = out * w
        return out

    def parse_relator(self, toks: _Tokens) -> FreeWord:
        """One relator, allowing `u = v` for u v^-1."""
        left = self._word(toks)
        kind, value, _ = toks.peek()
        if kind == "punct" and value == "=":
            toks.next()
            right = self._word(toks)
            return left * right.inverse()
        return left
