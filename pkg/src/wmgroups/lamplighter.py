"""Shift groups over step functions, restricted wreath products, and the
perfect direct-limit tower.

`LampGroup(G)` is the group of pairs (f, m) where f is an eventually
right-trivial step function Z -> G and m a shift; multiplication twists by
the shift.  It contains the subgroup generated by sigma = (1, 1) and the
half-line functions f_g, and is closed under all operations used here, so
no membership problem has to be solved.

When G is (right-)ordered the cone

    (f, m) > 1  iff  m > 0, or m = 0 and the last nontrivial value of f
                     is positive in G

defines a (right) total order extending the order of G along g -> delta_g;
it is two-sided whenever the order on G is.  `RestrictedWreathGroup`
carries the analogous top-dominant order with ties broken at the maximal
support point, which makes the base embedding order-preserving.

Internal arithmetic runs on the raw layer of the base description (inputs
already validated at the public boundary).
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from typing import Any

from .config import DEFAULT_LIMITS
from .errors import DepthBoundError, VariantMismatchError
from .groupcore import GroupDesc


# ---------------------------------------------------------------------------
# step functions


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant f: Z -> G with values[i] on (breaks[i-1], breaks[i]],
    values[0] on (-inf, breaks[0]] and values[-1] (= identity) beyond breaks[-1].
    """

    breaks: tuple[int, ...]
    values: tuple[Any, ...]

    def evaluate(self, n: int):
        return self.values[bisect_left(self.breaks, n)]


@dataclass(frozen=True)
class LampElement:
    fn: StepFunction
    shift: int


def make_step(desc: GroupDesc, breaks, values) -> StepFunction:
    """Canonicalize: merge equal adjacent values, require trailing identity."""
    breaks = list(breaks)
    values = list(values)
    if len(values) != len(breaks) + 1:
        raise ValueError("need exactly one more value than breakpoints")
    if any(breaks[i] >= breaks[i + 1] for i in range(len(breaks) - 1)):
        raise ValueError("breakpoints must be strictly increasing")
    i = 0
    while i < len(breaks):
        if desc._eq(values[i], values[i + 1]):
            del values[i]
            del breaks[i]
        else:
            i += 1
    if not desc._is_identity(values[-1]):
        raise ValueError("step functions must be eventually right-trivial")
    return StepFunction(tuple(breaks), tuple(values))


def step_identity(desc: GroupDesc) -> StepFunction:
    return StepFunction((), (desc.identity(),))


def step_shift(f: StepFunction, k: int) -> StepFunction:
    """shift^k(f)(n) = f(n + k); breakpoints translate by -k."""
    if k == 0 or not f.breaks:
        return f
    return StepFunction(tuple(c - k for c in f.breaks), f.values)


def step_pointwise(desc: GroupDesc, f1: StepFunction, f2: StepFunction) -> StepFunction:
    merged = sorted(set(f1.breaks) | set(f2.breaks))
    samples = merged + [merged[-1] + 1] if merged else [0]
    values = [desc._mul(f1.evaluate(n), f2.evaluate(n)) for n in samples]
    return make_step(desc, merged, values)


def step_inverse(desc: GroupDesc, f: StepFunction) -> StepFunction:
    return StepFunction(f.breaks, tuple(desc._inv(v) for v in f.values))


def last_nontrivial_value(desc: GroupDesc, f: StepFunction):
    """Value on the rightmost interval where f is nontrivial; None if f = 1."""
    for v in reversed(f.values):
        if not desc._is_identity(v):
            return v
    return None


def format_step(desc: GroupDesc, f: StepFunction) -> str:
    parts = [desc.format_element(f.values[0])]
    for c, v in zip(f.breaks, f.values[1:]):
        parts.append(str(c))
        parts.append(desc.format_element(v))
    return "[" + " | ".join(parts) + "]"


# ---------------------------------------------------------------------------
# the shift group


@dataclass(frozen=True)
class LampGroup(GroupDesc):
    base: GroupDesc

    def identity(self) -> LampElement:
        return LampElement(step_identity(self.base), 0)

    def check(self, a) -> None:
        if not isinstance(a, LampElement) or type(a.shift) is not int:
            raise VariantMismatchError(f"{a!r} is not an element of {self}")
        f = a.fn
        if len(f.values) != len(f.breaks) + 1:
            raise VariantMismatchError("malformed step function")
        for v in f.values:
            self.base.check(v)
        if not self.base._is_identity(f.values[-1]):
            raise VariantMismatchError("step function is not right-trivial")
        for i in range(len(f.breaks)):
            if self.base._eq(f.values[i], f.values[i + 1]):
                raise VariantMismatchError("step function is not canonical")
            if i + 1 < len(f.breaks) and f.breaks[i] >= f.breaks[i + 1]:
                raise VariantMismatchError("breakpoints out of order")

    def _mul(self, a: LampElement, b: LampElement) -> LampElement:
        fn = step_pointwise(self.base, a.fn, step_shift(b.fn, a.shift))
        return LampElement(fn, a.shift + b.shift)

    def _inv(self, a: LampElement) -> LampElement:
        return LampElement(step_shift(step_inverse(self.base, a.fn), -a.shift), -a.shift)

    def _is_identity(self, a: LampElement) -> bool:
        return a.shift == 0 and not a.fn.breaks

    def evaluate(self, a: LampElement, n: int):
        return a.fn.evaluate(n)

    # distinguished elements
    def sigma(self) -> LampElement:
        return LampElement(step_identity(self.base), 1)

    def fg(self, g) -> LampElement:
        """Half-line function: g on (-inf, 0], identity beyond."""
        self.base.check(g)
        return LampElement(make_step(self.base, (0,), (g, self.base.identity())), 0)

    def delta(self, g) -> LampElement:
        """Point function: g at 0, identity elsewhere."""
        self.base.check(g)
        one = self.base.identity()
        return LampElement(make_step(self.base, (-1, 0), (one, g, one)), 0)

    def delta_value(self, a: LampElement):
        """Inverse of `delta` on its image: the value at 0, or None if `a`
        is not a point function supported at 0 (identity counts, value 1)."""
        if a.shift != 0:
            return None
        f = a.fn
        if not f.breaks:
            return self.base.identity()
        if f.breaks == (-1, 0) and self.base._is_identity(f.values[0]):
            return f.values[1]
        return None

    @property
    def is_ordered(self) -> bool:
        return self.base.is_ordered

    @property
    def order_two_sided(self) -> bool:
        return self.base.order_two_sided

    def _is_positive(self, a: LampElement) -> bool:
        if not self.is_ordered:
            return super()._is_positive(a)
        if a.shift != 0:
            return a.shift > 0
        last = last_nontrivial_value(self.base, a.fn)
        return last is not None and self.base._is_positive(last)

    def sort_key(self, a: LampElement):
        return (
            a.shift,
            a.fn.breaks,
            tuple(self.base.sort_key(v) for v in a.fn.values),
        )

    def random_element(self, rng: random.Random) -> LampElement:
        k = rng.randrange(0, 4)
        breaks = sorted(rng.sample(range(-5, 6), k))
        values = [self.base.random_element(rng) for _ in range(k)]
        values.append(self.base.identity())
        return LampElement(make_step(self.base, breaks, values), rng.randint(-2, 2))

    def format_element(self, a: LampElement) -> str:
        return f"({format_step(self.base, a.fn)} ; {a.shift})"

    def __str__(self) -> str:
        return f"lamp({self.base})"


# ---------------------------------------------------------------------------
# restricted wreath products


@dataclass(frozen=True)
class WreathElement:
    # finite support, sorted by the top group's structural key, no identity values
    support: tuple[tuple[Any, Any], ...]
    top: Any


@dataclass(frozen=True)
class RestrictedWreathGroup(GroupDesc):
    """base wr top: finitely supported functions top -> base, with top acting
    by left translation."""

    base: GroupDesc
    top: GroupDesc

    def _pack(self, mapping: dict) -> tuple:
        items = [
            (pt, v) for pt, v in mapping.items() if not self.base._is_identity(v)
        ]
        items.sort(key=lambda pv: self.top.sort_key(pv[0]))
        return tuple(items)

    def identity(self) -> WreathElement:
        return WreathElement((), self.top.identity())

    def check(self, a) -> None:
        if not isinstance(a, WreathElement):
            raise VariantMismatchError(f"{a!r} is not an element of {self}")
        self.top.check(a.top)
        prev_key = None
        for pt, v in a.support:
            self.top.check(pt)
            self.base.check(v)
            if self.base._is_identity(v):
                raise VariantMismatchError("support carries an identity value")
            key = self.top.sort_key(pt)
            if prev_key is not None and not (prev_key < key):
                raise VariantMismatchError("support is not canonically sorted")
            prev_key = key

    def _mul(self, a: WreathElement, b: WreathElement) -> WreathElement:
        out = {pt: v for pt, v in a.support}
        for pt, v in b.support:
            moved = self.top._mul(a.top, pt)
            # match on group equality, not hash, to stay representation-safe
            hit = None
            for p in out:
                if self.top._eq(p, moved):
                    hit = p
                    break
            if hit is None:
                out[moved] = v
            else:
                out[hit] = self.base._mul(out[hit], v)
        return WreathElement(self._pack(out), self.top._mul(a.top, b.top))

    def _inv(self, a: WreathElement) -> WreathElement:
        t = self.top._inv(a.top)
        out = {self.top._mul(t, pt): self.base._inv(v) for pt, v in a.support}
        return WreathElement(self._pack(out), t)

    def _is_identity(self, a: WreathElement) -> bool:
        return not a.support and self.top._is_identity(a.top)

    def embed_base(self, a) -> WreathElement:
        """a -> point function at the top identity."""
        self.base.check(a)
        return self._embed_base(a)

    def _embed_base(self, a) -> WreathElement:
        if self.base._is_identity(a):
            return self.identity()
        return WreathElement(((self.top.identity(), a),), self.top.identity())

    def embed_top(self, b) -> WreathElement:
        self.top.check(b)
        return WreathElement((), b)

    def value_at(self, a: WreathElement, pt):
        for p, v in a.support:
            if self.top._eq(p, pt):
                return v
        return self.base.identity()

    @property
    def is_ordered(self) -> bool:
        return self.base.is_ordered and self.top.is_ordered

    @property
    def order_two_sided(self) -> bool:
        return self.base.order_two_sided and self.top.order_two_sided

    def _is_positive(self, a: WreathElement) -> bool:
        if not self.is_ordered:
            return super()._is_positive(a)
        if not self.top._is_identity(a.top):
            return self.top._is_positive(a.top)
        if not a.support:
            return False
        best_pt, best_v = a.support[0]
        for pt, v in a.support[1:]:
            # pt > best_pt in the top order
            d = self.top._mul(pt, self.top._inv(best_pt))
            if not self.top._is_identity(d) and self.top._is_positive(d):
                best_pt, best_v = pt, v
        return self.base._is_positive(best_v)

    def sort_key(self, a: WreathElement):
        return (
            self.top.sort_key(a.top),
            tuple(
                (self.top.sort_key(pt), self.base.sort_key(v))
                for pt, v in a.support
            ),
        )

    def random_element(self, rng: random.Random) -> WreathElement:
        out: dict = {}
        for _ in range(rng.randrange(0, 3)):
            pt = self.top.random_element(rng)
            hit = None
            for p in out:
                if self.top._eq(p, pt):
                    hit = p
                    break
            v = self.base.random_element(rng)
            if hit is None:
                out[pt] = v
            else:
                out[hit] = self.base._mul(out[hit], v)
        return WreathElement(self._pack(out), self.top.random_element(rng))

    def format_element(self, a: WreathElement) -> str:
        if not a.support and self.top._is_identity(a.top):
            return "id"
        body = ", ".join(
            f"{self.top.format_element(pt)} -> {self.base.format_element(v)}"
            for pt, v in a.support
        )
        return f"{{{body} ; {self.top.format_element(a.top)}}}"

    def __str__(self) -> str:
        return f"wr({self.base}, {self.top})"


# ---------------------------------------------------------------------------
# the perfect tower


@dataclass(frozen=True)
class TowerElement:
    level: int
    payload: Any


def _lamp_chain(base: GroupDesc, level: int) -> GroupDesc:
    d = base
    for _ in range(level):
        d = LampGroup(d)
    return d


@dataclass(frozen=True)
class TowerGroup(GroupDesc):
    """Direct limit of G = G_0 < G_1 < ... with G_{i+1} = lamp(G_i), glued
    along g -> delta_g.  Every element of the limit lies in some G_j and is
    a product of a commutator pair one level up, so the limit is perfect.
    """

    base: GroupDesc
    max_level: int = DEFAULT_LIMITS.tower_depth

    def level_desc(self, level: int) -> GroupDesc:
        if level < 0 or level > self.max_level:
            raise DepthBoundError(f"tower level {level} outside [0, {self.max_level}]")
        return _lamp_chain(self.base, level)

    def _reduce(self, level: int, payload) -> TowerElement:
        while level > 0:
            lamp: LampGroup = self.level_desc(level)  # type: ignore[assignment]
            below = lamp.delta_value(payload)
            if below is None:
                break
            level -= 1
            payload = below
        return TowerElement(level, payload)

    def lift(self, a: TowerElement) -> TowerElement:
        """One-level embedding g -> delta_g.  The result is the same element
        of the limit; `eq` and `mul` re-canonicalize to minimal level."""
        self.check(a)
        return self._lift(a)

    def _lift(self, a: TowerElement) -> TowerElement:
        if a.level + 1 > self.max_level:
            raise DepthBoundError(f"tower depth bound {self.max_level} exceeded")
        lamp: LampGroup = self.level_desc(a.level + 1)  # type: ignore[assignment]
        one = self.level_desc(a.level).identity()
        payload = a.payload
        if payload == one:
            return TowerElement(a.level + 1, lamp.identity())
        return TowerElement(
            a.level + 1,
            LampElement(StepFunction((-1, 0), (one, payload, one)), 0),
        )

    def canonical(self, a: TowerElement) -> TowerElement:
        self.check(a)
        return self._reduce(a.level, a.payload)

    def _common(self, a: TowerElement, b: TowerElement):
        while a.level < b.level:
            a = self._lift(a)
        while b.level < a.level:
            b = self._lift(b)
        return a.level, a.payload, b.payload

    def identity(self) -> TowerElement:
        return TowerElement(0, self.base.identity())

    def check(self, a) -> None:
        if not isinstance(a, TowerElement):
            raise VariantMismatchError(f"{a!r} is not a tower element")
        self.level_desc(a.level).check(a.payload)

    def _eq(self, a, b) -> bool:
        lvl, pa, pb = self._common(
            self._reduce(a.level, a.payload), self._reduce(b.level, b.payload)
        )
        return self.level_desc(lvl)._eq(pa, pb)

    def _mul(self, a: TowerElement, b: TowerElement) -> TowerElement:
        lvl, pa, pb = self._common(
            self._reduce(a.level, a.payload), self._reduce(b.level, b.payload)
        )
        return self._reduce(lvl, self.level_desc(lvl)._mul(pa, pb))

    def _inv(self, a: TowerElement) -> TowerElement:
        return TowerElement(a.level, self.level_desc(a.level)._inv(a.payload))

    def _is_identity(self, a: TowerElement) -> bool:
        a = self._reduce(a.level, a.payload)
        return a.level == 0 and self.base._is_identity(a.payload)

    @property
    def is_ordered(self) -> bool:
        return self.base.is_ordered

    @property
    def order_two_sided(self) -> bool:
        return self.base.order_two_sided

    def _is_positive(self, a: TowerElement) -> bool:
        if not self.is_ordered:
            return super()._is_positive(a)
        a = self._reduce(a.level, a.payload)
        if self.level_desc(a.level)._is_identity(a.payload):
            return False
        return self.level_desc(a.level)._is_positive(a.payload)

    def sort_key(self, a: TowerElement):
        a = self._reduce(a.level, a.payload)
        return (a.level, self.level_desc(a.level).sort_key(a.payload))

    def random_element(self, rng: random.Random) -> TowerElement:
        level = rng.randrange(0, min(3, self.max_level) + 1)
        return self._reduce(level, self.level_desc(level).random_element(rng))

    def element(self, level: int, payload) -> TowerElement:
        """Canonical tower element from a payload at the given level."""
        self.level_desc(level).check(payload)
        return self._reduce(level, payload)

    def level_generators(self, level: int) -> list[TowerElement]:
        """Generators of G_level: the base generators at level 0, then
        sigma and the half-line functions over the previous level's set."""
        if level == 0:
            gens = getattr(self.base, "generators", None)
            if callable(gens):
                return [self._reduce(0, g) for g in gens()]
            raise VariantMismatchError(f"{self.base} exposes no generator list")
        lamp: LampGroup = self.level_desc(level)  # type: ignore[assignment]
        out = [self._reduce(level, lamp.sigma())]
        for g in self.level_generators(level - 1):
            lifted = g
            while lifted.level < level - 1:
                lifted = self._lift(lifted)
            out.append(self._reduce(level, lamp.fg(lifted.payload)))
        return out

    def perfectness_witness(self, a: TowerElement) -> tuple[TowerElement, TowerElement]:
        """Pair (u, v) one level up with [u, v] equal to the lift of `a`;
        verified by evaluation before returning."""
        a = self.canonical(a)
        if self._is_identity(a):
            return self.identity(), self.identity()
        lamp: LampGroup = self.level_desc(a.level + 1)  # type: ignore[assignment]
        u = TowerElement(a.level + 1, lamp.fg(a.payload))
        v = TowerElement(a.level + 1, lamp.sigma())
        got = lamp.commutator(u.payload, v.payload)
        want = lamp.delta(a.payload)
        if not lamp._eq(got, want):
            raise AssertionError("commutator witness failed evaluation")
        return u, v

    def format_element(self, a: TowerElement) -> str:
        inner = self.level_desc(a.level).format_element(a.payload)
        return inner if a.level == 0 else f"[level {a.level}] {inner}"

    def __str__(self) -> str:
        return f"tower({self.base})"
