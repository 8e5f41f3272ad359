"""Descending HNN extensions over iterated wreath products.

Starting from a group A, write Abar = lamp(A) and form the chain

    W_0 = Abar,   W_{i+1} = W_i wr Abar,

glued along the base embedding x -> (point function at 1, trivial top).
Relabelling every wreath layer one step outward is an injective
endomorphism `phi` of the union W; its image is exactly the set of
elements whose innermost layer is trivial, so membership is decidable by
inspection.  The extension C adds a letter t with t w t^-1 = phi(w);
elements are stored as t^m * (t^-d w t^d) with d = 0 or w outside the
image of phi.

When A is (right-)ordered, every W_i is ordered by the top-dominant rule
and phi preserves positivity, so "m > 0, or m = 0 and the w-part is
positive" is a (right) positive cone on C, two-sided when A's order is.

`normal_closure_witness` returns the 4-conjugate expression showing that
the normal closure of a nontrivial top element of a wreath product
contains every base commutator; it is checked by evaluation before being
returned.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Any

from .config import DEFAULT_LIMITS
from .errors import DepthBoundError, VariantMismatchError
from .groupcore import GroupDesc
from .lamplighter import (
    LampElement,
    LampGroup,
    RestrictedWreathGroup,
    StepFunction,
    WreathElement,
)


@dataclass(frozen=True)
class WElement:
    """Element of the wreath chain, tagged with its minimal level."""

    level: int
    value: Any  # LampElement at level 0, WreathElement above


@dataclass(frozen=True)
class CElement:
    """t^texp * (t^-depth w t^depth)."""

    texp: int
    depth: int
    w: WElement


@dataclass(frozen=True)
class ConjugateWord:
    """Product of conjugates prod_i u_i * b^(eps_i) * u_i^-1 of a fixed b."""

    pairs: tuple[tuple[Any, int], ...]
    conjugated: Any  # b, as an element of the ambient group


@functools.lru_cache(maxsize=4096)
def _wreath_chain(abar: LampGroup, level: int) -> GroupDesc:
    if level == 0:
        return abar
    return RestrictedWreathGroup(_wreath_chain(abar, level - 1), abar)


@dataclass(frozen=True)
class ThetaGroup(GroupDesc):
    base: GroupDesc
    max_wreath_level: int = DEFAULT_LIMITS.wreath_depth

    @property
    def abar(self) -> LampGroup:
        return LampGroup(self.base)

    def w_desc(self, level: int) -> GroupDesc:
        if level < 0 or level > self.max_wreath_level:
            raise DepthBoundError(
                f"wreath level {level} outside [0, {self.max_wreath_level}]"
            )
        return _wreath_chain(self.abar, level)

    # -- the wreath-chain union ------------------------------------------

    def w_identity(self) -> WElement:
        return WElement(0, self.abar.identity())

    def w_check(self, w: WElement) -> None:
        if not isinstance(w, WElement):
            raise VariantMismatchError(f"{w!r} is not a wreath-chain element")
        self.w_desc(w.level).check(w.value)

    def w_canonical(self, w: WElement) -> WElement:
        self.w_check(w)
        return self._w_canonical(w)

    def _w_canonical(self, w: WElement) -> WElement:
        """Push to minimal level along the base embedding."""
        level, value = w.level, w.value
        abar = self.abar
        while level >= 1:
            if not abar._is_identity(value.top):
                break
            if not value.support:
                level -= 1
                value = self.w_desc(level).identity()
                continue
            if len(value.support) == 1 and abar._is_identity(value.support[0][0]):
                level -= 1
                value = value.support[0][1]
                continue
            break
        return WElement(level, value)

    def w_embed_up(self, w: WElement) -> WElement:
        """One-level base embedding (identified with `w` in the union)."""
        rw: RestrictedWreathGroup = self.w_desc(w.level + 1)  # type: ignore[assignment]
        return WElement(w.level + 1, rw._embed_base(w.value))

    def _w_common(self, a: WElement, b: WElement):
        while a.level < b.level:
            a = self.w_embed_up(a)
        while b.level < a.level:
            b = self.w_embed_up(b)
        return a, b

    def w_mul(self, a: WElement, b: WElement) -> WElement:
        a, b = self._w_common(self._w_canonical(a), self._w_canonical(b))
        return self._w_canonical(
            WElement(a.level, self.w_desc(a.level)._mul(a.value, b.value))
        )

    def w_inv(self, a: WElement) -> WElement:
        a = self._w_canonical(a)
        return WElement(a.level, self.w_desc(a.level)._inv(a.value))

    def w_eq(self, a: WElement, b: WElement) -> bool:
        return self._w_canonical(a) == self._w_canonical(b)

    def w_is_identity(self, a: WElement) -> bool:
        a = self._w_canonical(a)
        return a.level == 0 and self.abar._is_identity(a.value)

    def w_is_positive(self, a: WElement) -> bool:
        a = self._w_canonical(a)
        return self.w_desc(a.level)._is_positive(a.value)

    def w_sort_key(self, a: WElement):
        a = self._w_canonical(a)
        return (a.level, self.w_desc(a.level).sort_key(a.value))

    def w_random(self, rng: random.Random, max_level: int = 1) -> WElement:
        level = rng.randrange(0, max_level + 1)
        return self._w_canonical(
            WElement(level, self.w_desc(level).random_element(rng))
        )

    def w_format(self, a: WElement) -> str:
        return self.w_desc(a.level).format_element(a.value)

    # -- the shift endomorphism ------------------------------------------

    def phi(self, w: WElement) -> WElement:
        """Relabel every layer one step outward; injective homomorphism."""
        self.w_check(w)
        return self._phi(self._w_canonical(w))

    def _phi(self, w: WElement) -> WElement:
        return WElement(w.level + 1, self._phi_raw(w.value, w.level))

    def _phi_raw(self, value, level: int):
        if level + 1 > self.max_wreath_level:
            raise DepthBoundError(
                f"wreath depth bound {self.max_wreath_level} exceeded"
            )
        if level == 0:
            return WreathElement((), value)
        support = tuple(
            (pt, self._phi_raw(v, level - 1)) for pt, v in value.support
        )
        return WreathElement(support, value.top)

    def in_phi_image(self, w: WElement) -> bool:
        self.w_check(w)
        return self._in_phi_image(self._w_canonical(w))

    def _in_phi_image(self, w: WElement) -> bool:
        if w.level == 0:
            return self.abar._is_identity(w.value)
        return self._in_image_raw(w.value, w.level)

    def _in_image_raw(self, value, level: int) -> bool:
        if level == 1:
            return not value.support
        return all(self._in_image_raw(v, level - 1) for _, v in value.support)

    def phi_inverse(self, w: WElement) -> WElement:
        self.w_check(w)
        w = self._w_canonical(w)
        if not self._in_phi_image(w):
            raise ValueError("element is not in the image of phi")
        return self._phi_inverse(w)

    def _phi_inverse(self, w: WElement) -> WElement:
        if w.level == 0:
            return w  # identity
        return WElement(w.level - 1, self._phi_inv_raw(w.value, w.level))

    def _phi_inv_raw(self, value, level: int):
        if level == 1:
            return value.top
        support = tuple(
            (pt, self._phi_inv_raw(v, level - 1)) for pt, v in value.support
        )
        return WreathElement(support, value.top)

    # -- HNN normal forms --------------------------------------------------

    def element(self, texp: int, depth: int, w: WElement) -> CElement:
        """Canonical form: depth 0, or w outside the image of phi."""
        self.w_check(w)
        if depth < 0:
            raise ValueError("conjugation depth must be >= 0")
        return self._element(texp, depth, self._w_canonical(w))

    def _element(self, texp: int, depth: int, w: WElement) -> CElement:
        while depth > 0 and self._in_phi_image(w):
            w = self._phi_inverse(w)
            depth -= 1
        if w.level == 0 and self.abar._is_identity(w.value):
            depth = 0
        return CElement(texp, depth, w)

    def identity(self) -> CElement:
        return CElement(0, 0, self.w_identity())

    def check(self, a) -> None:
        if not isinstance(a, CElement):
            raise VariantMismatchError(f"{a!r} is not an HNN-extension element")
        if type(a.texp) is not int or type(a.depth) is not int or a.depth < 0:
            raise VariantMismatchError("malformed t-exponent or depth")
        self.w_check(a.w)

    def _tau(self, depth: int, w: WElement) -> tuple[int, WElement]:
        """Conjugation by t on the stable part."""
        if depth >= 1:
            return depth - 1, w
        return 0, self._phi(w)

    def _tau_pow(self, k: int, depth: int, w: WElement) -> tuple[int, WElement]:
        for _ in range(k):
            depth, w = self._tau(depth, w)
        if k < 0:
            c = self._element(0, depth - k, w)
            return c.depth, c.w
        return depth, w

    def _mul(self, a: CElement, b: CElement) -> CElement:
        da, wa = self._tau_pow(-b.texp, a.depth, a.w)
        db, wb = b.depth, b.w
        d = max(da, db)
        for _ in range(d - da):
            wa = self._phi(wa)
        for _ in range(d - db):
            wb = self._phi(wb)
        wa, wb = self._w_common(wa, wb)
        prod = self._w_canonical(
            WElement(wa.level, self.w_desc(wa.level)._mul(wa.value, wb.value))
        )
        return self._element(a.texp + b.texp, d, prod)

    def _inv(self, a: CElement) -> CElement:
        w = WElement(a.w.level, self.w_desc(a.w.level)._inv(a.w.value))
        d, w = self._tau_pow(a.texp, a.depth, w)
        return self._element(-a.texp, d, w)

    def _eq(self, a, b) -> bool:
        ca = self._element(a.texp, a.depth, self._w_canonical(a.w))
        cb = self._element(b.texp, b.depth, self._w_canonical(b.w))
        return ca == cb

    def _is_identity(self, a) -> bool:
        return (
            a.texp == 0
            and self.w_is_identity(a.w)
        )

    def t(self) -> CElement:
        return CElement(1, 0, self.w_identity())

    def order_of_element(self, a, bound: int) -> int | None:
        # the t-exponent maps onto Z, so a nonzero exponent forces infinite
        # order without computing deep powers
        self.check(a)
        if a.texp != 0:
            return None
        return super().order_of_element(a, bound)

    def theta_embed(self, a) -> CElement:
        """A -> C along a -> delta_a in Abar = W_0."""
        self.base.check(a)
        return self._theta_embed(a)

    def _theta_embed(self, a) -> CElement:
        one = self.base.identity()
        if self.base._is_identity(a):
            return self.identity()
        fn = StepFunction((-1, 0), (one, a, one))
        return CElement(0, 0, WElement(0, LampElement(fn, 0)))

    def theta_embed_value(self, c: CElement):
        """Inverse of `theta_embed` on its image, else None."""
        c = self._element(c.texp, c.depth, self._w_canonical(c.w))
        if c.texp != 0 or c.depth != 0 or c.w.level != 0:
            return None
        return self.abar.delta_value(c.w.value)

    @property
    def is_ordered(self) -> bool:
        return self.base.is_ordered

    @property
    def order_two_sided(self) -> bool:
        return self.base.order_two_sided

    def _is_positive(self, a: CElement) -> bool:
        if not self.is_ordered:
            return super()._is_positive(a)
        if a.texp != 0:
            return a.texp > 0
        w = self._w_canonical(a.w)
        if w.level == 0 and self.abar._is_identity(w.value):
            return False
        return self.w_desc(w.level)._is_positive(w.value)

    def sort_key(self, a: CElement):
        a = self._element(a.texp, a.depth, self._w_canonical(a.w))
        return (a.texp, a.depth, self.w_sort_key(a.w))

    def random_element(self, rng: random.Random) -> CElement:
        return self.element(
            rng.randint(-1, 1), rng.randrange(0, 2), self.w_random(rng)
        )

    def format_element(self, a: CElement) -> str:
        a = self._element(a.texp, a.depth, self._w_canonical(a.w))
        if a.texp == 0 and self.w_is_identity(a.w):
            return "id"
        parts = []
        if a.texp != 0:
            parts.append(f"t^{a.texp}")
        if not self.w_is_identity(a.w):
            if a.depth:
                parts.append(f"t^-{a.depth} {self.w_format(a.w)} t^{a.depth}")
            else:
                parts.append(self.w_format(a.w))
        return " ".join(parts)

    def __str__(self) -> str:
        return f"theta({self.base})"


# ---------------------------------------------------------------------------
# iterated extensions


@dataclass(frozen=True)
class ThetaLimitElement:
    level: int
    payload: Any


@functools.lru_cache(maxsize=1024)
def _theta_chain(base: GroupDesc, level: int, wreath_level: int) -> GroupDesc:
    if level == 0:
        return base
    return ThetaGroup(
        _theta_chain(base, level - 1, wreath_level), max_wreath_level=wreath_level
    )


@dataclass(frozen=True)
class ThetaLimitGroup(GroupDesc):
    """Union of the ascending chain A < theta(A) < theta(theta(A)) < ..."""

    base: GroupDesc
    max_level: int = DEFAULT_LIMITS.theta_depth
    wreath_level: int = DEFAULT_LIMITS.wreath_depth

    def level_desc(self, level: int) -> GroupDesc:
        if level < 0 or level > self.max_level:
            raise DepthBoundError(f"theta level {level} outside [0, {self.max_level}]")
        return _theta_chain(self.base, level, self.wreath_level)

    def _reduce(self, level: int, payload) -> ThetaLimitElement:
        while level > 0:
            theta: ThetaGroup = self.level_desc(level)  # type: ignore[assignment]
            below = theta.theta_embed_value(payload)
            if below is None:
                break
            level -= 1
            payload = below
        return ThetaLimitElement(level, payload)

    def lift(self, a: ThetaLimitElement) -> ThetaLimitElement:
        self.check(a)
        return self._lift(a)

    def _lift(self, a: ThetaLimitElement) -> ThetaLimitElement:
        if a.level + 1 > self.max_level:
            raise DepthBoundError(f"theta depth bound {self.max_level} exceeded")
        theta: ThetaGroup = self.level_desc(a.level + 1)  # type: ignore[assignment]
        return ThetaLimitElement(a.level + 1, theta._theta_embed(a.payload))

    def canonical(self, a: ThetaLimitElement) -> ThetaLimitElement:
        self.check(a)
        return self._reduce(a.level, a.payload)

    def _common(self, a: ThetaLimitElement, b: ThetaLimitElement):
        while a.level < b.level:
            a = self._lift(a)
        while b.level < a.level:
            b = self._lift(b)
        return a.level, a.payload, b.payload

    def identity(self) -> ThetaLimitElement:
        return ThetaLimitElement(0, self.base.identity())

    def check(self, a) -> None:
        if not isinstance(a, ThetaLimitElement):
            raise VariantMismatchError(f"{a!r} is not a theta-limit element")
        self.level_desc(a.level).check(a.payload)

    def _eq(self, a, b) -> bool:
        lvl, pa, pb = self._common(
            self._reduce(a.level, a.payload), self._reduce(b.level, b.payload)
        )
        return self.level_desc(lvl)._eq(pa, pb)

    def _mul(self, a, b) -> ThetaLimitElement:
        lvl, pa, pb = self._common(
            self._reduce(a.level, a.payload), self._reduce(b.level, b.payload)
        )
        return self._reduce(lvl, self.level_desc(lvl)._mul(pa, pb))

    def _inv(self, a) -> ThetaLimitElement:
        return ThetaLimitElement(a.level, self.level_desc(a.level)._inv(a.payload))

    def _is_identity(self, a) -> bool:
        a = self._reduce(a.level, a.payload)
        return a.level == 0 and self.base._is_identity(a.payload)

    @property
    def is_ordered(self) -> bool:
        return self.base.is_ordered

    @property
    def order_two_sided(self) -> bool:
        return self.base.order_two_sided

    def _is_positive(self, a) -> bool:
        if not self.is_ordered:
            return super()._is_positive(a)
        a = self._reduce(a.level, a.payload)
        if self.level_desc(a.level)._is_identity(a.payload):
            return False
        return self.level_desc(a.level)._is_positive(a.payload)

    def sort_key(self, a):
        a = self._reduce(a.level, a.payload)
        return (a.level, self.level_desc(a.level).sort_key(a.payload))

    def random_element(self, rng: random.Random) -> ThetaLimitElement:
        level = rng.randrange(0, min(self.max_level, 1) + 1)
        return self._reduce(level, self.level_desc(level).random_element(rng))

    def element(self, level: int, payload) -> ThetaLimitElement:
        self.level_desc(level).check(payload)
        return self._reduce(level, payload)

    def format_element(self, a) -> str:
        inner = self.level_desc(a.level).format_element(a.payload)
        return inner if a.level == 0 else f"[theta^{a.level}] {inner}"

    def __str__(self) -> str:
        return f"thetalim({self.base})"


# ---------------------------------------------------------------------------
# normal-closure witnesses


def normal_closure_witness(
    rw: RestrictedWreathGroup, x, y, b
) -> ConjugateWord:
    """Express [x, y] (x, y base elements at the top identity) as a product
    of four conjugates of b^{+-1} for a nontrivial top element b.

    The expression is evaluated against commutator(x, y) before returning.
    """
    rw.base.check(x)
    rw.base.check(y)
    rw.top.check(b)
    if rw.top._is_identity(b):
        raise ValueError("the conjugated top element must be nontrivial")
    ex, ey = rw._embed_base(x), rw._embed_base(y)
    word = ConjugateWord(
        pairs=(
            (rw._mul(ex, ey), +1),
            (ex, -1),
            (rw.identity(), +1),
            (ey, -1),
        ),
        conjugated=rw.embed_top(b),
    )
    got = evaluate_conjugate_word(rw, word)
    want = rw.commutator(ex, ey)
    if not rw._eq(got, want):
        raise AssertionError("conjugate-word witness failed evaluation")
    return word


def evaluate_conjugate_word(desc: GroupDesc, word: ConjugateWord):
    out = desc.identity()
    b = word.conjugated
    for u, eps in word.pairs:
        factor = desc.conj(b if eps == 1 else desc._inv(b), u)
        out = desc._mul(out, factor)
    return out


def format_conjugate_word(desc: GroupDesc, word: ConjugateWord) -> str:
    lines = []
    for u, eps in word.pairs:
        sign = "+1" if eps == 1 else "-1"
        lines.append(f"{desc.format_element(u)} ▷ b^{sign}")
    return "\n".join(lines)
