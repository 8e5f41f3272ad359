"""Free-derivative representation of F/N' over a computable quotient Q = F/N.

A word w maps to the pair (pi(w), (dw/dx_1, ..., dw/dx_r)) where the
derivatives are taken in the integral group ring Z[Q] via the product rule
d(uv) = du + pi(u) dv.  The pair multiplication (q, v)(q', v') =
(qq', v + q v') makes the map a homomorphism whose kernel is the second
derived subgroup term N' = [N, N], so arithmetic in F/N' is exact.

On top of the representation: Schreier generators of N, the integer
lattice spanned by their derivative vectors (a free basis of N/N'), the
holonomy action of Q on that lattice with a faithfulness certificate, and
finite quotients obtained by reducing coordinates mod p.
"""

from __future__ import annotations

import functools
import json
import random
import re
from dataclasses import dataclass, field
from typing import Any

from .errors import CapabilityError, VariantMismatchError, WordSyntaxError
from .groupcore import (
    AltFin,
    FinitePermutationGroup,
    GroupDesc,
    alternating_group,
    symmetric_group,
)
from .intlinalg import RowEchelon, row_echelon, solve_integer_combination
from .perms import IDENTITY_PERM, Permutation, parse_permutation
from .words import FreeWord, WordParser


# ---------------------------------------------------------------------------
# group-ring vectors


@dataclass(frozen=True)
class GroupRingElement:
    """Z[Q] element: sorted (q, coefficient) terms, zero coefficients dropped."""

    terms: tuple[tuple[Permutation, int], ...]

    @staticmethod
    def from_dict(d: dict[Permutation, int]) -> "GroupRingElement":
        items = [(q, c) for q, c in d.items() if c != 0]
        items.sort(key=lambda qc: qc[0].pairs)
        return GroupRingElement(tuple(items))

    @staticmethod
    def zero() -> "GroupRingElement":
        return GroupRingElement(())

    @staticmethod
    def unit(q: Permutation = IDENTITY_PERM, c: int = 1) -> "GroupRingElement":
        return GroupRingElement.from_dict({q: c})

    def as_dict(self) -> dict[Permutation, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        d = self.as_dict()
        for q, c in other.terms:
            d[q] = d.get(q, 0) + c
        return GroupRingElement.from_dict(d)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(tuple((q, -c) for q, c in self.terms))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def left_translate(self, q: Permutation) -> "GroupRingElement":
        return GroupRingElement.from_dict({q * k: c for k, c in self.terms})

    def reduce_mod(self, p: int) -> "GroupRingElement":
        return GroupRingElement.from_dict({q: c % p for q, c in self.terms})

    def coefficient(self, q: Permutation) -> int:
        for k, c in self.terms:
            if k == q:
                return c
        return 0

    def format(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for q, c in self.terms:
            qs = "1" if q.is_identity() else str(q)
            if c == 1:
                body = qs
            elif c == -1:
                body = f"-{qs}"
            else:
                body = f"{c}*{qs}"
            chunks.append(body)
        out = chunks[0]
        for body in chunks[1:]:
            out += f" - {body[1:]}" if body.startswith("-") else f" + {body}"
        return out

    __str__ = format


# ---------------------------------------------------------------------------
# quotient data


@dataclass(frozen=True)
class QuotientMap:
    """Surjection of the rank-r free group onto Q, by generator images.

    For finite permutation targets the closure of the images is checked
    against the declared order; the altfin target is infinite and only
    supports arithmetic (no transversal, lattice, or holonomy)."""

    rank: int
    target: GroupDesc
    images: tuple[Permutation, ...]
    names: tuple[str, ...] = ()
    expected_order: int | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if len(self.images) != self.rank:
            raise ValueError("need one image per generator")
        for img in self.images:
            self.target.check(img)
        if not self.names:
            object.__setattr__(
                self, "names", tuple(f"x{i}" for i in range(1, self.rank + 1))
            )
        if len(self.names) != self.rank:
            raise ValueError("need one name per generator")
        if self.finite and self.expected_order is not None:
            got = len(self.elements())
            if got != self.expected_order:
                raise ValueError(
                    f"images generate a group of order {got}, "
                    f"declared {self.expected_order}"
                )

    @property
    def finite(self) -> bool:
        return isinstance(self.target, FinitePermutationGroup)

    def elements(self) -> tuple[Permutation, ...]:
        """All of Q in breadth-first order from the identity, walking the
        generator images; this fixed enumeration orders lattice coordinates."""
        if not self.finite:
            raise CapabilityError("infinite quotient has no element enumeration")
        return _bfs_elements(self.images)

    def element_index(self) -> dict[Permutation, int]:
        return {q: i for i, q in enumerate(self.elements())}

    def pi(self, word: FreeWord) -> Permutation:
        return word.evaluate(self.target, list(self.images))

    def word_parser(self) -> WordParser:
        return WordParser(list(self.names))


@functools.lru_cache(maxsize=None)
def _bfs_elements(images: tuple[Permutation, ...]) -> tuple[Permutation, ...]:
    order = [IDENTITY_PERM]
    seen = {IDENTITY_PERM}
    queue = [IDENTITY_PERM]
    while queue:
        nxt = []
        for q in queue:
            for img in images:
                q2 = q * img
                if q2 not in seen:
                    seen.add(q2)
                    order.append(q2)
                    nxt.append(q2)
        queue = nxt
    return tuple(order)


def cyclic_quotient(rank: int, n: int, exponents: list[int] | None = None,
                    names: tuple[str, ...] = ()) -> QuotientMap:
    """All generators map into Z/n realized as the n-cycle (1 2 ... n)."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    gen = (
        IDENTITY_PERM if n == 1
        else Permutation.from_cycles([list(range(1, n + 1))])
    )
    target = FinitePermutationGroup(max(n, 1), (gen,) if n > 1 else (), label=f"Z/{n}")
    if exponents is None:
        exponents = [1] * rank
    images = []
    for e in exponents:
        img = IDENTITY_PERM
        for _ in range(e % n if n > 1 else 0):
            img = img * gen
        images.append(img)
    return QuotientMap(rank, target, tuple(images), names, expected_order=n)


# ---------------------------------------------------------------------------
# derivatives and the representation


def fox_derivative(word: FreeWord, i: int, qmap: QuotientMap) -> GroupRingElement:
    """d(word)/dx_i in Z[Q]: dx_j/dx_i = delta_ij, d(x_j^-1)/dx_i =
    -delta_ij pi(x_j)^-1, d(uv)/dx_i = du/dx_i + pi(u) dv/dx_i."""
    if not 1 <= i <= qmap.rank:
        raise IndexError(f"generator index {i} outside 1..{qmap.rank}")
    acc: dict[Permutation, int] = {}
    prefix = IDENTITY_PERM
    for g, e in word.letters:
        img = qmap.images[g - 1]
        if e == 1:
            if g == i:
                acc[prefix] = acc.get(prefix, 0) + 1
            prefix = prefix * img
        else:
            prefix = prefix * img.inverse()
            if g == i:
                acc[prefix] = acc.get(prefix, 0) - 1
    return GroupRingElement.from_dict(acc)


@dataclass(frozen=True)
class MagnusElement:
    q: Permutation
    coords: tuple[GroupRingElement, ...]


@dataclass(frozen=True)
class MagnusGroup(GroupDesc):
    """Image of F/N' under the derivative representation."""

    qmap: QuotientMap

    def identity(self) -> MagnusElement:
        return MagnusElement(
            IDENTITY_PERM, tuple(GroupRingElement.zero() for _ in range(self.qmap.rank))
        )

    def check(self, a) -> None:
        if not isinstance(a, MagnusElement) or len(a.coords) != self.qmap.rank:
            raise VariantMismatchError(f"{a!r} is not an element of {self}")
        self.qmap.target.check(a.q)

    def _mul(self, a: MagnusElement, b: MagnusElement) -> MagnusElement:
        coords = tuple(
            va + vb.left_translate(a.q) for va, vb in zip(a.coords, b.coords)
        )
        return MagnusElement(a.q * b.q, coords)

    def _inv(self, a: MagnusElement) -> MagnusElement:
        qinv = a.q.inverse()
        return MagnusElement(
            qinv, tuple(-(v.left_translate(qinv)) for v in a.coords)
        )

    def _is_identity(self, a: MagnusElement) -> bool:
        return a.q.is_identity() and all(v.is_zero() for v in a.coords)

    def image(self, word: FreeWord) -> MagnusElement:
        if word.max_generator() > self.qmap.rank:
            raise IndexError("word uses a generator beyond the declared rank")
        return MagnusElement(
            self.qmap.pi(word),
            tuple(fox_derivative(word, i, self.qmap) for i in range(1, self.qmap.rank + 1)),
        )

    def sort_key(self, a: MagnusElement):
        return (
            a.q.pairs,
            tuple(tuple((q.pairs, c) for q, c in v.terms) for v in a.coords),
        )

    def random_element(self, rng: random.Random) -> MagnusElement:
        from .words import random_word

        return self.image(random_word(rng, self.qmap.rank, 12))

    def format_element(self, a: MagnusElement) -> str:
        qs = "1" if a.q.is_identity() else str(a.q)
        vs = ", ".join(v.format() for v in a.coords)
        return f"({qs}; {vs})"

    def __str__(self) -> str:
        return f"magnus({self.qmap.target}, rank {self.qmap.rank})"


def magnus_image(word: FreeWord, qmap: QuotientMap) -> MagnusElement:
    return MagnusGroup(qmap).image(word)


def in_nprime(word: FreeWord, qmap: QuotientMap) -> bool:
    """Whether the word lies in N' = [N, N]: trivial quotient image and all
    derivative coordinates zero."""
    img = magnus_image(word, qmap)
    return img.q.is_identity() and all(v.is_zero() for v in img.coords)


def in_fprime(word: FreeWord) -> bool:
    """Whether the word lies in the derived subgroup of F (all exponent
    sums vanish)."""
    return all(
        word.exponent_sum(i) == 0 for i in range(1, word.max_generator() + 1)
    )


def torsion_probe(word: FreeWord, qmap: QuotientMap, nmax: int) -> bool:
    """True iff the image of the word is trivial or has no power <= nmax
    equal to the identity."""
    if nmax < 2:
        raise ValueError("nmax must be >= 2")
    grp = MagnusGroup(qmap)
    img = grp.image(word)
    if grp.is_identity(img):
        return True
    return grp.order_of_element(img, nmax) is None


# ---------------------------------------------------------------------------
# Schreier generators and the fiber lattice


def schreier_generators(qmap: QuotientMap) -> list[FreeWord]:
    """Free generators of N from the breadth-first transversal: for each
    coset representative t and generator x, the word t x (rep of t x)^-1,
    dropping trivial ones.  Exactly |Q| (r - 1) + 1 survive."""
    if not qmap.finite:
        raise CapabilityError("Schreier transversal requires a finite quotient")
    if qmap.rank < 2:
        raise ValueError("the free group must be non-abelian (rank >= 2)")
    order = qmap.elements()
    transversal: dict[Permutation, FreeWord] = {IDENTITY_PERM: FreeWord.identity()}
    queue = [IDENTITY_PERM]
    while queue:
        nxt = []
        for q in queue:
            for j, img in enumerate(qmap.images, start=1):
                q2 = q * img
                if q2 not in transversal:
                    transversal[q2] = transversal[q] * FreeWord.generator(j)
                    nxt.append(q2)
        queue = nxt
    gens = []
    for q in order:
        for j, img in enumerate(qmap.images, start=1):
            word = (
                transversal[q]
                * FreeWord.generator(j)
                * transversal[q * img].inverse()
            )
            if not word.is_identity():
                gens.append(word)
    expected = len(order) * (qmap.rank - 1) + 1
    if len(gens) != expected:
        raise AssertionError(
            f"Schreier count {len(gens)} != {expected}"
        )
    return gens


def flatten_coords(a: MagnusElement, qmap: QuotientMap) -> list[int]:
    """Derivative coordinates as one integer vector: generator-major blocks,
    quotient elements in the fixed breadth-first order."""
    index = qmap.element_index()
    nq = len(index)
    out = [0] * (qmap.rank * nq)
    for i, v in enumerate(a.coords):
        base = i * nq
        for q, c in v.terms:
            out[base + index[q]] = c
    return out


@dataclass(frozen=True)
class FiberLattice:
    basis: tuple[tuple[int, ...], ...]      # Schreier-generator vectors
    canonical: tuple[tuple[int, ...], ...]  # echelon form, zero rows dropped
    rank: int


def fiber_lattice(qmap: QuotientMap) -> FiberLattice:
    """Integer lattice spanned by the derivative vectors of the Schreier
    generators; this is a free basis of the abelian fiber N/N'."""
    gens = schreier_generators(qmap)
    grp = MagnusGroup(qmap)
    rows = tuple(tuple(flatten_coords(grp.image(s), qmap)) for s in gens)
    ech = row_echelon([list(r) for r in rows])
    canonical = tuple(row for row in ech.reduced if any(row))
    return FiberLattice(basis=rows, canonical=canonical, rank=ech.rank)


# ---------------------------------------------------------------------------
# holonomy and the crystallographic certificate


@dataclass(frozen=True)
class CrystallographicReport:
    order: int
    rank: int
    holonomy: tuple[tuple[tuple[int, ...], ...], ...]  # one matrix per generator
    faithful: bool
    verdict: bool
    degenerate: bool

    def to_json(self, full: bool = False) -> str:
        data: dict[str, Any] = {
            "order": self.order,
            "rank": self.rank,
            "faithful": self.faithful,
            "verdict": self.verdict,
        }
        if self.degenerate:
            data["degenerate"] = True
        if full:
            data["holonomy"] = [
                [list(row) for row in mat] for mat in self.holonomy
            ]
        return json.dumps(data)


def _ambient_action(q: Permutation, vec, qmap: QuotientMap, index) -> list[int]:
    """Left translation by q on each Z[Q] block of a flattened vector."""
    order = qmap.elements()
    nq = len(order)
    out = [0] * len(vec)
    for i in range(qmap.rank):
        base = i * nq
        for k, elt in enumerate(order):
            c = vec[base + k]
            if c:
                out[base + index[q * elt]] = c
    return out


def crystallographic_report(qmap: QuotientMap) -> CrystallographicReport:
    """Certify the crystallographic shape of F/N': finite holonomy Q acting
    on the free abelian fiber N/N', faithfully iff the centralizer of the
    fiber is the fiber itself."""
    if not qmap.finite:
        raise CapabilityError("crystallographic data requires a finite quotient")
    if qmap.rank < 2:
        raise ValueError("the free group must be non-abelian (rank >= 2)")
    lat = fiber_lattice(qmap)
    ech = row_echelon([list(r) for r in lat.basis])
    index = qmap.element_index()
    order = qmap.elements()

    holonomy = []
    for img in qmap.images:
        mat = []
        for row in lat.basis:
            moved = _ambient_action(img, list(row), qmap, index)
            coords = solve_integer_combination(ech, moved)
            if coords is None:
                raise AssertionError(
                    "lattice is not stable under the quotient action"
                )
            mat.append(tuple(coords))
        holonomy.append(tuple(mat))

    faithful = True
    for q in order[1:]:
        if all(
            _ambient_action(q, list(row), qmap, index) == list(row)
            for row in lat.basis
        ):
            faithful = False
            break

    return CrystallographicReport(
        order=len(order),
        rank=lat.rank,
        holonomy=tuple(holonomy),
        faithful=faithful,
        verdict=faithful,
        degenerate=len(order) == 1,
    )


# ---------------------------------------------------------------------------
# finite quotients mod p


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ModPMagnusGroup(GroupDesc):
    """Finite quotient (F_p[Q])^r x| Q obtained by reducing derivative
    coordinates mod p; restricted to words with trivial abelianization it
    exhibits finite quotients of F'/N'."""

    qmap: QuotientMap
    p: int

    def __post_init__(self):
        if not self.qmap.finite:
            raise CapabilityError("mod-p quotient requires a finite quotient")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def order(self) -> int:
        nq = len(self.qmap.elements())
        return self.p ** (nq * self.qmap.rank) * nq

    def identity(self) -> MagnusElement:
        return MagnusElement(
            IDENTITY_PERM,
            tuple(GroupRingElement.zero() for _ in range(self.qmap.rank)),
        )

    def _reduce(self, a: MagnusElement) -> MagnusElement:
        return MagnusElement(a.q, tuple(v.reduce_mod(self.p) for v in a.coords))

    def check(self, a) -> None:
        if not isinstance(a, MagnusElement) or len(a.coords) != self.qmap.rank:
            raise VariantMismatchError(f"{a!r} is not an element of {self}")
        self.qmap.target.check(a.q)
        for v in a.coords:
            if any(not 0 <= c < self.p for _, c in v.terms):
                raise VariantMismatchError("coordinates not reduced mod p")

    def _mul(self, a: MagnusElement, b: MagnusElement) -> MagnusElement:
        coords = tuple(
            (va + vb.left_translate(a.q)).reduce_mod(self.p)
            for va, vb in zip(a.coords, b.coords)
        )
        return MagnusElement(a.q * b.q, coords)

    def _inv(self, a: MagnusElement) -> MagnusElement:
        qinv = a.q.inverse()
        return MagnusElement(
            qinv,
            tuple((-(v.left_translate(qinv))).reduce_mod(self.p) for v in a.coords),
        )

    def _is_identity(self, a: MagnusElement) -> bool:
        return a.q.is_identity() and all(v.is_zero() for v in a.coords)

    def image(self, word: FreeWord) -> MagnusElement:
        return self._reduce(magnus_image(word, self.qmap))

    def sort_key(self, a: MagnusElement):
        return MagnusGroup(self.qmap).sort_key(a)

    def random_element(self, rng: random.Random) -> MagnusElement:
        from .words import random_word

        return self.image(random_word(rng, self.qmap.rank, 12))

    def format_element(self, a: MagnusElement) -> str:
        return MagnusGroup(self.qmap).format_element(a)

    def __str__(self) -> str:
        return f"modp({self.qmap.target}, rank {self.qmap.rank}, p={self.p})"


def mod_p_quotient(qmap: QuotientMap, p: int) -> ModPMagnusGroup:
    return ModPMagnusGroup(qmap, p)


# ---------------------------------------------------------------------------
# quotient-map input formats


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _target_from_label(label: str) -> tuple[GroupDesc, int | None, Permutation | None]:
    """Returns (target, expected order, canonical cyclic generator or None)."""
    label = label.strip()
    m = re.fullmatch(r"Z/(\d+)", label)
    if m:
        n = int(m.group(1))
        gen = (
            Permutation.from_cycles([list(range(1, n + 1))]) if n > 1 else IDENTITY_PERM
        )
        target = FinitePermutationGroup(
            max(n, 1), (gen,) if n > 1 else (), label=f"Z/{n}"
        )
        return target, n, gen
    m = re.fullmatch(r"S\((\d+)\)", label)
    if m:
        n = int(m.group(1))
        fact = 1
        for k in range(2, n + 1):
            fact *= k
        return symmetric_group(n), fact, None
    m = re.fullmatch(r"A\((\d+)\)", label)
    if m:
        n = int(m.group(1))
        fact = 1
        for k in range(2, n + 1):
            fact *= k
        return alternating_group(n), fact // 2 if n >= 2 else 1, None
    m = re.fullmatch(r"perm\((\d+)\)", label)
    if m:
        return FinitePermutationGroup(int(m.group(1)), ()), None, None
    if label == "altfin":
        return AltFin(), None, None
    raise WordSyntaxError(f"unknown quotient target {label!r}")


def _parse_image(text: str, cyclic_gen: Permutation | None, target: GroupDesc) -> Permutation:
    text = text.strip()
    m = re.fullmatch(r"s(\^(-?\d+))?", text)
    if m and cyclic_gen is not None:
        e = int(m.group(2)) if m.group(2) else 1
        out = IDENTITY_PERM
        g = cyclic_gen if e >= 0 else cyclic_gen.inverse()
        for _ in range(abs(e)):
            out = out * g
        return out
    return parse_permutation(text)


def parse_quotient_spec(text: str, rank: int | None = None) -> QuotientMap:
    """Inline quotient syntax: "Z/2: x->s, y->s" or
    "S(3): x->(1 2), y->(1 2 3)"."""
    if ":" not in text:
        raise WordSyntaxError("quotient spec needs 'target: gen->image, ...'")
    label, _, body = text.partition(":")
    target, expected, cyclic_gen = _target_from_label(label)
    names, images = [], []
    for chunk in _split_top_level(body, ","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "->" not in chunk:
            raise WordSyntaxError(f"missing '->' in assignment {chunk!r}")
        name, _, img = chunk.partition("->")
        names.append(name.strip())
        images.append(_parse_image(img, cyclic_gen, target))
    if rank is not None and rank != len(names):
        raise WordSyntaxError(
            f"declared rank {rank} but {len(names)} generator assignments"
        )
    if isinstance(target, FinitePermutationGroup) and not target.generators:
        # generic targets take their generators from the images
        target = FinitePermutationGroup(target.degree, tuple(images), target.label)
    return QuotientMap(
        rank=len(names),
        target=target,
        images=tuple(images),
        names=tuple(names),
        expected_order=expected,
    )


def load_qmap(path: str) -> QuotientMap:
    """JSON file format: {"rank": r, "target": "Z/2", "targets": [cycles...],
    "names": [...](optional)}."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    rank = int(data["rank"])
    label = data.get("target")
    cycles = [str(s) for s in data["targets"]]
    if label is None:
        degree = max(
            (max(parse_permutation(s).support, default=1) for s in cycles),
            default=1,
        )
        label = f"perm({degree})"
    target, expected, cyclic_gen = _target_from_label(label)
    images = tuple(_parse_image(s, cyclic_gen, target) for s in cycles)
    if isinstance(target, FinitePermutationGroup) and not target.generators:
        target = FinitePermutationGroup(target.degree, images, target.label)
    names = tuple(str(n) for n in data.get("names", ()))
    return QuotientMap(
        rank=rank,
        target=target,
        images=images,
        names=names,
        expected_order=expected,
    )
