"""Seeded property suites shared by the acceptance tests and `selftest`.

Each check draws its own RNG from the given seed, runs a sampled or
exhaustive verification, and reports a failure count instead of raising,
so the selftest runner can tally everything in one pass.  The `scale`
knob multiplies sample counts (floor 1) for quick smoke runs.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .groupcore import (
    AltFin,
    FinitePermutationGroup,
    GroupDesc,
    Integers,
    Ordering,
    alternating_group,
    symmetric_group,
)
from .intlinalg import bareiss_det, mat_mul, smith_normal_form
from .lamplighter import (
    LampGroup,
    RestrictedWreathGroup,
    TowerGroup,
    step_inverse,
    step_pointwise,
)
from .magnus import (
    GroupRingElement,
    MagnusGroup,
    QuotientMap,
    crystallographic_report,
    cyclic_quotient,
    fiber_lattice,
    in_fprime,
    in_nprime,
    mod_p_quotient,
    schreier_generators,
    torsion_probe,
)
from .perms import Permutation, parse_permutation
from .presentation import (
    CosetTable,
    Exhausted,
    abelianization,
    low_index_subgroups,
    parse_presentation,
    todd_coxeter,
    verbal_subgroup,
)
from .theta import ThetaGroup, ThetaLimitGroup, normal_closure_witness
from .words import FreeWord, random_word


@dataclass
class CheckResult:
    name: str
    samples: int
    failures: int
    elapsed: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        note = f"  [{self.note}]" if self.note else ""
        return (
            f"{status} {self.name}: {self.samples} samples, "
            f"{self.failures} failures, {self.elapsed:.2f}s{note}"
        )


def _n(count: int, scale: float) -> int:
    return max(1, int(count * scale))


# ---------------------------------------------------------------------------
# fixtures

HIGMAN = "<a,b,c,d | a^b a^-2, b^c b^-2, c^d c^-2, d^a d^-2>"
COMMUTATOR_WORD = FreeWord.from_letters([(1, 1), (2, 1), (1, -1), (2, -1)])


def _s3_quotient() -> QuotientMap:
    return QuotientMap(
        rank=2,
        target=symmetric_group(3),
        images=(parse_permutation("(1 2)"), parse_permutation("(1 2 3)")),
        names=("x", "y"),
        expected_order=6,
    )


def _altfin_quotient() -> QuotientMap:
    return QuotientMap(
        rank=2,
        target=AltFin(),
        images=(parse_permutation("(1 2 3)"), parse_permutation("(2 3 4)")),
        names=("x", "y"),
    )


# ---------------------------------------------------------------------------
# first construction


def check_lamp_commutator_identity(rng: random.Random, scale: float) -> CheckResult:
    """[half-line(g), shift] = point(g) over integer, S(3), and nested bases."""
    t0 = time.monotonic()
    bases: list[GroupDesc] = [Integers(), symmetric_group(3), LampGroup(Integers())]
    n = _n(100, scale)
    samples = failures = 0
    for base in bases:
        lamp = LampGroup(base)
        sigma = lamp.sigma()
        for _ in range(n):
            g = base.random_element(rng)
            samples += 1
            if not lamp.eq(lamp.commutator(lamp.fg(g), sigma), lamp.delta(g)):
                failures += 1
    return CheckResult(
        "lamp-commutator-identity", samples, failures, time.monotonic() - t0
    )


def _cone_check(name: str, desc: GroupDesc, rng: random.Random, n: int) -> CheckResult:
    t0 = time.monotonic()
    samples = failures = 0

    def positive_of(a):
        if desc.is_identity(a):
            return None
        return a if desc.is_positive(a) else desc.inv(a)

    for _ in range(n):
        a = desc.random_element(rng)
        samples += 1
        flags = [desc.is_positive(a), desc.is_positive(desc.inv(a)), desc.is_identity(a)]
        if sum(flags) != 1:
            failures += 1
    for _ in range(n):
        u = positive_of(desc.random_element(rng))
        v = positive_of(desc.random_element(rng))
        samples += 1
        if u is None or v is None:
            continue
        if not desc.is_positive(desc.mul(u, v)):
            failures += 1
    if desc.order_two_sided:
        for _ in range(n):
            u = positive_of(desc.random_element(rng))
            h = desc.random_element(rng)
            samples += 1
            if u is None:
                continue
            if not desc.is_positive(desc.conj(u, h)):
                failures += 1
    return CheckResult(name, samples, failures, time.monotonic() - t0)


def check_cone_lamp(rng: random.Random, scale: float) -> CheckResult:
    n = _n(10_000, scale)
    r1 = _cone_check("cone-lamp", LampGroup(Integers()), rng, n // 2)
    r2 = _cone_check("cone-lamp", LampGroup(LampGroup(Integers())), rng, n - n // 2)
    return CheckResult(
        "cone-lamp",
        r1.samples + r2.samples,
        r1.failures + r2.failures,
        r1.elapsed + r2.elapsed,
        note="bases Z and lamp(Z)",
    )


def check_cone_wreath(rng: random.Random, scale: float) -> CheckResult:
    n = _n(10_000, scale)
    r1 = _cone_check(
        "cone-wreath", RestrictedWreathGroup(Integers(), Integers()), rng, n // 2
    )
    r2 = _cone_check(
        "cone-wreath",
        RestrictedWreathGroup(LampGroup(Integers()), Integers()),
        rng,
        n - n // 2,
    )
    return CheckResult(
        "cone-wreath",
        r1.samples + r2.samples,
        r1.failures + r2.failures,
        r1.elapsed + r2.elapsed,
        note="wr(Z,Z) and wr(lamp(Z),Z)",
    )


def check_cone_hnn(rng: random.Random, scale: float) -> CheckResult:
    n = _n(10_000, scale)
    out = _cone_check("cone-hnn", ThetaGroup(Integers(), max_wreath_level=12), rng, n)
    out.note = "theta(Z)"
    return out


def check_order_extension(rng: random.Random, scale: float) -> CheckResult:
    """Embeddings preserve and reflect positivity: point functions into the
    shift group, base/top into wreath products, and the base into the HNN
    extension."""
    t0 = time.monotonic()
    n = _n(10_000, scale)
    samples = failures = 0
    Z = Integers()
    lamp = LampGroup(Z)
    rw = RestrictedWreathGroup(Z, Z)
    th = ThetaGroup(Z, max_wreath_level=12)
    for _ in range(n):
        g = Z.random_element(rng)
        samples += 1
        ok = (
            lamp.is_positive(lamp.delta(g)) == Z.is_positive(g)
            and rw.is_positive(rw.embed_base(g)) == Z.is_positive(g)
            and rw.is_positive(rw.embed_top(g)) == Z.is_positive(g)
            and th.is_positive(th.theta_embed(g)) == Z.is_positive(g)
        )
        if not ok:
            failures += 1
    return CheckResult("order-extension", samples, failures, time.monotonic() - t0)


def check_compare_total_order(rng: random.Random, scale: float) -> CheckResult:
    """Pairwise trichotomy and transitivity on sampled sets."""
    t0 = time.monotonic()
    samples = failures = 0
    for desc in (LampGroup(Integers()), ThetaGroup(Integers(), max_wreath_level=12)):
        pool = [desc.random_element(rng) for _ in range(_n(12, scale) + 3)]
        for a in pool:
            for b in pool:
                samples += 1
                c1 = desc.compare(a, b)
                c2 = desc.compare(b, a)
                flip = {
                    Ordering.LESS: Ordering.GREATER,
                    Ordering.GREATER: Ordering.LESS,
                    Ordering.EQUAL: Ordering.EQUAL,
                }
                if c2 != flip[c1]:
                    failures += 1
        for a in pool:
            for b in pool:
                for c in pool:
                    if (
                        desc.compare(a, b) == Ordering.LESS
                        and desc.compare(b, c) == Ordering.LESS
                    ):
                        samples += 1
                        if desc.compare(a, c) != Ordering.LESS:
                            failures += 1
    return CheckResult("compare-total-order", samples, failures, time.monotonic() - t0)


def _torsion_check(name: str, desc: GroupDesc, rng, n: int, bound: int) -> CheckResult:
    t0 = time.monotonic()
    samples = failures = 0
    for _ in range(n):
        a = desc.random_nontrivial(rng)
        samples += 1
        if desc.order_of_element(a, bound) is not None:
            failures += 1
    return CheckResult(name, samples, failures, time.monotonic() - t0)


def check_torsion_lamp(rng: random.Random, scale: float) -> CheckResult:
    return _torsion_check(
        "torsion-lamp", LampGroup(Integers()), rng, _n(1000, scale), 10
    )


def check_torsion_hnn(rng: random.Random, scale: float) -> CheckResult:
    return _torsion_check(
        "torsion-hnn", ThetaGroup(Integers(), max_wreath_level=16), rng, _n(1000, scale), 10
    )


def check_tower_witness(rng: random.Random, scale: float) -> CheckResult:
    """Every generator at levels <= 3 is the commutator of its witness pair."""
    t0 = time.monotonic()
    tower = TowerGroup(Integers())
    samples = failures = 0
    for level in range(0, 4):
        for gen in tower.level_generators(level):
            samples += 1
            try:
                u, v = tower.perfectness_witness(gen)
            except AssertionError:
                failures += 1
                continue
            got = tower.mul(
                tower.mul(tower.mul(u, v), tower.inv(u)), tower.inv(v)
            )
            if not tower.eq(got, gen):
                failures += 1
    # random payloads as well
    for _ in range(_n(25, scale)):
        x = tower.random_element(rng)
        samples += 1
        try:
            u, v = tower.perfectness_witness(x)
        except AssertionError:
            failures += 1
            continue
        got = tower.mul(tower.mul(tower.mul(u, v), tower.inv(u)), tower.inv(v))
        if not tower.eq(got, x):
            failures += 1
    return CheckResult("tower-witness", samples, failures, time.monotonic() - t0)


def check_claim_witness(rng: random.Random, scale: float) -> CheckResult:
    """The 4-conjugate expression equals [x, y] in wreath fixtures."""
    t0 = time.monotonic()
    samples = failures = 0
    fixtures = [
        RestrictedWreathGroup(LampGroup(Integers()), Integers()),
        RestrictedWreathGroup(Integers(), Integers()),
    ]
    n = _n(100, scale)
    for rw in fixtures:
        for _ in range(n // len(fixtures) + 1):
            x = rw.base.random_element(rng)
            y = rw.base.random_element(rng)
            b = rw.top.random_nontrivial(rng)
            samples += 1
            try:
                word = normal_closure_witness(rw, x, y, b)
            except AssertionError:
                failures += 1
                continue
            if len(word.pairs) != 4:
                failures += 1
    return CheckResult("claim-witness", samples, failures, time.monotonic() - t0)


def check_hnn_relation(rng: random.Random, scale: float) -> CheckResult:
    """t w t^-1 = phi(w) at wreath depths <= 3."""
    t0 = time.monotonic()
    th = ThetaGroup(Integers(), max_wreath_level=12)
    t = th.t()
    samples = failures = 0
    for _ in range(_n(100, scale)):
        we = th.w_random(rng, max_level=min(3, rng.randrange(0, 4)))
        samples += 1
        c = th.element(0, 0, we)
        lhs = th.mul(th.mul(t, c), th.inv(t))
        if not th.eq(lhs, th.element(0, 0, th.phi(we))):
            failures += 1
    return CheckResult("hnn-relation", samples, failures, time.monotonic() - t0)


def check_hnn_normal_form(rng: random.Random, scale: float) -> CheckResult:
    """Association-order independence for random words over t, t^-1 and
    sampled stable letters; canonical form is idempotent."""
    t0 = time.monotonic()
    th = ThetaGroup(Integers(), max_wreath_level=16)
    samples = failures = 0
    for _ in range(_n(1000, scale)):
        letters = []
        for _ in range(rng.randrange(2, 7)):
            r = rng.random()
            if r < 0.3:
                letters.append(th.t())
            elif r < 0.6:
                letters.append(th.inv(th.t()))
            else:
                letters.append(th.element(0, 0, th.w_random(rng, 1)))
        samples += 1
        left = th.identity()
        for x in letters:
            left = th.mul(left, x)
        right = th.identity()
        for x in reversed(letters):
            right = th.mul(x, right)
        mid = letters[len(letters) // 2]
        split = letters[: len(letters) // 2], letters[len(letters) // 2 :]
        acc1 = th.identity()
        for x in split[0]:
            acc1 = th.mul(acc1, x)
        acc2 = th.identity()
        for x in split[1]:
            acc2 = th.mul(acc2, x)
        tree = th.mul(acc1, acc2)
        if not (th.eq(left, right) and th.eq(left, tree)):
            failures += 1
        canon = th.element(left.texp, left.depth, left.w)
        if canon != th.element(canon.texp, canon.depth, canon.w):
            failures += 1
        if canon.depth > 0 and th.in_phi_image(canon.w):
            failures += 1
    return CheckResult("hnn-normal-form", samples, failures, time.monotonic() - t0)


# ---------------------------------------------------------------------------
# second construction


def check_magnus_homomorphism(rng: random.Random, scale: float) -> CheckResult:
    """Image of a product is the product of images (and likewise inverses)
    over cyclic, symmetric, and finitary-alternating quotients."""
    t0 = time.monotonic()
    samples = failures = 0
    fixtures = [
        cyclic_quotient(2, 2, names=("x", "y")),
        _s3_quotient(),
        _altfin_quotient(),
    ]
    n = _n(1000, scale)
    for qmap in fixtures:
        grp = MagnusGroup(qmap)
        for _ in range(n // len(fixtures) + 1):
            u = random_word(rng, 2, 40)
            v = random_word(rng, 2, 40)
            samples += 1
            if grp.image(u * v) != grp.mul(grp.image(u), grp.image(v)):
                failures += 1
            if grp.image(u.inverse()) != grp.inv(grp.image(u)):
                failures += 1
    return CheckResult("magnus-homomorphism", samples, failures, time.monotonic() - t0)


def check_magnus_nprime(rng: random.Random, scale: float) -> CheckResult:
    """Commutators of kernel words land in N'; the basic commutator does
    not, with the exact derivative vector (1 - s, s - 1)."""
    t0 = time.monotonic()
    qmap = cyclic_quotient(2, 2, names=("x", "y"))
    sgens = schreier_generators(qmap)
    samples = failures = 0
    vanished = 0
    n = _n(100, scale)
    for _ in range(n):
        n1 = FreeWord.identity()
        n2 = FreeWord.identity()
        for _ in range(rng.randrange(1, 4)):
            n1 = n1 * rng.choice(sgens) ** rng.choice((1, -1))
            n2 = n2 * rng.choice(sgens) ** rng.choice((1, -1))
        samples += 1
        if not in_nprime(n1.commutator(n2), qmap):
            failures += 1
    for _ in range(n):
        word = FreeWord.identity()
        for _ in range(rng.randrange(1, 5)):
            word = word * rng.choice(sgens) ** rng.choice((1, -1))
        if word.is_identity():
            continue
        samples += 1
        if in_nprime(word, qmap):
            vanished += 1  # reported, not failed: an accidental N' element
    grp = MagnusGroup(qmap)
    img = grp.image(COMMUTATOR_WORD)
    s = qmap.images[0]
    expected = (
        GroupRingElement.unit() - GroupRingElement.unit(s),
        GroupRingElement.unit(s) - GroupRingElement.unit(),
    )
    samples += 1
    if in_nprime(COMMUTATOR_WORD, qmap) or img.coords != expected:
        failures += 1
    if not in_fprime(COMMUTATOR_WORD):
        failures += 1
    note = f"{vanished} sampled kernel words had vanishing derivative" if vanished else ""
    return CheckResult("magnus-nprime", samples, failures, time.monotonic() - t0, note)


def check_torsion_magnus(rng: random.Random, scale: float) -> CheckResult:
    t0 = time.monotonic()
    samples = failures = 0
    n = _n(1000, scale)
    for qmap in (cyclic_quotient(2, 2, names=("x", "y")), _s3_quotient()):
        for _ in range(n // 2):
            word = random_word(rng, 2, 30)
            samples += 1
            if not torsion_probe(word, qmap, 10):
                failures += 1
    return CheckResult("torsion-magnus", samples, failures, time.monotonic() - t0)


def check_fiber_properties(rng: random.Random, scale: float) -> CheckResult:
    """Kernel-word images commute pairwise and the lattice is stable under
    the quotient action with integral coordinates."""
    t0 = time.monotonic()
    samples = failures = 0
    for qmap in (cyclic_quotient(2, 2, names=("x", "y")), _s3_quotient()):
        grp = MagnusGroup(qmap)
        sgens = schreier_generators(qmap)
        for _ in range(_n(100, scale) // 2):
            w1 = rng.choice(sgens) * rng.choice(sgens) ** rng.choice((1, -1))
            w2 = rng.choice(sgens) * rng.choice(sgens) ** rng.choice((1, -1))
            a, b = grp.image(w1), grp.image(w2)
            samples += 1
            if not a.q.is_identity() or not b.q.is_identity():
                failures += 1
                continue
            if grp.mul(a, b) != grp.mul(b, a):
                failures += 1
        try:
            crystallographic_report(qmap)  # raises if not stable/integral
        except AssertionError:
            failures += 1
        samples += 1
    return CheckResult("fiber-properties", samples, failures, time.monotonic() - t0)


def check_lattice_ranks(rng: random.Random, scale: float) -> CheckResult:
    """|Q| (r - 1) + 1 for the three fixtures, cross-checked against the
    Smith-form rank of the same matrix."""
    t0 = time.monotonic()
    samples = failures = 0
    fixtures = [
        (cyclic_quotient(2, 2, names=("x", "y")), 3),
        (_s3_quotient(), 7),
        (cyclic_quotient(3, 2), 5),
    ]
    for qmap, expected in fixtures:
        lat = fiber_lattice(qmap)
        snf_rank = smith_normal_form([list(r) for r in lat.basis]).rank
        samples += 1
        nq = len(qmap.elements())
        if not (lat.rank == expected == snf_rank == nq * (qmap.rank - 1) + 1):
            failures += 1
    return CheckResult("lattice-ranks", samples, failures, time.monotonic() - t0)


def check_crystallographic(rng: random.Random, scale: float) -> CheckResult:
    t0 = time.monotonic()
    samples = failures = 0
    for qmap in (
        cyclic_quotient(2, 2, names=("x", "y")),
        _s3_quotient(),
        cyclic_quotient(3, 2),
    ):
        report = crystallographic_report(qmap)
        samples += 1
        if not (report.faithful and report.verdict and not report.degenerate):
            failures += 1
    return CheckResult("crystallographic", samples, failures, time.monotonic() - t0)


def check_modp_quotient(rng: random.Random, scale: float) -> CheckResult:
    """Mod-3 reduction of the basic commutator is a nontrivial element of a
    finite group, and reduction is a homomorphism."""
    t0 = time.monotonic()
    qmap = cyclic_quotient(2, 2, names=("x", "y"))
    mp = mod_p_quotient(qmap, 3)
    samples = failures = 0
    samples += 1
    if mp.is_identity(mp.image(COMMUTATOR_WORD)):
        failures += 1
    samples += 1
    if mp.order() != 3 ** 4 * 2:
        failures += 1
    for _ in range(_n(1000, scale)):
        u = random_word(rng, 2, 20)
        v = random_word(rng, 2, 20)
        samples += 1
        if mp.image(u * v) != mp.mul(mp.image(u), mp.image(v)):
            failures += 1
    return CheckResult("modp-quotient", samples, failures, time.monotonic() - t0)


# ---------------------------------------------------------------------------
# presentation audits


def check_higman_audit(rng: random.Random, scale: float) -> CheckResult:
    t0 = time.monotonic()
    pres = parse_presentation(HIGMAN)
    samples = failures = 0
    snf = smith_normal_form(pres.exponent_matrix())
    samples += 1
    if snf.diagonal != (1, 1, 1, 1) or abelianization(pres) != ():
        failures += 1
    low = low_index_subgroups(pres, 5)
    samples += 1
    if low.subgroups != () or not low.complete:
        failures += 1
    ex = todd_coxeter(pres, [], limit=10_000)
    samples += 1
    if not isinstance(ex, Exhausted):
        failures += 1
    return CheckResult("higman-audit", samples, failures, time.monotonic() - t0)


def check_verbal_subgroups(rng: random.Random, scale: float) -> CheckResult:
    t0 = time.monotonic()
    samples = failures = 0
    s3 = symmetric_group(3)
    v3 = verbal_subgroup(s3, [COMMUTATOR_WORD])
    samples += 1
    want_a3 = frozenset(
        {
            parse_permutation("()"),
            parse_permutation("(1 2 3)"),
            parse_permutation("(1 3 2)"),
        }
    )
    if v3 != want_a3:
        failures += 1
    samples += 1
    if not all(g * v * g.inverse() in v3 for v in v3 for g in s3.generators):
        failures += 1
    a5 = alternating_group(5)
    v5 = verbal_subgroup(a5, [COMMUTATOR_WORD])
    samples += 1
    if len(v5) != 60:
        failures += 1
    trivial = FinitePermutationGroup(1, (), label="1")
    samples += 1
    if verbal_subgroup(trivial, [COMMUTATOR_WORD]) != frozenset(
        {trivial.identity()}
    ):
        failures += 1
    return CheckResult("verbal-subgroups", samples, failures, time.monotonic() - t0)


def check_snf_invariants(rng: random.Random, scale: float) -> CheckResult:
    """U A V = D with unimodular U, V, nonnegative diagonal, divisibility."""
    t0 = time.monotonic()
    samples = failures = 0
    for _ in range(_n(1000, scale)):
        m = rng.randrange(1, 7)
        n = rng.randrange(1, 7)
        a = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        samples += 1
        snf = smith_normal_form(a)
        u = [list(r) for r in snf.u]
        v = [list(r) for r in snf.v]
        if mat_mul(mat_mul(u, a), v) != snf.d_matrix():
            failures += 1
            continue
        if abs(bareiss_det(u)) != 1 or abs(bareiss_det(v)) != 1:
            failures += 1
            continue
        d = snf.diagonal
        if any(x < 0 for x in d):
            failures += 1
            continue
        if any(d[i] != 0 and d[i + 1] % d[i] != 0 for i in range(len(d) - 1) if d[i] != 0):
            failures += 1
    return CheckResult("snf-invariants", samples, failures, time.monotonic() - t0)


def check_coset_tables(rng: random.Random, scale: float) -> CheckResult:
    """Every table produced on the fixture presentations is a valid
    transitive action with trivial relators."""
    t0 = time.monotonic()
    samples = failures = 0
    fixtures = [
        ("<a | a^3>", [], 3),
        ("<a,b | a^2, b^2, (ab)^3>", ["a"], 3),
        ("<a,b | a^2, b^2, (ab)^3>", [], 6),
        ("<a,b | [a,b]>", ["a"], None),
    ]
    for text, sub, want in fixtures:
        pres = parse_presentation(text)
        parser = pres.word_parser()
        words = [parser.parse(s) for s in sub]
        result = todd_coxeter(pres, words, limit=5000)
        samples += 1
        if isinstance(result, Exhausted):
            if want is not None:
                failures += 1
            continue
        if not result.is_valid(pres) or (want is not None and result.index != want):
            failures += 1
    for text, k in [("<a |>", 4), ("<a,b | [a,b]>", 3), ("<a,b | a^2, b^2, (ab)^3>", 4)]:
        pres = parse_presentation(text)
        low = low_index_subgroups(pres, k)
        for table in low.subgroups:
            samples += 1
            if not table.is_valid(pres):
                failures += 1
    return CheckResult("coset-tables", samples, failures, time.monotonic() - t0)


def check_low_index_canonical(rng: random.Random, scale: float) -> CheckResult:
    """No two returned tables are conjugate: relabelling any table from any
    base point never reproduces a different returned table."""
    t0 = time.monotonic()
    from .presentation import _standardize_from

    samples = failures = 0
    for text, k in [("<a,b | a^2, b^2, (ab)^3>", 4), ("<a,b | [a,b]>", 3), ("<a |>", 5)]:
        pres = parse_presentation(text)
        low = low_index_subgroups(pres, k)
        ncols = 2 * pres.rank
        flats = []
        for table in low.subgroups:
            rows = [list(r) for r in table.rows]
            variants = {
                _standardize_from(rows, base, ncols) for base in range(len(rows))
            }
            flats.append((len(rows), variants))
        for i in range(len(flats)):
            for j in range(i + 1, len(flats)):
                samples += 1
                if flats[i][0] == flats[j][0] and flats[i][1] & flats[j][1]:
                    failures += 1
    return CheckResult("low-index-canonical", samples, failures, time.monotonic() - t0)


# ---------------------------------------------------------------------------
# core arithmetic suites


def check_group_axioms(rng: random.Random, scale: float) -> CheckResult:
    """Associativity, identity, inverse, and power laws on every variant."""
    t0 = time.monotonic()
    Z = Integers()
    variants: list[GroupDesc] = [
        Z,
        symmetric_group(4),
        AltFin(),
        LampGroup(Z),
        RestrictedWreathGroup(LampGroup(Z), Z),
        ThetaGroup(Z, max_wreath_level=64),
        TowerGroup(Z),
        ThetaLimitGroup(Z, max_level=2, wreath_level=64),
    ]
    samples = failures = 0
    per = _n(1000, scale) // len(variants) + 1
    for desc in variants:
        for _ in range(per):
            a = desc.random_element(rng)
            b = desc.random_element(rng)
            c = desc.random_element(rng)
            samples += 1
            ok = (
                desc.eq(desc.mul(desc.mul(a, b), c), desc.mul(a, desc.mul(b, c)))
                and desc.eq(desc.mul(a, desc.identity()), a)
                and desc.eq(desc.mul(desc.identity(), a), a)
                and desc.is_identity(desc.mul(a, desc.inv(a)))
                and desc.is_identity(desc.mul(desc.inv(a), a))
                and desc.eq(a, a)
            )
            if not ok:
                failures += 1
        for _ in range(max(1, per // 10)):
            a = desc.random_element(rng)
            m = rng.randint(-20, 20)
            n2 = rng.randint(-20, 20)
            samples += 1
            if not desc.eq(
                desc.pow(a, m + n2), desc.mul(desc.pow(a, m), desc.pow(a, n2))
            ):
                failures += 1
    return CheckResult("group-axioms", samples, failures, time.monotonic() - t0)


def check_permutation_parity(rng: random.Random, scale: float) -> CheckResult:
    t0 = time.monotonic()
    alt = AltFin()
    samples = failures = 0
    sym = symmetric_group(7)
    for _ in range(_n(1000, scale)):
        p = sym.random_element(rng)
        q = sym.random_element(rng)
        samples += 1
        if (p * q).parity != p.parity * q.parity:
            failures += 1
    for _ in range(_n(200, scale)):
        p = alt.random_element(rng)
        q = alt.random_element(rng)
        samples += 1
        if (p * q).parity != 1 or p.inverse().parity != 1:
            failures += 1
    return CheckResult("permutation-parity", samples, failures, time.monotonic() - t0)


def check_step_functions(rng: random.Random, scale: float) -> CheckResult:
    """Pointwise products/inverses match window evaluation; the breakpoint
    count of a product is at most the sum of the operands'."""
    t0 = time.monotonic()
    Z = Integers()
    lamp = LampGroup(Z)
    samples = failures = 0
    for _ in range(_n(500, scale)):
        f = lamp.random_element(rng).fn
        g = lamp.random_element(rng).fn
        prod = step_pointwise(Z, f, g)
        inv = step_inverse(Z, f)
        samples += 1
        window = range(-9, 10)
        if any(prod.evaluate(n) != f.evaluate(n) + g.evaluate(n) for n in window):
            failures += 1
        if any(inv.evaluate(n) != -f.evaluate(n) for n in window):
            failures += 1
        if len(prod.breaks) > len(f.breaks) + len(g.breaks):
            failures += 1
    return CheckResult("step-functions", samples, failures, time.monotonic() - t0)


CHECKS: dict[str, Callable[[random.Random, float], CheckResult]] = {
    "lamp-commutator-identity": check_lamp_commutator_identity,
    "cone-lamp": check_cone_lamp,
    "cone-wreath": check_cone_wreath,
    "cone-hnn": check_cone_hnn,
    "order-extension": check_order_extension,
    "compare-total-order": check_compare_total_order,
    "torsion-lamp": check_torsion_lamp,
    "torsion-hnn": check_torsion_hnn,
    "torsion-magnus": check_torsion_magnus,
    "tower-witness": check_tower_witness,
    "claim-witness": check_claim_witness,
    "hnn-relation": check_hnn_relation,
    "hnn-normal-form": check_hnn_normal_form,
    "magnus-homomorphism": check_magnus_homomorphism,
    "magnus-nprime": check_magnus_nprime,
    "fiber-properties": check_fiber_properties,
    "lattice-ranks": check_lattice_ranks,
    "crystallographic": check_crystallographic,
    "modp-quotient": check_modp_quotient,
    "higman-audit": check_higman_audit,
    "verbal-subgroups": check_verbal_subgroups,
    "snf-invariants": check_snf_invariants,
    "coset-tables": check_coset_tables,
    "low-index-canonical": check_low_index_canonical,
    "group-axioms": check_group_axioms,
    "permutation-parity": check_permutation_parity,
    "step-functions": check_step_functions,
}


def run_check(name: str, seed: int = 0, scale: float = 1.0) -> CheckResult:
    rng = random.Random(f"{name}:{seed}")
    return CHECKS[name](rng, scale)


def run_all(seed: int = 0, scale: float = 1.0) -> list[CheckResult]:
    return [run_check(name, seed, scale) for name in CHECKS]
