"""Command-line front end.

Construction DSL for groups: Z, S(n), A(n), altfin, lamp(G), wr(A, B),
theta(A), tower(G), thetalim(A), plus names defined with --def.  Element
expressions use the constructors of the chosen group (sigma, fg(..),
delta(..), base(..), top(..), t, wlevel(i, ..), lift(..)), cycle notation
in permutation groups, integers in Z, products with '*', powers with '^',
and commutators [u, v].

Commands: eval, cmp, witness {commutator|normal-closure}, crysta,
wm-report, fox, order-check, selftest.  Exit codes: 0 success (for
wm-report: consistent), 1 parse/capability error or exhausted search,
2 refuted verdict or selftest failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any

from .config import DEFAULT_LIMITS
from .errors import GroupError, WordSyntaxError
from .groupcore import (
    AltFin,
    FinitePermutationGroup,
    GroupDesc,
    Integers,
    alternating_group,
    symmetric_group,
)
from .lamplighter import LampGroup, RestrictedWreathGroup, TowerGroup
from .magnus import (
    MagnusGroup,
    crystallographic_report,
    fox_derivative,
    load_qmap,
    parse_quotient_spec,
)
from .perms import parse_permutation
from .presentation import load_presentation, parse_presentation, wm_necessary_report
from .properties import CHECKS, run_check
from .theta import (
    ThetaGroup,
    ThetaLimitGroup,
    WElement,
    format_conjugate_word,
    normal_closure_witness,
)
from .words import WordParser


@dataclass
class SessionConfig:
    seed: int = 0
    json_mode: bool = False
    depth: int | None = None
    max_index: int = 5


@dataclass
class Session:
    """Named groups and elements for one invocation; names are unique."""

    config: SessionConfig = field(default_factory=SessionConfig)
    groups: dict[str, GroupDesc] = field(default_factory=dict)
    elements: dict[str, tuple[GroupDesc, Any]] = field(default_factory=dict)

    def define_group(self, name: str, desc: GroupDesc) -> None:
        if name in self.groups:
            raise WordSyntaxError(f"group name {name!r} already defined")
        self.groups[name] = desc

    def define_element(self, name: str, desc: GroupDesc, value: Any) -> None:
        if name in self.elements:
            raise WordSyntaxError(f"element name {name!r} already defined")
        self.elements[name] = (desc, value)


# ---------------------------------------------------------------------------
# group expressions


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> None:
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            raise WordSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += len(ch)

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if start == self.pos:
            raise WordSyntaxError("expected a name", start)
        return self.text[start : self.pos]

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start : self.pos].lstrip("+-"):
            raise WordSyntaxError("expected an integer", start)
        return int(self.text[start : self.pos])

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse_group(session: Session, text: str) -> GroupDesc:
    cur = _Cursor(text)
    desc = _group_expr(session, cur)
    if not cur.done():
        raise WordSyntaxError("trailing input after group expression", cur.pos)
    return desc


def _tower_depth(session: Session) -> int:
    return session.config.depth or DEFAULT_LIMITS.tower_depth


def _theta_depth(session: Session) -> int:
    return session.config.depth or DEFAULT_LIMITS.theta_depth


def _wreath_depth(session: Session) -> int:
    d = session.config.depth
    return max(DEFAULT_LIMITS.wreath_depth, d) if d else DEFAULT_LIMITS.wreath_depth


def _group_expr(session: Session, cur: _Cursor) -> GroupDesc:
    name = cur.ident()
    if name == "Z":
        return Integers()
    if name == "altfin":
        return AltFin()
    if name == "S":
        cur.eat("(")
        n = cur.integer()
        cur.eat(")")
        return symmetric_group(n)
    if name == "A":
        cur.eat("(")
        n = cur.integer()
        cur.eat(")")
        return alternating_group(n)
    if name == "lamp":
        cur.eat("(")
        base = _group_expr(session, cur)
        cur.eat(")")
        return LampGroup(base)
    if name == "wr":
        cur.eat("(")
        base = _group_expr(session, cur)
        cur.eat(",")
        top = _group_expr(session, cur)
        cur.eat(")")
        return RestrictedWreathGroup(base, top)
    if name == "theta":
        cur.eat("(")
        base = _group_expr(session, cur)
        cur.eat(")")
        return ThetaGroup(base, max_wreath_level=_wreath_depth(session))
    if name == "tower":
        cur.eat("(")
        base = _group_expr(session, cur)
        cur.eat(")")
        return TowerGroup(base, max_level=_tower_depth(session))
    if name == "thetalim":
        cur.eat("(")
        base = _group_expr(session, cur)
        cur.eat(")")
        return ThetaLimitGroup(
            base,
            max_level=_theta_depth(session),
            wreath_level=_wreath_depth(session),
        )
    if name in session.groups:
        return session.groups[name]
    raise WordSyntaxError(f"unknown group constructor {name!r}")


# ---------------------------------------------------------------------------
# element expressions


def parse_element(session: Session, desc: GroupDesc, text: str):
    cur = _Cursor(text)
    value = _elem_product(session, desc, cur)
    if not cur.done():
        raise WordSyntaxError("trailing input after element expression", cur.pos)
    return value


def _elem_product(session: Session, desc: GroupDesc, cur: _Cursor):
    out = _elem_factor(session, desc, cur)
    while cur.peek() == "*":
        cur.eat("*")
        out = desc.mul(out, _elem_factor(session, desc, cur))
    return out


def _elem_factor(session: Session, desc: GroupDesc, cur: _Cursor):
    atom = _elem_atom(session, desc, cur)
    while cur.peek() == "^":
        cur.eat("^")
        atom = desc.pow(atom, cur.integer())
    return atom


def _parse_cycles(cur: _Cursor):
    # one or more "(...)" blocks of whitespace-separated points
    start = cur.pos
    while cur.peek() == "(":
        cur.eat("(")
        while cur.pos < len(cur.text) and cur.text[cur.pos] != ")":
            ch = cur.text[cur.pos]
            if not (ch.isdigit() or ch.isspace() or ch == ","):
                raise WordSyntaxError("unexpected character in cycle", cur.pos)
            cur.pos += 1
        cur.eat(")")
    return parse_permutation(cur.text[start : cur.pos])


def _elem_atom(session: Session, desc: GroupDesc, cur: _Cursor):
    ch = cur.peek()
    if ch == "[":
        cur.eat("[")
        left = _elem_product(session, desc, cur)
        cur.eat(",")
        right = _elem_product(session, desc, cur)
        cur.eat("]")
        return desc.commutator(left, right)
    if isinstance(desc, (FinitePermutationGroup, AltFin)) and ch == "(":
        return _parse_cycles(cur)
    if ch == "(":
        cur.eat("(")
        inner = _elem_product(session, desc, cur)
        cur.eat(")")
        return inner
    if ch.isdigit() or ch in "+-":
        n = cur.integer()
        if isinstance(desc, Integers):
            return n
        if isinstance(desc, TowerGroup) and isinstance(desc.base, Integers):
            return desc.element(0, n)
        if isinstance(desc, ThetaLimitGroup) and isinstance(desc.base, Integers):
            return desc.element(0, n)
        raise WordSyntaxError(f"integer literal not valid in {desc}")
    name = cur.ident()
    if name == "id":
        return desc.identity()
    if name in session.elements:
        edesc, value = session.elements[name]
        if edesc != desc:
            raise WordSyntaxError(f"element {name!r} belongs to {edesc}, not {desc}")
        return value
    if isinstance(desc, LampGroup):
        if name == "sigma":
            return desc.sigma()
        if name == "fg":
            cur.eat("(")
            g = _elem_product(session, desc.base, cur)
            cur.eat(")")
            return desc.fg(g)
        if name == "delta":
            cur.eat("(")
            g = _elem_product(session, desc.base, cur)
            cur.eat(")")
            return desc.delta(g)
    if isinstance(desc, RestrictedWreathGroup):
        if name == "base":
            cur.eat("(")
            a = _elem_product(session, desc.base, cur)
            cur.eat(")")
            return desc.embed_base(a)
        if name == "top":
            cur.eat("(")
            b = _elem_product(session, desc.top, cur)
            cur.eat(")")
            return desc.embed_top(b)
    if isinstance(desc, ThetaGroup):
        if name == "t":
            return desc.t()
        if name == "wlevel":
            cur.eat("(")
            level = cur.integer()
            cur.eat(",")
            w = _elem_product(session, desc.w_desc(level), cur)
            cur.eat(")")
            return desc.element(0, 0, WElement(level, w))
        if name == "delta":
            cur.eat("(")
            a = _elem_product(session, desc.base, cur)
            cur.eat(")")
            return desc.theta_embed(a)
    if isinstance(desc, TowerGroup):
        if name == "sigma":
            lamp: LampGroup = desc.level_desc(1)  # type: ignore[assignment]
            return desc.element(1, lamp.sigma())
        if name in ("fg", "delta"):
            cur.eat("(")
            inner = _elem_product(session, desc, cur)
            cur.eat(")")
            inner = desc.canonical(inner)
            lamp: LampGroup = desc.level_desc(inner.level + 1)  # type: ignore[assignment]
            payload = (
                lamp.fg(inner.payload) if name == "fg" else lamp.delta(inner.payload)
            )
            return desc.element(inner.level + 1, payload)
        if name == "lift":
            cur.eat("(")
            inner = _elem_product(session, desc, cur)
            cur.eat(")")
            return desc.lift(inner)
    if isinstance(desc, ThetaLimitGroup):
        if name == "lift":
            cur.eat("(")
            inner = _elem_product(session, desc, cur)
            cur.eat(")")
            return desc.lift(inner)
    raise WordSyntaxError(f"unknown element constructor {name!r} for {desc}")


def pretty(desc: GroupDesc, value) -> str:
    """Readable element rendering with point-function sugar."""
    if isinstance(desc, LampGroup):
        v = desc.delta_value(value)
        if v is not None:
            if desc.base._is_identity(v):
                return "id"
            return f"delta({desc.base.format_element(v)})"
        if not value.fn.breaks and value.shift == 1:
            return "sigma"
    return desc.format_element(value)


# ---------------------------------------------------------------------------
# commands


def _emit(session: Session, human: str, record: dict) -> None:
    if session.config.json_mode:
        print(json.dumps(record))
    else:
        print(human)


def cmd_eval(session: Session, args) -> int:
    desc = parse_group(session, args.group)
    value = parse_element(session, desc, args.expr)
    text = pretty(desc, value)
    _emit(session, text, {"group": str(desc), "value": text})
    return 0


def cmd_cmp(session: Session, args) -> int:
    desc = parse_group(session, args.group)
    a = parse_element(session, desc, args.left)
    b = parse_element(session, desc, args.right)
    result = desc.compare(a, b)
    _emit(
        session,
        str(result),
        {"group": str(desc), "comparison": str(result)},
    )
    return 0


def cmd_order_check(session: Session, args) -> int:
    desc = parse_group(session, args.group)
    a = parse_element(session, desc, args.expr)
    order = desc.order_of_element(a, args.bound)
    human = f"order {order}" if order else f"no order <= {args.bound}"
    _emit(
        session,
        human,
        {"group": str(desc), "bound": args.bound, "order": order},
    )
    return 0


def cmd_witness(session: Session, args) -> int:
    desc = parse_group(session, args.group)
    if args.kind == "commutator":
        if not isinstance(desc, TowerGroup):
            raise GroupError("commutator witnesses live in tower(G) groups")
        x = parse_element(session, desc, args.element)
        u, v = desc.perfectness_witness(x)
        record = {
            "group": str(desc),
            "element": desc.format_element(desc.canonical(x)),
            "u": desc.format_element(u),
            "v": desc.format_element(v),
            "verified": True,
        }
        human = (
            f"u = {record['u']}\nv = {record['v']}\n"
            f"verified: [u, v] = {record['element']} in the limit"
        )
        _emit(session, human, record)
        return 0
    # normal-closure
    if not isinstance(desc, RestrictedWreathGroup):
        raise GroupError("normal-closure witnesses live in wr(A, B) groups")
    if args.chain < 1:
        raise GroupError("--chain must be >= 1")
    if args.x is None or args.y is None or args.b is None:
        raise GroupError("normal-closure witnesses need --x, --y, and --b")
    x = parse_element(session, desc.base, args.x)
    y = parse_element(session, desc.base, args.y)
    b = parse_element(session, desc.top, args.b)
    # extra layers re-state the same witness one wreath level up, with the
    # base pair embedded; every layer is evaluated on construction
    rw = desc
    for _ in range(args.chain - 1):
        x = rw.embed_base(x)
        y = rw.embed_base(y)
        rw = RestrictedWreathGroup(rw, desc.top)
    word = normal_closure_witness(rw, x, y, b)
    lines = format_conjugate_word(rw, word)
    record = {
        "group": str(rw),
        "conjugated": rw.format_element(word.conjugated),
        "pairs": [
            {"u": rw.format_element(u), "exponent": eps} for u, eps in word.pairs
        ],
        "verified": True,
    }
    human = f"{lines}\nverified: product equals [x, y] in {rw}"
    _emit(session, human, record)
    return 0


def _load_quotient(args):
    spec = args.quotient
    if spec.endswith(".qmap"):
        return load_qmap(spec)
    return parse_quotient_spec(spec, getattr(args, "rank", None))


def cmd_crysta(session: Session, args) -> int:
    qmap = _load_quotient(args)
    report = crystallographic_report(qmap)
    print(report.to_json(full=args.full))
    return 0


def cmd_fox(session: Session, args) -> int:
    qmap = _load_quotient(args)
    parser = qmap.word_parser()
    word = parser.parse(args.word)
    grp = MagnusGroup(qmap)
    image = grp.image(word)
    derivatives = [fox_derivative(word, i, qmap) for i in range(1, qmap.rank + 1)]
    record = {
        "word": word.format(list(qmap.names)),
        "quotient_image": str(image.q),
        "derivatives": {
            qmap.names[i]: derivatives[i].format() for i in range(qmap.rank)
        },
    }
    if session.config.json_mode:
        print(json.dumps(record))
    else:
        print(f"pi(w) = {record['quotient_image']}")
        for name in qmap.names:
            print(f"d/d{name} = {record['derivatives'][name]}")
    return 0


def cmd_wm_report(session: Session, args) -> int:
    if args.presentation.endswith(".pres"):
        pres = load_presentation(args.presentation)
    else:
        pres = parse_presentation(args.presentation)
    report = wm_necessary_report(pres, args.max_index)
    if session.config.json_mode:
        print(report.to_json())
    else:
        print(f"presentation: {report.presentation}")
        print(f"abelian invariants: {list(report.abelian_invariants)}")
        print(
            "proper subgroups of index <= "
            f"{report.max_index_checked}: {list(report.proper_subgroup_indexes)}"
        )
        print(f"verdict: {report.verdict}")
        for witness in report.witnesses:
            print(f"witness: {witness}")
        print(f"note: {report.disclaimer}")
    return report.exit_code()


def cmd_selftest(session: Session, args) -> int:
    failures = 0
    passes = 0
    for name in CHECKS:
        result = run_check(name, seed=session.config.seed, scale=args.scale)
        print(result.line())
        if result.passed:
            passes += 1
        else:
            failures += 1
    print(f"selftest: {passes} suites passed, {failures} failed")
    return 2 if failures else 0


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument(
        "--json", action="store_true", help="machine-readable output"
    )
    common.add_argument(
        "--depth", type=int, default=None, help="override recursion depth bounds"
    )
    common.add_argument(
        "--max-index", type=int, default=5, help="index bound for wm-report"
    )
    parser = argparse.ArgumentParser(
        prog="wmgroups",
        description="exact arithmetic in orderable wreath/HNN constructions, "
        "Magnus-style F'/N' representations, and bounded presentation audits",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def sub_parser(name: str, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    def add_defs(p):
        p.add_argument(
            "--def",
            dest="defs",
            action="append",
            default=[],
            metavar="NAME=GROUP",
            help="name a group description for later reference",
        )
        p.add_argument(
            "--let",
            dest="lets",
            action="append",
            default=[],
            metavar="NAME=EXPR",
            help="name an element of the --group for later reference",
        )

    p = sub_parser("eval", help="evaluate an element expression")
    p.add_argument("--group", required=True)
    add_defs(p)
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = sub_parser("cmp", help="compare two elements in an ordered group")
    p.add_argument("--group", required=True)
    add_defs(p)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_cmp)

    p = sub_parser("order-check", help="probe the order of an element")
    p.add_argument("--group", required=True)
    p.add_argument("--bound", type=int, default=10)
    add_defs(p)
    p.add_argument("expr")
    p.set_defaults(func=cmd_order_check)

    p = sub_parser("witness", help="constructive witnesses")
    p.add_argument("kind", choices=["commutator", "normal-closure"])
    p.add_argument("--group", required=True)
    add_defs(p)
    p.add_argument("--element", help="tower element (commutator witness)")
    p.add_argument("--x", help="base element (normal-closure witness)")
    p.add_argument("--y", help="base element (normal-closure witness)")
    p.add_argument("--b", help="nontrivial top element (normal-closure witness)")
    p.add_argument(
        "--chain",
        type=int,
        default=1,
        help="wrap this many wreath layers; each layer's witness is "
        "evaluated, no claim beyond the evaluations",
    )
    p.set_defaults(func=cmd_witness)

    p = sub_parser("crysta", help="crystallographic certificate for F/N'")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--quotient", required=True, help="inline spec or .qmap file")
    p.add_argument("--full", action="store_true", help="include holonomy matrices")
    p.set_defaults(func=cmd_crysta)

    p = sub_parser("fox", help="free derivatives of a word over a quotient")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--quotient", required=True)
    p.add_argument("word")
    p.set_defaults(func=cmd_fox)

    p = sub_parser("wm-report", help="bounded weak-mixing audit")
    p.add_argument("presentation", help="inline presentation or .pres file")
    p.set_defaults(func=cmd_wm_report)

    p = sub_parser("selftest", help="run every property suite")
    p.add_argument("--scale", type=float, default=1.0, help="sample-count multiplier")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    session = Session(
        config=SessionConfig(
            seed=args.seed,
            json_mode=args.json,
            depth=args.depth,
            max_index=args.max_index,
        )
    )
    try:
        for d in getattr(args, "defs", []):
            name, _, expr = d.partition("=")
            session.define_group(name.strip(), parse_group(session, expr))
        if getattr(args, "lets", None) and hasattr(args, "group"):
            desc = parse_group(session, args.group)
            for d in args.lets:
                name, _, expr = d.partition("=")
                session.define_element(
                    name.strip(), desc, parse_element(session, desc, expr)
                )
        return args.func(session, args)
    except (GroupError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
