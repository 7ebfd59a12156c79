"""Session files: tokenizer, AST, recursive-descent parser and canonical printer.

Names are resolved while parsing: every block declares the generators it
brings into scope together with their degrees, and an expression may only use
names declared earlier in the file.
"""

from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from ..graded import format_fraction


class SessionError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line, self.col, self.message = line, col, message


# -- tokens --------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^/()\[\],;:={}@])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SessionError(line, pos - start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- AST -----------------------------------------------------------------------

Pos = tuple  # (line, col)


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=0, compare=False)


@dataclass(frozen=True)
class Name:
    ident: str
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - *
    left: object
    right: object
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Pow:
    base: Name
    exp: int
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Bracket:
    left: object
    right: object
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Delta:
    arg: object
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Partial:
    arg: object
    var: Name
    pos: Pos = field(default=(0, 0), compare=False)
    degree: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Decl:
    name: str
    deg: int
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    expr: object
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ContextBlock:
    base: tuple  # ((name, degree), ...)
    shift: int
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BivectorBlock:
    entries: tuple  # ((row name, column name, expr), ...)
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class AlgebroidBlock:
    base: tuple
    frame: tuple
    anchors: tuple  # ((frame, base, expr), ...)
    brackets: tuple  # ((frame, frame, expr), ...)
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class AlgebroidPreset:
    name: str  # "cotangent": built from the bivector block
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class AlgebraBlock:
    dim: int
    unit: int | None
    products: tuple  # ((i, j, expr), ...)
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ConstraintsBlock:
    dim: int
    constraints: tuple
    hamiltonian: object | None
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Directive:
    name: str
    args: tuple
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass
class SessionFile:
    statements: list
    degrees: dict  # every name in scope -> degree

    def __eq__(self, other):
        return isinstance(other, SessionFile) and self.statements == other.statements

    def blocks(self, kind) -> list:
        return [s for s in self.statements if isinstance(s, kind)]

    def first(self, kind):
        found = self.blocks(kind)
        return found[0] if found else None

    def directives(self, name: str) -> list[Directive]:
        return [s for s in self.statements if isinstance(s, Directive) and s.name == name]

    @property
    def lets(self) -> dict:
        return {s.name: s for s in self.statements if isinstance(s, Let)}


DIRECTIVES = {
    "eval": 1, "bracket": 2, "master": 1, "delta": 1, "diff": 1, "koszul": 2,
    "alpha": 1, "lambda": None,
}
RESERVED = {"d", "Delta", "let"}


# -- parser --------------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.degrees: dict[str, int] = {}
        self.lets: dict[str, int | None] = {}
        self.shift: int | None = None
        self.scope: dict[str, int] | None = None  # block-local names, when set
        self.seen: set[str] = set()

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return SessionError(tok.line, tok.col, msg)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        t = self.tok
        if text is not None and not (t.kind in ("op", "ident") and t.text == text):
            got = "end of input" if t.kind == "eof" else repr(t.text)
            raise self.error(f"expected {text!r}, got {got}")
        if kind is not None and t.kind != kind:
            got = "end of input" if t.kind == "eof" else repr(t.text)
            raise self.error(f"expected {kind}, got {got}")
        self.i += 1
        return t

    def integer(self) -> int:
        neg = False
        if self.at("-"):
            self.take("-")
            neg = True
        t = self.take(kind="num")
        if "/" in t.text:
            raise self.error("expected an integer", t)
        return -int(t.text) if neg else int(t.text)

    def ident(self) -> Token:
        t = self.take(kind="ident")
        if t.text in RESERVED:
            raise self.error(f"{t.text!r} is reserved", t)
        return t

    # names and degrees

    def declare(self, name: str, deg: int, tok: Token):
        if name in RESERVED:
            raise self.error(f"{name!r} is reserved", tok)
        if name in self.lets:
            raise self.error(f"{name!r} is already a let binding", tok)
        old = self.degrees.get(name)
        if old is not None and old != deg:
            raise self.error(f"degree inference conflict for {name!r}: {old} vs {deg}", tok)
        self.degrees[name] = deg

    def lookup(self, tok: Token) -> int | None:
        name = tok.text
        if self.scope is not None:
            if name in self.scope:
                return self.scope[name]
            raise self.error(f"undeclared identifier {name!r}", tok)
        if name in self.lets:
            return self.lets[name]
        if name in self.degrees:
            return self.degrees[name]
        raise self.error(f"undeclared identifier {name!r}", tok)

    # session

    def parse(self) -> SessionFile:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return SessionFile(stmts, dict(self.degrees))

    def statement(self):
        t = self.tok
        pos = (t.line, t.col)
        if self.at("@"):
            return self.directive()
        if self.at("let"):
            self.take("let")
            name = self.ident()
            if name.text in self.degrees or name.text in self.lets:
                raise self.error(f"{name.text!r} is already defined", name)
            self.take("=")
            e = self.expr()
            self.take(";")
            self.lets[name.text] = e.degree
            return Let(name.text, e, pos)
        if t.kind == "ident" and t.text in _BLOCKS and self.toks[self.i + 1].text in ("{",) + _PRESET_FOLLOW.get(t.text, ()):
            if t.text in self.seen:
                raise self.error(f"duplicate {t.text} block")
            self.seen.add(t.text)
            self.take()
            return getattr(self, "block_" + t.text)(pos)
        name = self.ident()
        self.take(":")
        deg = self.integer()
        self.take(";")
        if self.shift is not None:
            raise self.error("generator declarations cannot be mixed with a context block", name)
        self.declare(name.text, deg, name)
        self.seen.add("decl")
        return Decl(name.text, deg, pos)

    def directive(self) -> Directive:
        t = self.take("@")
        name = self.take(kind="ident")
        if name.text not in DIRECTIVES:
            raise self.error(f"unknown directive @{name.text}", name)
        args = []
        if not self.at(";"):
            args.append(self.expr())
            while self.at(","):
                self.take(",")
                args.append(self.expr())
        self.take(";")
        want = DIRECTIVES[name.text]
        if want is not None and len(args) != want:
            raise self.error(f"@{name.text} takes {want} argument(s)", name)
        if name.text == "lambda":
            if not args or not isinstance(args[0], Num) or args[0].value.denominator != 1:
                raise self.error("@lambda needs an integer arity first", name)
            if int(args[0].value) != len(args) - 1:
                raise self.error(f"@lambda {args[0].value} takes {args[0].value} argument(s)", name)
        return Directive(name.text, tuple(args), (t.line, t.col))

    # blocks

    def block_context(self, pos) -> ContextBlock:
        if "decl" in self.seen:
            raise self.error("a context block cannot follow generator declarations")
        self.take("{")
        base, shift = [], None
        while not self.at("}"):
            kw = self.take(kind="ident")
            if kw.text == "base":
                while True:
                    name = self.ident()
                    self.take(":")
                    base.append((name.text, self.integer(), name))
                    if not self.at(","):
                        break
                    self.take(",")
            elif kw.text == "shift":
                shift = self.integer()
            else:
                raise self.error(f"unknown context entry {kw.text!r}", kw)
            self.take(";")
        self.take("}")
        if shift is None:
            raise self.error("context block needs a shift")
        if not base:
            raise self.error("context block needs base coordinates")
        self.shift = shift
        for name, deg, tok in base:
            self.declare(name, deg, tok)
        for name, deg, tok in base:
            self.declare(f"{name}_dag", shift - deg, tok)
        self.base_names = [b[0] for b in base]
        if shift == -1 and not any(d for _, d, _ in base):
            # forms on the base, used by the forms calculus
            for name, _, tok in base:
                self.declare(f"d{name}", 1, tok)
        return ContextBlock(tuple((n, d) for n, d, _ in base), shift, pos)

    def _need_bivector_context(self):
        if self.shift != -1 or any(self.degrees[n] for n in getattr(self, "base_names", [])):
            raise self.error("bivectors need a context block with shift -1 and degree-0 base")

    def block_bivector(self, pos) -> BivectorBlock:
        self._need_bivector_context()
        self.take("{")
        base = {n: 0 for n in self.base_names}
        entries = []
        while not self.at("}"):
            a = self.ident()
            self.take(",")
            b = self.ident()
            for t in (a, b):
                if t.text not in base:
                    raise self.error(f"{t.text!r} is not a base coordinate", t)
            self.take(":")
            self.scope = base
            e = self.expr()
            self.scope = None
            self.take(";")
            entries.append((a.text, b.text, e))
        self.take("}")
        return BivectorBlock(tuple(entries), pos)

    def block_algebroid(self, pos):
        if self.at("cotangent"):
            t = self.take("cotangent")
            self.take(";")
            if "bivector" not in self.seen:
                raise self.error("the cotangent algebroid needs a bivector block first", t)
            for n in self.base_names:
                self.declare(f"d{n}_star", 1, t)
            return AlgebroidPreset("cotangent", pos)
        self.take("{")
        base, frame, anchors, brackets = [], [], [], []
        while not self.at("}"):
            kw = self.take(kind="ident")
            if kw.text in ("base", "frame"):
                names = [self.ident()]
                while self.at(","):
                    self.take(",")
                    names.append(self.ident())
                for t in names:
                    deg = 0 if kw.text == "base" else -1
                    self.declare(t.text, deg, t)
                    if kw.text == "frame":
                        self.declare(f"{t.text}_star", 1, t)
                (base if kw.text == "base" else frame).extend(t.text for t in names)
            elif kw.text == "anchor":
                f = self.ident()
                if f.text not in frame:
                    raise self.error(f"{f.text!r} is not a frame element", f)
                self.take("(")
                y = self.ident()
                if y.text not in base:
                    raise self.error(f"{y.text!r} is not a base coordinate", y)
                self.take(")")
                self.take("=")
                self.scope = {n: 0 for n in base}
                anchors.append((f.text, y.text, self.expr()))
                self.scope = None
            elif kw.text == "bracket":
                self.take("[")
                a = self.ident()
                self.take(",")
                b = self.ident()
                self.take("]")
                for t in (a, b):
                    if t.text not in frame:
                        raise self.error(f"{t.text!r} is not a frame element", t)
                self.take("=")
                self.scope = {**{n: 0 for n in base}, **{n: -1 for n in frame}}
                brackets.append((a.text, b.text, self.expr()))
                self.scope = None
            else:
                raise self.error(f"unknown algebroid entry {kw.text!r}", kw)
            self.take(";")
        self.take("}")
        if not frame:
            raise self.error("algebroid block needs a frame")
        return AlgebroidBlock(tuple(base), tuple(frame), tuple(anchors), tuple(brackets), pos)

    def block_algebra(self, pos) -> AlgebraBlock:
        self.take("{")
        kw = self.take("dim")
        dim = self.integer()
        self.take(";")
        if dim < 1:
            raise self.error("dimension must be positive", kw)
        names = {f"e{k}": k for k in range(dim)}
        unit, products = None, []
        while not self.at("}"):
            if self.at("unit"):
                self.take("unit")
                t = self.ident()
                if t.text not in names:
                    raise self.error(f"{t.text!r} is not a basis element", t)
                unit = names[t.text]
            else:
                a = self.ident()
                self.take("*")
                b = self.ident()
                for t in (a, b):
                    if t.text not in names:
                        raise self.error(f"{t.text!r} is not a basis element", t)
                self.take("=")
                self.scope = {n: 0 for n in names}
                products.append((names[a.text], names[b.text], self.expr()))
                self.scope = None
            self.take(";")
        self.take("}")
        return AlgebraBlock(dim, unit, tuple(products), pos)

    def block_constraints(self, pos) -> ConstraintsBlock:
        self.take("{")
        self.take("dim")
        dim = self.integer()
        self.take(";")
        scope = {f"q{i + 1}": 0 for i in range(dim)}
        scope.update({f"p{i + 1}": 0 for i in range(dim)})
        cons, ham = [], None
        while not self.at("}"):
            kw = self.take(kind="ident")
            if kw.text not in ("constraint", "hamiltonian"):
                raise self.error(f"unknown constraints entry {kw.text!r}", kw)
            self.scope = scope
            e = self.expr()
            self.scope = None
            if kw.text == "constraint":
                cons.append(e)
            else:
                ham = e
            self.take(";")
        self.take("}")
        if not cons:
            raise self.error("constraints block needs at least one constraint")
        return ConstraintsBlock(dim, tuple(cons), ham, pos)

    # expressions

    @contextmanager
    def _closing(self, opener: Token, text: str):
        """Report running off the end of the input at the unclosed opener."""
        try:
            yield
        except SessionError:
            if self.tok.kind == "eof":
                raise self.error(f"unclosed {text!r}", opener) from None
            raise

    def expr(self):
        left = self.term()
        while self.at("+") or self.at("-"):
            t = self.take()
            right = self.term()
            left = BinOp(t.text, left, right, (t.line, t.col), _same(left.degree, right.degree))
        return left

    def term(self):
        left = self.unary()
        while self.at("*"):
            t = self.take()
            right = self.unary()
            left = BinOp("*", left, right, (t.line, t.col), _add(left.degree, right.degree))
        return left

    def unary(self):
        if self.at("-"):
            t = self.take("-")
            a = self.unary()
            return Neg(a, (t.line, t.col), a.degree)
        return self.power()

    def power(self):
        a = self.atom()
        if self.at("^"):
            t = self.take("^")
            e = self.take(kind="num")
            if "/" in e.text:
                raise self.error("exponent must be a non-negative integer", e)
            if not isinstance(a, Name) or a.ident in self.lets:
                raise self.error("powers apply to generators only", t)
            if a.degree % 2:
                raise self.error(f"power of odd generator {a.ident!r}", t)
            k = int(e.text)
            return Pow(a, k, (t.line, t.col), a.degree * k)
        return a

    def atom(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "num":
            self.take()
            return Num(Fraction(t.text), pos)
        if self.at("("):
            self.take("(")
            with self._closing(t, "("):
                e = self.expr()
                self.take(")")
            return e
        if self.at("["):
            self.take("[")
            with self._closing(t, "["):
                a = self.expr()
                self.take(",")
                b = self.expr()
                self.take("]")
            deg = None
            if self.shift is not None and a.degree is not None and b.degree is not None:
                deg = a.degree + b.degree - self.shift
            return Bracket(a, b, pos, deg)
        if self.at("Delta"):
            self.take("Delta")
            self.take("(")
            a = self.expr()
            self.take(")")
            deg = None if a.degree is None or self.shift is None else a.degree - self.shift
            return Delta(a, pos, deg)
        if self.at("d"):
            self.take("d")
            self.take("(")
            a = self.expr()
            self.take(")")
            self.take("/")
            self.take("d")
            self.take("(")
            v = self.ident()
            vdeg = self.lookup(v)
            if v.text in self.lets and self.scope is None:
                raise self.error("partials are taken with respect to generators", v)
            self.take(")")
            var = Name(v.text, (v.line, v.col), vdeg)
            deg = None if a.degree is None else a.degree - vdeg
            return Partial(a, var, pos, deg)
        if t.kind == "ident":
            v = self.ident()
            return Name(v.text, pos, self.lookup(v))
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise self.error(f"unexpected {got}")


_BLOCKS = ("context", "bivector", "algebroid", "algebra", "constraints")
_PRESET_FOLLOW = {"algebroid": ("cotangent",)}


def _same(a, b):
    return a if a is not None and a == b else None


def _add(a, b):
    return None if a is None or b is None else a + b


def parse(text: str) -> SessionFile:
    return Parser(text).parse()


def parse_expr(text: str, degrees: dict[str, int], shift: int | None = None):
    p = Parser(text)
    p.degrees = dict(degrees)
    p.shift = shift
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return e


# -- printer -------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 4


def print_expr(e) -> str:
    if isinstance(e, Num):
        return format_fraction(e.value)
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Pow):
        return f"{e.base.ident}^{e.exp}"
    if isinstance(e, Neg):
        inner = print_expr(e.arg)
        return f"-({inner})" if _prec(e.arg) < 3 else f"-{inner}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = print_expr(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = print_expr(e.right)
        if _prec(e.right) <= p:
            right = f"({right})"
        sep = "*" if e.op == "*" else f" {e.op} "
        return f"{left}{sep}{right}"
    if isinstance(e, Bracket):
        return f"[{print_expr(e.left)}, {print_expr(e.right)}]"
    if isinstance(e, Delta):
        return f"Delta({print_expr(e.arg)})"
    if isinstance(e, Partial):
        return f"d({print_expr(e.arg)})/d({e.var.ident})"
    raise TypeError(f"not an expression: {e!r}")


def print_session(s: SessionFile) -> str:
    lines = []
    for st in s.statements:
        if isinstance(st, Decl):
            lines.append(f"{st.name}:{st.deg};")
        elif isinstance(st, Let):
            lines.append(f"let {st.name} = {print_expr(st.expr)};")
        elif isinstance(st, Directive):
            args = ", ".join(print_expr(a) for a in st.args)
            lines.append(f"@{st.name} {args};" if args else f"@{st.name};")
        elif isinstance(st, ContextBlock):
            base = ", ".join(f"{n}:{d}" for n, d in st.base)
            lines.append(f"context {{\n  base {base};\n  shift {st.shift};\n}}")
        elif isinstance(st, BivectorBlock):
            body = "".join(f"  {a}, {b}: {print_expr(e)};\n" for a, b, e in st.entries)
            lines.append(f"bivector {{\n{body}}}")
        elif isinstance(st, AlgebroidPreset):
            lines.append(f"algebroid {st.name};")
        elif isinstance(st, AlgebroidBlock):
            body = []
            if st.base:
                body.append(f"  base {', '.join(st.base)};")
            body.append(f"  frame {', '.join(st.frame)};")
            body += [f"  anchor {f}({y}) = {print_expr(e)};" for f, y, e in st.anchors]
            body += [f"  bracket [{a}, {b}] = {print_expr(e)};" for a, b, e in st.brackets]
            lines.append("algebroid {\n" + "\n".join(body) + "\n}")
        elif isinstance(st, AlgebraBlock):
            body = [f"  dim {st.dim};"]
            if st.unit is not None:
                body.append(f"  unit e{st.unit};")
            body += [f"  e{i}*e{j} = {print_expr(e)};" for i, j, e in st.products]
            lines.append("algebra {\n" + "\n".join(body) + "\n}")
        elif isinstance(st, ConstraintsBlock):
            body = [f"  dim {st.dim};"]
            body += [f"  constraint {print_expr(e)};" for e in st.constraints]
            if st.hamiltonian is not None:
                body.append(f"  hamiltonian {print_expr(st.hamiltonian)};")
            lines.append("constraints {\n" + "\n".join(body) + "\n}")
    return "\n".join(lines) + "\n"
