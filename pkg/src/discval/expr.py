"""Expression language for polynomials and substitution maps.

Grammar::

    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := base ("^" nat)?
    base     := rational | var | "(" expr ")" | "-" factor
    rational := int ("/" nat)?

In map context the variables are ``t``/``t1``..``tm`` and ``u``; there
``u`` also accepts a rational exponent ``u^(a/b)`` and ``puiseux(p)``
stands for ``sum_{j=1..T} u^(1/p^j) t1^j``.

Map syntax: ``X1 -> t; X2 -> u*t; X3 -> puiseux(3)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from .errors import ExprSyntaxError, InvalidSpec, NegativeExponent, UnknownVariable
from .exactnum import UElem, UPoly, format_rational
from .series import MultiSeries, TSeries


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str          # "X", "t" or "u"
    index: int = 0     # 1-based for X and t, 0 for u


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str            # "+", "-", "*"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: Fraction      # a nonnegative integer except for u^(a/b)


@dataclass(frozen=True)
class Puiseux:
    p: int


Expr = Union[Num, Var, Neg, BinOp, Pow, Puiseux]


@dataclass(frozen=True)
class Context:
    """Either X-variables (``kind='X'``, ``size=n``) or t-variables with u."""
    kind: str
    size: int

    @classmethod
    def xvars(cls, n: int) -> "Context":
        return cls("X", n)

    @classmethod
    def tvars(cls, m: int) -> "Context":
        return cls("t", m)


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/()]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", position=bad)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value:
            raise ExprSyntaxError(f"expected {value!r}, found {t[1] or 'end of input'!r}",
                                  position=t[2])
        return t

    def parse(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ExprSyntaxError(f"unexpected {t[1]!r}", position=t[2])
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek()[1] == "*":
            self.take()
            left = BinOp("*", left, self.factor())
        return left

    def factor(self) -> Expr:
        base = self.base()
        if self.peek()[1] == "^":
            self.take()
            t = self.peek()
            if t[1] == "-":
                raise NegativeExponent("exponents must be nonnegative", position=t[2])
            if t[1] == "(" and base == Var("u") and self.ctx.kind == "t":
                self.take()
                neg = self.peek()
                if neg[1] == "-":
                    raise NegativeExponent("exponents must be nonnegative", position=neg[2])
                e = self.rational()
                self.expect(")")
                return Pow(base, e)
            if t[0] != "num":
                raise ExprSyntaxError("exponent must be a natural number", position=t[2])
            self.take()
            return Pow(base, Fraction(int(t[1])))
        return base

    def rational(self) -> Fraction:
        t = self.take()
        if t[0] != "num":
            raise ExprSyntaxError(f"expected a number, found {t[1] or 'end of input'!r}",
                                  position=t[2])
        value = Fraction(int(t[1]))
        if self.peek()[1] == "/":
            self.take()
            d = self.take()
            if d[0] != "num":
                raise ExprSyntaxError("expected a denominator", position=d[2])
            if int(d[1]) == 0:
                raise ExprSyntaxError("zero denominator", position=d[2])
            value = value / int(d[1])
        return value

    def base(self) -> Expr:
        t = self.peek()
        if t[0] == "num":
            return Num(self.rational())
        if t[1] == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if t[1] == "-":
            self.take()
            return Neg(self.factor())
        if t[0] == "name":
            self.take()
            return self.variable(t)
        raise ExprSyntaxError(f"unexpected {t[1] or 'end of input'!r}", position=t[2])

    def variable(self, tok) -> Expr:
        name, pos = tok[1], tok[2]
        ctx = self.ctx
        if ctx.kind == "t":
            if name == "u":
                return Var("u")
            if name == "t":
                return Var("t", 1)
            if name == "puiseux":
                self.expect("(")
                p = self.take()
                if p[0] != "num":
                    raise ExprSyntaxError("puiseux expects a prime", position=p[2])
                self.expect(")")
                return Puiseux(int(p[1]))
        m = re.fullmatch(r"([Xt])(\d+)", name)
        if not m or m.group(1) != ctx.kind:
            raise UnknownVariable(f"unknown variable {name!r}", position=pos)
        idx = int(m.group(2))
        if not 1 <= idx <= ctx.size:
            raise UnknownVariable(f"{name} is outside {ctx.kind}1..{ctx.kind}{ctx.size}",
                                  position=pos)
        return Var(ctx.kind, idx)


def parse_expr(text: str, ctx: Context) -> Expr:
    return _Parser(text, ctx).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_SUM, _PROD, _FACTOR, _ATOM = 1, 2, 3, 4


def _level(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _SUM if e.op in "+-" else _PROD
    if isinstance(e, (Neg, Pow)):
        return _FACTOR
    return _ATOM


def _wrap(e: Expr, need: int) -> str:
    s = print_expr(e)
    return s if _level(e) >= need else f"({s})"


def print_expr(e: Expr) -> str:
    """Render so that ``parse_expr(print_expr(e))`` gives back ``e``."""
    if isinstance(e, Num):
        return format_rational(e.value)
    if isinstance(e, Var):
        return "u" if e.name == "u" else f"{e.name}{e.index}"
    if isinstance(e, Puiseux):
        return f"puiseux({e.p})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _FACTOR)
    if isinstance(e, Pow):
        b = print_expr(e.base)
        if not (isinstance(e.base, (Var, Puiseux))
                or (isinstance(e.base, Num) and e.base.value.denominator == 1)):
            b = f"({b})"
        if e.exp.denominator == 1:
            return f"{b}^{e.exp.numerator}"
        return f"{b}^({format_rational(e.exp)})"
    if isinstance(e, BinOp):
        if e.op == "*":
            return f"{_wrap(e.left, _PROD)} * {_wrap(e.right, _FACTOR)}"
        return f"{_wrap(e.left, _SUM)} {e.op} {_wrap(e.right, _PROD)}"
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def to_multiseries(e: Expr, n: int) -> MultiSeries:
    """Evaluate an X-expression as an exact polynomial in X_1..X_n."""
    if isinstance(e, Num):
        return MultiSeries.const(n, e.value)
    if isinstance(e, Var):
        if e.name != "X":
            raise UnknownVariable(f"{print_expr(e)} is not an X variable")
        return MultiSeries.X(n, e.index)
    if isinstance(e, Neg):
        return -to_multiseries(e.arg, n)
    if isinstance(e, Pow):
        return to_multiseries(e.base, n) ** int(e.exp)
    if isinstance(e, BinOp):
        a, b = to_multiseries(e.left, n), to_multiseries(e.right, n)
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b
    raise UnknownVariable(f"{print_expr(e)} is not allowed here")


def to_tseries(e: Expr, m: int, T: int) -> TSeries:
    """Evaluate a map-context expression; ``puiseux(p)`` is cut at degree T."""
    from .valuation import puiseux_image

    if isinstance(e, Num):
        return TSeries.const(m, e.value)
    if isinstance(e, Var):
        if e.name == "u":
            return TSeries.const(m, UElem(UPoly.monomial(1, 1)))
        return TSeries.t(m, e.index)
    if isinstance(e, Puiseux):
        if e.p < 2:
            raise InvalidSpec(f"puiseux({e.p}) needs p >= 2")
        return puiseux_image(e.p, m, T)
    if isinstance(e, Neg):
        return -to_tseries(e.arg, m, T)
    if isinstance(e, Pow):
        if e.exp.denominator != 1:
            if e.base != Var("u"):
                raise NegativeExponent("only u takes fractional exponents")
            return TSeries.const(m, UElem(UPoly.monomial(1, e.exp)))
        return to_tseries(e.base, m, T) ** int(e.exp)
    if isinstance(e, BinOp):
        a, b = to_tseries(e.left, m, T), to_tseries(e.right, m, T)
        return a + b if e.op == "+" else a - b if e.op == "-" else a.mul(b)
    raise TypeError(f"not an expression: {e!r}")


def parse_polynomial(text: str, n: int) -> MultiSeries:
    return to_multiseries(parse_expr(text, Context.xvars(n)), n)


def _max_t_index(e: Expr) -> int:
    if isinstance(e, Var):
        return e.index if e.name == "t" else 0
    if isinstance(e, Puiseux):
        return 1
    if isinstance(e, Neg):
        return _max_t_index(e.arg)
    if isinstance(e, Pow):
        return _max_t_index(e.base)
    if isinstance(e, BinOp):
        return max(_max_t_index(e.left), _max_t_index(e.right))
    return 0


def parse_map(text: str, m: Optional[int] = None) -> Tuple[int, int, Callable[[int], List[TSeries]]]:
    """Parse ``X1 -> ...; X2 -> ...``; returns ``(n, m, builder)``.

    ``m`` defaults to the largest t-index used.  ``builder(T)`` returns the
    images with every ``puiseux(p)`` cut at degree T.
    """
    entries: Dict[int, str] = {}
    offset = 0
    for chunk in text.split(";"):
        start = offset
        offset += len(chunk) + 1
        if not chunk.strip():
            continue
        if "->" not in chunk:
            raise ExprSyntaxError("map entries look like 'Xi -> expression'", position=start)
        lhs, rhs = chunk.split("->", 1)
        mm = re.fullmatch(r"\s*X(\d+)\s*", lhs)
        if not mm:
            raise UnknownVariable(f"left side {lhs.strip()!r} is not a variable Xi", position=start)
        i = int(mm.group(1))
        if i in entries:
            raise InvalidSpec(f"X{i} is mapped twice")
        entries[i] = rhs
    if not entries:
        raise InvalidSpec("empty map")
    n = max(entries)
    missing = [i for i in range(1, n + 1) if i not in entries]
    if missing:
        raise InvalidSpec(f"no image given for X{missing[0]}")
    probe_ctx = Context.tvars(10 ** 6)
    trees = {i: parse_expr(entries[i], probe_ctx) for i in entries}
    used = max(_max_t_index(t) for t in trees.values())
    if m is None:
        m = max(used, 1)
    elif used > m:
        raise UnknownVariable(f"t{used} is outside t1..t{m}")
    # reparse with the real bound so errors carry the right message
    trees = {i: parse_expr(entries[i], Context.tvars(m)) for i in entries}

    def builder(T: int) -> List[TSeries]:
        return [to_tseries(trees[i], m, T).truncated(T) for i in range(1, n + 1)]

    return n, m, builder
