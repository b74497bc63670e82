"""Generator expressions: parse, print, evaluate, differentiate.

Grammar (``-`` may also be written as the unicode minus ``−``)::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)?
    exponent := ['-'] INTEGER ('^' exponent)?   |   '(' exponent ')'
    atom     := 'z' | NUMBER | 'i' | 'pi' | 'e'
              | ('exp' | 'sin' | 'cos') '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus (``-z^2`` is ``-(z^2)``) and takes only
integer exponents, so ``e^z`` is a syntax error: write ``exp(z)``.  ``e`` on
its own is Euler's number.  Constant subtrees are folded while parsing, so
``2*pi*i`` becomes a single constant.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .extcomplex import (
    ExtComplex,
    IndeterminateForm,
    ONE,
    ZERO,
    ext_add,
    ext_cos,
    ext_div,
    ext_exp,
    ext_mul,
    ext_neg,
    ext_pow_int,
    ext_sin,
    ext_sub,
    finite,
)

MAX_EXPONENT = 64


# ---------------------------------------------------------------- nodes


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    value: ExtComplex


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Exp:
    arg: "Expr"


@dataclass(frozen=True)
class Sin:
    arg: "Expr"


@dataclass(frozen=True)
class Cos:
    arg: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


Expr = Union[Var, Const, Add, Sub, Mul, Div, Pow, Exp, Sin, Cos, Neg]

Z = Var()

_BINARY = {Add: ext_add, Sub: ext_sub, Mul: ext_mul, Div: ext_div}
_UNARY = {Exp: ext_exp, Sin: ext_sin, Cos: ext_cos, Neg: ext_neg}
_BINARY_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}
_UNARY_NAME = {Exp: "exp", Sin: "sin", Cos: "cos"}


def const(re: float, im: float = 0.0) -> Const:
    value = finite(re, im)
    if value.is_inf:
        raise ValueError("constants must be finite")
    return Const(value)


# ---------------------------------------------------------------- errors


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, source: str = ""):
        self.span = span
        self.source = source
        super().__init__(f"{message} at {span.start}:{span.end}")


class ExprSyntaxError(ParseError):
    pass


class ExponentRangeError(ParseError):
    pass


class UnknownIdentifierError(ParseError):
    pass


# ---------------------------------------------------------------- evaluation


def evaluate(f: Expr, z: ExtComplex) -> ExtComplex:
    """Evaluate ``f`` at ``z``; indeterminate forms raise IndeterminateForm."""
    t = type(f)
    if t is Var:
        return z
    if t is Const:
        return f.value
    op = _BINARY.get(t)
    if op is not None:
        return op(evaluate(f.left, z), evaluate(f.right, z))
    if t is Pow:
        return ext_pow_int(evaluate(f.base, z), f.exponent)
    return _UNARY[t](evaluate(f.arg, z))


def is_constant(f: Expr) -> bool:
    t = type(f)
    if t is Var:
        return False
    if t is Const:
        return True
    if t in _BINARY:
        return is_constant(f.left) and is_constant(f.right)
    if t is Pow:
        return is_constant(f.base)
    return is_constant(f.arg)


def fold(f: Expr) -> Expr:
    """Collapse a constant subtree into a Const when it evaluates finitely."""
    if type(f) is Const or not is_constant(f):
        return f
    try:
        value = evaluate(f, ZERO)
    except IndeterminateForm:
        return f
    if value.is_inf:
        return f
    return Const(value)


def substitute(f: Expr, g: Expr) -> Expr:
    """Return f∘g by replacing every variable in f with g."""
    t = type(f)
    if t is Var:
        return g
    if t is Const:
        return f
    if t in _BINARY:
        return t(substitute(f.left, g), substitute(f.right, g))
    if t is Pow:
        return Pow(substitute(f.base, g), f.exponent)
    return t(substitute(f.arg, g))


def to_callable(f: Expr) -> Callable[[ExtComplex], ExtComplex]:
    return lambda z: evaluate(f, z)


# ---------------------------------------------------------------- derivative


def differentiate(f: Expr) -> Expr:
    """Symbolic d/dz with constant folding as the only simplification."""
    t = type(f)
    if t is Var:
        return Const(ONE)
    if t is Const:
        return Const(ZERO)
    if t is Add or t is Sub:
        return fold(t(differentiate(f.left), differentiate(f.right)))
    if t is Mul:
        u, v = f.left, f.right
        return fold(Add(Mul(differentiate(u), v), Mul(u, differentiate(v))))
    if t is Div:
        u, v = f.left, f.right
        return fold(
            Div(Sub(Mul(differentiate(u), v), Mul(u, differentiate(v))), Pow(v, 2))
        )
    if t is Pow:
        k = f.exponent
        if k == 0:
            return Const(ZERO)
        return fold(Mul(Mul(Const(finite(float(k))), Pow(f.base, k - 1)), differentiate(f.base)))
    if t is Neg:
        return fold(Neg(differentiate(f.arg)))
    du = differentiate(f.arg)
    if t is Exp:
        return fold(Mul(f, du))
    if t is Sin:
        return fold(Mul(Cos(f.arg), du))
    if t is Cos:
        return fold(Mul(Neg(Sin(f.arg)), du))
    raise TypeError(f"not an expression node: {f!r}")


# ---------------------------------------------------------------- printing


def _format_const(v: ExtComplex) -> str:
    # adding 0.0 drops the sign of a negative zero, which would not survive reparsing
    re, im = v.re + 0.0, v.im + 0.0
    sign = "-" if im < 0 else "+"
    return f"({re!r}{sign}{abs(im)!r}*i)"


def to_text(f: Expr) -> str:
    """Canonical, fully parenthesized rendering that reparses to ``f``."""
    t = type(f)
    if t is Var:
        return "z"
    if t is Const:
        return _format_const(f.value)
    if t in _BINARY:
        return f"({to_text(f.left)} {_BINARY_SYMBOL[t]} {to_text(f.right)})"
    if t is Pow:
        k = f.exponent
        return f"({to_text(f.base)}^{k})" if k >= 0 else f"({to_text(f.base)}^({k}))"
    if t is Neg:
        return f"(-{to_text(f.arg)})"
    return f"{_UNARY_NAME[t]}({to_text(f.arg)})"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()−]))"
)

_CONSTANTS = {
    "i": finite(0.0, 1.0),
    "pi": finite(math.pi),
    "e": finite(math.e),
}
_FUNCTIONS = {"exp": Exp, "sin": Sin, "cos": Cos}


def _tokenize(src: str):
    pos = 0
    out = []
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", SourceSpan(pos, pos + 1), src)
        kind = m.lastgroup
        text = m.group(kind)
        start = m.start(kind)
        if kind == "op" and text == "−":
            text = "-"
        # a number must not run straight into a name, e.g. "2z" or "1e"
        if kind == "num" and m.end() < n and (src[m.end()].isalpha() or src[m.end()] == "_"):
            raise ExprSyntaxError("implicit multiplication is not supported", SourceSpan(start, m.end() + 1), src)
        out.append((kind, text, start, m.end()))
        pos = m.end()
    out.append(("end", "", n, n))
    return out


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok, cls=ExprSyntaxError):
        raise cls(msg, SourceSpan(tok[2], tok[3]), self.src)

    def expect(self, text):
        tok = self.take()
        if tok[0] != "op" or tok[1] != text:
            shown = tok[1] or "end of input"
            self.fail(f"expected {text!r}, found {shown!r}", tok)
        return tok

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected {tok[1]!r}", tok)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = fold((Add if op == "+" else Sub)(node, self.term()))
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = fold((Mul if op == "*" else Div)(node, self.unary()))
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return fold(Neg(self.unary()))
        return self.power()

    def power(self):
        node = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            start = self.peek()
            k = self.exponent()
            if abs(k) > MAX_EXPONENT:
                end = self.toks[self.i - 1]
                raise ExponentRangeError(
                    f"exponent {k} outside [-{MAX_EXPONENT}, {MAX_EXPONENT}]",
                    SourceSpan(start[2], end[3]),
                    self.src,
                )
            node = fold(Pow(node, k))
        return node

    def exponent(self) -> int:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            k = self.exponent()
            self.expect(")")
            return k
        sign = 1
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            sign = -1
            tok = self.peek()
        if tok[0] != "num" or not tok[1].isdigit():
            self.fail("exponent must be an integer literal (use exp(...) for exponentials)", tok)
        self.take()
        base = int(tok[1])
        nxt = self.peek()
        if nxt[0] == "op" and nxt[1] == "^":
            self.take()
            e = self.exponent()
            if e < 0 or e > MAX_EXPONENT or (base > 1 and e * math.log2(base) > 16):
                raise ExponentRangeError("nested exponent out of range", SourceSpan(tok[2], self.toks[self.i - 1][3]), self.src)
            base = base**e
        return sign * base

    def atom(self):
        tok = self.take()
        kind, text = tok[0], tok[1]
        if kind == "num":
            return const(float(text))
        if kind == "name":
            if text == "z":
                return Z
            if text in _CONSTANTS:
                return Const(_CONSTANTS[text])
            if text in _FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return fold(_FUNCTIONS[text](arg))
            self.fail(f"unknown identifier {text!r}", tok, UnknownIdentifierError)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        shown = text or "end of input"
        self.fail(f"unexpected {shown!r}", tok)


def parse(source: str) -> Expr:
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", SourceSpan(0, len(source or "")), source or "")
    return _Parser(source).parse()


# ---------------------------------------------------------------- analysis


def walk(f: Expr):
    yield f
    t = type(f)
    if t in _BINARY:
        yield from walk(f.left)
        yield from walk(f.right)
    elif t is Pow:
        yield from walk(f.base)
    elif t in _UNARY:
        yield from walk(f.arg)


def denominators(f: Expr) -> list[Expr]:
    """Non-constant subexpressions that appear as divisors or negative-power bases."""
    out = []
    for node in walk(f):
        if type(node) is Div and not is_constant(node.right):
            out.append(node.right)
        elif type(node) is Pow and node.exponent < 0 and not is_constant(node.base):
            out.append(node.base)
    return out


def has_pole(f: Expr) -> bool:
    return bool(denominators(f))


def size(f: Expr) -> int:
    return sum(1 for _ in walk(f))


# ---------------------------------------------------------------- postfix program

OP_VAR, OP_CONST, OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW, OP_EXP, OP_SIN, OP_COS, OP_NEG = range(11)
_OPCODE = {Add: OP_ADD, Sub: OP_SUB, Mul: OP_MUL, Div: OP_DIV, Exp: OP_EXP, Sin: OP_SIN, Cos: OP_COS, Neg: OP_NEG}


def compile_postfix(f: Expr):
    """Flatten ``f`` to (ops, args, consts, max_stack) for the compiled kernel."""
    ops: list[int] = []
    args: list[int] = []
    consts: list[float] = []
    depth = 0
    peak = 0

    def emit(node):
        nonlocal depth, peak
        t = type(node)
        if t is Var:
            ops.append(OP_VAR)
            args.append(0)
            depth += 1
        elif t is Const:
            ops.append(OP_CONST)
            args.append(len(consts) // 2)
            consts.extend((node.value.re, node.value.im))
            depth += 1
        elif t in _BINARY:
            emit(node.left)
            emit(node.right)
            ops.append(_OPCODE[t])
            args.append(0)
            depth -= 1
        elif t is Pow:
            emit(node.base)
            ops.append(OP_POW)
            args.append(node.exponent)
        else:
            emit(node.arg)
            ops.append(_OPCODE[t])
            args.append(0)
        peak = max(peak, depth)

    emit(f)
    return ops, args, consts, peak
