"""Built-in example semigroups.

``reciprocal-square``  H = [1/z^2]; Bungee off the unit circle, Bounded on it.
``exp-semigroup``      f = exp(lam*z), g = f^(p) + 2*pi*i/lam  (f^(p) is the p-th iterate).
``exp-pair``           h1 = exp(lam*z), h2 = h1^(q) + 2*pi*i/lam (iterate again).

For the exp families f(z + 2*pi*i/lam) = f(z), which is what makes the
orbits under H shadow those of a single map.  The generators do not commute
as functions; they are flagged abelian by declaration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import extcomplex as xc
from .funcexpr import Add, Const, Exp, Expr, Mul, Z, fold, parse, substitute, to_text
from .grid import Viewport
from .orbit import Semigroup

NAMES = ("reciprocal-square", "exp-semigroup", "exp-pair")


@dataclass(frozen=True)
class Example:
    name: str
    semigroup: Semigroup
    # the single map whose sets H is expected to reproduce
    reference: Semigroup
    viewport: Viewport
    params: dict = field(default_factory=dict)
    description: str = ""


def iterate(f: Expr, n: int) -> Expr:
    """n-fold composition f∘...∘f."""
    if n < 1:
        raise ValueError("iterate count must be >= 1")
    out = f
    for _ in range(n - 1):
        out = substitute(f, out)
    return out


def _exp_lambda(lam: float) -> Expr:
    if lam == 1.0:
        return Exp(Z)
    return Exp(Mul(Const(xc.finite(float(lam))), Z))


def _shift(lam: float) -> Const:
    return Const(xc.finite(0.0, 2 * math.pi / lam))


def _check_lambda(lam: float):
    if not (math.isfinite(lam) and lam != 0.0):
        raise ValueError("lambda must be a nonzero real")


def reciprocal_square() -> Example:
    g = parse("1/z^2")
    H = Semigroup((g,), labels=("f",))
    return Example(
        "reciprocal-square",
        H,
        H,
        Viewport(0j, 2.0, 2.0, 256, 256),
        {},
        "1/z^2: Bungee on |z| != 1, Bounded on the unit circle",
    )


def exp_semigroup(lam: float = 1.0, p: int = 1) -> Example:
    _check_lambda(lam)
    if p < 1:
        raise ValueError("p must be >= 1")
    f = _exp_lambda(lam)
    g = fold(Add(iterate(f, p), _shift(lam)))
    H = Semigroup((f, g), labels=("f", "g"), abelian=True)
    return Example(
        "exp-semigroup",
        H,
        Semigroup((f,), labels=("f",)),
        Viewport(0j, 3.0, 3.0, 256, 256),
        {"lambda": lam, "p": p},
        f"f = {to_text(f)}, g = f^({p}) + 2*pi*i/{lam:g}; filled set equals that of f",
    )


def exp_pair(lam: float = 1.0, q: int = 2) -> Example:
    _check_lambda(lam)
    if q < 1:
        raise ValueError("q must be >= 1")
    h1 = _exp_lambda(lam)
    h2 = fold(Add(iterate(h1, q), _shift(lam)))
    H = Semigroup((h1, h2), labels=("h1", "h2"), abelian=True)
    return Example(
        "exp-pair",
        H,
        Semigroup((h1,), labels=("h1",)),
        Viewport(0j, 3.0, 3.0, 256, 256),
        {"lambda": lam, "q": q},
        f"h1 = {to_text(h1)}, h2 = h1^({q}) + 2*pi*i/{lam:g}; Bungee set equals that of h1",
    )


def get(name: str, lam: float = 1.0, p: int = 1, q: int = 2) -> Example:
    if name == "reciprocal-square":
        return reciprocal_square()
    if name == "exp-semigroup":
        return exp_semigroup(lam, p)
    if name == "exp-pair":
        return exp_pair(lam, q)
    raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")


def builtins() -> list[Example]:
    return [reciprocal_square(), exp_semigroup(), exp_pair()]
