"""Extended complex arithmetic: finite doubles plus a single point at infinity.

Every operation is total: it returns an :class:`ExtComplex` or raises
:class:`IndeterminateForm`.  Values whose modulus exceeds the overflow cap are
identified with infinity, so no NaN or IEEE infinity is ever stored.

The formulas here are mirrored operation-for-operation by the compiled kernel
(``_ckernel.pyx``); keep the two in sync or rasters stop being bit-identical
across backends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_CAP = 1e100

# beyond this |Im| the hyperbolic factors of sin/cos overflow doubles
TRIG_IM_LIMIT = 700.0

_cap = DEFAULT_CAP
_log_cap = math.log(DEFAULT_CAP)


class IndeterminateForm(ArithmeticError):
    """Raised for 0*inf, inf+inf, 0/0, inf/inf and transcendental(inf)."""


def get_cap() -> float:
    return _cap


def set_cap(cap: float) -> None:
    """Change the overflow cap (process wide)."""
    global _cap, _log_cap
    if not (math.isfinite(cap) and cap > 1.0):
        raise ValueError(f"overflow cap must be a finite number > 1, got {cap!r}")
    _cap = float(cap)
    _log_cap = math.log(_cap)


@dataclass(frozen=True, slots=True)
class ExtComplex:
    """A point of the extended plane.

    Build values with :func:`finite` (which normalizes overflow) or use the
    module constant :data:`INF`.  ``re``/``im`` are meaningless for infinity.
    """

    is_inf: bool
    re: float = 0.0
    im: float = 0.0

    @property
    def kind(self) -> str:
        return "Infinity" if self.is_inf else "Finite"

    def __abs__(self) -> float:
        return ext_abs(self)

    def __eq__(self, other):
        if not isinstance(other, ExtComplex):
            return NotImplemented
        if self.is_inf or other.is_inf:
            return self.is_inf and other.is_inf
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.is_inf:
            return hash("inf")
        return hash((self.re + 0.0, self.im + 0.0))

    def to_complex(self) -> complex:
        return complex(math.inf, 0.0) if self.is_inf else complex(self.re, self.im)

    def __repr__(self) -> str:
        if self.is_inf:
            return "ExtComplex(Infinity)"
        return f"ExtComplex({self.re!r}{'+' if self.im >= 0 else '-'}{abs(self.im)!r}i)"


INF = ExtComplex(True)
ZERO = ExtComplex(False, 0.0, 0.0)
ONE = ExtComplex(False, 1.0, 0.0)


def finite(re: float, im: float = 0.0) -> ExtComplex:
    """Normalizing constructor: anything above the cap (or non-finite) is INF."""
    if re != re or im != im:
        return INF
    if re > _cap or re < -_cap or im > _cap or im < -_cap:
        return INF
    if math.sqrt(re * re + im * im) > _cap:
        return INF
    return ExtComplex(False, re, im)


def from_complex(z: complex) -> ExtComplex:
    return finite(z.real, z.imag)


def ext_abs(a: ExtComplex) -> float:
    if a.is_inf:
        return math.inf
    return math.sqrt(a.re * a.re + a.im * a.im)


def _is_zero(a: ExtComplex) -> bool:
    return not a.is_inf and a.re == 0.0 and a.im == 0.0


def ext_neg(a: ExtComplex) -> ExtComplex:
    if a.is_inf:
        return INF
    return ExtComplex(False, -a.re, -a.im)


def ext_add(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    if a.is_inf:
        if b.is_inf:
            raise IndeterminateForm("inf + inf")
        return INF
    if b.is_inf:
        return INF
    return finite(a.re + b.re, a.im + b.im)


def ext_sub(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    return ext_add(a, ext_neg(b))


def ext_mul(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    if a.is_inf or b.is_inf:
        if _is_zero(a) or _is_zero(b):
            raise IndeterminateForm("0 * inf")
        return INF
    return finite(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)


def ext_div(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    if b.is_inf:
        if a.is_inf:
            raise IndeterminateForm("inf / inf")
        return ZERO
    if a.is_inf:
        return INF
    c, d = b.re, b.im
    if c == 0.0 and d == 0.0:
        if a.re == 0.0 and a.im == 0.0:
            raise IndeterminateForm("0 / 0")
        return INF
    # Smith's algorithm; |den| >= max(|c|, |d|) > 0 so it never divides by zero
    if abs(c) >= abs(d):
        r = d / c
        den = c + d * r
        return finite((a.re + a.im * r) / den, (a.im - a.re * r) / den)
    r = c / d
    den = c * r + d
    return finite((a.re * r + a.im) / den, (a.im * r - a.re) / den)


def ext_exp(a: ExtComplex) -> ExtComplex:
    if a.is_inf:
        raise IndeterminateForm("exp(inf)")
    if a.re > _log_cap:
        return INF
    m = math.exp(a.re)
    return finite(m * math.cos(a.im), m * math.sin(a.im))


def ext_sin(a: ExtComplex) -> ExtComplex:
    if a.is_inf:
        raise IndeterminateForm("sin(inf)")
    x, y = a.re, a.im
    if y > TRIG_IM_LIMIT or y < -TRIG_IM_LIMIT:
        return INF
    return finite(math.sin(x) * math.cosh(y), math.cos(x) * math.sinh(y))


def ext_cos(a: ExtComplex) -> ExtComplex:
    if a.is_inf:
        raise IndeterminateForm("cos(inf)")
    x, y = a.re, a.im
    if y > TRIG_IM_LIMIT or y < -TRIG_IM_LIMIT:
        return INF
    return finite(math.cos(x) * math.cosh(y), -(math.sin(x) * math.sinh(y)))


def ext_pow_int(a: ExtComplex, k: int) -> ExtComplex:
    """Integer power by repeated multiplication (left to right)."""
    if k == 0:
        if a.is_inf:
            raise IndeterminateForm("inf ** 0")
        return ONE
    n = -k if k < 0 else k
    acc = a
    for _ in range(n - 1):
        acc = ext_mul(acc, a)
    if k < 0:
        return ext_div(ONE, acc)
    return acc


def parse_point(text: str) -> ExtComplex:
    """Parse ``re+imi``, ``re,im``, a bare real, or ``inf``."""
    s = text.strip().replace(" ", "")
    if s.lower() in ("inf", "infinity", "oo"):
        return INF
    if "," in s:
        re_s, im_s = s.split(",", 1)
        return finite(float(re_s), float(im_s))
    try:
        z = complex(s.replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse point {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"point must be finite or 'inf': {text!r}")
    return finite(z.real, z.imag)


def format_point(z: ExtComplex) -> str:
    if z.is_inf:
        return "inf"
    return f"{z.re!r}{'+' if z.im >= 0 else '-'}{abs(z.im)!r}i"
