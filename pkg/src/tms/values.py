"""Points of the Riemann sphere: exact Gaussian rationals, tolerant floats, infinity.

Three kinds of value are used throughout the package:

* :class:`Exact` -- ``re + i*im`` with ``re, im`` rationals. Arithmetic between
  Exact values stays exact.
* :class:`Approx` -- a double-precision complex number carrying a tolerance.
  Comparisons involving an Approx are tolerance comparisons and are flagged
  as numeric by the callers.
* :data:`INF` -- the point at infinity.

The textual form used in scheme files::

    >>> parse_value("1/2,-3")
    Exact(re=Fraction(1, 2), im=Fraction(-3, 1))
    >>> parse_value("inf") is INF
    True
    >>> format_value(parse_value("~0.5,1.25@1e-06"))
    '~0.5,1.25@1e-06'
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

DEFAULT_TOL = 1e-9


class ValueError_(ValueError):
    """Raised for malformed complex-strings or rationals."""


@dataclass(frozen=True)
class Exact:
    """Gaussian rational ``re + i*im``; also used as a field element."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    # field operations -------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        if isinstance(other, Exact):
            return Exact(self.re + other.re, self.im + other.im)
        return complex(self) + other

    __radd__ = __add__

    def __neg__(self):
        return Exact(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) + (-self)

    def __mul__(self, other):
        other = _lift(other)
        if isinstance(other, Exact):
            return Exact(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)
        return complex(self) * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if isinstance(other, Exact):
            n = other.re * other.re + other.im * other.im
            if n == 0:
                raise ZeroDivisionError("division by exact zero")
            return self * Exact(other.re / n, -other.im / n)
        return complex(self) / other

    def __rtruediv__(self, other):
        return _lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return ONE / (self ** (-k))
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return Exact(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(self.norm2())

    def __repr__(self):
        return f"Exact(re={self.re!r}, im={self.im!r})"


ZERO = Exact(Fraction(0))
ONE = Exact(Fraction(1))
I = Exact(Fraction(0), Fraction(1))


def _lift(x):
    """Bring ints/Fractions into Exact, leave complex/float as complex."""
    if isinstance(x, Exact):
        return x
    if isinstance(x, (int, Fraction)):
        return Exact(Fraction(x))
    if isinstance(x, (float, complex)):
        return complex(x)
    raise TypeError(f"cannot use {type(x).__name__} as a field element")


@dataclass(frozen=True)
class Approx:
    """Floating complex value with an explicit comparison tolerance."""

    re: float
    im: float
    tol: float = DEFAULT_TOL

    @classmethod
    def of(cls, z: complex, tol: float = DEFAULT_TOL) -> "Approx":
        z = complex(z)
        return cls(z.real, z.imag, tol)

    def __complex__(self):
        return complex(self.re, self.im)


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Value = Union[Exact, Approx, _Infinity]


def is_inf(z) -> bool:
    return z is INF


def is_exact(z) -> bool:
    """Exact values and infinity are exact; Approx is not."""
    return isinstance(z, Exact) or z is INF


def to_complex(z) -> complex:
    if z is INF:
        return complex(math.inf, 0.0)
    return complex(z)


def tol_of(z, default: float = DEFAULT_TOL) -> float:
    return z.tol if isinstance(z, Approx) else default


def chordal(x, y) -> float:
    """Chordal distance on the sphere, ``2|x-y|/sqrt((1+|x|^2)(1+|y|^2))``."""
    xi, yi = x is INF, y is INF
    if xi and yi:
        return 0.0
    if xi or yi:
        w = complex(y if xi else x)
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    a, b = complex(x), complex(y)
    if cmath.isinf(a) or cmath.isinf(b):
        return chordal(INF if cmath.isinf(a) else x, INF if cmath.isinf(b) else y)
    return 2.0 * abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


def same_point(x, y, tol: float | None = None) -> tuple[bool, bool]:
    """Compare two sphere points.

    Returns ``(equal, numeric)``: ``numeric`` is True when the verdict came
    from a tolerance comparison rather than exact equality.
    """
    if is_exact(x) and is_exact(y):
        return (x == y), False
    t = tol if tol is not None else max(tol_of(x), tol_of(y))
    return chordal(x, y) <= t, True


def as_value(z, tol: float = DEFAULT_TOL) -> Value:
    """Wrap a field element (Exact or complex) or infinity into a Value."""
    if z is INF or isinstance(z, (Exact, Approx)):
        return z
    if isinstance(z, (int, Fraction)):
        return Exact(Fraction(z))
    z = complex(z)
    if cmath.isinf(z) or cmath.isnan(z):
        return INF
    return Approx.of(z, tol)


# ---------------------------------------------------------------------------
# text form

_RAT = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``[-]digits[/digits]`` into a Fraction.

    >>> parse_rational("-3/4")
    Fraction(-3, 4)
    """
    if not isinstance(text, str):
        raise ValueError_(f"rational must be a string, got {text!r}")
    m = _RAT.match(text)
    if not m:
        raise ValueError_(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError_(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_value(text: str) -> Value:
    if not isinstance(text, str):
        raise ValueError_(f"complex-string expected, got {text!r}")
    s = text.strip()
    if s == "inf":
        return INF
    if s.startswith("~"):
        body, tol = s[1:], DEFAULT_TOL
        if "@" in body:
            body, t = body.split("@", 1)
            try:
                tol = float(t)
            except ValueError:
                raise ValueError_(f"malformed tolerance in {text!r}") from None
            if not tol > 0:
                raise ValueError_(f"tolerance must be positive in {text!r}")
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError_(f"malformed approximate value {text!r}")
        try:
            re_, im_ = float(parts[0]), float(parts[1])
        except ValueError:
            raise ValueError_(f"malformed approximate value {text!r}") from None
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise ValueError_(f"non-finite approximate value {text!r}")
        return Approx(re_, im_, tol)
    parts = s.split(",")
    if len(parts) != 2:
        raise ValueError_(f"malformed exact value {text!r}")
    return Exact(parse_rational(parts[0]), parse_rational(parts[1]))


def format_value(z: Value) -> str:
    if z is INF:
        return "inf"
    if isinstance(z, Exact):
        return f"{format_rational(z.re)},{format_rational(z.im)}"
    if isinstance(z, Approx):
        tail = "" if z.tol == DEFAULT_TOL else f"@{z.tol!r}"
        return f"~{z.re!r},{z.im!r}{tail}"
    raise TypeError(f"not a sphere value: {z!r}")


def show(z: Value) -> str:
    """Short human-readable rendering."""
    if z is INF:
        return "inf"
    if isinstance(z, Exact):
        if z.im == 0:
            return format_rational(z.re)
        if z.re == 0:
            return f"{format_rational(z.im)}i"
        sign = "+" if z.im > 0 else "-"
        return f"{format_rational(z.re)}{sign}{format_rational(abs(z.im))}i"
    c = complex(z)
    return f"~{c.real:.6g}{c.imag:+.6g}i"


def root_of_unity(k: int, n: int, tol: float = DEFAULT_TOL) -> Value:
    """``exp(2*pi*i*k/n)``, exact whenever it is a Gaussian rational."""
    k %= n
    if (4 * k) % n == 0:
        return [ONE, I, -ONE, -I][(4 * k) // n]
    return Approx.of(cmath.exp(2j * math.pi * k / n), tol)
