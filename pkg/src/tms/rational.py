"""Rational self-maps of the sphere with exact or approximate coefficients."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import poly
from .values import (DEFAULT_TOL, INF, Approx, Exact, ONE, ZERO, as_value,
                     is_exact, tol_of)


class IndeterminateForm(ArithmeticError):
    """Numerator and denominator vanish together at the evaluation point."""


class ToleranceAmbiguity(ArithmeticError):
    """An approximate coefficient is too close to the tolerance to classify."""


def _field(c):
    if isinstance(c, Exact):
        return c
    if isinstance(c, Approx):
        return complex(c)
    if c is INF:
        raise ValueError("infinity is not a coefficient")
    return as_value(c)


@dataclass(frozen=True, eq=False)
class RationalMap:
    """``num(z)/den(z)`` with coefficients in ascending order.

    ``degree`` is declared rather than inferred; :meth:`check_degree` compares
    it with the coefficient lists.

    >>> f = RationalMap.monomial(-3)
    >>> f(Exact(2))
    Exact(re=Fraction(1, 8), im=Fraction(0, 1))
    >>> f.local_degree(INF)
    3
    """

    num: tuple
    den: tuple
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(self.num))
        object.__setattr__(self, "den", tuple(self.den))
        if not self.num or not self.den:
            raise ValueError("numerator and denominator need coefficients")

    # construction ------------------------------------------------------
    @classmethod
    def from_coeffs(cls, num: Sequence, den: Sequence, degree: int | None = None,
                    tol: float = DEFAULT_TOL) -> "RationalMap":
        """Build from field elements (Exact, int, Fraction or complex)."""
        n = [_as_coeff(c, tol) for c in poly.trim([_lift(c) for c in num])] or [Exact(0)]
        d = [_as_coeff(c, tol) for c in poly.trim([_lift(c) for c in den])]
        if not d:
            raise ZeroDivisionError("zero denominator")
        if degree is None:
            degree = max(len(n), len(d)) - 1
        return cls(tuple(n), tuple(d), degree)

    @classmethod
    def monomial(cls, k: int, c=1) -> "RationalMap":
        """``c*z^k`` for ``k > 0`` and ``c/z^|k|`` for ``k < 0``."""
        c = _lift(c)
        if k > 0:
            return cls.from_coeffs([0] * k + [c], [1], k)
        if k < 0:
            return cls.from_coeffs([c], [0] * (-k) + [1], -k)
        raise ValueError("exponent must be nonzero")

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls.monomial(1)

    # field views -------------------------------------------------------
    @cached_property
    def exact(self) -> bool:
        return all(isinstance(c, Exact) for c in self.num + self.den)

    @cached_property
    def tol(self) -> float:
        tols = [c.tol for c in self.num + self.den if isinstance(c, Approx)]
        return max(tols) if tols else DEFAULT_TOL

    @cached_property
    def N(self) -> list:
        return [_field(c) if self.exact else complex(_field(c)) for c in self.num]

    @cached_property
    def D(self) -> list:
        return [_field(c) if self.exact else complex(_field(c)) for c in self.den]

    def _pad(self, p: list) -> list:
        z = ZERO if self.exact else 0j
        return p + [z] * (self.degree + 1 - len(p))

    # evaluation --------------------------------------------------------
    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        """Image of a sphere point; exact in, exact out for exact maps."""
        exact = self.exact and is_exact(z)
        tol = max(self.tol, tol_of(z))
        N, D = (self.N, self.D) if exact else (_cx(self.N), _cx(self.D))
        if z is INF:
            d = self.degree
            a = N[d] if d < len(N) else (ZERO if exact else 0j)
            b = D[d] if d < len(D) else (ZERO if exact else 0j)
            if poly.is_zero(b):
                if poly.is_zero(a):
                    raise IndeterminateForm("0/0 at infinity")
                return INF
            return _out(a / b, exact, tol)
        x = z if exact else complex(z)
        a = poly.evaluate(N, x)
        b = poly.evaluate(D, x)
        if poly.is_zero(b):
            if poly.is_zero(a):
                raise IndeterminateForm(f"0/0 at {z!r}")
            return INF
        return _out(a / b, exact, tol)

    def chart(self, z) -> tuple[list, list]:
        """Numerator/denominator in the local coordinate ``t`` at ``z``."""
        exact = self.exact and is_exact(z)
        N, D = (self.N, self.D) if exact else (_cx(self.N), _cx(self.D))
        if z is INF:
            return poly.reverse(N, self.degree), poly.reverse(D, self.degree)
        x = z if exact else complex(z)
        return poly.taylor_shift(N, x), poly.taylor_shift(D, x)

    def local_degree(self, z) -> int:
        """Local degree at ``z`` via coordinate swaps at the source and target."""
        exact = self.exact and is_exact(z)
        tol = max(self.tol, tol_of(z))
        P, Q = self.chart(z)
        w = self.eval(z)
        if w is INF:
            top, bottom = Q, P
        else:
            wv = w if exact else complex(w)
            top, bottom = poly.sub(P, poly.scale(Q, wv)), Q
        if exact:
            return poly.order_at_zero(top) - poly.order_at_zero(bottom)
        scale = max([abs(c) for c in P + Q] + [1e-300])
        return _order_tol(top, tol, scale) - _order_tol(bottom, tol, scale)

    # algebra ----------------------------------------------------------
    def compose(self, inner: "RationalMap") -> "RationalMap":
        """``self o inner`` computed homogeneously; degree multiplies."""
        exact = self.exact and inner.exact
        A = self._pad(list(self.N if exact else _cx(self.N)))
        B = self._pad(list(self.D if exact else _cx(self.D)))
        n2 = inner._pad(list(inner.N if exact else _cx(inner.N)))
        d2 = inner._pad(list(inner.D if exact else _cx(inner.D)))
        d1 = self.degree
        npow = [[ONE] if exact else [1 + 0j]]
        dpow = [[ONE] if exact else [1 + 0j]]
        for _ in range(d1):
            npow.append(poly.mul(npow[-1], n2))
            dpow.append(poly.mul(dpow[-1], d2))
        num, den = [], []
        for i in range(d1 + 1):
            term = poly.mul(npow[i], dpow[d1 - i])
            if not poly.is_zero(A[i]):
                num = poly.add(num, poly.scale(term, A[i]))
            if not poly.is_zero(B[i]):
                den = poly.add(den, poly.scale(term, B[i]))
        tol = max(self.tol, inner.tol)
        return RationalMap.from_coeffs(num or [0], den, d1 * inner.degree, tol=tol)

    def shifted(self, c) -> "RationalMap":
        """``self + c`` (c a finite field element).

        Coefficients untouched by the shift keep their exact values.
        """
        c = _lift(c)
        exact = self.exact and isinstance(c, Exact)
        N, D = list(self.N), self.D
        out = []
        for i in range(max(len(N), len(D))):
            n = N[i] if i < len(N) else Exact(0)
            d = D[i] if i < len(D) else Exact(0)
            if isinstance(d, Exact) and not d:
                out.append(n)
            elif exact:
                out.append(n + c * d)
            else:
                out.append(complex(n) + complex(c) * complex(d))
        return RationalMap.from_coeffs(out, D, self.degree, tol=max(self.tol, tol_of(c)))

    def derivative_numerator(self) -> list:
        """``N'D - ND'``; its zeros are the finite critical points."""
        return poly.sub(poly.mul(poly.derivative(self.N), self.D),
                        poly.mul(self.N, poly.derivative(self.D)))

    # checks ------------------------------------------------------------
    def check_degree(self) -> tuple[bool, str]:
        dn, dd = poly.degree(self.N), poly.degree(self.D)
        if not self.exact:
            for p, dp in ((self.N, dn), (self.D, dd)):
                lead = abs(p[dp]) if dp >= 0 else 0.0
                if self.tol / 10 <= lead <= self.tol * 10:
                    raise ToleranceAmbiguity("leading coefficient within tolerance window")
            dn = _degree_tol(self.N, self.tol)
            dd = _degree_tol(self.D, self.tol)
        actual = max(dn, dd)
        if actual != self.degree:
            return False, f"declared degree {self.degree} but coefficients give {actual}"
        return True, ""

    def check_coprime(self) -> tuple[bool, bool]:
        """``(coprime, numeric)``; exact gcd or resultant magnitude > tol."""
        if self.exact:
            g = poly.gcd_exact(self.N, self.D)
            return len(g) <= 1, False
        return poly.sylvester_resultant(self.N, self.D) > self.tol, True

    def critical_points_numeric(self) -> list:
        """All critical points with local degree, found numerically.

        Returns a list of ``(Value, local_degree)`` pairs.
        """
        W = [complex(c) for c in self.derivative_numerator()]
        W = poly.trim([c if abs(c) > 1e-14 * max(1.0, max(map(abs, W), default=1.0)) else 0j
                       for c in W])
        pts: list = []
        if len(W) > 1:
            roots = np.roots(np.array(W[::-1]))
            roots = [_polish(W, r) for r in roots]
            for r in roots:
                if not any(abs(r - q) < 1e-7 * max(1.0, abs(q)) for q in pts):
                    pts.append(r)
        out = []
        for r in pts:
            v = as_value(r)
            try:
                k = self.local_degree(Approx.of(r, 1e-6))
            except ToleranceAmbiguity:
                k = 2
            out.append((v, max(k, 2)))
        if self.local_degree(INF) > 1:
            out.append((INF, self.local_degree(INF)))
        return out

    def __repr__(self):
        from .values import show
        n = ", ".join(show(c) for c in self.num)
        d = ", ".join(show(c) for c in self.den)
        return f"RationalMap(num=[{n}], den=[{d}], degree={self.degree})"

    def same_as(self, other: "RationalMap") -> bool:
        return self.num == other.num and self.den == other.den and self.degree == other.degree


def _lift(c):
    if isinstance(c, (Exact, complex, float)):
        return c
    if isinstance(c, Approx):
        return complex(c)
    return Exact(c)


def _as_coeff(c, tol):
    if isinstance(c, Exact):
        return c
    return Approx.of(c, tol)


def _cx(p):
    return [complex(c) for c in p]


def _out(w, exact, tol):
    if exact:
        return w
    w = complex(w)
    if cmath.isinf(w) or cmath.isnan(w):
        return INF
    return Approx.of(w, tol)


def _order_tol(p, tol, scale):
    for i, c in enumerate(p):
        m = abs(c) / scale
        if tol / 10 <= m <= tol * 10:
            raise ToleranceAmbiguity(f"coefficient {i} has relative size {m:.3g}")
        if m > tol * 10:
            return i
    return len(p)


def _degree_tol(p, tol):
    scale = max([abs(c) for c in p] + [1e-300])
    for i in range(len(p) - 1, -1, -1):
        if abs(p[i]) / scale > tol:
            return i
    return -1


def _polish(W, r, steps: int = 8):
    dW = poly.derivative(W)
    for _ in range(steps):
        d = poly.evaluate(dW, r)
        if d == 0:
            break
        step = poly.evaluate(W, r) / d
        r = r - step
        if abs(step) < 1e-15 * max(1.0, abs(r)):
            break
    return r
