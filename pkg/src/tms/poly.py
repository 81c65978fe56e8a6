"""Dense univariate polynomials in ascending order of powers.

Coefficients are field elements: either all :class:`~tms.values.Exact`
(Gaussian rationals, exact arithmetic) or Python complex numbers.
A polynomial is a plain list; ``[]`` is the zero polynomial.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .values import Exact, ONE, ZERO


def is_zero(c) -> bool:
    if isinstance(c, Exact):
        return not c
    return c == 0


def trim(p: Sequence) -> list:
    p = list(p)
    while p and is_zero(p[-1]):
        p.pop()
    return p


def degree(p: Sequence) -> int:
    """Degree of ``p``; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def exact_poly(p: Sequence) -> bool:
    return all(isinstance(c, Exact) for c in p)


def zero_like(p: Sequence):
    return ZERO if exact_poly(p) else 0j


def add(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else None
        b = q[i] if i < len(q) else None
        out.append(b if a is None else a if b is None else a + b)
    return trim(out)


def neg(p: Sequence) -> list:
    return [-c for c in p]


def sub(p: Sequence, q: Sequence) -> list:
    return add(p, neg(q))


def scale(p: Sequence, c) -> list:
    return trim([c * a for a in p])


def mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    if not (exact_poly(p) and exact_poly(q)):
        return trim(list(np.convolve(np.asarray(p, dtype=complex), np.asarray(q, dtype=complex))))
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def power(p: Sequence, k: int) -> list:
    out: list = [ONE] if exact_poly(p) else [1 + 0j]
    base = list(p)
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def evaluate(p: Sequence, z):
    acc = ZERO if (exact_poly(p) and isinstance(z, Exact)) else 0j
    for c in reversed(p):
        acc = acc * z + c
    return acc


def derivative(p: Sequence) -> list:
    return trim([c * k for k, c in enumerate(p)][1:])


def taylor_shift(p: Sequence, z0) -> list:
    """Coefficients of ``p(z0 + t)`` in ``t`` (synthetic division)."""
    a = list(p)
    n = len(a)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            a[j] = a[j] + z0 * a[j + 1]
    return a


def reverse(p: Sequence, d: int) -> list:
    """``t^d p(1/t)`` padded to length ``d + 1``."""
    q = list(p) + [zero_like(p)] * (d + 1 - len(p))
    if len(q) > d + 1:
        raise ValueError("degree exceeds reversal degree")
    return q[::-1]


def divmod_poly(p: Sequence, q: Sequence) -> tuple[list, list]:
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    if len(r) - 1 < dq:
        return [], r
    out = [zero_like(p)] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lead
        out[k] = c
        if not is_zero(c):
            for j in range(dq + 1):
                r[k + j] = r[k + j] - c * q[j]
    return trim(out), trim(r[:dq])


def monic(p: Sequence) -> list:
    p = trim(p)
    if not p:
        return []
    lead = p[-1]
    return [c / lead for c in p]


def gcd_exact(p: Sequence, q: Sequence) -> list:
    """Monic gcd over the Gaussian rationals by Euclid's algorithm."""
    a, b = trim(p), trim(q)
    if not exact_poly(a) or not exact_poly(b):
        raise TypeError("exact gcd needs Gaussian-rational coefficients")
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def order_at_zero(p: Sequence, tol: float | None = None) -> int:
    """Index of the first nonzero coefficient; tolerance-based for floats."""
    for i, c in enumerate(p):
        if isinstance(c, Exact):
            if c:
                return i
        elif abs(c) > (tol or 0.0):
            return i
    return len(p)


def sylvester_resultant(p: Sequence, q: Sequence) -> float:
    """Resultant magnitude of unit-normalised coefficient vectors.

    Used as the approximate coprimality test: a value near zero means the
    two polynomials (nearly) share a root.
    """
    p = [complex(c) for c in trim(p)]
    q = [complex(c) for c in trim(q)]
    if not p or not q:
        return 0.0
    m, n = len(p) - 1, len(q) - 1
    if m == 0 or n == 0:
        return 1.0
    pn = np.array(p[::-1]) / np.linalg.norm(p)
    qn = np.array(q[::-1]) / np.linalg.norm(q)
    size = m + n
    S = np.zeros((size, size), dtype=complex)
    for i in range(n):
        S[i, i:i + m + 1] = pn
    for i in range(m):
        S[n + i, i:i + n + 1] = qn
    return float(abs(np.linalg.det(S)))
