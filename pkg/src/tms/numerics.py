"""Floating-point side: families, chordal sup distances, limits, attracting cycles."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .rational import RationalMap, ToleranceAmbiguity
from .values import INF, is_inf, to_complex

HOLE_MARGIN = 0.05


class RegionTouchesHole(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# the sphere

def as_complex(z) -> np.ndarray:
    """Complex array; extended-precision input keeps its precision."""
    z = np.asarray(z)
    return z if z.dtype == np.clongdouble else z.astype(complex)


def chordal(x, y) -> np.ndarray:
    """``2|x-y| / sqrt((1+|x|^2)(1+|y|^2))``, with ``inf`` as the point at infinity."""
    x, y = as_complex(x), as_complex(y)
    xi, yi = ~np.isfinite(x), ~np.isfinite(y)
    with np.errstate(all="ignore"):
        ax, ay = np.abs(x), np.abs(y)
        d = 2 * np.abs(x - y) / np.sqrt((1 + ax * ax) * (1 + ay * ay))
        # large but finite values: use the chart at infinity
        big = (ax > 1e100) | (ay > 1e100)
        if np.any(big):
            u, v = 1 / x, 1 / y
            au, av = np.abs(u), np.abs(v)
            d = np.where(big, 2 * np.abs(u - v) / np.sqrt((1 + au * au) * (1 + av * av)), d)
        d = np.where(xi & ~yi, 2 / np.sqrt(1 + ay * ay), d)
        d = np.where(yi & ~xi, 2 / np.sqrt(1 + ax * ax), d)
        d = np.where(xi & yi, 0.0, d)
    return d


def _c(z) -> complex:
    return complex("inf") if is_inf(z) else complex(to_complex(z))


@dataclass(frozen=True)
class MoebiusMap:
    """``(a z + b) / (c z + d)`` normalized to ``ad - bc = 1``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det) <= 1e-14:
            raise ValueError("degenerate Moebius map")
        s = cmath.sqrt(det)
        for k in "abcd":
            object.__setattr__(self, k, complex(getattr(self, k)) / s)

    @classmethod
    def scaling(cls, s: complex) -> "MoebiusMap":
        return cls(s, 0, 0, 1)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        """Composition ``self o other``."""
        return MoebiusMap(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def __call__(self, z):
        z = as_complex(z)
        inf = ~np.isfinite(z)
        with np.errstate(all="ignore"):
            num = self.a * z + self.b
            den = self.c * z + self.d
            w = np.where(den == 0, complex("inf"), num / np.where(den == 0, 1, den))
            at_inf = self.a / self.c if self.c != 0 else complex("inf")
            return np.where(inf, at_inf, w)


# ---------------------------------------------------------------------------
# sample regions

@dataclass(frozen=True)
class Annulus:
    center: complex = 0j
    r_in: float = 1.0
    r_out: float = 2.0
    n_theta: int = 256
    n_r: int = 64

    def __post_init__(self):
        if not 0 <= self.r_in < self.r_out:
            raise ValueError("need 0 <= r_in < r_out")

    def samples(self) -> np.ndarray:
        t = np.arange(self.n_theta) * (2 * np.pi / self.n_theta)
        r = np.linspace(self.r_in, self.r_out, self.n_r)
        return (self.center + r[:, None] * np.exp(1j * t)[None, :]).ravel()

    def describe(self) -> str:
        return f"{self.r_in:g} <= |z - {self.center:g}| <= {self.r_out:g}"


@dataclass(frozen=True)
class Disk:
    """Closed disk minus open disks ``holes = ((center, radius), ...)``.

    The boundary circles of the removed disks are sampled too, since the
    sup is usually attained there.
    """

    center: complex = 0j
    radius: float = 1.0
    holes: tuple = ()
    n_theta: int = 256
    n_r: int = 64

    def samples(self) -> np.ndarray:
        t = np.arange(self.n_theta) * (2 * np.pi / self.n_theta)
        r = np.linspace(0, self.radius, self.n_r)
        pts = [(self.center + r[:, None] * np.exp(1j * t)[None, :]).ravel()]
        for c, rho in self.holes:
            pts.append(c + rho * np.exp(1j * t))
        z = np.concatenate(pts)
        keep = np.abs(z - self.center) <= self.radius * (1 + 1e-12)
        for c, rho in self.holes:
            keep &= np.abs(z - c) >= rho * (1 - 1e-12)
        return z[keep]

    def describe(self) -> str:
        s = f"|z - {self.center:g}| <= {self.radius:g}"
        for c, rho in self.holes:
            s += f", |z - {c:g}| >= {rho:g}"
        return s


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float
    nx: int = 128
    ny: int = 128

    def samples(self) -> np.ndarray:
        x = np.linspace(self.x0, self.x1, self.nx)
        y = np.linspace(self.y0, self.y1, self.ny)
        return (x[None, :] + 1j * y[:, None]).ravel()

    def describe(self) -> str:
        return f"[{self.x0:g}, {self.x1:g}] x [{self.y0:g}, {self.y1:g}]"


def check_holes(points: np.ndarray, holes: Sequence, margin: float = HOLE_MARGIN) -> None:
    for h in holes:
        d = chordal(points, _c(h))
        if d.size and float(d.min()) < margin:
            raise RegionTouchesHole(f"sample within chordal distance {float(d.min()):.3g} of hole {h!r}")


def sup_distance(f: Callable, g: Callable, region, holes: Sequence = (),
                 margin: float = HOLE_MARGIN, extended: bool = False) -> float:
    """Max chordal distance between ``f`` and ``g`` over the region's lattice.

    ``extended`` evaluates in long double (64-bit mantissa on x86), needed
    once ``1/n`` drops below double rounding, around ``n >= 1e10``.
    """
    z = region.samples() if hasattr(region, "samples") else np.asarray(region, dtype=complex)
    check_holes(z, holes, margin)
    if extended:
        z = z.astype(np.clongdouble)
    with np.errstate(all="ignore"):
        return float(np.max(chordal(f(z), g(z))))


# ---------------------------------------------------------------------------
# evaluating rational maps on arrays

class ArrayMap:
    """Vectorized evaluation of a :class:`RationalMap` on the whole sphere.

    Values of modulus above 1 are evaluated in the chart ``w = 1/z``.
    """

    def __init__(self, R: RationalMap):
        d = R.degree
        N = np.array([complex(c) for c in R.N] + [0j] * (d + 1 - len(R.N)))
        D = np.array([complex(c) for c in R.D] + [0j] * (d + 1 - len(R.D)))
        self.R, self.degree = R, d
        self.N, self.D = N[::-1], D[::-1]          # descending for polyval
        self.Nr, self.Dr = N, D                     # reversed: polynomials in 1/z
        self.dN, self.dD = np.polyder(self.N), np.polyder(self.D)
        self.dNr, self.dDr = np.polyder(self.Nr), np.polyder(self.Dr)

    def __call__(self, z):
        return self.eval(z)[0]

    def eval(self, z, derivative: bool = False):
        """``(R(z), R'(z))``; the derivative is ``None`` unless asked for."""
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        z = z.ravel()
        val = np.empty_like(z)
        der = np.empty_like(z) if derivative else None
        small = np.abs(z) <= 1          # False for inf and nan
        big = ~small
        with np.errstate(all="ignore"):
            for mask, chart in ((small, 0), (big, 1)):
                if not mask.any():
                    continue
                x = z[mask]
                if chart == 0:
                    N, D, dN, dD = self.N, self.D, self.dN, self.dD
                else:
                    x = np.where(np.isinf(x), 0, 1 / x)
                    N, D, dN, dD = self.Nr, self.Dr, self.dNr, self.dDr
                n, d = np.polyval(N, x), np.polyval(D, x)
                zero = d == 0
                safe = np.where(zero, 1, d)
                val[mask] = np.where(zero, complex("inf"), n / safe)
                if derivative:
                    g = (np.polyval(dN, x) * d - n * np.polyval(dD, x)) / safe ** 2
                    if chart == 1:
                        g = -(x ** 2) * g     # dR/dz = -w^2 dR/dw
                    der[mask] = np.where(zero, complex("inf"), g)
        return val.reshape(shape), (der.reshape(shape) if derivative else None)


def spherical_derivative(val, der, z) -> np.ndarray:
    """``|R'(z)| (1+|z|^2) / (1+|R(z)|^2)``, computed stably."""
    with np.errstate(all="ignore"):
        az, av = np.abs(z), np.abs(val)
        return np.abs(der) * (1 + az * az) / (1 + av * av)


# ---------------------------------------------------------------------------
# families

@dataclass
class ParamFamily:
    """A closed-form family ``n -> f_n``.

    ``fn(n)`` returns an array function; ``rational(n)`` the same map as a
    :class:`RationalMap` for cycle finding.  ``holes`` are the points where
    ``f_n`` does not converge to its limit.
    """

    name: str
    formula: str
    fn: Callable
    rational: Callable | None = None
    holes: tuple = (0j,)
    parameter: str = "n"

    def __call__(self, n):
        return self.fn(n)


def _rm(num, den, degree=None) -> RationalMap:
    return RationalMap.from_coeffs([complex(c) for c in num], [complex(c) for c in den], degree)


ZETA8 = cmath.exp(1j * cmath.pi / 4)
_C3 = -3j / 2 ** 0.5


def _mcmullen(n):
    return lambda z: z ** 2 + 1 / (n * z ** 3)


def _basilica(n):
    return lambda z: z ** 2 / (z ** 2 - 1) + 1 / (n * z ** 3)


def _cubic(n):
    return lambda z: z ** 3 + _C3 * z ** 2 + 1 / (n * z ** 3)


def _cantor(n):
    return lambda z: z ** 3 + 1 / (n * z ** 3)


def _surgery(n):
    return lambda z: z ** 3 + 1 / (n * z ** 3) + ZETA8 * n ** -0.25


def _degenerate(n):
    return lambda z: (z + 1) ** 2 - 2 + 1 / (n * z)


def _godillon(n):
    return lambda z: 1 / (z - 1) ** 2 + 1 / (1 - n * z)


def _sierpinski(n):
    return lambda z: z ** 2 / (1 - z ** 4 / 16) + 1 / (n * z ** 4)


def _quadruply(n):
    return lambda z: z ** 3 + 1 / (n * n * z) ** 3 + 1 / (n * n * z - n) ** 3 + 1 / (n * n * z + n) ** 3


def _jconj(t):
    c1 = 3 * (0.75 * t) ** (1 / 3)
    c2 = 3 * 2 ** (-1 / 3) * t ** (7 / 3)
    return lambda z: (z ** 3 - c1 * z ** 2) / (4.5 * z - 3) + (t ** 3 - c2 * z) / (-2 * z ** 3 + 3 * t * z ** 2)


def _r_mcmullen(n):
    return _rm([1, 0, 0, 0, 0, n], [0, 0, 0, n])


def _r_basilica(n):
    # (n z^5 + z^2 - 1) / (n z^3 (z^2 - 1))
    return _rm([-1, 0, 1, 0, 0, n], [0, 0, 0, -n, 0, n])


def _r_cubic(n):
    return _rm([1, 0, 0, 0, 0, n * _C3, n], [0, 0, 0, n])


def _r_cantor(n):
    return _rm([1, 0, 0, 0, 0, 0, n], [0, 0, 0, n])


def _r_surgery(n):
    return _rm([1, 0, 0, n * ZETA8 * n ** -0.25, 0, 0, n], [0, 0, 0, n])


def _r_degenerate(n):
    # ((z+1)^2 - 2) + 1/(n z) = (n z^3 + 2 n z^2 - n z + 1) / (n z)
    return _rm([1, -n, 2 * n, n], [0, n])


def _r_godillon(n):
    # (1 - n z + (z-1)^2) / ((z-1)^2 (1 - n z))
    num = np.polyadd([1, -2, 1], [-n, 1])[::-1]
    den = np.polymul([1, -2, 1], [-n, 1])[::-1]
    return _rm(list(num), list(den))


def _r_sierpinski(n):
    # z^2/(1 - z^4/16) + 1/(n z^4) = (16 n z^6 + 16 - z^4) / (n z^4 (16 - z^4))
    return _rm([16, 0, 0, 0, -1, 0, 16 * n], [0, 0, 0, 0, 16 * n, 0, 0, 0, -n])


def _r_quadruply(n):
    z = np.poly1d([1, 0])
    a, b, c = (n * n * z) ** 3, (n * n * z - n) ** 3, (n * n * z + n) ** 3
    den = a * b * c
    num = z ** 3 * den + b * c + a * c + a * b
    return _rm(list(num.coeffs[::-1]), list(den.coeffs[::-1]))


def _r_jconj(t):
    c1 = 3 * (0.75 * t) ** (1 / 3)
    c2 = 3 * 2 ** (-1 / 3) * t ** (7 / 3)
    p1, q1 = np.poly1d([1, -c1, 0, 0]), np.poly1d([4.5, -3])
    p2, q2 = np.poly1d([-c2, t ** 3]), np.poly1d([-2, 3 * t, 0, 0])
    num, den = p1 * q2 + p2 * q1, q1 * q2
    return _rm(list(num.coeffs[::-1]), list(den.coeffs[::-1]))


FAMILIES = {
    "degenerate": ParamFamily("degenerate", "(z+1)^2 - 2 + 1/(n z)", _degenerate, _r_degenerate),
    "mcmullen": ParamFamily("mcmullen", "z^2 + 1/(n z^3)", _mcmullen, _r_mcmullen),
    "basilica-cantor": ParamFamily("basilica-cantor", "z^2/(z^2-1) + 1/(n z^3)", _basilica, _r_basilica),
    "cubic-two-cycle": ParamFamily("cubic-two-cycle", "z^3 - (3i/sqrt2) z^2 + 1/(n z^3)", _cubic, _r_cubic),
    "quadruply": ParamFamily("quadruply", "z^3 + 1/(n^2 z)^3 + 1/(n^2 z - n)^3 + 1/(n^2 z + n)^3",
                             _quadruply, _r_quadruply),
    "buried-sierpinski": ParamFamily("buried-sierpinski", "z^2/(1 - z^4/16) + 1/(n z^4)",
                                     _sierpinski, _r_sierpinski),
    "cantor-z3": ParamFamily("cantor-z3", "z^3 + 1/(n z^3)", _cantor, _r_cantor),
    "surgery-k1": ParamFamily("surgery-k1", "z^3 + 1/(n z^3) + zeta8 n^(-1/4)", _surgery, _r_surgery),
    "godillon-3": ParamFamily("godillon-3", "1/(z-1)^2 + 1/(1 - n z)", _godillon, _r_godillon),
    # rendering only; the parameter is t, small
    "j-conjugate": ParamFamily("j-conjugate",
                               "(z^3 - 3(3/4)^(1/3) t^(1/3) z^2)/(9z/2 - 3) + (t^3 - 3 2^(-1/3) t^(7/3) z)/(-2z^3 + 3t z^2)",
                               _jconj, _r_jconj, holes=(0j,), parameter="t"),
}


# ---------------------------------------------------------------------------
# limits

@dataclass
class LimitReport:
    """Sup distances per ``n`` (rows) and region (columns)."""

    name: str
    ns: list
    regions: list
    table: list                      # table[i][j]: n = ns[i], region j
    bound: float
    slack: float = 0.10
    reference: list | None = None    # optional expected values per n
    notes: list = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        for j in range(len(self.regions)):
            col = [row[j] for row in self.table]
            if any(b > a * (1 + self.slack) for a, b in zip(col, col[1:])):
                return False
        return True

    @property
    def final_ok(self) -> bool:
        return bool(self.table) and max(self.table[-1]) < self.bound

    @property
    def ok(self) -> bool:
        return self.monotone and self.final_ok

    def rows(self) -> list[dict]:
        out = []
        for n, row in zip(self.ns, self.table):
            for j, v in enumerate(row):
                out.append({"n": n, "region": j, "sup_distance": v})
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "monotone": self.monotone, "bound": self.bound,
                "final_ok": self.final_ok, "regions": [r.describe() for r in self.regions],
                "rows": self.rows(), "notes": list(self.notes)}

    def csv(self) -> str:
        lines = ["n,region,sup_distance"]
        lines += [f"{r['n']:.6g},{r['region']},{r['sup_distance']:.6e}" for r in self.rows()]
        return "\n".join(lines) + "\n"

    def text(self) -> str:
        head = f"{'n':>10}  " + "  ".join(f"region {j:<6}" for j in range(len(self.regions)))
        lines = [f"{self.name}: {'pass' if self.ok else 'FAIL'} (bound {self.bound:g})", head]
        for n, row in zip(self.ns, self.table):
            lines.append(f"{n:>10.3g}  " + "  ".join(f"{v:<13.4e}" for v in row))
        for j, r in enumerate(self.regions):
            lines.append(f"  region {j}: {r.describe()}")
        return "\n".join(lines)


def algebraic_limit_check(family: Callable, limit: Callable, holes: Sequence, regions: Sequence,
                          ns: Sequence, bound: float = 1e-3, slack: float = 0.10,
                          name: str = "limit", extended: bool = False) -> LimitReport:
    """``sup |f_n - g|`` on each region for each ``n``."""
    table = [[sup_distance(family(n), limit, r, holes, extended=extended) for r in regions] for n in ns]
    return LimitReport(name, list(ns), list(regions), table, bound, slack)


def iterate(f: Callable, p: int) -> Callable:
    def fp(z):
        for _ in range(p):
            z = f(z)
        return z
    return fp


def rescaling_check(family: Callable, M: Callable, period: int, limit: Callable, region,
                    ns: Sequence, holes: Sequence = (), bound: float = 1e-3,
                    slack: float = 0.10, name: str = "rescaling", extended: bool = False) -> LimitReport:
    """Sup distance of ``M(n)^-1 o f_n^p o M(n)`` to the limit, per ``n``.

    Holes are given in the rescaled coordinate.  Passes iff the errors do
    not increase (up to ``slack``) and the last one is below ``bound``.
    """
    table = []
    for n in ns:
        m = M(n)
        g = iterate(family(n), period)
        resc = (lambda mm, gg: (lambda w: mm.inverse()(gg(mm(w)))))(m, g)
        table.append([sup_distance(resc, limit, region, holes, extended=extended)])
    return LimitReport(name, list(ns), [region], table, bound, slack)


# ---------------------------------------------------------------------------
# attracting cycles

@dataclass
class AttractingCycle:
    points: list
    period: int
    multiplier: complex

    def to_json(self) -> dict:
        def enc(z):
            return "inf" if not np.isfinite(z) else [z.real, z.imag]
        return {"period": self.period, "points": [enc(z) for z in self.points],
                "multiplier": abs(self.multiplier)}


class CycleList(list):
    """Attracting cycles, with the critical orbits that did not settle."""

    def __init__(self, cycles, failures):
        super().__init__(cycles)
        self.failures = failures


def critical_points(R: RationalMap) -> list[complex]:
    pts = [_c(z) for z, _ in R.critical_points_numeric()]
    try:
        if R.local_degree(INF) > 1 and not any(not np.isfinite(z) for z in pts):
            pts.append(complex("inf"))
    except ToleranceAmbiguity:
        pass
    return pts


def find_attracting_cycles(R: RationalMap, max_iter: int = 2000, cycle_tol: float = 1e-9,
                           max_period: int = 64) -> CycleList:
    """Iterate every critical point and record the cycles the orbits settle on."""
    F = ArrayMap(R)
    cycles: list = []
    failures: list = []
    crit = critical_points(R)
    z = np.array(crit, dtype=complex)
    tail = []
    for i in range(max_iter):
        z = F(z)
        if i >= max_iter - max_period - 1:
            tail.append(z)
    tail = np.array(tail)                      # (max_period + 1, #critical)
    for k, c in enumerate(crit):
        orbit = tail[:, k]
        last = orbit[-1]
        period = None
        for p in range(1, max_period + 1):
            if float(chordal(orbit[-1 - p], last)) < cycle_tol:
                period = p
                break
        if period is None:
            failures.append(c)
            continue
        pts = [complex(w) for w in orbit[-period:]]
        if any(float(np.min(chordal(np.array(cy.points), pts[0]))) < 1e3 * cycle_tol for cy in cycles):
            continue
        cycles.append(AttractingCycle(pts, period, _multiplier(F, pts)))
    return CycleList(cycles, failures)


def _multiplier(F: ArrayMap, pts: list) -> complex:
    """Product of derivatives along the cycle, in charts adapted to each point."""
    mult = 1 + 0j
    h = 1e-7
    for z in pts:
        # chart: u = z - z0 near finite points of modulus <= 1, u = 1/z otherwise
        def to(u_pt, w):
            if np.isfinite(u_pt) and abs(u_pt) <= 1:
                return w - u_pt
            return 1 / w if np.isfinite(w) else 0j

        def frm(u_pt, u):
            if np.isfinite(u_pt) and abs(u_pt) <= 1:
                return u_pt + u
            u0 = 1 / u_pt if np.isfinite(u_pt) else 0j
            return 1 / (u0 + u)

        w0 = complex(F(np.array([z]))[0])
        a = complex(F(np.array([frm(z, h)]))[0])
        b = complex(F(np.array([frm(z, -h)]))[0])
        mult *= (to(w0, a) - to(w0, b)) / (2 * h)
    return mult


__all__ = ["chordal", "MoebiusMap", "Annulus", "Disk", "Rect", "RegionTouchesHole", "sup_distance",
           "check_holes", "ArrayMap", "spherical_derivative", "ParamFamily", "FAMILIES", "LimitReport",
           "algebraic_limit_check", "rescaling_check", "iterate", "AttractingCycle", "CycleList",
           "find_attracting_cycles", "critical_points", "NoConvergence", "HOLE_MARGIN"]
