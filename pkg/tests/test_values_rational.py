from fractions import Fraction as Q

import pytest
import sympy as sp

from tms import poly
from tms.rational import RationalMap, ToleranceAmbiguity
from tms.scheme import eval_rational, local_degree_at
from tms.values import (INF, Approx, Exact, chordal, format_value, parse_value, root_of_unity,
                        same_point)

z = sp.symbols("z")


def R(num, den):
    return RationalMap.from_coeffs(num, den)


class TestValues:
    def test_exact_arithmetic_stays_exact(self):
        a, b = Exact(Q(1, 3), 2), Exact(-1, Q(1, 2))
        for v in (a + b, a - b, a * b, a / b, a ** 3):
            assert isinstance(v, Exact)
        assert a / b * b == a

    @pytest.mark.parametrize("text", ["0,0", "-3/4,1/2", "inf", "~0.5,-0.25@1e-09"])
    def test_value_text_round_trip(self, text):
        v = parse_value(text)
        assert parse_value(format_value(v)) == v

    def test_chordal_at_infinity(self):
        assert chordal(INF, INF) == 0
        assert chordal(Exact(0), INF) == pytest.approx(2)
        assert chordal(Exact(1), INF) == pytest.approx(2 ** 0.5)

    def test_same_point_reports_numeric(self):
        ok, numeric = same_point(Exact(1), Exact(1))
        assert ok and not numeric
        ok, numeric = same_point(Approx.of(1 + 1e-12j), Exact(1))
        assert ok and numeric

    def test_eighth_root_of_unity(self):
        zeta = complex(root_of_unity(1, 8))
        assert abs(zeta ** 4 + 1) < 1e-12


class TestPolynomials:
    def test_gcd_of_products(self):
        p = poly.mul([Exact(-1), Exact(1)], [Exact(2), Exact(1)])     # (z-1)(z+2)
        q = poly.mul([Exact(-1), Exact(1)], [Exact(3), Exact(0), Exact(1)])
        g = poly.gcd_exact(p, q)
        assert poly.monic(g) == [Exact(-1), Exact(1)]

    def test_taylor_shift_matches_sympy(self):
        p = [Exact(c) for c in (3, -2, 0, 5)]
        shifted = poly.taylor_shift(p, Exact(2))
        want = sp.Poly(sp.expand((3 - 2 * (z + 2) + 5 * (z + 2) ** 3)), z).all_coeffs()[::-1]
        assert [c.re for c in shifted] == [Q(int(w)) for w in want]

    def test_divmod(self):
        q, r = poly.divmod_poly([Exact(c) for c in (1, 0, 0, 1)], [Exact(1), Exact(1)])
        assert poly.trim(r) == [Exact(0)] or poly.trim(r) == []
        assert q == [Exact(1), Exact(-1), Exact(1)]


class TestEvaluation:
    def test_square_at_infinity(self):
        assert eval_rational(RationalMap.monomial(2), INF) is INF

    def test_pole_of_inverse_square(self):
        f = R([1], [1, -2, 1])             # 1/(z-1)^2
        assert eval_rational(f, Exact(1)) is INF

    def test_inverse_cube_plus_zeta8_at_infinity(self):
        zeta = root_of_unity(1, 8)
        f = RationalMap.monomial(-3).shifted(zeta)
        assert same_point(eval_rational(f, INF), zeta)[0]

    def test_exact_in_exact_out(self):
        f = R([-1, 2, 1], [1])
        assert f(Exact(Q(1, 2))) == Exact(Q(1, 4))   # -1 + 2(1/2) + 1/4


class TestLocalDegree:
    def test_square_at_zero(self):
        assert local_degree_at(RationalMap.monomial(2), Exact(0)) == 2

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_godillon_factor_against_taylor_series(self, k):
        # z^k/(z^k - (z-1)^k): vanishing order at 0 read off a sympy series
        expr = z ** k / (z ** k - (z - 1) ** k)
        order = sp.Poly(sp.series(expr, z, 0, k + 2).removeO(), z).monoms()[-1][0]
        num = [0] * k + [1]
        den = [a - b for a, b in zip(
            [0] * k + [1] + [0] * 0,
            [int(c) for c in sp.Poly(sp.expand((z - 1) ** k), z).all_coeffs()[::-1]])]
        f = R(num, den)
        assert local_degree_at(f, Exact(0)) == order == k

    def test_inverse_square_at_pole(self):
        assert local_degree_at(R([1], [1, -2, 1]), Exact(1)) == 2

    @pytest.mark.parametrize("f,fibre", [
        (RationalMap.monomial(3), [Exact(0)]),
        (RationalMap.monomial(-4), [INF]),
        (R([1], [1, -2, 1]), [Exact(1)]),                 # fibre over infinity
        (R([1], [1, -2, 1]), [Exact(2), Exact(0)]),       # fibre over 1
    ])
    def test_degrees_sum_over_fibre(self, f, fibre):
        assert sum(local_degree_at(f, w) for w in fibre) == f.degree

    def test_ambiguous_tolerance_is_reported(self):
        f = RationalMap.from_coeffs([0, 5e-10 + 0j, 1 + 0j], [1 + 0j])
        with pytest.raises(ToleranceAmbiguity):
            f.local_degree(Exact(0))


class TestComposition:
    def test_degree_multiplies(self):
        f, g = R([-1, 2, 1], [1]), RationalMap.monomial(-3)
        assert f.compose(g).degree == 6
        assert g.compose(g).degree == 9

    def test_composition_values(self):
        f, g = R([-1, 2, 1], [1]), R([1, 1], [0, 1])
        h = f.compose(g)
        x = Exact(Q(2, 7), 1)
        assert h(x) == f(g(x))

    def test_inverse_cubes_compose_to_ninth_power(self):
        g = RationalMap.monomial(-3)
        assert g.compose(g).same_as(RationalMap.monomial(9))

    def test_shift_keeps_untouched_coefficients_exact(self):
        f = RationalMap.monomial(-3).shifted(Exact(1))
        assert f.exact and f(INF) == Exact(1)
