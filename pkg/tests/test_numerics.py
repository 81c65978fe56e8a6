import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tms.numerics import (FAMILIES, Annulus, ArrayMap, Disk, MoebiusMap, Rect, RegionTouchesHole,
                          algebraic_limit_check, chordal, find_attracting_cycles, iterate,
                          rescaling_check, sup_distance)
from tms.rational import RationalMap

ZETA8 = cmath.exp(1j * cmath.pi / 4)
finite = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


def monomial(d):
    return lambda z: z ** d


def surgery_limit(w):
    return 1 / w ** 3 + ZETA8


class TestChordal:
    def test_infinity(self):
        assert chordal(complex("inf"), 0) == pytest.approx(2)
        assert chordal(complex("inf"), complex("inf")) == 0
        assert chordal(1, complex("inf")) == pytest.approx(2 ** 0.5)

    def test_huge_values_use_the_other_chart(self):
        assert chordal(1e200, 2e200) == pytest.approx(2 * 0.5e-200, rel=1e-6)

    @given(finite, finite)
    def test_inversion_is_an_isometry(self, x, y):
        if x == 0 or y == 0:
            return
        assert chordal(1 / x, 1 / y) == pytest.approx(float(chordal(x, y)), abs=1e-12)


class TestMoebius:
    coeffs = st.tuples(finite, finite, finite, finite).filter(lambda t: abs(t[0] * t[3] - t[1] * t[2]) > 1e-3)

    @given(coeffs)
    @settings(max_examples=50)
    def test_inverse(self, c):
        M = MoebiusMap(*c)
        z = Annulus(0, 0.5, 2, 32, 8).samples()
        assert float(np.max(chordal(M.inverse()(M(z)), z))) < 1e-9

    def test_normalized(self):
        M = MoebiusMap(2, 0, 0, 8)
        assert abs(M.a * M.d - M.b * M.c - 1) < 1e-14

    def test_degenerate(self):
        with pytest.raises(ValueError):
            MoebiusMap(1, 2, 2, 4)

    def test_infinity(self):
        M = MoebiusMap(1, 1, 1, -1)     # (z+1)/(z-1)
        assert M(complex("inf")) == pytest.approx(1)
        assert not np.isfinite(M(1.0))

    def test_composition(self):
        A, B = MoebiusMap(1, 2, 0, 1), MoebiusMap.scaling(3)
        z = np.array([0.3 + 0.1j, -2j])
        assert np.allclose((A @ B)(z), A(B(z)))


class TestSupDistance:
    def test_identical(self):
        assert sup_distance(monomial(2), monomial(2), Annulus()) == 0

    def test_small_perturbation(self):
        d = sup_distance(lambda z: z ** 2 + 1 / (100 * z ** 3), monomial(2), Annulus(0, 1, 2))
        assert 0.004 <= d <= 0.011

    def test_linear_in_one_over_n(self):
        d2 = sup_distance(lambda z: z ** 2 + 1 / (100 * z ** 3), monomial(2), Annulus(0, 1, 2))
        d4 = sup_distance(lambda z: z ** 2 + 1 / (1e4 * z ** 3), monomial(2), Annulus(0, 1, 2))
        assert 80 <= d2 / d4 <= 120

    def test_hole(self):
        with pytest.raises(RegionTouchesHole):
            sup_distance(monomial(2), monomial(2), Disk(0, 1), holes=(0j,))

    fns = st.sampled_from([monomial(2), monomial(3), lambda z: z ** 2 + 0.1 / z,
                           lambda z: 1 / (z - 3), lambda z: z + 0.5j])

    @given(fns, fns, fns)
    @settings(max_examples=30)
    def test_metric(self, f, g, h):
        R = Annulus(0, 0.5, 1.5, 64, 16)
        assert sup_distance(f, g, R) == pytest.approx(sup_distance(g, f, R))
        assert sup_distance(f, h, R) <= sup_distance(f, g, R) + sup_distance(g, h, R) + 1e-12

    def test_regions(self):
        assert Rect(0, 1, 0, 1, 4, 4).samples().shape == (16,)
        assert Disk(0, 1, ((0, 0.1),)).samples().min() != 0
        with pytest.raises(ValueError):
            Annulus(0, 2, 1)


class TestLimits:
    def test_godillon_family(self):
        f = FAMILIES["godillon-3"]
        ns = [1e3, 1e4, 1e5, 1e6]
        rep = algebraic_limit_check(f, lambda z: 1 / (z - 1) ** 2, f.holes,
                                    [Disk(1, 1, ((0, 0.1),))], ns, bound=2e-5)
        assert rep.ok
        for n, (err,) in zip(ns, rep.table):
            assert err <= 2 / (0.1 * n - 1)      # chordal <= 2 * euclidean

    def test_mcmullen_family(self):
        f = FAMILIES["mcmullen"]
        rep = algebraic_limit_check(f, monomial(2), f.holes, [Annulus(0, 0.5, 2)], [1e3, 1e4, 1e5, 1e6], bound=1e-4)
        assert rep.ok and rep.monotone

    def test_region_with_hole(self):
        f = FAMILIES["mcmullen"]
        with pytest.raises(RegionTouchesHole):
            algebraic_limit_check(f, monomial(2), f.holes, [Disk(0, 1)], [1e3])

    def test_surgery_closed_form(self):
        f = FAMILIES["surgery-k1"]
        ns = [1e4, 1e6, 1e8]
        rep = rescaling_check(f, lambda n: MoebiusMap.scaling(n ** -0.25), 1, surgery_limit,
                              Annulus(0, 0.5, 2), ns, bound=1e-3)
        assert rep.ok
        for n, (err,) in zip(ns, rep.table):
            assert err == pytest.approx(8 * n ** -0.5, rel=0.2)
        assert 6e-4 <= rep.table[-1][0] <= 1e-3

    def test_extended_precision_at_huge_n(self):
        f = FAMILIES["mcmullen"]
        ns = [1e12, 1e14, 1e16]
        lo = algebraic_limit_check(f, monomial(2), f.holes, [Annulus(0, 1, 2)], ns, bound=1)
        hi = algebraic_limit_check(f, monomial(2), f.holes, [Annulus(0, 1, 2)], ns, bound=1, extended=True)
        # double rounding swamps the 1/n signal at 1e16, long double does not
        assert abs(lo.table[-1][0] * 1e16 - 1) > 0.2
        assert all(row[0] * n == pytest.approx(1, rel=1e-3) for n, row in zip(ns, hi.table))

    def test_extended_keeps_moebius_precision(self):
        z = np.array([1 + 1e-18j], dtype=np.clongdouble)
        w = MoebiusMap.scaling(2)(z)
        assert w.dtype == np.clongdouble and w[0].imag == pytest.approx(2e-18)

    def test_identity_rescaling(self):
        f = FAMILIES["mcmullen"]
        rep = rescaling_check(f, lambda n: MoebiusMap.identity(), 1, monomial(2),
                              Annulus(0, 0.5, 2), [1e3, 1e5], bound=1e-3)
        assert rep.ok

    def test_wrong_exponent(self):
        f = FAMILIES["surgery-k1"]
        rep = rescaling_check(f, lambda n: MoebiusMap.scaling(n ** -0.5), 1, surgery_limit,
                              Annulus(0, 0.5, 2), [1e4, 1e6, 1e8], bound=1e-3)
        assert not rep.ok

    def test_pfold_equals_iterated(self):
        f = FAMILIES["mcmullen"](1e3)
        z = Annulus(0, 0.9, 1.1, 64, 8).samples()
        twice = lambda w: f(f(w))
        assert float(np.max(chordal(iterate(f, 2)(z), twice(z)))) < 1e-9
        a = rescaling_check(FAMILIES["mcmullen"], lambda n: MoebiusMap.identity(), 2, monomial(4),
                            Annulus(0, 0.9, 1.1, 64, 8), [1e3])
        b = sup_distance(twice, monomial(4), Annulus(0, 0.9, 1.1, 64, 8))
        assert a.table[0][0] == pytest.approx(b, abs=1e-9)

    def test_report_formats(self):
        f = FAMILIES["mcmullen"]
        rep = algebraic_limit_check(f, monomial(2), f.holes, [Annulus(0, 0.5, 2)], [1e3, 1e4], name="m")
        assert rep.csv().splitlines()[0] == "n,region,sup_distance"
        assert len(rep.rows()) == 2 and rep.to_json()["name"] == "m"
        assert "region 0" in rep.text()


class TestCycles:
    def test_square(self):
        cyc = find_attracting_cycles(RationalMap.monomial(2))
        assert len(cyc) == 2 and not cyc.failures
        assert any(c.points == [0j] for c in cyc)
        assert any(not np.isfinite(c.points[0]) for c in cyc)

    def test_basilica(self):
        cyc = find_attracting_cycles(RationalMap.from_coeffs([-1, 2, 1], [1]))
        two = [c for c in cyc if c.period == 2]
        assert len(two) == 1 and sorted(np.round(np.real(two[0].points), 9)) == [-2, -1]
        assert abs(two[0].multiplier) < 1e-6

    def test_cantor_regime_finds_infinity(self):
        R = FAMILIES["cantor-z3"].rational(1e6)
        cyc = find_attracting_cycles(R)
        assert any(not np.isfinite(c.points[0]) for c in cyc)

    def test_array_map_matches_exact(self):
        R = RationalMap.from_coeffs([1, 0, 2], [3, 1])
        F = ArrayMap(R)
        z = np.array([0.5 + 0.5j, 3 - 1j, 100j])
        assert np.allclose(F(z), (1 + 2 * z ** 2) / (3 + z))
        _, der = F.eval(z, derivative=True)
        assert np.allclose(der, (4 * z * (3 + z) - (1 + 2 * z ** 2)) / (3 + z) ** 2)
