import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from schoenberg import DomainError
from schoenberg.specfun import (
    beta,
    disc_monomial,
    disc_polynomial,
    gegenbauer_monomial,
    gegenbauer_normalized,
    gegenbauer_table,
    harmonic_dim_complex,
    harmonic_dim_real,
    jacobi_monomial,
    jacobi_normalized,
    log_beta,
    pochhammer,
    polyval_exact,
    sphere_mass_ratio,
    surface_mass,
)

X = np.linspace(-1.0, 1.0, 33)


def gegenbauer_sum(lam, n, x):
    """C_n^lam(x) from the explicit finite sum, in exact arithmetic."""
    total = Fraction(0)
    for k in range(n // 2 + 1):
        total += (-1) ** k * pochhammer(lam, n - k) / (math.factorial(k) * math.factorial(n - 2 * k)) * (2 * x) ** (n - 2 * k)
    return total


def chebyshev(n, x):
    return math.cos(n * math.acos(x))


class TestConstants:
    def test_pochhammer_exact(self):
        assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
        assert pochhammer(5, 0) == 1
        assert pochhammer(1, 6) == 720

    def test_pochhammer_negative_k(self):
        with pytest.raises(DomainError):
            pochhammer(1, -1)

    @pytest.mark.parametrize("a,b", [(0.5, 0.5), (3.0, 2.5), (40.0, 0.5), (1e-3, 7.0)])
    def test_beta_matches_scipy(self, a, b):
        assert beta(a, b) == pytest.approx(sp.beta(a, b), rel=1e-13)
        assert log_beta(a, b) == pytest.approx(sp.betaln(a, b), rel=1e-13, abs=1e-14)

    def test_surface_mass_low_dims(self):
        assert surface_mass(1) == pytest.approx(2 * math.pi, rel=1e-15)
        assert surface_mass(2) == pytest.approx(4 * math.pi, rel=1e-15)
        assert surface_mass(3) == pytest.approx(2 * math.pi**2, rel=1e-15)

    @pytest.mark.parametrize("d", [2, 5, 17, 120])
    def test_mass_ratio_against_surface_masses(self, d):
        assert sphere_mass_ratio(d) == pytest.approx(surface_mass(d - 1) / surface_mass(d), rel=1e-13)

    @pytest.mark.parametrize("d", [1, 2, 5, 17, 2000])
    def test_mass_ratio_against_gammaln(self, d):
        ref = math.exp(sp.gammaln(d / 2 + 0.5) - sp.gammaln(d / 2)) / math.sqrt(math.pi)
        assert sphere_mass_ratio(d) == pytest.approx(ref, rel=1e-12)

    def test_harmonic_dim_real_small(self):
        # S^1: 1, 2, 2, ...; S^2: 2n + 1
        assert [harmonic_dim_real(1, n) for n in range(5)] == [1, 2, 2, 2, 2]
        assert [harmonic_dim_real(2, n) for n in range(5)] == [1, 3, 5, 7, 9]
        assert harmonic_dim_real(3, 4) == 25

    @given(st.integers(1, 60), st.integers(0, 60))
    def test_harmonic_dim_real_binomial_form(self, d, n):
        # N_n(d) = C(n+d, d) - C(n+d-2, d), homogeneous minus r^2-multiples
        expect = math.comb(n + d, d) - (math.comb(n + d - 2, d) if n >= 2 else 0)
        assert harmonic_dim_real(d, n) == expect

    def test_harmonic_dim_real_huge_is_exact(self):
        v = harmonic_dim_real(500, 300)
        assert isinstance(v, int)
        assert v == math.comb(800, 500) - math.comb(798, 500)

    @given(st.integers(2, 30), st.integers(0, 20), st.integers(0, 20))
    def test_harmonic_dim_complex_symmetric_and_integral(self, q, m, n):
        v = harmonic_dim_complex(q, m, n)
        assert v == harmonic_dim_complex(q, n, m)
        assert v >= 1

    def test_harmonic_dim_complex_sums_to_real(self):
        # bidegree decomposition of harmonics on S^{2q-1}
        for q in range(2, 7):
            for k in range(7):
                assert sum(harmonic_dim_complex(q, m, k - m) for m in range(k + 1)) == harmonic_dim_real(2 * q - 1, k)

    @pytest.mark.parametrize("bad", [(0, 1), (1, -1)])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            harmonic_dim_real(*bad)


class TestGegenbauer:
    @pytest.mark.parametrize("d", [2, 3, 4, 7, 12])
    @pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
    def test_against_explicit_sum(self, d, n):
        lam = Fraction(d - 1, 2)
        xs = [Fraction(k, 7) for k in range(-7, 8)]
        expect = [float(gegenbauer_sum(lam, n, x) / gegenbauer_sum(lam, n, Fraction(1))) for x in xs]
        got = gegenbauer_normalized(d, n, np.array([float(x) for x in xs]))
        np.testing.assert_allclose(got, expect, rtol=0, atol=1e-13)

    @pytest.mark.parametrize("n", range(8))
    def test_d1_is_chebyshev(self, n):
        np.testing.assert_allclose(gegenbauer_normalized(1, n, X), [chebyshev(n, x) for x in X], atol=1e-13)

    @pytest.mark.parametrize("d", [2, 5, 30])
    def test_against_scipy(self, d):
        lam = (d - 1) / 2
        for n in range(12):
            ref = sp.eval_gegenbauer(n, lam, X) / sp.eval_gegenbauer(n, lam, 1.0)
            np.testing.assert_allclose(gegenbauer_normalized(d, n, X), ref, atol=1e-12)

    def test_d2_is_legendre(self):
        for n in range(10):
            np.testing.assert_allclose(gegenbauer_normalized(2, n, X), sp.eval_legendre(n, X), atol=1e-13)

    def test_c2_closed_form(self):
        for d in range(1, 21):
            np.testing.assert_allclose(gegenbauer_normalized(d, 2, X), ((d + 1) * X**2 - 1) / d, atol=1e-14)

    @given(st.integers(1, 400), st.integers(0, 60))
    def test_value_at_one_and_parity(self, d, n):
        assert gegenbauer_normalized(d, n, 1.0) == pytest.approx(1.0, abs=1e-12)
        x = np.linspace(0, 1, 9)
        np.testing.assert_allclose(gegenbauer_normalized(d, n, -x), (-1) ** n * gegenbauer_normalized(d, n, x), atol=1e-12)

    @given(st.integers(2, 400), st.integers(0, 80))
    @settings(max_examples=60)
    def test_bounded_by_one(self, d, n):
        assert np.all(np.abs(gegenbauer_normalized(d, n, X)) <= 1 + 1e-12)

    def test_table_rows(self):
        T = gegenbauer_table(5, 6, X)
        assert T.shape == (7,) + X.shape
        for n in range(7):
            np.testing.assert_allclose(T[n], gegenbauer_normalized(5, n, X), atol=0)

    def test_large_dimension_tends_to_power(self):
        # c_n(d, x) -> x^n as d -> infinity
        np.testing.assert_allclose(gegenbauer_normalized(10**7, 4, X), X**4, atol=1e-5)

    def test_scalar_in_scalar_out(self):
        assert np.ndim(gegenbauer_normalized(3, 2, 0.3)) == 0

    def test_outside_interval(self):
        with pytest.raises(DomainError):
            gegenbauer_normalized(3, 2, 1.01)

    @pytest.mark.parametrize("d", [1, 2, 6])
    def test_monomial_expansion(self, d):
        for n in range(9):
            coeffs = gegenbauer_monomial(d, n)
            assert all(isinstance(c, Fraction) for c in coeffs)
            assert sum(coeffs) == 1
            vals = [float(polyval_exact(coeffs, Fraction(k, 5))) for k in range(-5, 6)]
            np.testing.assert_allclose(vals, gegenbauer_normalized(d, n, np.arange(-5, 6) / 5), atol=1e-14)


class TestJacobiAndDisc:
    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (1.0, 2.0), (3.5, 0.0), (10.0, 4.0)])
    def test_jacobi_against_scipy(self, a, b):
        for k in range(10):
            ref = sp.eval_jacobi(k, a, b, X) / sp.eval_jacobi(k, a, b, 1.0)
            np.testing.assert_allclose(jacobi_normalized(a, b, k, X), ref, atol=1e-12)

    def test_jacobi_monomial(self):
        for k in range(6):
            c = jacobi_monomial(2, 1, k)
            vals = [float(polyval_exact(c, Fraction(j, 4))) for j in range(-4, 5)]
            np.testing.assert_allclose(vals, jacobi_normalized(2, 1, k, np.arange(-4, 5) / 4), atol=1e-14)

    def test_disc_simple_cases(self):
        z = np.array([0.3 + 0.4j, -0.5j, 0.9, 0.0])
        # R_{m,0} = z^m, R_{0,n} = zbar^n for every alpha
        for a in (0, 1, 5):
            np.testing.assert_allclose(disc_polynomial(a, 3, 0, z), z**3, atol=1e-14)
            np.testing.assert_allclose(disc_polynomial(a, 0, 2, z), np.conj(z) ** 2, atol=1e-14)
        # R^alpha_{1,1}(z) = ((alpha+2)|z|^2 - 1) / (alpha+1)
        for a in (0, 1, 3, 10):
            np.testing.assert_allclose(disc_polynomial(a, 1, 1, z), ((a + 2) * abs(z) ** 2 - 1) / (a + 1), atol=1e-14)

    @given(st.integers(0, 12), st.integers(0, 8), st.integers(0, 8))
    def test_disc_symmetries(self, a, m, n):
        z = np.array([0.2 + 0.7j, -0.6 + 0.1j, 0.8j])
        np.testing.assert_allclose(disc_polynomial(a, m, n, 1.0), 1.0, atol=1e-12)
        np.testing.assert_allclose(disc_polynomial(a, n, m, z), np.conj(disc_polynomial(a, m, n, z)), atol=1e-12)
        assert np.all(np.abs(disc_polynomial(a, m, n, z)) <= 1 + 1e-12)

    def test_disc_on_boundary_is_character(self):
        t = np.linspace(0, 2 * np.pi, 13)
        z = np.exp(1j * t)
        np.testing.assert_allclose(disc_polynomial(4, 5, 2, z), np.exp(3j * t), atol=1e-12)

    def test_disc_q2_alpha0_relation(self):
        # R^{alpha}_{m,n}(x) for real x in terms of Jacobi: check against scipy directly
        x = np.linspace(-0.9, 0.9, 7)
        for a in (0, 2):
            for m, n in [(2, 1), (1, 3), (2, 2)]:
                k, h = min(m, n), abs(m - n)
                ref = sp.eval_jacobi(k, a, h, 2 * x**2 - 1) / sp.eval_jacobi(k, a, h, 1.0) * x ** h
                np.testing.assert_allclose(disc_polynomial(a, m, n, x), ref, atol=1e-13)

    def test_disc_monomial(self):
        z = 0.3 - 0.55j
        for m, n in [(0, 0), (2, 1), (1, 3), (3, 3)]:
            terms = disc_monomial(2, m, n)
            val = sum(complex(c) * z**i * np.conj(z) ** j for (i, j), c in terms.items())
            assert val == pytest.approx(complex(disc_polynomial(2, m, n, z)), abs=1e-14)

    def test_disc_outside(self):
        with pytest.raises(DomainError):
            disc_polynomial(1, 1, 1, 1.1)
