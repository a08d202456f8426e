import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from models import grid, random_gegenbauer_model
from schoenberg import (
    CoefficientTable,
    DomainError,
    GegenbauerSeries,
    OpaqueKernel,
    PowerSeries,
    SmoothnessError,
    derivative_split,
    evaluate_series_real,
    extract_coefficient_real,
    extract_table_real,
    gegenbauer_normalized,
    gegenbauer_to_monomial,
    harmonic_dim_real,
    integrate_tau,
    limit_study_real,
    monomial_coefficients_real,
    monomial_to_gegenbauer,
    pd_check_group,
)
from schoenberg.groups import GroupFunction, make_cyclic, make_trivial
from schoenberg.sphere_real import weighted_derivative



def significant(phi, floor=1e-10):
    """Coefficients that vanish exactly come back as round-off; skip those."""
    return np.max(np.abs(phi.values)) > floor


X2 = PowerSeries({2: 1.0})
EXP = OpaqueKernel(lambda x, u: np.exp(x), smoothness=20)


class TestExtraction:
    @pytest.mark.parametrize("d", range(1, 21))
    def test_x_squared(self, d):
        t = extract_table_real(X2, d, 4)
        assert t[0](0) == pytest.approx(1 / (d + 1), abs=1e-12)
        assert t[2](0) == pytest.approx(d / (d + 1), abs=1e-12)
        assert abs(t[1](0)) < 1e-13 and abs(t[3](0)) < 1e-13 and abs(t[4](0)) < 1e-13

    @pytest.mark.parametrize("d", [1, 2, 3, 8])
    def test_roundtrip_series(self, d):
        rng = np.random.default_rng(d)
        f = random_gegenbauer_model(make_cyclic(4), rng, d, 9)
        assert extract_table_real(f, d, 9).allclose(f.coeffs, atol=1e-12)

    def test_opaque_chebyshev_exponential(self):
        # e^x = I_0(1) + 2 sum I_n(1) T_n(x)
        t = extract_table_real(EXP, 1, 6)
        for n in range(7):
            ref = sp.iv(n, 1.0) * (1 if n == 0 else 2)
            assert t[n](0).real == pytest.approx(ref, rel=1e-11)

    def test_opaque_legendre_exponential(self):
        # on S^2: phi_n = (2n + 1) sqrt(pi / 2) I_{n+1/2}(1)
        t = extract_table_real(EXP, 2, 5)
        for n in range(6):
            ref = (2 * n + 1) * math.sqrt(math.pi / 2) * sp.iv(n + 0.5, 1.0)
            assert t[n](0).real == pytest.approx(ref, rel=1e-11)

    def test_single_coefficient(self):
        assert extract_coefficient_real(X2, 2, 3, u=0) == pytest.approx(0.75)
        assert extract_coefficient_real(X2, 0, 3).allclose(0.25)

    @given(st.integers(1, 20), st.integers(0, 10))
    @settings(max_examples=40, deadline=None)
    def test_orthonormality(self, d, n):
        val = integrate_tau(lambda x: gegenbauer_normalized(d, n, x) ** 2, d / 2 - 1, n + 2)
        assert val == pytest.approx(1 / harmonic_dim_real(d, n), rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            extract_table_real(X2, 0, 2)


class TestBasisChange:
    @given(st.integers(1, 12), st.lists(st.floats(-2, 2), min_size=1, max_size=8))
    @settings(max_examples=40)
    def test_roundtrip(self, d, coeffs):
        t = CoefficientTable(dict(enumerate(coeffs)))
        back = monomial_to_gegenbauer(gegenbauer_to_monomial(t, d), d)
        assert back.allclose(t, atol=1e-9)

    def test_power_series_agrees(self):
        rng = np.random.default_rng(5)
        f = random_gegenbauer_model(make_cyclic(3), rng, 4, 6)
        p = PowerSeries(gegenbauer_to_monomial(f.coeffs, 4))
        x = grid()
        for u in range(3):
            np.testing.assert_allclose(p(x, u), f(x, u), atol=1e-12)


class TestEvaluation:
    def test_mass_identity(self):
        rng = np.random.default_rng(6)
        f = random_gegenbauer_model(make_cyclic(5), rng, 3, 8)
        for u in range(5):
            assert f(1.0, u) == pytest.approx(sum(phi(u) for _, phi in f.coeffs.items()), abs=1e-12)

    def test_truncation_bound(self):
        rng = np.random.default_rng(7)
        f = random_gegenbauer_model(make_trivial(), rng, 2, 12)
        x = grid()
        for cut in (0, 3, 7):
            diff = np.max(np.abs(evaluate_series_real(f.coeffs, 2, x, truncate=cut) - f(x)))
            assert diff <= f.coeffs.tail_bound(cut) + 1e-12

    def test_hermitian_symmetry(self):
        # pd kernels satisfy f(x, u^{-1}) = conj f(x, u)
        rng = np.random.default_rng(8)
        g = make_cyclic(6)
        f = random_gegenbauer_model(g, rng, 3, 5)
        x = grid()
        for u in range(6):
            np.testing.assert_allclose(f(x, g.inv[u]), np.conj(f(x, u)), atol=1e-12)


class TestNesting:
    @given(st.integers(1, 8), st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_lower_dimension_keeps_positivity(self, d, seed):
        # pd on S^{d+1} implies pd on S^d: all level-d coefficients stay pd
        rng = np.random.default_rng(seed)
        g = make_cyclic(3)
        f = random_gegenbauer_model(g, rng, d + 1, 6)
        for _, phi in extract_table_real(f, d, 6).items():
            if significant(phi):
                assert pd_check_group(phi, tol=1e-9).is_pd


class TestPowerCoefficients:
    def test_series_exact(self):
        f = GegenbauerSeries(3, {2: 1.0})
        # c_2(3, x) = (4 x^2 - 1) / 3
        assert monomial_coefficients_real(f, 2, 0) == pytest.approx(4 / 3)
        assert monomial_coefficients_real(f, 0, 0) == pytest.approx(-1 / 3)

    def test_opaque_exponential(self):
        # the fixed step cascade loses ~eps / h^n to round-off, so orders above 4 are not held to 1e-6
        for n in range(5):
            assert monomial_coefficients_real(EXP, n, 0).real == pytest.approx(1 / math.factorial(n), abs=1e-6)

    def test_smoothness(self):
        k = OpaqueKernel(lambda x, u: np.abs(x) ** 3, smoothness=2)
        with pytest.raises(SmoothnessError):
            monomial_coefficients_real(k, 3)


class TestLimit:
    def test_x_squared_rate(self):
        rows = limit_study_real(X2, 2, range(1, 21))
        errs = [r.max_error for r in rows]
        np.testing.assert_allclose(errs, [1 / (d + 1) for d in range(1, 21)], atol=1e-12)
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_group_factor_scales_error(self):
        g = make_cyclic(2)
        phi = GroupFunction(g, [2.0, 0.5])
        f = PowerSeries(CoefficientTable({2: phi}, g))
        for row in limit_study_real(f, 2, [1, 4, 9]):
            assert row.max_error == pytest.approx(2.0 / (row.level + 1), abs=1e-12)
            np.testing.assert_allclose(row.errors, [2.0 / (row.level + 1), 0.5 / (row.level + 1)], atol=1e-12)

    def test_opaque_limit_decays(self):
        rows = limit_study_real(EXP, 1, [2, 8, 32])
        errs = [r.max_error for r in rows]
        assert errs[0] > errs[1] > errs[2]


class TestDerivativeSplit:
    @pytest.mark.parametrize("d", range(1, 7))
    def test_identity_and_bound(self, d):
        rng = np.random.default_rng(100 + d)
        g = make_cyclic(3)
        f = random_gegenbauer_model(g, rng, d + 2, 7)
        f1, f2 = derivative_split(f, d)
        x = grid(61)
        for u in range(3):
            lhs = weighted_derivative(f, x, u)
            np.testing.assert_allclose(lhs, f1(x, u) - f2(x, u), atol=1e-10)
        # both parts pd at level d (coefficients pd on the group)
        for part in (f1, f2):
            for _, phi in part.coeffs.items():
                if significant(phi):
                    assert pd_check_group(phi, tol=1e-9).is_pd
            assert part.coeffs.mass_at_identity <= d * f.coeffs.mass_at_identity + 1e-12

    def test_weighted_derivative_finite_difference(self):
        f = PowerSeries({3: 1.0, 1: 0.5})
        x = np.linspace(-0.9, 0.9, 7)
        h = 1e-6
        fd = (1 - x**2) * (f(x + h) - f(x - h)) / (2 * h)
        np.testing.assert_allclose(weighted_derivative(f, x), fd, atol=1e-8)

    def test_needs_series(self):
        with pytest.raises(DomainError):
            derivative_split(EXP, 2)
