"""Expansions of kernels ``f(x, u)`` on ``[-1, 1] x L`` for the real spheres.

A kernel on ``S^d x L`` is written ``f(x, u) = sum_n phi_{n,d}(u) c_n(d, x)``
with ``c_n(d, .)`` the Gegenbauer polynomials normalized at 1.  On the
Hilbert sphere the same kernel is a power series ``sum_n phi_n(u) x^n`` and
``phi_{n,d} -> phi_n`` as ``d`` grows.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DomainError, QuadratureError, SmoothnessError
from .groups import GroupFunction
from .quadrature import MAX_NODES, OPAQUE_NODES, gauss_jacobi_rule
from .series import CoefficientTable, OpaqueKernel
from .specfun import gegenbauer_monomial, gegenbauer_table, harmonic_dim_real

FD_STEPS = (1e-2, 5e-3, 2.5e-3)


class GegenbauerSeries:
    """``f(x, u) = sum_n table[n](u) c_n(d, x)``."""

    def __init__(self, d, coeffs):
        if int(d) < 1:
            raise DomainError("d must be >= 1")
        self.d = int(d)
        self.coeffs = coeffs if isinstance(coeffs, CoefficientTable) else CoefficientTable(coeffs)
        if self.coeffs.is_complex_indexed:
            raise DomainError("real-sphere series need integer indices")

    @property
    def group(self):
        return self.coeffs.group

    @property
    def degree(self):
        return self.coeffs.degree

    def __call__(self, x, u=0):
        return evaluate_series_real(self.coeffs, self.d, x, u)

    def __repr__(self):
        return f"GegenbauerSeries(d={self.d}, {self.coeffs!r})"


class PowerSeries:
    """``f(x, u) = sum_n table[n](u) x^n``."""

    def __init__(self, coeffs):
        self.coeffs = coeffs if isinstance(coeffs, CoefficientTable) else CoefficientTable(coeffs)
        if self.coeffs.is_complex_indexed:
            raise DomainError("real power series need integer indices")

    @property
    def group(self):
        return self.coeffs.group

    @property
    def degree(self):
        return self.coeffs.degree

    def __call__(self, x, u=0):
        x = np.asarray(x, dtype=float)
        out = np.zeros(np.broadcast(x, np.asarray(u)).shape, dtype=complex)
        for n, phi in self.coeffs.items():
            out = out + phi.values[u] * x**n
        return out

    def __repr__(self):
        return f"PowerSeries({self.coeffs!r})"


def evaluate_series_real(coeffs, d, x, u=0, truncate=None):
    """``sum_n coeffs[n](u) c_n(d, x)``, optionally keeping only ``n <= truncate``.

    The discarded part is bounded by ``coeffs.tail_bound(truncate)``.
    """
    if truncate is not None:
        coeffs = coeffs.truncated(truncate)
    x = np.asarray(x, dtype=float)
    shape = np.broadcast(x, np.asarray(u)).shape
    if not len(coeffs):
        return np.zeros(shape, dtype=complex)[()]
    basis = gegenbauer_table(d, coeffs.degree, x)
    out = np.zeros(shape, dtype=complex)
    for n, phi in coeffs.items():
        out = out + phi.values[u] * basis[n]
    return out[()]


def _values_on(f, pts):
    """Kernel values on ``pts`` for every group element; shape ``(len(pts), |G|)``."""
    return np.stack([np.asarray(f(pts, u), dtype=complex) for u in f.group.elements], axis=-1)


def _project(f, d, indices, nodes):
    rule = gauss_jacobi_rule(0.5 * d - 1.0, 0.5 * d - 1.0, nodes)
    vals = _values_on(f, rule.nodes)
    basis = gegenbauer_table(d, max(indices), rule.nodes)
    w = rule.probability_weights
    return {n: harmonic_dim_real(d, n) * (w * basis[n]) @ vals for n in indices}


def extract_table_real(f, d, nmax, nodes=None):
    """All ``d``-Schoenberg coefficients ``phi_{n,d}`` for ``n <= nmax``.

    ``phi_{n,d}(u) = N_n(d) int f(x, u) c_n(d, x) dtau_{d/2-1}(x)``.  Series
    models are integrated exactly with ``max(degree, nmax) + 8`` nodes; opaque
    models start from 128 nodes and double until the coefficients agree to
    1e-12 relative.
    """
    if int(d) < 1:
        raise DomainError("d must be >= 1")
    d = int(d)
    indices = list(range(nmax + 1))
    if nodes is None and f.degree is not None:
        nodes = max(f.degree, nmax) + 8
    if nodes is not None:
        found = _project(f, d, indices, nodes)
    else:
        found = _adaptive_project(f, d, indices)
    return CoefficientTable({n: GroupFunction(f.group, v) for n, v in found.items()}, f.group)


def _adaptive_project(f, d, indices):
    n = OPAQUE_NODES
    prev = _project(f, d, indices, n)
    while 2 * n <= MAX_NODES:
        n *= 2
        cur = _project(f, d, indices, n)
        a = np.stack(list(prev.values()))
        b = np.stack(list(cur.values()))
        scale = np.max(np.abs(b))
        if np.max(np.abs(a - b)) <= 1e-12 * scale + 1e-15:
            return cur
        prev = cur
    raise QuadratureError(f"extraction did not converge with {MAX_NODES} nodes")


def extract_coefficient_real(f, n, d, u=None, nodes=None):
    """The coefficient ``phi_{n,d}`` of ``f`` at level ``d``.

    Returns a :class:`GroupFunction` when ``u`` is None, else its value at ``u``.
    """
    phi = extract_table_real(f, d, n, nodes)[n]
    return phi if u is None else phi(u)


def gegenbauer_to_monomial(coeffs, d):
    """Rewrite a level-``d`` Gegenbauer table as a power-series table (exact basis change)."""
    out = {}
    for n, phi in coeffs.items():
        for k, c in enumerate(gegenbauer_monomial(d, n)):
            if c != 0:
                out[k] = out.get(k, 0) + phi * float(c)
    return CoefficientTable(out, coeffs.group)


def monomial_to_gegenbauer(coeffs, d):
    """Inverse of :func:`gegenbauer_to_monomial`, by exact triangular back-substitution."""
    out = {}
    top = coeffs.degree if len(coeffs) else -1
    work = {k: coeffs[k] for k in range(top + 1)}
    for n in range(top, -1, -1):
        mono = gegenbauer_monomial(d, n)
        lead = mono[n]
        a = work[n] / float(lead)
        if np.any(a.values != 0):
            out[n] = a
        for k, c in enumerate(mono[:n]):
            if c != 0:
                work[k] = work[k] - a * float(c)
    return CoefficientTable(out, coeffs.group)


def _central_difference(f, n, u, h):
    k = np.arange(n + 1)
    pts = (0.5 * n - k) * h
    w = (-1.0) ** k * np.array([math.comb(n, int(j)) for j in k], dtype=float)
    return np.dot(w, np.asarray(f(pts, u), dtype=complex)) / h**n


def _richardson_derivative(f, n, u, steps=FD_STEPS):
    row = [_central_difference(f, n, u, h) for h in steps]
    p = 1
    while len(row) > 1:
        fac = 4.0**p
        row = [(fac * row[i + 1] - row[i]) / (fac - 1.0) for i in range(len(row) - 1)]
        p += 1
    return row[0]


def power_coefficients(f):
    """Power-series table of a series model (exact for polynomial series)."""
    if isinstance(f, PowerSeries):
        return f.coeffs
    if isinstance(f, GegenbauerSeries):
        return gegenbauer_to_monomial(f.coeffs, f.d)
    raise DomainError(f"no exact power series for {type(f).__name__}")


def monomial_coefficients_real(f, n, u=None):
    """The power-series coefficient ``phi_n = f^(n)(0, u) / n!``.

    Series models are handled exactly.  Opaque models use Richardson
    extrapolated central differences with steps 1e-2, 5e-3, 2.5e-3 and must
    declare a smoothness of at least ``n``.
    """
    if isinstance(f, OpaqueKernel):
        if f.smoothness is not None and n > f.smoothness:
            raise SmoothnessError(f"order {n} exceeds declared smoothness {f.smoothness}")
        vals = [_richardson_derivative(f, n, v) / math.factorial(n) for v in f.group.elements]
        phi = GroupFunction(f.group, vals)
    else:
        phi = power_coefficients(f)[n]
    return phi if u is None else phi(u)


def weighted_derivative(f, x, u=0):
    """``(1 - x^2) df/dx`` computed exactly from the series."""
    table = power_coefficients(f)
    x = np.asarray(x, dtype=float)
    out = np.zeros(np.broadcast(x, np.asarray(u)).shape, dtype=complex)
    for n, phi in table.items():
        if n:
            out = out + n * phi.values[u] * x ** (n - 1)
    return (1.0 - x * x) * out


def derivative_split(f, d):
    """Write ``(1 - x^2) df/dx = f1 - f2`` with ``f1, f2`` Gegenbauer series at level ``d``.

    ``f`` is a series model (positive definite on ``S^{d+2} x L`` for the
    positivity of ``f1``, ``f2``).  The coefficients of ``f1`` come from the
    level-``d`` expansion of ``f``, those of ``f2`` from the level-``d+2`` one::

        f1 = d sum_n (2n+d-1)(n+1) / ((2n+d+1)(n+d-1)) phi_{n+1,d} c_n(d, .)
        f2 = d sum_{n>=2} (n-1) / (n+d-1) phi_{n-1,d+2} c_n(d, .)

    For ``d = 1`` the ``n = 0`` weight of ``f1`` is ``1/2`` instead.  Both
    satisfy ``||f_i|| = f_i(1, e) <= d f(1, e)``.
    """
    if isinstance(f, OpaqueKernel):
        raise DomainError("derivative_split needs a series model")
    d = int(d)
    if d < 1:
        raise DomainError("d must be >= 1")
    top = f.degree
    low = extract_table_real(f, d, top + 1)
    high = extract_table_real(f, d + 2, top + 1)
    c1, c2 = {}, {}
    for n in range(top):
        if d == 1 and n == 0:
            w = Fraction(1, 2)
        else:
            w = d * Fraction((2 * n + d - 1) * (n + 1), (2 * n + d + 1) * (n + d - 1))
        c1[n] = low[n + 1] * float(w)
    for n in range(2, top + 2):
        c2[n] = high[n - 1] * float(d * Fraction(n - 1, n + d - 1))
    return GegenbauerSeries(d, CoefficientTable(c1, f.group)), GegenbauerSeries(d, CoefficientTable(c2, f.group))


@dataclass
class LimitRow:
    """One level of a limit study: extracted coefficient, limit, and errors per element."""

    level: int
    index: object
    value: GroupFunction
    limit: GroupFunction
    errors: np.ndarray

    @property
    def max_error(self):
        return float(np.max(self.errors))


def limit_study_real(f, n, d_list, u=None):
    """Compare ``phi_{n,d}`` with the power-series coefficient ``phi_n`` along ``d_list``.

    The error of each row is the max over all group elements (or only ``u``
    when given), the finite-group stand-in for uniform convergence on compacta.
    """
    limit = monomial_coefficients_real(f, n)
    rows = []
    for d in d_list:
        val = extract_coefficient_real(f, n, d)
        err = np.abs(val.values - limit.values)
        if u is not None:
            err = err[[u]]
        rows.append(LimitRow(int(d), n, val, limit, err))
    return rows
