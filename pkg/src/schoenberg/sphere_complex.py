"""Expansions of kernels ``f(z, u)`` on ``closed disc x L`` for the complex spheres.

On ``Omega_{2q} x L`` a kernel is ``f(z, u) = sum phi^{q-2}_{m,n}(u) R^{q-2}_{m,n}(z)``
with disc polynomials ``R``; on the complex Hilbert sphere it is the double
power series ``sum phi_{m,n}(u) z^m conj(z)^n``, and ``phi^{q-2}_{m,n} -> phi_{m,n}``
as ``q`` grows.
"""

import math
from fractions import Fraction

import numpy as np

from .exceptions import DomainError, NegativeCoefficientError, QuadratureError, SmoothnessError
from .groups import GroupFunction, make_trivial
from .quadrature import MAX_NODES, OPAQUE_NODES, disc_rule
from .series import CoefficientTable, OpaqueKernel
from .specfun import disc_monomial, disc_polynomial, harmonic_dim_complex
from .sphere_real import FD_STEPS, LimitRow

OPAQUE_ANGULAR = 256


def _check_q(q):
    if int(q) != q or q < 2:
        raise DomainError("q must be an integer >= 2")
    return int(q)


def _pair_table(coeffs):
    table = coeffs if isinstance(coeffs, CoefficientTable) else CoefficientTable(coeffs)
    if len(table) and not table.is_complex_indexed:
        raise DomainError("complex-sphere series need (m, n) indices")
    return table


def _angular_degree(table):
    return max((abs(m - n) for m, n in table.indices), default=0)


class DiscSeries:
    """``f(z, u) = sum table[(m, n)](u) R^{q-2}_{m,n}(z)``."""

    def __init__(self, q, coeffs):
        self.q = _check_q(q)
        self.coeffs = _pair_table(coeffs)

    @property
    def group(self):
        return self.coeffs.group

    @property
    def degree(self):
        return self.coeffs.degree

    @property
    def angular_degree(self):
        return _angular_degree(self.coeffs)

    def __call__(self, z, u=0):
        return evaluate_series_complex(self.coeffs, self.q, z, u)

    def __repr__(self):
        return f"DiscSeries(q={self.q}, {self.coeffs!r})"


class DiscPowerSeries:
    """``f(z, u) = sum table[(m, n)](u) z^m conj(z)^n``."""

    def __init__(self, coeffs):
        self.coeffs = _pair_table(coeffs)

    @property
    def group(self):
        return self.coeffs.group

    @property
    def degree(self):
        return self.coeffs.degree

    @property
    def angular_degree(self):
        return _angular_degree(self.coeffs)

    def __call__(self, z, u=0):
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        out = np.zeros(np.broadcast(z, np.asarray(u)).shape, dtype=complex)
        for (m, n), phi in self.coeffs.items():
            out = out + phi.values[u] * z**m * zc**n
        return out

    def __repr__(self):
        return f"DiscPowerSeries({self.coeffs!r})"


def evaluate_series_complex(coeffs, q, z, u=0, truncate=None):
    """``sum coeffs[(m, n)](u) R^{q-2}_{m,n}(z)`` over indices with ``m + n <= truncate``."""
    q = _check_q(q)
    if truncate is not None:
        coeffs = coeffs.truncated(truncate)
    z = np.asarray(z, dtype=complex)
    out = np.zeros(np.broadcast(z, np.asarray(u)).shape, dtype=complex)
    for (m, n), phi in coeffs.items():
        out = out + phi.values[u] * disc_polynomial(q - 2, m, n, z)
    return out[()]


def _values_on(f, pts):
    return np.stack([np.asarray(f(pts, u), dtype=complex) for u in f.group.elements], axis=-1)


def _project(f, q, indices, radial, angular):
    rule = disc_rule(q - 2, radial, angular)
    vals = _values_on(f, np.array(rule.points))
    out = {}
    for m, n in indices:
        conj_r = np.conj(disc_polynomial(q - 2, m, n, rule.points))
        out[(m, n)] = harmonic_dim_complex(q, m, n) * (rule.weights * conj_r) @ vals
    return out


def extract_table_complex(f, q, indices, radial_nodes=None, angular_count=None):
    """Coefficients ``phi^{q-2}_{m,n}`` of ``f`` for the requested ``(m, n)`` pairs.

    ``phi^{q-2}_{m,n}(u) = N(q; m, n) int f(z, u) conj(R^{q-2}_{m,n}(z)) dnu_{q-2}(z)``.
    Series models use ``max(degree, m + n) + 8`` radial and ``2K + 5`` angular
    nodes (``K`` the largest ``|m - n|`` involved), which integrates them
    exactly.  Opaque models start at 128 x 256 nodes and double.
    """
    q = _check_q(q)
    indices = [CoefficientTable._key(i) for i in indices]
    if not indices:
        return CoefficientTable({}, f.group)
    if radial_nodes is None and f.degree is not None:
        radial_nodes = max(f.degree, max(m + n for m, n in indices)) + 8
        k = max(f.angular_degree, max(abs(m - n) for m, n in indices))
        angular_count = angular_count or 2 * k + 5
    if radial_nodes is not None and angular_count is not None:
        found = _project(f, q, indices, radial_nodes, angular_count)
    else:
        found = _adaptive_project(f, q, indices, radial_nodes or OPAQUE_NODES, angular_count or OPAQUE_ANGULAR)
    return CoefficientTable({k: GroupFunction(f.group, v) for k, v in found.items()}, f.group)


def _adaptive_project(f, q, indices, radial, angular):
    prev = _project(f, q, indices, radial, angular)
    while 2 * radial <= MAX_NODES:
        radial, angular = 2 * radial, 2 * angular
        cur = _project(f, q, indices, radial, angular)
        a = np.stack(list(prev.values()))
        b = np.stack(list(cur.values()))
        if np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b)) + 1e-15:
            return cur
        prev = cur
    raise QuadratureError(f"extraction did not converge with {MAX_NODES} radial nodes")


def all_indices(top):
    """Every ``(m, n)`` with ``m + n <= top``."""
    return [(m, s - m) for s in range(top + 1) for m in range(s + 1)]


def extract_coefficient_complex(f, m, n, q, u=None):
    """The coefficient ``phi^{q-2}_{m,n}``; a :class:`GroupFunction` unless ``u`` is given."""
    phi = extract_table_complex(f, q, [(m, n)])[(m, n)]
    return phi if u is None else phi(u)


def disc_to_monomial(coeffs, q):
    """Exact change of basis from disc polynomials at level ``q`` to ``z^m conj(z)^n``."""
    q = _check_q(q)
    out = {}
    for (m, n), phi in coeffs.items():
        for key, c in disc_monomial(q - 2, m, n).items():
            out[key] = out.get(key, 0) + phi * float(c)
    return CoefficientTable(out, coeffs.group)


def power_coefficients(f):
    if isinstance(f, DiscPowerSeries):
        return f.coeffs
    if isinstance(f, DiscSeries):
        return disc_to_monomial(f.coeffs, f.q)
    raise DomainError(f"no exact power series for {type(f).__name__}")


def _wirtinger_weights(m, n):
    """Coefficients of ``2^{-(m+n)} (X - iY)^m (X + iY)^n`` as ``{(a, b): c}`` for ``d^a/dx^a d^b/dy^b``."""
    poly = {(0, 0): 1.0 + 0j}
    for sign, count in ((-1j, m), (1j, n)):
        for _ in range(count):
            nxt = {}
            for (a, b), c in poly.items():
                nxt[(a + 1, b)] = nxt.get((a + 1, b), 0) + 0.5 * c
                nxt[(a, b + 1)] = nxt.get((a, b + 1), 0) + 0.5 * sign * c
            poly = nxt
    return poly


def _mixed_difference(f, a, b, u, h):
    ka = np.arange(a + 1)
    kb = np.arange(b + 1)
    wa = (-1.0) ** ka * np.array([math.comb(a, int(k)) for k in ka])
    wb = (-1.0) ** kb * np.array([math.comb(b, int(k)) for k in kb])
    pts = ((0.5 * a - ka) * h)[:, None] + 1j * ((0.5 * b - kb) * h)[None, :]
    vals = np.asarray(f(pts, u), dtype=complex)
    return np.einsum("i,j,ij->", wa, wb, vals) / h ** (a + b)


def _wirtinger_derivative(f, m, n, u, steps=FD_STEPS):
    weights = _wirtinger_weights(m, n)

    def at(h):
        return sum(c * _mixed_difference(f, a, b, u, h) for (a, b), c in weights.items())

    row = [at(h) for h in steps]
    p = 1
    while len(row) > 1:
        fac = 4.0**p
        row = [(fac * row[i + 1] - row[i]) / (fac - 1.0) for i in range(len(row) - 1)]
        p += 1
    return row[0]


def monomial_coefficients_complex(f, m, n, u=None):
    """``phi_{m,n} = (1 / (m! n!)) d^{m+n} f(0, u) / dz^m dzbar^n``.

    Exact for series models; opaque models use Wirtinger finite differences
    (real partial stencils with Richardson extrapolation).
    """
    if isinstance(f, OpaqueKernel):
        if f.smoothness is not None and m + n > f.smoothness:
            raise SmoothnessError(f"order {m + n} exceeds declared smoothness {f.smoothness}")
        fac = math.factorial(m) * math.factorial(n)
        phi = GroupFunction(f.group, [_wirtinger_derivative(f, m, n, v) / fac for v in f.group.elements])
    else:
        phi = power_coefficients(f)[(m, n)]
    return phi if u is None else phi(u)


def _walk_factors(q, m, n):
    a = Fraction((m + q - 1) * (n + q - 1), (q - 1) * (m + n + q - 1))
    b = Fraction((m + 1) * (n + 1), (q - 1) * (m + n + q + 1))
    return a, b


def dimension_walk(coeffs, q):
    """Coefficients at level ``q + 1`` from those at level ``q``.

    ``phi^{q-1}_{m,n} = (m+q-1)(n+q-1) / ((q-1)(m+n+q-1)) phi^{q-2}_{m,n}
    - (m+1)(n+1) / ((q-1)(m+n+q+1)) phi^{q-2}_{m+1,n+1}``.
    """
    q = _check_q(q)
    keys = set(coeffs.indices) | {(m - 1, n - 1) for m, n in coeffs.indices if m and n}
    out = {}
    for m, n in keys:
        a, b = _walk_factors(q, m, n)
        out[(m, n)] = coeffs[(m, n)] * float(a) - coeffs[(m + 1, n + 1)] * float(b)
    return CoefficientTable(out, coeffs.group)


def coefficient_inequality_check(coeffs, q, tol=1e-12):
    """Check ``phi^{q-2}_{m,n}(e) >= r(m, n) phi^{q-2}_{m+1,n+1}(e)`` at every relevant index.

    The inequality holds for kernels positive definite on ``Omega_{2q+2} x L``.
    Returns a list of ``(m, n, lhs, rhs)`` violations, empty when valid.
    """
    q = _check_q(q)
    keys = set(coeffs.indices) | {(m - 1, n - 1) for m, n in coeffs.indices if m and n}
    scale = max(coeffs.mass_at_identity, 1.0)
    bad = []
    for m, n in sorted(keys):
        ratio = Fraction((m + 1) * (n + 1) * (m + n + q - 1), (m + q - 1) * (n + q - 1) * (m + n + q + 1))
        lhs = coeffs[(m, n)].at_identity().real
        rhs = float(ratio) * coeffs[(m + 1, n + 1)].at_identity().real
        if lhs < rhs - tol * scale:
            bad.append((m, n, lhs, rhs))
    return bad


def _average_table(table, us, cs):
    group = table.group
    trivial = make_trivial()
    out = {}
    for key, phi in table.items():
        tot = 0j
        for uj, cj in zip(us, cs):
            for uk, ck in zip(us, cs):
                tot += phi(group.quotient(uj, uk)) * cj * np.conj(ck)
        out[key] = GroupFunction(trivial, tot)
    return CoefficientTable(out, trivial)


def group_average(f, us, cs):
    """``F(z) = sum_{j,k} f(z, u_j^{-1} u_k) c_j conj(c_k)`` as a kernel on the trivial group.

    Series models stay series models (the averaging acts on coefficients);
    opaque models give an opaque kernel.
    """
    us = [int(u) for u in us]
    cs = [complex(c) for c in cs]
    if not us or len(us) != len(cs):
        raise DomainError("us and cs must be nonempty and of equal length")
    if isinstance(f, DiscSeries):
        return DiscSeries(f.q, _average_table(f.coeffs, us, cs))
    if isinstance(f, DiscPowerSeries):
        return DiscPowerSeries(_average_table(f.coeffs, us, cs))
    group = f.group

    def averaged(z, _u=0):
        z = np.asarray(z, dtype=complex)
        tot = np.zeros(z.shape, dtype=complex)
        for uj, cj in zip(us, cs):
            for uk, ck in zip(us, cs):
                tot = tot + f(z, int(group.quotient(uj, uk))) * cj * np.conj(ck)
        return tot

    return OpaqueKernel(averaged, make_trivial(), f.smoothness)


RECOVERY_SCALARS = (1.0, -1.0, 1j)


def recover_group_coefficients(f, u, m, n, tol=1e-10, return_intermediates=False):
    """Recover ``phi_{m,n}(u)`` from three scalar kernels on the trivial group.

    For ``c`` in ``(1, -1, i)`` the kernel ``F_{u,c}(z) = f(z, e)(1 + |c|^2) +
    f(z, u) conj(c) + f(z, u^{-1}) c`` has nonnegative power-series
    coefficients ``a_{m,n}(u, c)``, and
    ``phi_{m,n}(u) = (1-i)/4 a(u, 1) - (1+i)/4 a(u, -1) + i/2 a(u, i)``.
    A coefficient below ``-tol`` raises :class:`NegativeCoefficientError`.
    """
    e = f.group.identity
    if isinstance(f, OpaqueKernel):
        # finite differences carry far more noise than the exact series path
        tol = max(tol, 1e-6)
    a = []
    for c in RECOVERY_SCALARS:
        F = group_average(f, [e, u], [1.0, c])
        val = complex(monomial_coefficients_complex(F, m, n, 0))
        if val.real < -tol or abs(val.imag) > tol * max(1.0, abs(val)):
            raise NegativeCoefficientError(
                f"a_{{{m},{n}}}(u={u}, c={c}) = {val:.3e} is not a nonnegative number"
            )
        a.append(val.real)
    phi = (1 - 1j) / 4 * a[0] - (1 + 1j) / 4 * a[1] + 0.5j * a[2]
    return (phi, tuple(a)) if return_intermediates else phi


def limit_study_complex(f, m, n, q_list, u=None):
    """Compare ``phi^{q-2}_{m,n}`` with the power-series coefficient ``phi_{m,n}`` along ``q_list``."""
    limit = monomial_coefficients_complex(f, m, n)
    rows = []
    for q in q_list:
        val = extract_coefficient_complex(f, m, n, q)
        err = np.abs(val.values - limit.values)
        if u is not None:
            err = err[[u]]
        rows.append(LimitRow(int(q), (m, n), val, limit, err))
    return rows


def default_disc_grid(radii=8, angles=16, rmax=0.95):
    r = np.linspace(0.0, rmax, radii)
    t = 2.0 * np.pi * np.arange(angles) / angles
    return (r[:, None] * np.exp(1j * t)[None, :]).ravel()


def disc_limit_diagnostic(m, n, alphas, grid=None):
    """Sup over ``grid`` of ``|R^alpha_{m,n}(z) - z^m conj(z)^n|`` for each alpha.

    Reports each ``(m, n)`` separately; whether the decay is uniform in
    ``(m, n)`` is not asserted.
    """
    grid = default_disc_grid() if grid is None else np.asarray(grid, dtype=complex)
    if np.any(np.abs(grid) >= 1):
        raise DomainError("grid must lie in the open disc")
    target = grid**m * np.conj(grid) ** n
    return [(a, float(np.max(np.abs(disc_polynomial(a, m, n, grid) - target)))) for a in alphas]
