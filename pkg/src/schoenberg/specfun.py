"""Orthogonal polynomial families and the closed-form constants around them.

Evaluation of Gegenbauer, Jacobi and disc polynomials uses forward three-term
recurrences written directly for the versions normalized to 1 at the point 1,
so nothing overflows for large degree or dimension.  Exact monomial expansions
(in :class:`fractions.Fraction` arithmetic) are kept separately and are only
used for basis changes and symbolic checks.
"""

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

from .exceptions import DomainError

_EDGE = 1e-12


def _as_real_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + _EDGE):
        raise DomainError(f"{name} must lie in [-1, 1]")
    return np.clip(arr, -1.0, 1.0)


def _as_disc_array(z, name="z"):
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) > 1.0 + _EDGE):
        raise DomainError(f"{name} must lie in the closed unit disc")
    return arr


def _unwrap(arr, scalar):
    return arr[()] if scalar else arr


def _exact(a):
    """Return ``a`` as a Fraction when it is rational, else as a float."""
    if isinstance(a, Rational):
        return Fraction(a)
    if isinstance(a, float) and a.is_integer():
        return Fraction(int(a))
    return float(a)


# --------------------------------------------------------------------------
# constants
# --------------------------------------------------------------------------


def pochhammer(a, k):
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)``.

    Works for ints, Fractions and floats; the result has the type of ``a``
    arithmetic (exact for exact input).
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    out = 1 if isinstance(a, Rational) else 1.0
    for j in range(k):
        out *= a + j
    return out


def log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta(a, b):
    """Euler Beta function, computed through log-gamma."""
    return math.exp(log_beta(a, b))


def log_surface_mass(d):
    return math.log(2.0) + 0.5 * (d + 1) * math.log(math.pi) - math.lgamma(0.5 * (d + 1))


def surface_mass(d):
    """Total surface measure of the unit sphere ``S^d`` in ``R^{d+1}``."""
    if d < 1:
        raise DomainError("d must be >= 1")
    return math.exp(log_surface_mass(d))


def sphere_mass_ratio(d):
    """``sigma_{d-1} / sigma_d``, equal to ``1 / B(d/2, 1/2)``."""
    if d < 1:
        raise DomainError("d must be >= 1")
    return math.exp(-log_beta(0.5 * d, 0.5))


def harmonic_dim_real(d, n):
    """Dimension ``N_n(d)`` of the degree-``n`` spherical harmonics on ``S^d``.

    Computed in integer arithmetic, so the result is exact for any size.
    """
    d, n = int(d), int(n)
    if d < 1 or n < 0:
        raise DomainError("need d >= 1 and n >= 0")
    if n == 0:
        return 1
    num = pochhammer(d, n - 1) * (d + 2 * n - 1)
    out, rem = divmod(num, math.factorial(n))
    assert rem == 0
    return out


def harmonic_dim_complex(q, m, n):
    """Dimension ``N(q; m, n)`` attached to the disc polynomial ``R^{q-2}_{m,n}``."""
    q, m, n = int(q), int(m), int(n)
    if q < 2 or m < 0 or n < 0:
        raise DomainError("need q >= 2 and m, n >= 0")
    num = (m + n + q - 1) * math.comb(m + q - 2, m) * math.comb(n + q - 2, n)
    out, rem = divmod(num, q - 1)
    assert rem == 0
    return out


# --------------------------------------------------------------------------
# evaluation by recurrence
# --------------------------------------------------------------------------


def gegenbauer_normalized(d, n, x):
    """Normalized Gegenbauer polynomial ``c_n(d, x) = C_n^(lam)(x) / C_n^(lam)(1)``.

    Parameters
    ----------
    d : int
        Sphere dimension, ``d >= 1``; ``lam = (d - 1) / 2``.  For ``d = 1`` the
        result is the Chebyshev polynomial ``T_n``.
    n : int
        Degree.
    x : float or array_like
        Points in ``[-1, 1]``.

    Returns
    -------
    float or ndarray
        Same shape as ``x``.
    """
    if d < 1:
        raise DomainError("d must be >= 1")
    if n < 0:
        raise DomainError("n must be nonnegative")
    scalar = np.ndim(x) == 0
    x = _as_real_array(x)
    return _unwrap(_gegenbauer_table(d, n, x)[n], scalar)


def gegenbauer_table(d, nmax, x):
    """Stack ``[c_0(d, x), ..., c_nmax(d, x)]`` along a new leading axis."""
    if d < 1:
        raise DomainError("d must be >= 1")
    return _gegenbauer_table(d, nmax, _as_real_array(x))


def _gegenbauer_table(d, nmax, x):
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = x
    lam = 0.5 * (d - 1)
    if d == 1:
        # Chebyshev: c_n = 2 x c_{n-1} - c_{n-2}
        for k in range(2, nmax + 1):
            out[k] = 2.0 * x * out[k - 1] - out[k - 2]
        return out
    for k in range(2, nmax + 1):
        out[k] = (2.0 * (k + lam - 1.0) * x * out[k - 1] - (k - 1.0) * out[k - 2]) / (k + 2.0 * lam - 1.0)
    return out


def jacobi_normalized(alpha, beta, k, x):
    """Normalized Jacobi polynomial ``R_k^(alpha, beta)(x) = P_k(x) / P_k(1)``."""
    if alpha <= -1 or beta <= -1:
        raise DomainError("alpha and beta must exceed -1")
    if k < 0:
        raise DomainError("k must be nonnegative")
    scalar = np.ndim(x) == 0
    x = _as_real_array(x)
    return _unwrap(_jacobi_normalized(float(alpha), float(beta), k, x), scalar)


def _jacobi_normalized(a, b, k, x):
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 + (a + b + 2.0) * (x - 1.0) / (2.0 * (a + 1.0))
    for j in range(2, k + 1):
        s = 2.0 * j + a + b
        # the usual P_k recurrence with P_{j-1}(1)/P_j(1) = j/(a+j) folded in
        c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * j / (a + j)
        c2 = 2.0 * (j + a - 1.0) * (j + b - 1.0) * s * j * (j - 1.0) / ((a + j) * (a + j - 1.0))
        den = 2.0 * j * (j + a + b) * (s - 2.0)
        prev, cur = cur, (c1 * cur - c2 * prev) / den
    return cur


def disc_polynomial(alpha, m, n, z):
    """Disc polynomial ``R^alpha_{m,n}(z)``.

    ``R^alpha_{m,n}(r e^{it}) = r^|m-n| e^{i(m-n)t} R^(alpha,|m-n|)_{min(m,n)}(2r^2 - 1)``.
    The angular factor is formed as a power of ``z`` or ``conj(z)`` so no
    polar decomposition is needed.
    """
    if alpha <= -1:
        raise DomainError("alpha must exceed -1")
    if m < 0 or n < 0:
        raise DomainError("m and n must be nonnegative")
    scalar = np.ndim(z) == 0
    z = _as_disc_array(z)
    r2 = np.minimum(np.abs(z) ** 2, 1.0)
    radial = _jacobi_normalized(float(alpha), float(abs(m - n)), min(m, n), 2.0 * r2 - 1.0)
    if m >= n:
        ang = z ** (m - n)
    else:
        ang = np.conj(z) ** (n - m)
    return _unwrap(ang * radial, scalar)


# --------------------------------------------------------------------------
# exact monomial expansions
# --------------------------------------------------------------------------


def _poly_add(p, q):
    out = list(p) + [0] * max(0, len(q) - len(p))
    for i, c in enumerate(q):
        out[i] += c
    return out


def _poly_scale(p, c):
    return [c * a for a in p]


def _poly_shift(p):
    return [0] + list(p)


def gegenbauer_monomial(d, n):
    """Monomial coefficients (lowest degree first) of ``c_n(d, x)``.

    Exact: the result is a list of Fractions for every integer ``d >= 1``.
    """
    if d < 1 or n < 0:
        raise DomainError("need d >= 1 and n >= 0")
    lam = Fraction(d - 1, 2)
    polys = [[Fraction(1)], [Fraction(0), Fraction(1)]]
    for k in range(2, n + 1):
        a = _poly_scale(_poly_shift(polys[-1]), 2 * (k + lam - 1))
        b = _poly_scale(polys[-2], -(k - 1))
        polys.append(_poly_scale(_poly_add(a, b), 1 / (k + 2 * lam - 1)))
    return polys[n]


def jacobi_monomial(alpha, beta, k):
    """Monomial coefficients of ``R_k^(alpha, beta)``; exact for rational parameters."""
    if alpha <= -1 or beta <= -1:
        raise DomainError("alpha and beta must exceed -1")
    a, b = _exact(alpha), _exact(beta)
    one = Fraction(1) if isinstance(a, Fraction) and isinstance(b, Fraction) else 1.0
    prev = [one]
    if k == 0:
        return prev
    slope = (a + b + 2) / (2 * (a + 1)) * one
    cur = [one - slope, slope]
    for j in range(2, k + 1):
        s = 2 * j + a + b
        c1 = (s - 1) * one * j / (a + j)
        lin = _poly_add(_poly_scale(_poly_shift(cur), s * (s - 2)), _poly_scale(cur, a * a - b * b))
        c2 = 2 * (j + a - 1) * (j + b - 1) * s * j * (j - 1) * one / ((a + j) * (a + j - 1))
        den = 2 * j * (j + a + b) * (s - 2)
        prev, cur = cur, _poly_scale(_poly_add(_poly_scale(lin, c1), _poly_scale(prev, -c2)), 1 / (den * one))
    return cur


def disc_monomial(alpha, m, n):
    """Expansion of ``R^alpha_{m,n}`` as ``{(i, j): c}`` meaning ``sum c z^i conj(z)^j``."""
    if m < 0 or n < 0:
        raise DomainError("m and n must be nonnegative")
    shift = abs(m - n)
    radial = jacobi_monomial(alpha, shift, min(m, n))
    out = {}
    # (2 z zbar - 1)^p = sum_i binom(p, i) 2^i (-1)^(p-i) (z zbar)^i
    for p, a in enumerate(radial):
        if a == 0:
            continue
        for i in range(p + 1):
            c = a * math.comb(p, i) * 2**i * (-1) ** (p - i)
            key = (i + shift, i) if m >= n else (i, i + shift)
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v != 0}


def polyval_exact(coeffs, x):
    """Horner evaluation of a low-to-high coefficient list."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc
