"""Exact differentiation of polynomials times a power of ``1 - x^2`` or ``1 - |z|^2``.

Both families are closed under differentiation: the derivative of
``q(x) (1 - x^2)^s`` is ``(q'(x)(1 - x^2) - 2 s x q(x)) (1 - x^2)^(s-1)``, and
likewise for the Wirtinger derivatives of ``p(z, zbar) (1 - z zbar)^s``.
Coefficients stay :class:`~fractions.Fraction` whenever the inputs are
rational, which makes the Rodrigues checks below exact up to the final
evaluation.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import CapExceededError, DomainError
from .specfun import _exact, disc_polynomial, gegenbauer_normalized, pochhammer, polyval_exact

DEFAULT_CAP = 10


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs or [0]


@dataclass(frozen=True)
class WeightedPolynomial:
    """The function ``q(x) (1 - x^2)^s`` with ``q`` given low-to-high."""

    poly: tuple
    exponent: object

    def __init__(self, poly, exponent):
        object.__setattr__(self, "poly", tuple(_trim(_exact(c) for c in poly)))
        object.__setattr__(self, "exponent", _exact(exponent))

    @property
    def degree(self):
        return len(self.poly) - 1

    def derivative(self, k=1):
        w = self
        for _ in range(k):
            w = derivative(w)
        return w

    def poly_value(self, x):
        """``q(x)``, evaluated exactly for Fraction/int input."""
        return polyval_exact(self.poly, x)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        q = np.polynomial.polynomial.polyval(x, [float(c) for c in self.poly])
        return q * (1.0 - x * x) ** float(self.exponent)

    def vanishes_on_boundary(self):
        return self.exponent > 0


def derivative(w):
    """Exact ``d/dx`` of a :class:`WeightedPolynomial`; the exponent drops by one."""
    q, s = list(w.poly), w.exponent
    dq = [i * q[i] for i in range(1, len(q))] or [0]
    out = [0] * (len(q) + 2)
    # q'(x) (1 - x^2)
    for i, c in enumerate(dq):
        out[i] += c
        out[i + 2] -= c
    # -2 s x q(x)
    for i, c in enumerate(q):
        out[i + 1] -= 2 * s * c
    return WeightedPolynomial(out, s - 1)


@dataclass(frozen=True)
class WeightedBiPolynomial:
    """The function ``p(z, zbar) (1 - z zbar)^s``.

    ``poly`` maps ``(i, j)`` to the coefficient of ``z^i zbar^j``.
    """

    poly: dict
    exponent: object

    def __init__(self, poly, exponent):
        clean = {tuple(k): _exact(v) for k, v in dict(poly).items() if v != 0}
        object.__setattr__(self, "poly", clean)
        object.__setattr__(self, "exponent", _exact(exponent))

    def __eq__(self, other):
        if not isinstance(other, WeightedBiPolynomial):
            return NotImplemented
        return self.poly == other.poly and self.exponent == other.exponent

    def __hash__(self):
        return hash((frozenset(self.poly.items()), self.exponent))

    def poly_value(self, z):
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        acc = np.zeros_like(z)
        for (i, j), c in self.poly.items():
            acc = acc + float(c) * z**i * zc**j
        return acc

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.poly_value(z) * (1.0 - np.abs(z) ** 2) ** float(self.exponent)


def _wirtinger(w, holomorphic):
    s = w.exponent
    out = {}

    def add(key, val):
        out[key] = out.get(key, 0) + val

    for (i, j), c in w.poly.items():
        own = i if holomorphic else j
        if own:
            # d p / dz times (1 - z zbar)
            key = (i - 1, j) if holomorphic else (i, j - 1)
            add(key, own * c)
            add((key[0] + 1, key[1] + 1), -own * c)
        # -s zbar p   (or -s z p for the zbar derivative)
        add((i, j + 1) if holomorphic else (i + 1, j), -s * c)
    return WeightedBiPolynomial(out, s - 1)


def wirtinger_z(w):
    """Exact ``d/dz`` of a :class:`WeightedBiPolynomial`."""
    return _wirtinger(w, True)


def wirtinger_zbar(w):
    """Exact ``d/dzbar`` of a :class:`WeightedBiPolynomial`."""
    return _wirtinger(w, False)


def rodrigues_polynomial_real(d, n, cap=DEFAULT_CAP):
    """Exact coefficients of the right side of the Gegenbauer Rodrigues formula.

    Differentiates ``(1 - x^2)^(n + d/2 - 1)`` ``n`` times, checks that the
    weight left over is exactly ``(1 - x^2)^(d/2 - 1)``, and scales by
    ``(-1)^n / (2^n (d/2)_n)``.  The result should equal ``c_n(d, x)``.
    """
    if n > cap:
        raise CapExceededError(f"degree {n} exceeds cap {cap}")
    if d < 1 or n < 0:
        raise DomainError("need d >= 1 and n >= 0")
    half = Fraction(d, 2)
    w = WeightedPolynomial([1], n + half - 1).derivative(n)
    assert w.exponent == half - 1
    pref = Fraction((-1) ** n) / (2**n * pochhammer(half, n))
    return [pref * c for c in w.poly]


def rodrigues_check_real(d, n, sample_xs, cap=DEFAULT_CAP):
    """Max deviation between the Rodrigues formula and :func:`gegenbauer_normalized`."""
    coeffs = rodrigues_polynomial_real(d, n, cap)
    xs = [float(x) for x in sample_xs]
    if any(abs(x) >= 1 for x in xs):
        raise DomainError("sample points must lie in (-1, 1)")
    if not xs:
        return 0.0
    exact = np.array([float(polyval_exact(coeffs, Fraction(x))) for x in xs])
    return float(np.max(np.abs(exact - gegenbauer_normalized(d, n, np.array(xs)))))


def rodrigues_polynomial_complex(q, m, n, cap=DEFAULT_CAP):
    """Exact ``p(z, zbar)`` from the disc-polynomial Rodrigues formula.

    Applies ``d^m/dzbar^m d^n/dz^n`` to ``(1 - |z|^2)^(m+n+q-2)``, checks the
    remaining weight is ``(1 - |z|^2)^(q-2)`` and scales by
    ``(-1)^(m+n) (q-2)! / (m+n+q-2)!``.  The result should equal
    ``R^{q-2}_{m,n}``.
    """
    if m + n > cap:
        raise CapExceededError(f"degree {m + n} exceeds cap {cap}")
    if q < 2 or m < 0 or n < 0:
        raise DomainError("need q >= 2 and m, n >= 0")
    w = WeightedBiPolynomial({(0, 0): 1}, m + n + q - 2)
    for _ in range(n):
        w = wirtinger_z(w)
    for _ in range(m):
        w = wirtinger_zbar(w)
    assert w.exponent == q - 2
    pref = Fraction((-1) ** (m + n) * math.factorial(q - 2), math.factorial(m + n + q - 2))
    return {k: pref * c for k, c in w.poly.items() if c != 0}


def rodrigues_check_complex(q, m, n, sample_zs, cap=DEFAULT_CAP):
    """Max deviation between the disc Rodrigues formula and :func:`disc_polynomial`."""
    poly = WeightedBiPolynomial(rodrigues_polynomial_complex(q, m, n, cap), 0)
    zs = np.asarray(list(sample_zs), dtype=complex)
    if zs.size == 0:
        return 0.0
    if np.any(np.abs(zs) >= 1):
        raise DomainError("sample points must lie in the open disc")
    return float(np.max(np.abs(poly.poly_value(zs) - disc_polynomial(q - 2, m, n, zs))))
