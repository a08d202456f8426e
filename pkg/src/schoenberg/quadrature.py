"""Gauss-Jacobi quadrature and integration against the probability measures
``tau_lam`` on ``[-1, 1]`` and ``nu_alpha`` on the closed unit disc.

``tau_lam`` has density proportional to ``(1 - x^2)^lam`` and ``nu_alpha``
density proportional to ``(1 - |z|^2)^alpha``; both are normalized to total
mass one.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, eigvalsh_tridiagonal

from .exceptions import DomainError, QuadratureError
from .specfun import log_beta

OPAQUE_NODES = 128
MAX_NODES = 8192
EIGENVECTOR_LIMIT = 512
CONVERGENCE_RTOL = 1e-12


@dataclass(frozen=True)
class GaussJacobiRule:
    """Nodes and weights for the weight ``(1 - x)^alpha (1 + x)^beta`` on ``[-1, 1]``.

    ``weights`` integrate against the raw weight function and sum to
    ``2^(alpha+beta+1) B(alpha+1, beta+1)``; ``probability_weights`` sum to one.
    """

    nodes: np.ndarray
    weights: np.ndarray
    probability_weights: np.ndarray
    alpha: float
    beta: float

    @property
    def node_count(self):
        return len(self.nodes)

    def integrate(self, values):
        """Integral of sampled ``values`` against the normalized weight."""
        return np.tensordot(self.probability_weights, values, axes=(0, 0))


@dataclass(frozen=True)
class DiscRule:
    """Product rule for ``nu_alpha``: Gauss-Jacobi in ``t = 2 r^2 - 1`` times
    ``angular_count`` equispaced angles."""

    radial: GaussJacobiRule
    angular_count: int
    points: np.ndarray
    weights: np.ndarray

    def integrate(self, values):
        return np.tensordot(self.weights, values, axes=(0, 0))


def _jacobi_matrix(a, b, n):
    k = np.arange(n, dtype=float)
    s = 2.0 * k + a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (a + b + 2.0)
    if n > 1:
        diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2.0))
    off2 = np.empty(max(n - 1, 0))
    if n > 1:
        # k = 1 written without the removable factor (a + b + 1)
        off2[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
        k = np.arange(2, n, dtype=float)
        s = 2.0 * k + a + b
        off2[1:] = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))
    return diag, np.sqrt(off2)


def _christoffel_weights(diag, off, nodes):
    """``1 / sum_k p_k(x)^2`` with ``p_k`` orthonormal for the probability measure."""
    p_prev = np.zeros_like(nodes)
    p = np.ones_like(nodes)
    total = np.ones_like(nodes)
    for k in range(len(diag) - 1):
        p_next = ((nodes - diag[k]) * p - (off[k - 1] * p_prev if k else 0.0)) / off[k]
        p_prev, p = p, p_next
        total += p * p
    return 1.0 / total


@lru_cache(maxsize=512)
def _rule(a, b, n):
    diag, off = _jacobi_matrix(a, b, n)
    try:
        if n <= EIGENVECTOR_LIMIT:
            nodes, vecs = eigh_tridiagonal(diag, off)
            prob = vecs[0, :] ** 2
        else:
            # eigenvectors cost O(n^2) memory; the Christoffel function gives the same weights
            nodes = eigvalsh_tridiagonal(diag, off)
            with np.errstate(over="ignore", invalid="ignore"):
                prob = _christoffel_weights(diag, off, nodes)
    except (LinAlgError, ValueError) as exc:
        raise QuadratureError(f"Gauss-Jacobi eigen-solve failed for ({a}, {b}, {n})") from exc
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(prob))):
        raise QuadratureError(f"non-finite Gauss-Jacobi rule for ({a}, {b}, {n})")
    prob = prob / prob.sum()
    mass = math.exp((a + b + 1.0) * math.log(2.0) + log_beta(a + 1.0, b + 1.0))
    for arr in (nodes, prob):
        arr.setflags(write=False)
    weights = prob * mass
    weights.setflags(write=False)
    return GaussJacobiRule(nodes, weights, prob, a, b)


def gauss_jacobi_rule(alpha, beta, n):
    """Golub-Welsch rule with ``n`` nodes; exact for polynomials of degree ``<= 2n - 1``.

    Rules are cached and immutable.
    """
    if alpha <= -1 or beta <= -1:
        raise DomainError("alpha and beta must exceed -1")
    if n < 1:
        raise DomainError("need at least one node")
    return _rule(float(alpha), float(beta), int(n))


def evaluate_on(g, pts):
    """Evaluate ``g`` on an array of points, vectorized when ``g`` allows it."""
    try:
        vals = np.asarray(g(pts))
    except Exception:
        vals = None
    if vals is None or vals.shape != pts.shape:
        if vals is not None and vals.ndim == 0:
            return np.broadcast_to(vals, pts.shape)
        vals = np.array([g(p) for p in pts.ravel()]).reshape(pts.shape)
    return vals


def _scalar(v):
    v = complex(v)
    return v.real if v.imag == 0 else v


def _converged(a, b, scale):
    return abs(a - b) <= CONVERGENCE_RTOL * max(abs(a), abs(b)) + 1e-15 * scale


def integrate_tau(g, lam, n=None):
    """Integral of ``g`` against ``tau_lam``.

    With ``n`` given a single ``n``-node rule is used.  Otherwise the node count
    starts at 128 and doubles until successive values agree to 1e-12 relative.
    """
    if lam <= -1:
        raise DomainError("lam must exceed -1")
    if n is not None:
        rule = gauss_jacobi_rule(lam, lam, n)
        return _scalar(rule.integrate(evaluate_on(g, rule.nodes)))
    return _adaptive(lambda k: integrate_tau(g, lam, k), OPAQUE_NODES)


def disc_rule(alpha, radial_nodes, angular_count):
    if alpha <= -1:
        raise DomainError("alpha must exceed -1")
    if angular_count < 1:
        raise DomainError("angular_count must be positive")
    return _disc_rule(float(alpha), int(radial_nodes), int(angular_count))


@lru_cache(maxsize=256)
def _disc_rule(alpha, radial_nodes, angular_count):
    radial = gauss_jacobi_rule(alpha, 0.0, radial_nodes)
    r = np.sqrt(np.clip((1.0 + radial.nodes) / 2.0, 0.0, 1.0))
    theta = 2.0 * np.pi * np.arange(angular_count) / angular_count
    pts = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    w = (radial.probability_weights[:, None] * np.full(angular_count, 1.0 / angular_count)[None, :]).ravel()
    pts.setflags(write=False)
    w.setflags(write=False)
    return DiscRule(radial, angular_count, pts, w)


def integrate_nu(g, alpha, radial_nodes=None, angular_count=None):
    """Integral of ``g`` against ``nu_alpha`` on the closed disc.

    The radial part uses the substitution ``t = 2 r^2 - 1`` which turns the
    density ``(1 - r^2)^alpha r dr`` into a multiple of ``(1 - t)^alpha dt``.
    Without explicit node counts, 128 radial and 256 angular nodes are doubled
    until the value settles.
    """
    if radial_nodes is not None and angular_count is not None:
        rule = disc_rule(alpha, radial_nodes, angular_count)
        return _scalar(rule.integrate(evaluate_on(g, np.array(rule.points))))
    n0 = radial_nodes or OPAQUE_NODES
    m0 = angular_count or 2 * OPAQUE_NODES
    return _adaptive(lambda k: integrate_nu(g, alpha, k, k * m0 // n0), n0)


def _adaptive(fn, n0):
    prev = fn(n0)
    n = 2 * n0
    while n <= MAX_NODES:
        cur = fn(n)
        if _converged(cur, prev, abs(prev)):
            return cur
        prev, n = cur, 2 * n
    raise QuadratureError(f"integral did not converge with {MAX_NODES} nodes")


def tau_moment(lam, k):
    """Exact ``int x^k dtau_lam``: zero for odd ``k``, else ``(k-1)!! / prod_j (2 lam + 2j + 1)``."""
    if k % 2:
        return 0.0
    out = 1.0
    for j in range(1, k // 2 + 1):
        out *= (2 * j - 1) / (2.0 * lam + 2 * j + 1)
    return out


def nu_moment(alpha, k):
    """Exact ``int |z|^(2k) dnu_alpha = k! / ((alpha+2) ... (alpha+k+1))``."""
    out = 1.0
    for j in range(1, k + 1):
        out *= j / (alpha + j + 1.0)
    return out


def delta_convergence_probe(family, g, params, nodes=None, angular_count=None):
    """Tabulate ``(parameter, int g, |int g - g(0)|)`` along ``params``.

    ``family`` is ``"tau"`` (parameter ``lam``) or ``"nu"`` (parameter
    ``alpha``).  Both families tend weakly to the point mass at 0, so the last
    column decays for ``g`` continuous at the origin.
    """
    if family == "tau":
        g0 = complex(evaluate_on(g, np.zeros(1))[0])
        vals = [integrate_tau(g, p, nodes) for p in params]
    elif family == "nu":
        g0 = complex(evaluate_on(g, np.zeros(1, dtype=complex))[0])
        vals = [integrate_nu(g, p, nodes, angular_count) for p in params]
    else:
        raise DomainError(f"unknown family {family!r}; expected 'tau' or 'nu'")
    return [(p, v, abs(v - g0)) for p, v in zip(params, vals)]
