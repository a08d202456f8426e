"""Monte-Carlo positivity checks for kernels on ``S^d x L`` and ``Omega_{2q} x L``.

Sampling can refute positive definiteness (with a witness that is checked by
direct evaluation of the quadratic form) or accumulate evidence for it; it
never certifies membership.
"""

from dataclasses import dataclass

import numpy as np

from ._linalg import GramReport, hermitian_psd_test
from .exceptions import DomainError
from .groups import make_trivial

MAX_GRAM_SIZE = 400


@dataclass(frozen=True, eq=False)
class SpherePointSet:
    """Unit vectors on ``S^d`` (``kind='real'``, ``dim=d``) or ``Omega_{2q}`` (``kind='complex'``, ``dim=q``)."""

    kind: str
    dim: int
    points: np.ndarray
    seed: object = None

    def __len__(self):
        return len(self.points)

    def scalar_products(self):
        """``S[i, j] = xi_i . xi_j`` (hermitian product ``sum xi_k conj(eta_k)`` in the complex case)."""
        P = self.points
        if self.kind == "real":
            return np.clip(P @ P.T, -1.0, 1.0)
        S = P @ P.conj().T
        big = np.abs(S) > 1.0
        S[big] /= np.abs(S[big])
        return S

    def equator_embedding(self):
        """The same points on the equator of the next sphere up."""
        pad = np.zeros((len(self.points), 1), dtype=self.points.dtype)
        return SpherePointSet(self.kind, self.dim + 1, np.hstack([self.points, pad]), self.seed)


def sample_sphere(kind, dim, count, seed=None):
    """I.i.d. uniform points: normalized standard Gaussian vectors.

    ``kind='real'`` samples ``S^dim`` in ``R^{dim+1}``; ``kind='complex'``
    samples ``Omega_{2 dim}`` in ``C^dim`` with independent real and imaginary
    Gaussian parts.  Deterministic for a given ``seed``.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    rng = np.random.default_rng(seed)
    if kind == "real":
        if dim < 1:
            raise DomainError("d must be >= 1")
        X = rng.standard_normal((count, dim + 1))
    elif kind == "complex":
        if dim < 2:
            raise DomainError("q must be >= 2")
        X = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    else:
        raise DomainError(f"kind must be 'real' or 'complex', not {kind!r}")
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return SpherePointSet(kind, dim, X, seed)


def gram_matrix(kernel, pts, elements=None):
    """``M[(i, a), (j, b)] = f(xi_i . xi_j, u_a^{-1} u_b)`` with row index ``i * len(elements) + a``.

    Returns the matrix and the ``(point, element)`` label of each row.
    """
    group = getattr(kernel, "group", None) or make_trivial()
    elements = list(group.elements) if elements is None else [int(u) for u in elements]
    S = pts.scalar_products()
    n, k = len(pts), len(elements)
    diff = group.quotient(np.array(elements)[:, None], np.array(elements)[None, :])
    blocks = {int(w): np.asarray(kernel(S, int(w)), dtype=complex) for w in np.unique(diff)}
    M = np.empty((n, k, n, k), dtype=complex)
    for a in range(k):
        for b in range(k):
            M[:, a, :, b] = blocks[int(diff[a, b])]
    labels = [(i, elements[a]) for i in range(n) for a in range(k)]
    return M.reshape(n * k, n * k), labels


def gram_check(kernel, pts, elements=None, tol=1e-10, max_size=MAX_GRAM_SIZE):
    """Hermitian positive semidefiniteness of the sampled Gram matrix.

    ``tol`` is relative to the trace.  Witness labels are ``(point index,
    group element)`` pairs.  Raises :class:`NotHermitianError` if the kernel
    violates ``conj f(x, u) = f(conj x, u^{-1})`` on the sample.
    """
    group = getattr(kernel, "group", None) or make_trivial()
    k = group.order if elements is None else len(elements)
    if len(pts) * k > max_size:
        raise DomainError(f"Gram matrix of size {len(pts) * k} exceeds the cap {max_size}")
    M, labels = gram_matrix(kernel, pts, elements)
    return hermitian_psd_test(M, tol, labels)


def revalidate(report, kernel, pts, elements=None):
    """Recompute the witness quadratic form from scratch; returns ``c^H M c``."""
    M, _ = gram_matrix(kernel, pts, elements)
    c = report.witness
    return float(np.real(np.vdot(c, M @ c)))


__all__ = ["GramReport", "SpherePointSet", "gram_check", "gram_matrix", "revalidate", "sample_sphere"]
