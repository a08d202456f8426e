"""Hermitian positive semidefiniteness test with a verifiable witness."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NotHermitianError


@dataclass
class GramReport:
    """Outcome of a positive semidefiniteness test.

    When ``is_pd`` is false, ``witness`` is a coefficient vector ``c`` with
    ``c^H M c = witness_value < -tol * |trace|``; ``witness_value`` is computed
    by a direct matrix-vector product, not taken from the eigen-solver.
    """

    size: int
    min_eigenvalue: float
    trace: float
    tol: float
    is_pd: bool
    witness: np.ndarray = None
    witness_value: float = None
    labels: list = field(default_factory=list)

    @property
    def verdict(self):
        return "pd" if self.is_pd else "not_pd"

    @property
    def threshold(self):
        return -self.tol * abs(self.trace)

    def witness_support(self, atol=1e-12):
        """Labels of the witness entries that are not negligible."""
        if self.witness is None:
            return []
        big = np.abs(self.witness) > atol * np.max(np.abs(self.witness))
        return [lab for lab, keep in zip(self.labels, big) if keep]


def quadratic_form(M, c):
    return float(np.real(np.vdot(c, M @ c)))


def hermitian_psd_test(M, tol=1e-10, labels=None):
    """Test ``M`` for hermitian positive semidefiniteness relative to its trace.

    Raises :class:`NotHermitianError` when ``M`` is not hermitian within
    ``tol * max(|trace|, max|M|)``; this is kept apart from indefiniteness.
    A negative diagonal entry is reported with a one-point witness; otherwise
    the eigenvector of the smallest eigenvalue is the witness.
    """
    M = np.asarray(M)
    n = M.shape[0]
    labels = list(labels) if labels is not None else list(range(n))
    trace = float(np.real(np.trace(M)))
    scale = max(abs(trace), float(np.max(np.abs(M))) if M.size else 0.0)
    asym = np.abs(M - M.conj().T)
    if asym.size and asym.max() > tol * scale:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise NotHermitianError(
            f"matrix is not hermitian: entries {labels[i]} and {labels[j]} differ by {asym[i, j]:.3e}",
            witness=(labels[i], labels[j]),
            violation=float(asym[i, j]),
        )
    H = 0.5 * (M + M.conj().T)
    threshold = -tol * abs(trace)
    diag = np.real(np.diag(H))
    k = int(np.argmin(diag)) if n else 0
    if n and diag[k] < threshold:
        c = np.zeros(n, dtype=H.dtype)
        c[k] = 1.0
        val = quadratic_form(H, c)
        return GramReport(n, float(np.linalg.eigvalsh(H)[0]), trace, tol, False, c, val, labels)
    evals, evecs = np.linalg.eigh(H)
    lo = float(evals[0]) if n else 0.0
    if lo >= threshold:
        return GramReport(n, lo, trace, tol, True, labels=labels)
    c = evecs[:, 0]
    val = quadratic_form(H, c)
    # a witness the direct evaluation does not confirm is rounding noise
    return GramReport(n, lo, trace, tol, not val < threshold, c, val, labels)
