"""Coefficient tables and the opaque kernel wrapper shared by the real and
complex sphere modules."""

import numpy as np

from .exceptions import DomainError
from .groups import GroupFunction, make_trivial


def _as_group_function(group, value):
    if isinstance(value, GroupFunction):
        if value.group != group:
            raise DomainError("coefficient lives on a different group than the table")
        return value
    return GroupFunction(group, value)


class CoefficientTable:
    """Sparse map from an index to a :class:`GroupFunction`.

    Indices are nonnegative ints for real-sphere expansions and ``(m, n)``
    pairs for complex-sphere expansions.  Scalars and arrays are accepted as
    values and promoted to group functions (a scalar becomes a constant).

    Examples
    --------
    >>> t = CoefficientTable({0: 0.5, 2: 0.5})
    >>> t.mass_at_identity
    1.0
    """

    def __init__(self, entries=None, group=None):
        self.group = group if group is not None else make_trivial()
        self._entries = {}
        for idx, val in dict(entries or {}).items():
            self._entries[self._key(idx)] = _as_group_function(self.group, val)

    @staticmethod
    def _key(idx):
        if isinstance(idx, (tuple, list)):
            m, n = (int(v) for v in idx)
            if m < 0 or n < 0:
                raise DomainError(f"negative index {idx}")
            return (m, n)
        idx = int(idx)
        if idx < 0:
            raise DomainError(f"negative index {idx}")
        return idx

    def __getitem__(self, idx):
        key = self._key(idx)
        if key in self._entries:
            return self._entries[key]
        return GroupFunction.zeros(self.group)

    def __contains__(self, idx):
        return self._key(idx) in self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self.indices)

    @property
    def indices(self):
        return sorted(self._entries)

    def items(self):
        return [(k, self._entries[k]) for k in self.indices]

    @property
    def is_complex_indexed(self):
        return any(isinstance(k, tuple) for k in self._entries)

    @property
    def degree(self):
        """Largest total degree present (``m + n`` for pair indices)."""
        if not self._entries:
            return 0
        return max(sum(k) if isinstance(k, tuple) else k for k in self._entries)

    @property
    def mass_at_identity(self):
        return float(sum(phi.at_identity().real for phi in self._entries.values()))

    def tail_bound(self, truncate):
        """Sum of ``phi(e)`` over indices of total degree above ``truncate``.

        Bounds the sup-norm of the discarded part of the series for positive
        definite coefficients.
        """
        return float(
            sum(
                phi.at_identity().real
                for k, phi in self._entries.items()
                if (sum(k) if isinstance(k, tuple) else k) > truncate
            )
        )

    def truncated(self, truncate):
        return CoefficientTable(
            {k: v for k, v in self._entries.items() if (sum(k) if isinstance(k, tuple) else k) <= truncate},
            self.group,
        )

    def matrix(self, indices=None):
        """Values as an array of shape ``(len(indices), group.order)``."""
        indices = self.indices if indices is None else indices
        if not indices:
            return np.zeros((0, self.group.order), dtype=complex)
        return np.stack([self[i].values for i in indices])

    def is_hermitian(self, tol=1e-12):
        return all(phi.is_hermitian(tol) for phi in self._entries.values())

    def allclose(self, other, atol=1e-12):
        keys = set(self._entries) | set(other._entries)
        return all(self[k].allclose(other[k], atol=atol) for k in keys)

    def scaled(self, c):
        return CoefficientTable({k: v * c for k, v in self._entries.items()}, self.group)

    def __add__(self, other):
        keys = set(self._entries) | set(other._entries)
        return CoefficientTable({k: self[k] + other[k] for k in keys}, self.group)

    def __repr__(self):
        body = ", ".join(f"{k}: {np.round(v.values, 12).tolist()}" for k, v in self.items())
        return f"CoefficientTable({{{body}}}, group={self.group!r})"


class OpaqueKernel:
    """A kernel known only through an evaluator ``(x, u) -> complex``.

    ``smoothness`` caps the derivative order that finite-difference paths may
    request; ``None`` leaves it unrestricted.  The evaluator is called with a
    numpy array of points and a single group element and should return an
    array of the same shape; scalar-only evaluators are vectorized on the fly.
    """

    degree = None

    def __init__(self, evaluator, group=None, smoothness=None):
        self.evaluator = evaluator
        self.group = group if group is not None else make_trivial()
        self.smoothness = smoothness

    def __call__(self, x, u=0):
        x_arr = np.asarray(x)
        try:
            out = np.asarray(self.evaluator(x_arr, u), dtype=complex)
        except Exception:
            out = None
        if out is None or out.shape != x_arr.shape:
            if out is not None and out.ndim == 0:
                return np.broadcast_to(out, x_arr.shape).copy()
            out = np.array([self.evaluator(v, u) for v in x_arr.ravel()], dtype=complex).reshape(x_arr.shape)
        return out
