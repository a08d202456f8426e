"""Finite groups standing in for the group factor, and functions on them.

Elements are the integers ``0 .. order-1`` and ``0`` is always the neutral
element.  The circle group is approximated by a large cyclic group.
"""

from dataclasses import dataclass

import numpy as np

from ._linalg import hermitian_psd_test
from .exceptions import DomainError, GroupAxiomError, NotHermitianError


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Validated multiplication table ``mul[a, b] = a * b`` with inverse table ``inv``."""

    mul: np.ndarray
    inv: np.ndarray
    name: str = ""

    @property
    def order(self):
        return self.mul.shape[0]

    @property
    def identity(self):
        return 0

    @property
    def elements(self):
        return range(self.order)

    def quotient(self, a, b):
        """``a^{-1} b``, vectorized over arrays of elements."""
        return self.mul[self.inv[a], b]

    def difference_table(self):
        """Matrix ``D[a, b] = a^{-1} b``."""
        return self.mul[self.inv[:, None], np.arange(self.order)[None, :]]

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and np.array_equal(self.mul, other.mul)

    def __hash__(self):
        return hash(self.mul.tobytes())

    def __repr__(self):
        return f"GroupSpec({self.name or 'order ' + str(self.order)})"


def make_from_table(table, name=""):
    """Validate a multiplication table and build a :class:`GroupSpec`.

    Raises :class:`GroupAxiomError` carrying a witness for the first violated
    axiom: closure, identity ``0``, inverses, associativity.
    """
    mul = np.array(table, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] < 1:
        raise GroupAxiomError("multiplication table must be a non-empty square array")
    k = mul.shape[0]
    bad = np.argwhere((mul < 0) | (mul >= k))
    if len(bad):
        a, b = bad[0]
        raise GroupAxiomError(f"closure fails: {a}*{b} = {mul[a, b]} is not an element", (int(a), int(b)))
    ar = np.arange(k)
    for a in range(k):
        if mul[0, a] != a or mul[a, 0] != a:
            raise GroupAxiomError(f"0 is not a two-sided identity at element {a}", (0, a))
    lhs = mul[mul[:, :, None], ar[None, None, :]]  # (a b) c
    rhs = mul[ar[:, None, None], mul[None, :, :]]  # a (b c)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        raise GroupAxiomError(f"associativity fails for ({a}, {b}, {c})", (a, b, c))
    inv = np.full(k, -1, dtype=np.int64)
    for a in range(k):
        hits = np.flatnonzero(mul[a] == 0)
        if len(hits) != 1 or mul[hits[0], a] != 0:
            raise GroupAxiomError(f"element {a} has no two-sided inverse", (a,))
        inv[a] = hits[0]
    mul.setflags(write=False)
    inv.setflags(write=False)
    return GroupSpec(mul, inv, name)


def make_cyclic(k):
    """Cyclic group ``Z_k`` with ``a * b = (a + b) mod k``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    ar = np.arange(k)
    return make_from_table((ar[:, None] + ar[None, :]) % k, name=f"Z{k}")


def make_trivial():
    return make_cyclic(1)


def make_product(a, b):
    """Direct product; the pair ``(i, j)`` is element ``i * b.order + j``."""
    na, nb = a.order, b.order
    i = np.arange(na * nb) // nb
    j = np.arange(na * nb) % nb
    table = a.mul[i[:, None], i[None, :]] * nb + b.mul[j[:, None], j[None, :]]
    return make_from_table(table, name=f"{a.name or na}x{b.name or nb}")


def make_dihedral(n):
    """Dihedral group of order ``2n``: element ``s * n + r`` is ``x^s y^r`` with
    ``x`` a reflection and ``y`` a rotation."""
    if n < 1:
        raise DomainError("n must be >= 1")
    els = [(s, r) for s in range(2) for r in range(n)]

    def mult(g, h):
        (s1, r1), (s2, r2) = g, h
        # y^r1 x^s2 = x^s2 y^(+-r1)
        r = (r1 * (-1 if s2 else 1) + r2) % n
        return ((s1 + s2) % 2) * n + r

    return make_from_table([[mult(g, h) for h in els] for g in els], name=f"D{n}")


def read_group_table(path):
    """Read a group file: first line the order ``k``, then ``k`` rows of ``k`` integers."""
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip()]
    if not rows:
        raise GroupAxiomError("empty group file")
    try:
        k = int(rows[0][0])
        table = [[int(v) for v in row] for row in rows[1:]]
    except ValueError as exc:
        raise GroupAxiomError(f"group file {path} holds non-integer entries") from exc
    if len(rows[0]) != 1 or len(table) != k or any(len(row) != k for row in table):
        raise GroupAxiomError(f"group file {path} must hold a {k}x{k} table after the order line")
    return make_from_table(table, name=str(path))


class GroupFunction:
    """A complex-valued function on the elements of a finite group."""

    __array_priority__ = 100

    def __init__(self, group, values):
        vals = np.asarray(values, dtype=complex)
        if vals.ndim == 0:
            vals = np.full(group.order, vals, dtype=complex)
        if vals.shape != (group.order,):
            raise DomainError(f"expected {group.order} values, got shape {vals.shape}")
        self.group = group
        self.values = vals

    @classmethod
    def constant(cls, group, value=1.0):
        return cls(group, np.full(group.order, value, dtype=complex))

    @classmethod
    def zeros(cls, group):
        return cls.constant(group, 0.0)

    @classmethod
    def character(cls, k, j):
        """The character ``u -> exp(2 pi i j u / k)`` of ``Z_k``."""
        return cls(make_cyclic(k), np.exp(2j * np.pi * j * np.arange(k) / k))

    def __call__(self, u):
        return self.values[u]

    def at_identity(self):
        return self.values[0]

    def conjugate_reflection(self):
        """``u -> conj(phi(u^{-1}))``; equals ``phi`` for hermitian functions."""
        return GroupFunction(self.group, np.conj(self.values[self.group.inv]))

    def is_hermitian(self, tol=1e-12):
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return bool(np.max(np.abs(self.values - self.conjugate_reflection().values)) <= tol * scale)

    def _check(self, other):
        if isinstance(other, GroupFunction):
            if other.group != self.group:
                raise DomainError("group functions live on different groups")
            return other.values
        return other

    def __add__(self, other):
        return GroupFunction(self.group, self.values + self._check(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GroupFunction(self.group, self.values - self._check(other))

    def __neg__(self):
        return GroupFunction(self.group, -self.values)

    def __mul__(self, other):
        return GroupFunction(self.group, self.values * self._check(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return GroupFunction(self.group, self.values / other)

    def allclose(self, other, atol=1e-12, rtol=0.0):
        return bool(np.allclose(self.values, self._check(other), atol=atol, rtol=rtol))

    def __repr__(self):
        return f"GroupFunction({self.group!r}, {np.round(self.values, 12).tolist()})"


def gram_matrix(phi):
    """``M[u, v] = phi(u^{-1} v)`` over all of the group."""
    return phi.values[phi.group.difference_table()]


def pd_check_group(phi, group=None, tol=1e-10):
    """Decide whether ``phi`` is positive definite on its finite group.

    For a finite group the full Gram matrix ``phi(u^{-1} v)`` covers every
    finite point set, so this is exact membership up to ``tol`` (relative to
    the trace).  Non-hermitian input raises :class:`NotHermitianError`.
    """
    if group is not None and group != phi.group:
        raise DomainError("phi is defined on a different group")
    return hermitian_psd_test(gram_matrix(phi), tol, labels=list(phi.group.elements))


def bochner_check_cyclic(phi, k=None, tol=1e-10):
    """Fourier-side positivity test on ``Z_k``.

    Returns ``(spectrum, is_pd)`` where ``spectrum[j] = sum_u phi(u) exp(-2 pi i j u / k)``.
    ``phi`` is positive definite iff the spectrum is real and nonnegative.
    """
    vals = phi.values if isinstance(phi, GroupFunction) else np.asarray(phi, dtype=complex)
    k = len(vals) if k is None else k
    if len(vals) != k:
        raise DomainError("phi must have k values")
    spec = np.fft.fft(vals)
    scale = float(np.max(np.abs(spec))) if k else 0.0
    # hermitian on Z_k <=> real spectrum
    j = int(np.argmax(np.abs(spec.imag)))
    if abs(spec.imag[j]) > tol * max(scale, 1e-300):
        raise NotHermitianError("phi(-u) != conj(phi(u)): spectrum is not real", witness=(j,), violation=float(abs(spec.imag[j])))
    spec = spec.real
    return spec, bool(np.min(spec) >= -tol * scale)


def random_pd_function(group, rng, scale=1.0):
    """Random positive definite function ``phi(u) = sum_w conj(g(w)) g(w u)``.

    The autocorrelation of any ``g`` is positive definite on any finite group.
    """
    g = rng.normal(size=group.order) + 1j * rng.normal(size=group.order)
    vals = np.array([np.sum(np.conj(g) * g[group.mul[:, u]]) for u in group.elements])
    vals *= scale / vals[0].real
    return GroupFunction(group, vals)
