"""Quivers, matrix representations and the operations on them.

Vertices are numbered ``1..t``.  An arrow ``alpha: p -> q`` carries an
``n_q x n_p`` matrix, so a representation acts on column vectors living at
the source vertex.  Entry indices exposed to callers are 1-based.

Coordinates on the space of all representations of a given dimension are
ordered lexicographically by (arrow position, row, column); this is the
order used by :func:`vectorize` and by every routine that enumerates
elementary representations.
"""
from dataclasses import dataclass
from typing import NamedTuple
import warnings

import numpy as np

from .exceptions import (DimensionMismatch, IndexOutOfRange, LengthMismatch,
                         QuiverMismatch, SingularTransform)
from .linalg import DEFAULT_TOL, as_matrix, entrywise_norm, field_of

__all__ = [
    "Arrow",
    "ConditionWarning",
    "ElementaryIndex",
    "Quiver",
    "Representation",
    "apply_isomorphism",
    "commutator",
    "coordinate",
    "devectorize",
    "direct_sum",
    "elementary",
    "elementary_indices",
    "gamma_seminorm",
    "identity_sequence",
    "invert_sequence",
    "remove_arrows",
    "remove_vertices",
    "sequence_norm",
    "validate_gamma",
    "vectorize",
    "zero_sequence",
]


class ConditionWarning(UserWarning):
    """A basis change is invertible but badly conditioned."""


class Arrow(NamedTuple):
    id: int
    source: int
    target: int


class ElementaryIndex(NamedTuple):
    """Position ``(i, j)`` (1-based) in the matrix of arrow ``arrow``."""
    arrow: int
    i: int
    j: int


@dataclass(frozen=True)
class Quiver:
    """Directed multigraph on vertices ``1..vertex_count``.

    Loops and parallel arrows are allowed.  The order of ``arrows`` is the
    canonical arrow order.
    """
    vertex_count: int
    arrows: tuple = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("a quiver needs at least one vertex")
        arrows = tuple(Arrow(*a) for a in self.arrows)
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids):
            raise ValueError(f"arrow ids must be unique, got {ids}")
        for a in arrows:
            for v in (a.source, a.target):
                if not 1 <= v <= self.vertex_count:
                    raise ValueError(f"arrow {a.id} has endpoint {v} outside "
                                     f"1..{self.vertex_count}")
        object.__setattr__(self, "arrows", arrows)

    @classmethod
    def from_edges(cls, vertex_count, edges):
        """Quiver whose arrows ``(source, target)`` get ids 1, 2, ..."""
        return cls(vertex_count, tuple(Arrow(k, p, q)
                                       for k, (p, q) in enumerate(edges, 1)))

    def arrow(self, arrow_id):
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(f"no arrow with id {arrow_id!r}")

    def position(self, arrow_id):
        for k, a in enumerate(self.arrows):
            if a.id == arrow_id:
                return k
        raise KeyError(f"no arrow with id {arrow_id!r}")


def _check_dims(quiver, dims):
    dims = tuple(int(n) for n in dims)
    if len(dims) != quiver.vertex_count:
        raise DimensionMismatch(f"dimension vector has {len(dims)} entries, "
                                f"quiver has {quiver.vertex_count} vertices")
    if any(n < 0 for n in dims):
        raise DimensionMismatch(f"negative dimension in {dims}")
    return dims


class Representation:
    """One matrix per arrow, sized by a dimension vector.

    Matrices are stored in canonical arrow order as read-only arrays that
    share one dtype (float64 or complex128).  Representations of the same
    quiver and dimension form a vector space, and support ``+``, ``-`` and
    scalar multiplication.
    """

    __slots__ = ("quiver", "dims", "matrices")

    def __init__(self, quiver, dims, matrices=None, dtype=None):
        dims = _check_dims(quiver, dims)
        if matrices is None:
            matrices = [None] * len(quiver.arrows)
        elif isinstance(matrices, dict):
            matrices = [matrices.get(a.id) for a in quiver.arrows]
        else:
            matrices = list(matrices)
        if len(matrices) != len(quiver.arrows):
            raise DimensionMismatch(f"{len(matrices)} matrices for "
                                    f"{len(quiver.arrows)} arrows")
        if dtype is None:
            complex_ = any(m is not None and np.iscomplexobj(m) for m in matrices)
            dtype = np.complex128 if complex_ else np.float64
        mats = []
        for a, m in zip(quiver.arrows, matrices):
            shape = (dims[a.target - 1], dims[a.source - 1])
            if m is None:
                m = np.zeros(shape, dtype=dtype)
            else:
                try:
                    m = as_matrix(m, *shape, dtype=dtype)
                except ValueError as exc:
                    raise DimensionMismatch(f"arrow {a.id}: {exc}") from None
            m.flags.writeable = False
            mats.append(m)
        self.quiver = quiver
        self.dims = dims
        self.matrices = tuple(mats)

    @classmethod
    def zero(cls, quiver, dims, dtype=np.float64):
        return cls(quiver, dims, None, dtype=dtype)

    @property
    def dtype(self):
        return np.dtype(np.complex128) if self.field == "complex" else np.dtype(np.float64)

    @property
    def field(self):
        return field_of(*self.matrices)

    @property
    def space_dim(self):
        """Dimension of the space of all representations of this size."""
        return sum(m.size for m in self.matrices)

    def __getitem__(self, arrow_id):
        return self.matrices[self.quiver.position(arrow_id)]

    def replace(self, arrow_id, matrix):
        mats = list(self.matrices)
        mats[self.quiver.position(arrow_id)] = matrix
        return Representation(self.quiver, self.dims, mats)

    def norm(self):
        """Sum of the entrywise norms of all matrices."""
        return sum(entrywise_norm(m) for m in self.matrices)

    def _like(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        if other.quiver != self.quiver:
            raise QuiverMismatch("representations of different quivers")
        if other.dims != self.dims:
            raise DimensionMismatch(f"dimension {self.dims} vs {other.dims}")
        return other

    def __add__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return other
        return Representation(self.quiver, self.dims,
                              [a + b for a, b in zip(self.matrices, other.matrices)])

    def __sub__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return other
        return Representation(self.quiver, self.dims,
                              [a - b for a, b in zip(self.matrices, other.matrices)])

    def __neg__(self):
        return Representation(self.quiver, self.dims, [-m for m in self.matrices])

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Representation(self.quiver, self.dims, [scalar * m for m in self.matrices])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.quiver == other.quiver and self.dims == other.dims
                and all(np.array_equal(a, b)
                        for a, b in zip(self.matrices, other.matrices)))

    __hash__ = None

    def allclose(self, other, atol=1e-12):
        other = self._like(other)
        return all(np.allclose(a, b, rtol=0, atol=atol)
                   for a, b in zip(self.matrices, other.matrices))

    def __repr__(self):
        body = ", ".join(f"{a.id}: {m.tolist()}"
                         for a, m in zip(self.quiver.arrows, self.matrices))
        return f"Representation(dims={self.dims}, {{{body}}})"


# n-sequences are plain tuples of square arrays, one per vertex.

def identity_sequence(dims, dtype=np.float64):
    return tuple(np.eye(n, dtype=dtype) for n in dims)


def zero_sequence(dims, dtype=np.float64):
    return tuple(np.zeros((n, n), dtype=dtype) for n in dims)


def sequence_norm(S):
    return sum(entrywise_norm(s) for s in S)


def _check_sequence(S, dims):
    if len(S) != len(dims):
        raise DimensionMismatch(f"sequence has {len(S)} matrices, "
                                f"expected {len(dims)}")
    for v, (s, n) in enumerate(zip(S, dims), 1):
        if np.shape(s) != (n, n):
            raise DimensionMismatch(f"vertex {v}: expected {n}x{n}, "
                                    f"got {np.shape(s)}")


def invert_sequence(S, tol=DEFAULT_TOL):
    """Invert every matrix of ``S``.

    Raises :class:`SingularTransform` when a reciprocal condition number is
    at most ``tol``; warns with :class:`ConditionWarning` below ``sqrt(tol)``.
    """
    inverses = []
    for v, s in enumerate(S, 1):
        s = np.asarray(s)
        if s.size == 0:
            inverses.append(s.copy())
            continue
        sv = np.linalg.svd(s, compute_uv=False)
        rcond = sv[-1] / sv[0] if sv[0] > 0 else 0.0
        if rcond <= tol:
            raise SingularTransform(f"matrix at vertex {v} is singular "
                                    f"(rcond {rcond:.2e})")
        if rcond < np.sqrt(tol):
            warnings.warn(f"matrix at vertex {v} is badly conditioned "
                          f"(rcond {rcond:.2e})", ConditionWarning, stacklevel=3)
        inverses.append(np.linalg.inv(s))
    return tuple(inverses)


def apply_isomorphism(S, A, tol=DEFAULT_TOL):
    """Representation with matrices ``S_q A_alpha S_p^{-1}``."""
    _check_sequence(S, A.dims)
    inv = invert_sequence(S, tol)
    return Representation(A.quiver, A.dims,
                          [np.asarray(S[a.target - 1]) @ m @ inv[a.source - 1]
                           for a, m in zip(A.quiver.arrows, A.matrices)])


def commutator(C, A):
    """Representation ``[C, A]`` with matrices ``C_q A_alpha - A_alpha C_p``."""
    _check_sequence(C, A.dims)
    return Representation(A.quiver, A.dims,
                          [np.asarray(C[a.target - 1]) @ m - m @ np.asarray(C[a.source - 1])
                           for a, m in zip(A.quiver.arrows, A.matrices)])


def direct_sum(*reps):
    """Block-diagonal sum of representations of one quiver.

    Zero extents are honoured, so a summand with no rows or columns at an
    arrow contributes only zero rows or zero columns.
    """
    if not reps:
        raise ValueError("direct_sum needs at least one representation")
    quiver = reps[0].quiver
    for r in reps[1:]:
        if r.quiver != quiver:
            raise QuiverMismatch("direct summands must share a quiver")
    dims = tuple(sum(col) for col in zip(*(r.dims for r in reps)))
    dtype = np.result_type(*(r.dtype for r in reps))
    mats = []
    for k in range(len(quiver.arrows)):
        blocks = [r.matrices[k] for r in reps]
        out = np.zeros((sum(b.shape[0] for b in blocks),
                        sum(b.shape[1] for b in blocks)), dtype=dtype)
        i = j = 0
        for b in blocks:
            out[i:i + b.shape[0], j:j + b.shape[1]] = b
            i += b.shape[0]
            j += b.shape[1]
        mats.append(out)
    return Representation(quiver, dims, mats)


def elementary_indices(quiver, dims):
    """All positions of the matrices, in canonical order."""
    out = []
    for a in quiver.arrows:
        for i in range(1, dims[a.target - 1] + 1):
            for j in range(1, dims[a.source - 1] + 1):
                out.append(ElementaryIndex(a.id, i, j))
    return out


def _check_index(quiver, dims, idx):
    try:
        a = quiver.arrow(idx.arrow)
    except KeyError:
        raise IndexOutOfRange(f"no arrow {idx.arrow!r}") from None
    rows, cols = dims[a.target - 1], dims[a.source - 1]
    if not (1 <= idx.i <= rows and 1 <= idx.j <= cols):
        raise IndexOutOfRange(f"{tuple(idx)} outside the {rows}x{cols} "
                              f"matrix of arrow {a.id}")
    return a


def elementary(quiver, dims, idx):
    """Representation with a single 1 at position ``idx``."""
    dims = _check_dims(quiver, dims)
    idx = ElementaryIndex(*idx)
    _check_index(quiver, dims, idx)
    mats = []
    for a in quiver.arrows:
        m = np.zeros((dims[a.target - 1], dims[a.source - 1]))
        if a.id == idx.arrow:
            m[idx.i - 1, idx.j - 1] = 1.0
        mats.append(m)
    return Representation(quiver, dims, mats)


def coordinate(quiver, dims, idx):
    """Position of ``idx`` in the canonical coordinate vector."""
    idx = ElementaryIndex(*idx)
    a = _check_index(quiver, dims, idx)
    offset = 0
    for b in quiver.arrows:
        if b.id == a.id:
            break
        offset += dims[b.target - 1] * dims[b.source - 1]
    return offset + (idx.i - 1) * dims[a.source - 1] + (idx.j - 1)


def vectorize(M):
    """Concatenate the row-major entries of all matrices in arrow order."""
    if not M.matrices:
        return np.zeros(0, dtype=M.dtype)
    return np.concatenate([m.ravel() for m in M.matrices])


def devectorize(v, quiver, dims):
    """Inverse of :func:`vectorize` for the given quiver and dimension."""
    dims = _check_dims(quiver, dims)
    v = np.asarray(v)
    shapes = [(dims[a.target - 1], dims[a.source - 1]) for a in quiver.arrows]
    total = sum(r * c for r, c in shapes)
    if v.shape != (total,):
        raise LengthMismatch(f"expected {total} coordinates, got {v.shape}")
    mats, k = [], 0
    for r, c in shapes:
        mats.append(v[k:k + r * c].reshape(r, c))
        k += r * c
    return Representation(quiver, dims, mats)


def validate_gamma(quiver, dims, gamma):
    """Check ``gamma`` and return it as a tuple in canonical order."""
    gamma = [ElementaryIndex(*g) for g in gamma]
    if len(set(gamma)) != len(gamma):
        raise ValueError("index set contains duplicates")
    for g in gamma:
        _check_index(quiver, dims, g)
    return tuple(sorted(gamma, key=lambda g: coordinate(quiver, dims, g)))


def gamma_seminorm(M, gamma):
    """Sum of the moduli of the entries of ``M`` at positions outside ``gamma``."""
    mask = np.ones(M.space_dim, dtype=bool)
    for g in gamma:
        mask[coordinate(M.quiver, M.dims, g)] = False
    return float(np.abs(vectorize(M)[mask]).sum())


def remove_arrows(A, arrow_ids):
    """Drop the given arrows; vertices and the other matrices are kept."""
    drop = set(arrow_ids)
    keep = [k for k, a in enumerate(A.quiver.arrows) if a.id not in drop]
    quiver = Quiver(A.quiver.vertex_count, tuple(A.quiver.arrows[k] for k in keep))
    return Representation(quiver, A.dims, [A.matrices[k] for k in keep])


def remove_vertices(A, vertices):
    """Drop isolated vertices and renumber the rest, keeping their order.

    Returns the new representation and a dict mapping each surviving old
    vertex to its new number.
    """
    drop = set(vertices)
    for a in A.quiver.arrows:
        if a.source in drop or a.target in drop:
            raise ValueError(f"vertex of arrow {a.id} is not isolated")
    survivors = [v for v in range(1, A.quiver.vertex_count + 1) if v not in drop]
    if not survivors:
        raise ValueError("cannot remove every vertex")
    renumber = {v: k for k, v in enumerate(survivors, 1)}
    quiver = Quiver(len(survivors),
                    tuple(Arrow(a.id, renumber[a.source], renumber[a.target])
                          for a in A.quiver.arrows))
    return Representation(quiver, [A.dims[v - 1] for v in survivors],
                          A.matrices), renumber
