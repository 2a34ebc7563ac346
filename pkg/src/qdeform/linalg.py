"""Dense linear-algebra kernels over the real or complex field.

Everything here works on plain :class:`numpy.ndarray` values.  Matrices
with a zero extent (``0 x n`` or ``n x 0``) are ordinary arrays and flow
through every routine without special casing by the caller.
"""
import numpy as np
import scipy.linalg

from .exceptions import Infeasible

__all__ = [
    "DEFAULT_TOL",
    "IncrementalEchelon",
    "as_matrix",
    "default_rank_tol",
    "entrywise_norm",
    "field_of",
    "field_dtype",
    "rank_nullspace",
    "solve_least_norm",
]

#: Engine-wide relative tolerance for rank decisions.
DEFAULT_TOL = 1e-9

_FIELDS = {"real": np.float64, "complex": np.complex128}


def field_dtype(field):
    """Return the numpy dtype used for ``field`` ('real' or 'complex')."""
    try:
        return np.dtype(_FIELDS[field])
    except KeyError:
        raise ValueError(f"field must be 'real' or 'complex', got {field!r}") from None


def field_of(*arrays):
    """Name of the smallest field containing every entry of ``arrays``."""
    for a in arrays:
        if np.iscomplexobj(a):
            return "complex"
    return "real"


def as_matrix(entries, rows=None, cols=None, dtype=None):
    """Coerce ``entries`` to a 2-D float or complex array.

    ``rows``/``cols`` are needed only to give an empty input its extents.
    """
    a = np.asarray(entries)
    if dtype is None:
        dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    if a.size == 0 and rows is not None and cols is not None:
        return np.zeros((rows, cols), dtype=dtype)
    a = np.array(a, dtype=dtype, ndmin=2, copy=True)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    if rows is not None and cols is not None and a.shape != (rows, cols):
        raise ValueError(f"expected shape ({rows}, {cols}), got {a.shape}")
    return a


def entrywise_norm(P):
    """Sum of the moduli of all entries of ``P``; 0 for an empty matrix."""
    return float(np.abs(np.asarray(P)).sum())


def default_rank_tol(M):
    """max(rows, cols) * eps * (largest absolute row sum of ``M``)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    eps = np.finfo(np.float64).eps
    return max(M.shape) * eps * float(np.abs(M).sum(axis=1).max())


def rank_nullspace(M, tol=None):
    """Rank and a kernel basis of ``M`` by Gauss-Jordan elimination.

    Pivots are chosen per column as the entry of largest modulus among the
    remaining rows, the lowest row index winning ties.  A column whose
    best candidate does not exceed ``tol`` in modulus is treated as free.

    Parameters
    ----------
    M : (m, n) array_like
    tol : float, optional
        Absolute pivot threshold; defaults to :func:`default_rank_tol`.

    Returns
    -------
    rank : int
    nullspace : list of (n,) ndarray
        One vector per free column; ``rank + len(nullspace) == n``.
    """
    R = as_matrix(M)
    if tol is None:
        tol = default_rank_tol(R)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    rows, cols = R.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        k = row + int(np.argmax(np.abs(R[row:, col])))
        if abs(R[k, col]) <= tol:
            R[row:, col] = 0
            continue
        if k != row:
            R[[row, k]] = R[[k, row]]
        R[row] /= R[row, col]
        others = np.arange(rows) != row
        R[others] -= np.outer(R[others, col], R[row])
        pivots.append(col)
        row += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=R.dtype)
        v[f] = 1
        for r, p in enumerate(pivots):
            v[p] = -R[r, f]
        basis.append(v)
    return len(pivots), basis


def solve_least_norm(M, b, tol=DEFAULT_TOL):
    """Minimum-norm solution of ``M x = b``.

    ``b`` may be a vector or a matrix of right-hand sides.  Raises
    :class:`Infeasible` when the residual exceeds ``tol * (1 + |b|)``
    (Euclidean norms, per right-hand side).
    """
    M = as_matrix(M)
    b = np.asarray(b)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    if B.shape[0] != M.shape[0]:
        raise ValueError(f"rhs has {B.shape[0]} rows, matrix has {M.shape[0]}")
    dtype = np.result_type(M.dtype, B.dtype, np.float64)
    if M.size == 0:
        X = np.zeros((M.shape[1], B.shape[1]), dtype=dtype)
    else:
        X = scipy.linalg.lstsq(M, B)[0]
    res = np.linalg.norm(M @ X - B, axis=0) if B.size else np.zeros(B.shape[1])
    bound = tol * (1 + np.linalg.norm(B, axis=0))
    if np.any(res > bound):
        raise Infeasible(
            f"residual {res.max():.3e} exceeds tolerance {bound.min():.3e}")
    return X[:, 0] if vector else X


class IncrementalEchelon:
    """Row-echelon form that grows one vector at a time.

    Each stored row has a pivot entry equal to 1 and vanishes at the pivots
    of the rows stored before it, so reducing a candidate costs one pass.
    The pivot of a new row is its entry of largest modulus (lowest index on
    ties), which keeps every stored entry bounded by 1.

    >>> ech = IncrementalEchelon(2)
    >>> ech.add([1.0, 1.0], 1e-12), ech.add([2.0, 2.0], 1e-12)
    (True, False)
    """

    def __init__(self, length, dtype=np.float64):
        self.length = length
        self.dtype = np.dtype(dtype)
        self.rows = []
        self.pivots = []

    @property
    def rank(self):
        return len(self.rows)

    def residual(self, v):
        r = np.array(v, dtype=np.result_type(self.dtype, np.asarray(v).dtype))
        for row, p in zip(self.rows, self.pivots):
            if r[p] != 0:
                r -= r[p] * row
        return r

    def add(self, v, tol):
        """Store ``v`` if it is independent of the rows so far.

        Returns True when the rank grew, i.e. when some entry of the
        reduced vector exceeds ``tol`` in modulus.
        """
        if self.length == 0:
            return False
        r = self.residual(v)
        p = int(np.argmax(np.abs(r)))
        if abs(r[p]) <= tol:
            return False
        if np.iscomplexobj(r):
            self.dtype = np.result_type(self.dtype, r.dtype)
            self.rows = [row.astype(self.dtype) for row in self.rows]
        self.rows.append(r / r[p])
        self.pivots.append(p)
        return True
