"""Independent reference computations used by the tests.

Nothing here calls into the engine's rank or selection code; the
commutator map is rebuilt from Kronecker products and ranks come from
``numpy.linalg.matrix_rank`` (SVD) or exact integer determinants.
"""
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from qdeform.quiver import Quiver, Representation


def kron_commutator_matrix(A):
    """Matrix of ``C -> [C, A]`` via ``vec_r(C_q A) = (I kron A^T) vec_r(C_q)``."""
    dims = A.dims
    offs = np.concatenate([[0], np.cumsum([n * n for n in dims])]).astype(int)
    rows = []
    for arrow, a in zip(A.quiver.arrows, A.matrices):
        nq, np_ = dims[arrow.target - 1], dims[arrow.source - 1]
        block = np.zeros((nq * np_, offs[-1]), dtype=np.result_type(a, float))
        q0, p0 = offs[arrow.target - 1], offs[arrow.source - 1]
        block[:, q0:q0 + nq * nq] += np.kron(np.eye(nq), a.T)
        block[:, p0:p0 + np_ * np_] -= np.kron(a, np.eye(np_))
        rows.append(block)
    if not rows:
        return np.zeros((0, offs[-1]))
    return np.vstack(rows)


def dense_rank(K):
    if K.size == 0:
        return 0
    return int(np.linalg.matrix_rank(K))


def oracle_parameter_count(A):
    return A.space_dim - dense_rank(kron_commutator_matrix(A))


def _det(M):
    n = len(M)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        prod = Fraction(1)
        for r, c in enumerate(perm):
            prod *= M[r][c]
            if prod == 0:
                break
        total += sign * prod
    return total


def minor_rank(M):
    """Largest size of a nonvanishing minor, exact over the integers."""
    M = [[Fraction(int(x)) for x in row] for row in np.asarray(M)]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for k in range(min(rows, cols), 0, -1):
        for R in combinations(range(rows), k):
            for C in combinations(range(cols), k):
                if _det([[M[r][c] for c in C] for r in R]) != 0:
                    return k
    return 0


def random_quiver(rng, max_vertices=3, max_arrows=4):
    t = int(rng.integers(1, max_vertices + 1))
    k = int(rng.integers(0, max_arrows + 1))
    edges = [(int(rng.integers(1, t + 1)), int(rng.integers(1, t + 1)))
             for _ in range(k)]
    return Quiver.from_edges(t, edges)


def random_representation(rng, quiver=None, max_dim=3, complex_=False, sparse=True):
    """Small-integer entries, often sparse, so ranks are frequently degenerate."""
    quiver = random_quiver(rng) if quiver is None else quiver
    dims = [int(rng.integers(0, max_dim + 1)) for _ in range(quiver.vertex_count)]
    mats = []
    for a in quiver.arrows:
        shape = (dims[a.target - 1], dims[a.source - 1])
        m = rng.integers(-2, 3, size=shape).astype(float)
        if sparse:
            m *= rng.random(shape) < 0.5
        if complex_:
            m = m + 1j * rng.integers(-1, 2, size=shape) * (rng.random(shape) < 0.3)
        mats.append(m)
    return Representation(quiver, dims, mats)
