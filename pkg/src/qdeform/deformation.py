"""Simplest miniversal deformations of arbitrary quiver representations.

The tangent space to the isomorphism class of ``A`` is the image of the
linear map ``C -> [C, A]`` on n-sequences.  A set ``gamma`` of matrix
positions parameterizes a miniversal deformation ``A + sum eps_g E_g``
exactly when the elementary representations at ``gamma`` span a direct
complement of that image.  This module builds the map, picks such a
complement greedily, checks candidate sets, and glues pairwise results of
a direct sum into a deformation of the whole sum.
"""
from dataclasses import dataclass
import enum

import numpy as np

from .exceptions import (InconsistentBlocks, LoopArrow, NotIdentity,
                         UnknownParameter)
from .linalg import DEFAULT_TOL, IncrementalEchelon, rank_nullspace
from .quiver import (Arrow, ElementaryIndex, Quiver, Representation,
                     coordinate, direct_sum, elementary_indices,
                     validate_gamma)

__all__ = [
    "CommutatorSpace",
    "DeformationTemplate",
    "Verdict",
    "assemble_from_pairs",
    "commutator_matrix",
    "commutator_space",
    "contract_identity",
    "endomorphisms",
    "instantiate",
    "miniversal_template",
    "parameter_count",
    "select_gamma",
    "sequence_from_coordinates",
    "verify_decomposition",
]


class Verdict(enum.Enum):
    MINIVERSAL = "miniversal"
    NOT_DIRECT = "not direct"
    NOT_SPANNING = "not spanning"


def commutator_matrix(A):
    """Matrix of ``C -> [C, A]`` in canonical coordinates.

    Rows follow :func:`~qdeform.quiver.vectorize`; columns run over the
    vertices and, within a vertex, over the row-major entries of ``C_v``.
    """
    dims = A.dims
    offsets = np.cumsum([0] + [a.size for a in A.matrices])
    col_offsets = np.cumsum([0] + [n * n for n in dims])
    K = np.zeros((A.space_dim, col_offsets[-1]), dtype=A.dtype)
    for pos, (arrow, m) in enumerate(zip(A.quiver.arrows, A.matrices)):
        p, q = arrow.source, arrow.target
        rows, cols = m.shape
        block = K[offsets[pos]:offsets[pos + 1]]
        # C_q = E_kl puts row l of A_alpha into row k.
        for k in range(rows):
            for l in range(rows):
                col = col_offsets[q - 1] + k * rows + l
                block[k * cols:(k + 1) * cols, col] += m[l]
        # A_alpha C_p with C_p = E_kl puts column k of A_alpha into column l.
        for k in range(cols):
            for l in range(cols):
                col = col_offsets[p - 1] + k * cols + l
                block[l::cols, col] -= m[:, k]
    return K


def sequence_from_coordinates(x, dims):
    """Split a coordinate vector into one square matrix per vertex."""
    out, k = [], 0
    for n in dims:
        out.append(np.asarray(x[k:k + n * n]).reshape(n, n))
        k += n * n
    return tuple(out)


@dataclass(frozen=True)
class CommutatorSpace:
    """Basis of the image of ``C -> [C, A]``.

    ``basis[k]`` is column ``columns[k]`` of ``matrix``, i.e. the commutator
    of ``A`` with an elementary n-sequence.
    """
    matrix: np.ndarray
    columns: tuple
    basis: tuple
    echelon: IncrementalEchelon
    tol: float

    @property
    def rank(self):
        return len(self.basis)


def _scale(K):
    return float(np.abs(K).max()) if K.size and np.any(K) else 1.0


def commutator_space(A, tol=DEFAULT_TOL):
    """Column basis of the commutator map; ``tol`` is relative to its largest entry."""
    K = commutator_matrix(A)
    ech = IncrementalEchelon(K.shape[0], K.dtype)
    abs_tol = tol * _scale(K)
    cols = [c for c in range(K.shape[1]) if ech.add(K[:, c], abs_tol)]
    return CommutatorSpace(K, tuple(cols), tuple(K[:, c].copy() for c in cols),
                           ech, tol)


def _copy_echelon(ech):
    out = IncrementalEchelon(ech.length, ech.dtype)
    out.rows = list(ech.rows)
    out.pivots = list(ech.pivots)
    return out


def select_gamma(A, tol=DEFAULT_TOL, space=None):
    """Greedy complement of the commutator space by elementary representations.

    Elementary representations are scanned from the last canonical position
    to the first, and each one that enlarges the span of the commutator
    space and the ones kept so far is kept.  Scanning backwards places the
    parameters in the trailing slots, which reproduces the classical normal
    forms (the bottom row of a Jordan block, the ``[lambda 1]`` slot of a
    chain).
    """
    space = commutator_space(A, tol) if space is None else space
    ech = _copy_echelon(space.echelon)
    idx = elementary_indices(A.quiver, A.dims)
    kept = []
    for k in reversed(range(len(idx))):
        e = np.zeros(ech.length)
        e[k] = 1.0
        if ech.add(e, tol):
            kept.append(idx[k])
        if ech.rank == ech.length:
            break
    return tuple(reversed(kept))


def verify_decomposition(A, gamma, tol=DEFAULT_TOL, space=None):
    """Check that the commutator space and ``E_gamma`` sum directly to everything."""
    gamma = validate_gamma(A.quiver, A.dims, gamma)
    space = commutator_space(A, tol) if space is None else space
    ech = _copy_echelon(space.echelon)
    for g in gamma:
        e = np.zeros(ech.length)
        e[coordinate(A.quiver, A.dims, g)] = 1.0
        ech.add(e, tol)
    if ech.rank < space.rank + len(gamma):
        return Verdict.NOT_DIRECT
    if ech.rank < A.space_dim:
        return Verdict.NOT_SPANNING
    return Verdict.MINIVERSAL


def parameter_count(A, tol=DEFAULT_TOL):
    """Codimension of the isomorphism class: the minimal number of parameters."""
    return A.space_dim - commutator_space(A, tol).rank


def endomorphisms(A, tol=DEFAULT_TOL):
    """Basis of the n-sequences commuting with ``A`` (kernel of the map)."""
    K = commutator_matrix(A)
    _, basis = rank_nullspace(K, tol * _scale(K))
    return [sequence_from_coordinates(x, A.dims) for x in basis]


@dataclass(frozen=True)
class DeformationTemplate:
    """``base + sum eps_g E_g`` over the positions in ``gamma``."""
    base: Representation
    gamma: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma",
                           validate_gamma(self.base.quiver, self.base.dims, self.gamma))

    @property
    def parameter_count(self):
        return len(self.gamma)

    @property
    def labels(self):
        return {g: f"eps[{g.arrow}][{g.i}][{g.j}]" for g in self.gamma}


def miniversal_template(A, tol=DEFAULT_TOL):
    return DeformationTemplate(A, select_gamma(A, tol))


def instantiate(template, values=None):
    """Evaluate the template; missing parameters default to 0."""
    values = {} if values is None else values
    base = template.base
    slots = set(template.gamma)
    mats = [np.array(m) for m in base.matrices]
    for key, val in values.items():
        g = ElementaryIndex(*key)
        if g not in slots:
            raise UnknownParameter(f"{tuple(g)} is not a parameter slot")
        pos = base.quiver.position(g.arrow)
        if np.iscomplexobj(val) and not np.iscomplexobj(mats[pos]):
            mats = [m.astype(np.complex128) for m in mats]
        mats[pos][g.i - 1, g.j - 1] += val
    return Representation(base.quiver, base.dims, mats)


def _block_of(local, sizes):
    """Split a 1-based index of a block-stacked axis into (block, local index)."""
    for b, n in enumerate(sizes):
        if local <= n:
            return b, local
        local -= n
    raise IndexError("index beyond the stacked blocks")


def assemble_from_pairs(summands, pairwise, tol=DEFAULT_TOL):
    """Deformation of ``A_1 + ... + A_s`` from deformations of pairs.

    Parameters
    ----------
    summands : sequence of Representation
        The direct summands, in block order.
    pairwise : dict
        ``pairwise[(p, q)]`` (1-based, ``p < q``) is a miniversal index set
        of ``A_p + A_q`` in its own coordinates.  ``pairwise[(p, p)]``, when
        given, is one of ``A_p`` alone; otherwise the diagonal blocks are
        read from the pairs (and default to no parameters).

    Returns
    -------
    DeformationTemplate
        Over the full direct sum.

    Raises
    ------
    InconsistentBlocks
        If the pairs disagree on a diagonal block, or the assembled set is
        not miniversal.
    """
    summands = list(summands)
    s = len(summands)
    if s == 0:
        raise ValueError("need at least one summand")
    full = direct_sum(*summands)
    quiver = full.quiver
    t = quiver.vertex_count
    # offsets[b][v]: rows of summands before b at vertex v
    offsets = [[sum(summands[c].dims[v] for c in range(b)) for v in range(t)]
               for b in range(s)]

    def lift(blocks, g):
        a = quiver.arrow(g.arrow)
        row_sizes = [summands[b].dims[a.target - 1] for b in blocks]
        col_sizes = [summands[b].dims[a.source - 1] for b in blocks]
        bi, i = _block_of(g.i, row_sizes)
        bj, j = _block_of(g.j, col_sizes)
        bi, bj = blocks[bi], blocks[bj]
        return (bi, bj), ElementaryIndex(g.arrow, offsets[bi][a.target - 1] + i,
                                         offsets[bj][a.source - 1] + j)

    diagonal = {}
    for p in range(1, s + 1):
        if (p, p) in pairwise:
            diagonal[p] = {lift([p - 1], ElementaryIndex(*g))[1]
                           for g in pairwise[(p, p)]}
    gamma = set()
    for p in range(1, s + 1):
        for q in range(p + 1, s + 1):
            if (p, q) not in pairwise:
                raise InconsistentBlocks(f"missing pair ({p}, {q})")
            found = {p: set(), q: set()}
            for g in pairwise[(p, q)]:
                (bi, bj), h = lift([p - 1, q - 1], ElementaryIndex(*g))
                if bi == bj:
                    found[bi + 1].add(h)
                else:
                    gamma.add(h)
            for b, entries in found.items():
                if diagonal.setdefault(b, entries) != entries:
                    raise InconsistentBlocks(
                        f"pair ({p}, {q}) disagrees with the diagonal block {b}")
    for entries in diagonal.values():
        gamma |= entries
    template = DeformationTemplate(full, tuple(gamma))
    verdict = verify_decomposition(full, template.gamma, tol)
    if verdict is not Verdict.MINIVERSAL:
        raise InconsistentBlocks(f"assembled index set is {verdict.value}")
    return template


class ContractionMap:
    """Carries index sets and templates of a contracted representation back.

    Arrow ids survive the contraction and the merged vertex keeps the
    common dimension, so positions translate unchanged; lifting restores
    the identity matrix on the contracted arrow by using the original
    representation as base.
    """

    def __init__(self, original, arrow, vertex_map):
        self.original = original
        self.arrow = arrow
        self.vertex_map = vertex_map

    def __call__(self, obj):
        if isinstance(obj, DeformationTemplate):
            return DeformationTemplate(self.original, obj.gamma)
        return validate_gamma(self.original.quiver, self.original.dims, obj)


def contract_identity(A, arrow_id, tol=DEFAULT_TOL):
    """Merge the endpoints of an arrow carrying an identity matrix.

    Returns the representation of the contracted quiver (other arrows
    between the two endpoints become loops) and a :class:`ContractionMap`.
    """
    arrow = A.quiver.arrow(arrow_id)
    p1, p2 = arrow.source, arrow.target
    if p1 == p2:
        raise LoopArrow(f"arrow {arrow_id} is a loop")
    m = A[arrow_id]
    if m.shape[0] != m.shape[1] or not np.allclose(m, np.eye(m.shape[0]),
                                                   rtol=0, atol=tol):
        raise NotIdentity(f"arrow {arrow_id} does not carry an identity matrix")
    vertex_map = {}
    for v in range(1, A.quiver.vertex_count + 1):
        w = p1 if v == p2 else v
        vertex_map[v] = w - (w > p2)
    arrows, mats = [], []
    for b, mb in zip(A.quiver.arrows, A.matrices):
        if b.id == arrow_id:
            continue
        arrows.append(Arrow(b.id, vertex_map[b.source], vertex_map[b.target]))
        mats.append(mb)
    quiver = Quiver(A.quiver.vertex_count - 1, tuple(arrows))
    dims = [A.dims[v - 1] for v in range(1, A.quiver.vertex_count + 1) if v != p2]
    return Representation(quiver, dims, mats), ContractionMap(A, arrow_id, vertex_map)
