"""Reduction of perturbed representations to deformation normal form.

Given ``A``, a miniversal index set ``gamma`` and a small perturbation
``M``, :func:`reduce` builds a near-identity basis change ``S`` such that
``S (A + M) S^{-1} - A`` vanishes outside ``gamma``.  The entries left at
``gamma`` are the local parameters of ``A + M`` in the deformation.

Each step uses a fixed family of n-sequences ``X_g`` (one per position
``g`` outside ``gamma``) with ``E_g + [X_g, A]`` supported on ``gamma``;
the step transform is ``I + sum_g m_g X_g`` where ``m_g`` are the entries
of the current perturbation.  The step cancels the off-slice part to first
order, so the off-slice norm shrinks by a factor of order ``|M|``.
"""
from dataclasses import dataclass, field
import math

import mpmath
import numpy as np

from .deformation import (Verdict, commutator_space, sequence_from_coordinates,
                          verify_decomposition)
from .exceptions import (NoConvergence, NotMiniversal, PreconditionViolated,
                         SingularStep, SingularTransform)
from .linalg import DEFAULT_TOL, solve_least_norm
from .quiver import (Representation, coordinate, devectorize, elementary_indices,
                     gamma_seminorm, identity_sequence, invert_sequence,
                     sequence_norm, validate_gamma, vectorize)

__all__ = [
    "CorrectionBasis",
    "ReductionCertificate",
    "ReductionResult",
    "certificate",
    "correction_basis",
    "reduce",
    "reduction_step",
    "window_schedule",
]


@dataclass(frozen=True)
class CorrectionBasis:
    """Minimum-norm ``X_g`` for every position ``g`` outside ``gamma``.

    ``matrix`` holds the coordinates of the ``X_g`` as columns, in the
    order of ``positions``; ``coords`` are the matching positions in the
    canonical coordinate vector of a representation.
    """
    base: Representation
    gamma: tuple
    positions: tuple
    coords: np.ndarray
    matrix: np.ndarray

    @property
    def sequences(self):
        return {g: sequence_from_coordinates(self.matrix[:, k], self.base.dims)
                for k, g in enumerate(self.positions)}

    def combine(self, M):
        """``X = sum_g m_g X_g`` for the entries ``m_g`` of ``M`` outside ``gamma``."""
        m = vectorize(M)[self.coords]
        return sequence_from_coordinates(self.matrix @ m, self.base.dims)


def correction_basis(A, gamma, tol=DEFAULT_TOL):
    """Solve ``E_g + [X_g, A] in E_gamma`` for every ``g`` outside ``gamma``.

    Restricted to the rows outside ``gamma`` the commutator map is onto,
    and its kernel is the kernel of the full map, so the minimum-norm
    solution of the restricted system is the minimum-norm preimage.
    """
    gamma = validate_gamma(A.quiver, A.dims, gamma)
    space = commutator_space(A, tol)
    verdict = verify_decomposition(A, gamma, tol, space=space)
    if verdict is not Verdict.MINIVERSAL:
        raise NotMiniversal(f"index set is {verdict.value}")
    in_gamma = {coordinate(A.quiver, A.dims, g) for g in gamma}
    positions = [g for g in elementary_indices(A.quiver, A.dims)
                 if coordinate(A.quiver, A.dims, g) not in in_gamma]
    coords = np.array([coordinate(A.quiver, A.dims, g) for g in positions], dtype=int)
    K = space.matrix
    n_unknowns = K.shape[1]
    if len(positions):
        X = solve_least_norm(K[coords], -np.eye(len(positions)), tol)
    else:
        X = np.zeros((n_unknowns, 0), dtype=K.dtype)
    return CorrectionBasis(A, gamma, tuple(positions), coords, X)


@dataclass(frozen=True)
class ReductionCertificate:
    """Constants of the one-step estimate and the certified radius ``m**-7``.

    ``c`` is the total norm of the correction basis, ``n`` the total
    dimension.  For every ``0 < eps <= delta < 1/m`` and ``|M|_gamma < eps``,
    ``|M| < delta`` one step returns ``|M'|_gamma < m eps delta`` and
    ``|M'| < delta + m eps`` (provided ``eps c < 1/2``, automatic for
    ``eps <= m**-7``).
    """
    c: float
    d: float
    e: float
    m: int
    n: int
    delta: float

    @property
    def radius(self):
        return float(self.m) ** -7


def certificate(A, gamma, basis, delta=1 / 3):
    """Constants ``c``, ``d``, ``e`` and the integer ``m`` for ``(A, gamma)``.

    ``e`` grows with ``delta``; the default ``1/3`` bounds every admissible
    window since ``delta < 1/m <= 1/3``.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    c = sum(sequence_norm(X) for X in basis.sequences.values())
    n = sum(A.dims)
    a = A.norm()
    d = 2 * a * c ** 2 * (n + 1) + 2 * c * (n + 1)
    e = 2 * c * a + delta * d
    # margin absorbs the rounding of c, so m stays above the exact constants
    m = max(3, math.floor(max(c, d, e) * (1 + 1e-9)) + 1)
    return ReductionCertificate(c, d, e, m, n, delta)


def window_schedule(m, count, extended=False):
    """Pairs ``(eps_i, delta_i)``, ``i = 1..count``, of the certified windows.

    ``eps_1 = delta_1 = m**-7``, ``eps_{i+1} = m eps_i delta_i`` and
    ``delta_{i+1} = delta_i + m eps_i``.  With ``extended=True`` the values
    are :class:`mpmath.mpf` and never underflow.
    """
    if m < 3 or count < 1:
        raise ValueError("need m >= 3 and count >= 1")
    if extended:
        m = mpmath.mpf(m)
        eps = delta = m ** -7
    else:
        eps = delta = float(m) ** -7
    out = [(eps, delta)]
    for _ in range(count - 1):
        eps, delta = m * eps * delta, delta + m * eps
        out.append((eps, delta))
    return out


def reduction_step(A, gamma, basis, M, tol=DEFAULT_TOL):
    """One change of basis ``S = I + X``; returns ``(S, M')``.

    ``M'`` is ``S (A + M) S^{-1} - A``, evaluated as
    ``([X, A] + M + X M) S^{-1}`` to avoid cancelling the entries of ``A``.
    """
    X = basis.combine(M)
    dtype = np.result_type(A.dtype, M.dtype, *(x.dtype for x in X))
    S = tuple(np.eye(n, dtype=dtype) + x for n, x in zip(A.dims, X))
    try:
        Sinv = invert_sequence(S, tol)
    except SingularTransform as exc:
        raise SingularStep(str(exc)) from None
    mats = []
    for arrow, a, m in zip(A.quiver.arrows, A.matrices, M.matrices):
        xq, xp = X[arrow.target - 1], X[arrow.source - 1]
        core = xq @ a - a @ xp + m + xq @ m
        mats.append(core @ Sinv[arrow.source - 1])
    M_next = Representation(A.quiver, A.dims, mats)
    if not all(np.all(np.isfinite(x)) for x in M_next.matrices):
        raise SingularStep("step produced non-finite entries")
    return S, M_next


@dataclass
class ReductionResult:
    """Outcome of :func:`reduce`.

    ``residual`` is ``S (A + M) S^{-1} - A`` with its off-slice entries
    (all below the target tolerance) dropped; ``offslice`` is the norm of
    the dropped part.  ``history[k]`` holds ``(|M_k|_gamma, |M_k|)`` for
    the iterate reached after ``k`` steps; ``steps`` the step transforms.
    """
    S: tuple
    residual: Representation
    iterations: int
    history: list
    steps: list = field(default_factory=list)
    gamma: tuple = ()
    offslice: float = 0.0
    mode: str = "practical"
    certificate: ReductionCertificate = None
    converged: bool = True

    @property
    def parameters(self):
        """Entries of the residual at the slots of ``gamma``."""
        return {g: self.residual[g.arrow][g.i - 1, g.j - 1] for g in self.gamma}

    def schedule(self):
        return window_schedule(self.certificate.m, len(self.history))


def _on_slice(M, gamma):
    keep = np.zeros(M.space_dim, dtype=bool)
    for g in gamma:
        keep[coordinate(M.quiver, M.dims, g)] = True
    v = vectorize(M).copy()
    v[~keep] = 0
    return devectorize(v, M.quiver, M.dims)


def reduce(A, gamma, M, target_tol=None, max_iter=100, mode="practical",
           basis=None, tol=DEFAULT_TOL):
    """Drive ``A + M`` into the slice ``A + E_gamma`` by repeated steps.

    Parameters
    ----------
    A : Representation
    gamma : sequence of ElementaryIndex
        Must give a miniversal deformation of ``A``.
    M : Representation
        The perturbation.
    target_tol : float, optional
        Stop once ``|M_k|_gamma <= target_tol``; defaults to
        ``1e-12 * (1 + |A| + |M|)``.
    max_iter : int
    mode : {'practical', 'certified'}
        ``'certified'`` refuses ``|M| >= m**-7``, inside which convergence
        is guaranteed.  ``'practical'`` accepts any ``M`` and gives up as
        soon as a step fails to shrink ``|M_k|_gamma`` by a factor 0.9.

    Raises
    ------
    PreconditionViolated
        Certified mode outside the certified radius.
    NoConvergence
        ``max_iter`` exhausted or stalled iteration; ``exc.result`` holds
        the partial result.
    """
    if mode not in ("practical", "certified"):
        raise ValueError(f"unknown mode {mode!r}")
    gamma = validate_gamma(A.quiver, A.dims, gamma)
    if basis is None:
        basis = correction_basis(A, gamma, tol)
    cert = certificate(A, gamma, basis)
    norm_M = M.norm()
    if mode == "certified" and not norm_M < cert.radius:
        raise PreconditionViolated(
            f"|M| = {norm_M:.6e} is not below the certified radius "
            f"m**-7 = {cert.radius:.6e} (m = {cert.m})")
    if target_tol is None:
        target_tol = 1e-12 * (1 + A.norm() + norm_M)

    dtype = np.result_type(A.dtype, M.dtype)
    S = identity_sequence(A.dims, dtype)
    current = M
    history = [(gamma_seminorm(current, gamma), current.norm())]
    steps = []

    def result(converged):
        return ReductionResult(S, _on_slice(current, gamma), len(steps), history,
                               steps, gamma, history[-1][0], mode, cert, converged)

    while history[-1][0] > target_tol:
        if len(steps) >= max_iter:
            raise NoConvergence(f"no convergence after {max_iter} steps "
                                f"(|M|_gamma = {history[-1][0]:.3e})", result(False))
        step, current = reduction_step(A, gamma, basis, current, tol)
        S = tuple(s @ acc for s, acc in zip(step, S))
        steps.append(step)
        history.append((gamma_seminorm(current, gamma), current.norm()))
        if mode == "practical" and history[-1][0] > target_tol \
                and history[-1][0] > 0.9 * history[-2][0]:
            raise NoConvergence(f"iteration stalled at step {len(steps)} "
                                f"(|M|_gamma = {history[-1][0]:.3e})", result(False))
    return result(True)
