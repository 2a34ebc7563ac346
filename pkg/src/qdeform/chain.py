"""Chains of linear mappings ``V_1 -- V_2 -- ... -- V_t``.

A chain is the quiver on vertices ``1..t`` whose arrow ``k`` joins ``k``
and ``k + 1`` and points either forward (``k -> k+1``) or backward
(``k <- k+1``).  Its indecomposable representations are the interval
modules ``L_ij``: one-dimensional spaces on ``i..j`` joined by ``[1]``.

A direct sum of two interval modules has a miniversal deformation with at
most one parameter; :func:`pair_gamma` states where it goes, and
:func:`chain_miniversal` glues the pairs of an arbitrary interval multiset.
"""
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from .deformation import DEFAULT_TOL, assemble_from_pairs, contract_identity
from .exceptions import BadInterval, OrderViolation
from .quiver import (Arrow, ElementaryIndex, Quiver, Representation,
                     direct_sum, remove_arrows, remove_vertices)

__all__ = [
    "BACKWARD",
    "CORE_TABLE",
    "ChainShape",
    "CoreReduction",
    "FORWARD",
    "Interval",
    "build_interval",
    "chain_miniversal",
    "intervals",
    "pair_gamma",
    "reduce_to_core",
]

FORWARD = "F"
BACKWARD = "B"
_ALIASES = {"F": FORWARD, ">": FORWARD, "→": FORWARD,
            "B": BACKWARD, "<": BACKWARD, "←": BACKWARD}


@dataclass(frozen=True)
class ChainShape:
    """Number of vertices and the direction of each of the ``t - 1`` arrows."""
    t: int
    orientations: tuple = ()

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("a chain needs at least one vertex")
        try:
            orient = tuple(_ALIASES[o] for o in self.orientations)
        except KeyError as exc:
            raise ValueError(f"unknown arrow direction {exc.args[0]!r}") from None
        if len(orient) != self.t - 1:
            raise ValueError(f"{self.t} vertices need {self.t - 1} directions, "
                             f"got {len(orient)}")
        object.__setattr__(self, "orientations", orient)

    @classmethod
    def from_string(cls, s):
        """``ChainShape.from_string("FB")`` is ``1 -> 2 <- 3``."""
        return cls(len(s) + 1, tuple(s))

    @classmethod
    def all(cls, t):
        """Every orientation of the chain with ``t`` vertices."""
        for orient in product((FORWARD, BACKWARD), repeat=t - 1):
            yield cls(t, orient)

    @classmethod
    def from_quiver(cls, quiver):
        """Recognize a chain among general quivers (arrows in chain order)."""
        t = quiver.vertex_count
        if len(quiver.arrows) != t - 1:
            raise ValueError("not a chain: wrong number of arrows")
        orient = []
        for k, a in enumerate(quiver.arrows, 1):
            if (a.source, a.target) == (k, k + 1):
                orient.append(FORWARD)
            elif (a.source, a.target) == (k + 1, k):
                orient.append(BACKWARD)
            else:
                raise ValueError(f"not a chain: arrow {a.id} joins "
                                 f"{a.source} and {a.target}")
        return cls(t, tuple(orient))

    def __str__(self):
        return "".join(self.orientations)

    @property
    def quiver(self):
        return Quiver(self.t, tuple(
            Arrow(k, k, k + 1) if o == FORWARD else Arrow(k, k + 1, k)
            for k, o in enumerate(self.orientations, 1)))


class Interval(NamedTuple):
    i: int
    j: int


def intervals(t):
    """All intervals of a chain with ``t`` vertices, in lexicographic order."""
    return [Interval(i, j) for i in range(1, t + 1) for j in range(i, t + 1)]


def _check_interval(shape, iv):
    iv = Interval(*iv)
    if not 1 <= iv.i <= iv.j <= shape.t:
        raise BadInterval(f"interval {tuple(iv)} invalid for t = {shape.t}")
    return iv


def build_interval(shape, iv):
    """The interval module ``L_ij`` on ``shape``."""
    iv = _check_interval(shape, iv)
    quiver = shape.quiver
    dims = [1 if iv.i <= v <= iv.j else 0 for v in range(1, shape.t + 1)]
    mats = []
    for a in quiver.arrows:
        rows, cols = dims[a.target - 1], dims[a.source - 1]
        mats.append(np.ones((1, 1)) if rows and cols else np.zeros((rows, cols)))
    return Representation(quiver, dims, mats)


def pair_gamma(shape, a, b):
    """Parameter slot of the simplest miniversal deformation of ``L_a + L_b``.

    ``a = (p, q)`` must not exceed ``b = (r, s)`` lexicographically.  The
    result is a tuple of at most one position in the coordinates of the
    direct sum ``L_a + L_b`` (rows and columns of ``L_a`` come first).

    The only sums with a parameter are:

    * ``r = q + 1``: the ``1 x 1`` zero matrix of arrow ``q``;
    * ``p < r <= q < s`` with arrows ``r - 1`` and ``q`` pointing the
      same way: the free corner of ``[lambda 1]`` or ``[lambda; 1]`` at
      arrow ``q`` (for ``r < q`` the arrows between carry ``I_2``);
    * ``p < r <= s < q`` with arrows ``r - 1`` and ``s`` pointing opposite
      ways: the free corner of ``[1 lambda]`` or ``[1; lambda]`` at arrow
      ``s``.
    """
    a, b = _check_interval(shape, a), _check_interval(shape, b)
    if b < a:
        raise OrderViolation(f"{tuple(a)} > {tuple(b)} lexicographically")
    (p, q), (r, s) = a, b
    orient = (None,) + shape.orientations     # 1-based arrow lookup
    if r == q + 1:
        return (ElementaryIndex(q, 1, 1),)
    if p < r <= q < s and orient[r - 1] == orient[q]:
        return (ElementaryIndex(q, 1, 1),)
    if p < r <= s < q and orient[r - 1] != orient[s]:
        if orient[s] == FORWARD:
            return (ElementaryIndex(s, 1, 2),)
        return (ElementaryIndex(s, 2, 1),)
    return ()


def _swap_blocks(shape, a, b, gamma):
    """Translate positions of ``L_b + L_a`` into those of ``L_a + L_b``."""
    La, Lb = build_interval(shape, a), build_interval(shape, b)
    out = []
    for g in gamma:
        arrow = shape.quiver.arrow(g.arrow)
        rb, cb = Lb.dims[arrow.target - 1], Lb.dims[arrow.source - 1]
        ra, ca = La.dims[arrow.target - 1], La.dims[arrow.source - 1]
        i = g.i + ra if g.i <= rb else g.i - rb
        j = g.j + ca if g.j <= cb else g.j - cb
        out.append(ElementaryIndex(g.arrow, i, j))
    return tuple(out)


def chain_miniversal(shape, ivs, tol=DEFAULT_TOL):
    """Simplest miniversal deformation of the direct sum of interval modules.

    Summands appear in the given order; no sorting is applied.
    """
    ivs = [_check_interval(shape, iv) for iv in ivs]
    if not ivs:
        raise ValueError("need at least one interval")
    summands = [build_interval(shape, iv) for iv in ivs]
    pairwise = {(p, p): () for p in range(1, len(ivs) + 1)}
    for p in range(len(ivs)):
        for q in range(p + 1, len(ivs)):
            a, b = ivs[p], ivs[q]
            if a <= b:
                g = pair_gamma(shape, a, b)
            else:
                g = _swap_blocks(shape, a, b, pair_gamma(shape, b, a))
            pairwise[(p + 1, q + 1)] = g
    return assemble_from_pairs(summands, pairwise, tol)


# Slots of the six irreducible pair configurations (and of sums whose
# supports are not joined by any arrow), keyed by label and the directions
# of the surviving arrows.  Positions are (arrow number in the core, i, j).
CORE_TABLE = {
    ("L11+L11", ""): (),
    ("L11+L22", "F"): ((1, 1, 1),),
    ("L11+L22", "B"): ((1, 1, 1),),
    ("L12+L22", "F"): (),
    ("L12+L22", "B"): (),
    ("L11+L12", "F"): (),
    ("L11+L12", "B"): (),
    ("L12+L23", "FF"): ((2, 1, 1),),
    ("L12+L23", "BB"): ((2, 1, 1),),
    ("L12+L23", "FB"): (),
    ("L12+L23", "BF"): (),
    ("L13+L22", "FF"): (),
    ("L13+L22", "BB"): (),
    ("L13+L22", "FB"): ((2, 2, 1),),
    ("L13+L22", "BF"): ((2, 1, 2),),
    ("split", ""): (),
}


@dataclass(frozen=True)
class CoreReduction:
    """A pair sum with trivial arrows deleted and identity arrows contracted.

    ``arrows[k - 1]`` is the original id of the ``k``-th surviving arrow;
    entry positions are unchanged by the reduction.
    """
    label: str
    shape: ChainShape
    intervals: tuple
    representation: Representation
    arrows: tuple

    @property
    def core_gamma(self):
        return CORE_TABLE[(self.label, str(self.shape))]

    def translate(self, gamma):
        return tuple(ElementaryIndex(self.arrows[k - 1], i, j) for k, i, j in gamma)

    @property
    def gamma(self):
        return self.translate(self.core_gamma)


def reduce_to_core(shape, a, b, tol=DEFAULT_TOL):
    """Shrink ``L_a + L_b`` to one of the irreducible pair configurations."""
    a, b = _check_interval(shape, a), _check_interval(shape, b)
    if b < a:
        raise OrderViolation(f"{tuple(a)} > {tuple(b)} lexicographically")
    rep = direct_sum(build_interval(shape, a), build_interval(shape, b))
    rep = remove_arrows(rep, [x.id for x, m in zip(rep.quiver.arrows, rep.matrices)
                              if m.size == 0])
    classes = {v: {v} for v in range(1, shape.t + 1)}
    while True:
        ident = [x.id for x, m in zip(rep.quiver.arrows, rep.matrices)
                 if x.source != x.target and m.shape[0] == m.shape[1]
                 and np.allclose(m, np.eye(m.shape[0]), rtol=0, atol=tol)]
        if not ident:
            break
        rep, back = contract_identity(rep, ident[0], tol)
        merged = {}
        for v, w in back.vertex_map.items():
            merged.setdefault(w, set()).update(classes[v])
        classes = merged
    empty = [v for v, n in enumerate(rep.dims, 1) if n == 0]
    rep, renumber = remove_vertices(rep, empty)
    classes = {renumber[v]: c for v, c in classes.items() if v in renumber}
    order = sorted(classes, key=lambda v: min(classes[v]))
    position = {orig: k for k, v in enumerate(order, 1) for orig in classes[v]}
    core_a = Interval(position[a.i], position[a.j])
    core_b = Interval(position[b.i], position[b.j])
    arrows = tuple(x.id for x in rep.quiver.arrows)
    core_shape = ChainShape(len(order), tuple(shape.orientations[k - 1] for k in arrows)) \
        if len(arrows) == len(order) - 1 else ChainShape(1)
    if len(arrows) < len(order) - 1:
        label = "split"
    else:
        label = f"L{core_a.i}{core_a.j}+L{core_b.i}{core_b.j}"
    return CoreReduction(label, core_shape, (core_a, core_b), rep, arrows)
