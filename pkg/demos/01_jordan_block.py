"""
Deforming a nilpotent Jordan block
==================================

A single matrix ``J`` is a representation of the quiver with one vertex and
one loop.  Nearby matrices are conjugate to ``J + (a few free entries)``;
the free entries are a simplest miniversal deformation of ``J``.
"""

import numpy as np

from qdeform import (Quiver, Representation, commutator_space, miniversal_template,
                     instantiate, parameter_count)

# one vertex, one loop
loop = Quiver.from_edges(1, [(1, 1)])

# the 3x3 nilpotent Jordan block
J = Representation(loop, [3], [np.diag([1.0, 1.0], 1)])
print(J)

# the tangent space to the similarity orbit is the image of C -> CJ - JC;
# its dimension is 9 minus the dimension of the centralizer of J
space = commutator_space(J)
print("orbit dimension:", space.rank)
print("parameters needed:", parameter_count(J))

# the slots outside the tangent space end up in the last row, as in the
# classical normal form for a single Jordan block
T = miniversal_template(J)
for g, label in T.labels.items():
    print(" ", label, "at row", g.i, "column", g.j)

# plugging in values gives a concrete member of the family
print(instantiate(T, dict(zip(T.gamma, [0.1, -0.2, 0.3])))[1])

# a diagonal matrix with distinct eigenvalues needs only its diagonal
D = Representation(loop, [3], [np.diag([1.0, 2.0, 3.0])])
print("diag(1, 2, 3) needs", parameter_count(D), "parameters")
