"""
Chains of linear mappings
=========================

A chain ``V_1 -- V_2 -- ... -- V_t`` with arrows pointing either way breaks
into interval modules ``L_ij``.  A sum of two of them has at most one
parameter, and the pairwise answers glue into the answer for any sum.
"""

from itertools import combinations_with_replacement

from qdeform import (ChainShape, chain_miniversal, pair_gamma, reduce_to_core,
                     select_gamma)
from qdeform.chain import intervals

# 1 -> 2 -> 3 with L12 + L23: matrices [1; 0] and [0 1]
shape = ChainShape.from_string("FF")
T = chain_miniversal(shape, [(1, 2), (2, 3)])
print(T.base)
print("parameter slots:", T.labels)

# flipping the second arrow kills the parameter
print("1 -> 2 <- 3:", pair_gamma(ChainShape.from_string("FB"), (1, 2), (2, 3)))

# every pair on a chain reduces to one of a handful of small cores after
# deleting empty arrows and contracting identity arrows
core = reduce_to_core(ChainShape.from_string("FFFF"), (1, 3), (4, 5))
print("core of L13 + L45:", core.label, "with slot", core.gamma)

# count the pairs with a parameter on each orientation of a 4-vertex chain;
# the slots move around but their number stays the same here
for shape in ChainShape.all(4):
    ivs = intervals(4)
    hits = sum(len(pair_gamma(shape, a, b)) for a, b in
               combinations_with_replacement(ivs, 2))
    print(f"{shape}: {hits} of {len(ivs) * (len(ivs) + 1) // 2} pairs deform")

# a bigger sum: assembled from pairs, checked against the direct computation
shape = ChainShape.from_string("FBF")
summands = [(1, 2), (2, 4), (3, 3), (1, 4)]
T = chain_miniversal(shape, summands)
assert set(T.gamma) == set(select_gamma(T.base))
print(f"{'+'.join(f'L{i}{j}' for i, j in summands)} on {shape}:",
      T.parameter_count, "parameters")
print(T.base)
print("slots:", ", ".join(T.labels.values()))
