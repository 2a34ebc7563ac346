"""
Reducing a perturbation to normal form
======================================

Given ``A``, its parameter slots ``gamma`` and a small perturbation ``M``,
repeated near-identity changes of basis push ``A + M`` into the family
``A + (entries at gamma)``.  The entries left over are the parameters of
``A + M``.
"""

import numpy as np

from qdeform import (ChainShape, Representation, apply_isomorphism, certificate,
                     chain_miniversal, correction_basis, reduce)
from qdeform.quiver import gamma_seminorm

rng = np.random.default_rng(0)

shape = ChainShape.from_string("FF")
T = chain_miniversal(shape, [(1, 2), (2, 3)])
A, gamma = T.base, T.gamma

M = Representation(A.quiver, A.dims, [rng.standard_normal(m.shape) for m in A.matrices])
M = M * (1e-3 / M.norm())

# the guaranteed radius is tiny compared with |M|, so use the practical mode
cert = certificate(A, gamma, correction_basis(A, gamma))
print(f"m = {cert.m}, certified radius m**-7 = {cert.radius:.2e}, |M| = {M.norm():.1e}")

res = reduce(A, gamma, M, mode="practical")
for k, (g, n) in enumerate(res.history):
    print(f"step {k}: off-slice {g:.3e}  total {n:.3e}")

B = apply_isomorphism(res.S, A + M)
print("off-slice part after the transform:", gamma_seminorm(B - A, gamma))
print("recovered parameter:", [float(v) for v in res.parameters.values()])

# halving M roughly halves the parameter: it depends smoothly on M
half = reduce(A, gamma, M * 0.5).parameters
print("with M / 2:", [float(v) for v in half.values()])
