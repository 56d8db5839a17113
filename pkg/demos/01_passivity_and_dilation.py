"""
Which lossy beam splitters can exist?
=====================================

A symmetric two-port ``S = [[t, r], [r, t]]`` is only realizable by a
passive film if no input is amplified, i.e. both singular values of ``S``
are at most one. For a lossy splitter this pins the exchange phase
``phi_rt`` to an arc around pi/2 whose width grows with the loss.
"""

import math

import numpy as np

from lossyhom import BeamSplitter, check_physical, phase_bound, scattering_matrix, unitary_dilation
from lossyhom.core import allowed_phase_arc, unitarity_residual

# A lossless 50:50 splitter allows only phi_rt = +-pi/2.
h = math.sqrt(0.5)
print("bound for a lossless 50:50 splitter:", phase_bound(h, h))

# At 50% intensity loss (|t| = |r| = 0.5) every phase is allowed, including pi.
print("bound for |t| = |r| = 0.5:", phase_bound(0.5, 0.5))

# Sweep the loss of a balanced splitter and print the allowed arc.
print("\n  T=R    loss   allowed phi_rt (rad)")
for T in (0.5, 0.45, 0.4, 0.35, 0.3, 0.25):
    lo, hi = allowed_phase_arc(math.sqrt(T), math.sqrt(T))
    print(f"  {T:.2f}   {1 - 2 * T:.2f}   [{lo:.3f}, {hi:.3f}]")

# The report explains a rejection.
bad = BeamSplitter(h, h, 0.0)
print("\nlossless splitter with phi_rt = 0:", check_physical(bad))

# A physical splitter embeds in a 4x4 unitary; the two extra modes carry
# the absorbed photons.
cpa = BeamSplitter(0.5, 0.5, math.pi)
U = unitary_dilation(cpa)
print("\nsingular values of S for the pi-phase splitter:", np.linalg.svd(scattering_matrix(cpa), compute_uv=False))
print("dilation unitarity residual:", unitarity_residual(U))
