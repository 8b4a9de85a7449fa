# CP violation from two routes
#
# The Jarlskog invariant is the imaginary part of a plaquette of the mixing
# matrix. It also follows from the determinant of the commutator of the two
# mass matrices, divided by the mass-difference products.

import numpy as np

from flagckm import FlagCoordinates, build_ckm, jarlskog_invariant
from flagckm.ckm import STANDARD_PLAQUETTE, all_plaquettes, plaquette_sign
from flagckm.jarlskog_det import (
    MassSpectrum,
    build_mass_matrix,
    commutator_det,
    det_parity_check,
    jarlskog_identity_check,
)
from flagckm.flag import gram_schmidt_unitary

rng = np.random.default_rng(7)
left, right = FlagCoordinates.random(3, rng), FlagCoordinates.random(3, rng)
v = build_ckm(left, right).v
j = jarlskog_invariant(v, STANDARD_PLAQUETTE)
print("J =", j)

# All nine plaquettes carry the same J up to a checkerboard sign.
for p, value in all_plaquettes(v).items():
    print(p.rows, p.cols, f"{value:+.6e}", f"{plaquette_sign(p) * j:+.6e}")

# Quark-like hierarchical masses.
up = MassSpectrum([0.0022, 1.27, 173.0])
down = MassSpectrum([0.0047, 0.093, 4.18])
j_det, j_plaq = jarlskog_identity_check(left, right, up, down)
print("from det[M, M']:", j_det)
print("from plaquette: ", j_plaq)

# For n = 3 the determinant is purely imaginary; for n = 4 it is real.
m = build_mass_matrix(gram_schmidt_unitary(left), up)
mp = build_mass_matrix(gram_schmidt_unitary(right), down)
print(commutator_det(m, mp), det_parity_check(m, mp))

u4, u4p = (gram_schmidt_unitary(FlagCoordinates.random(4, rng)) for _ in range(2))
m4 = build_mass_matrix(u4, MassSpectrum([1.0, 2.0, 5.0, 9.0]))
m4p = build_mass_matrix(u4p, MassSpectrum([0.5, 1.5, 3.0, 7.0]))
print(commutator_det(m4, m4p), det_parity_check(m4, m4p))
