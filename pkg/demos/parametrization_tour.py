# Flag coordinates and the unitaries they describe
#
# A unitary modulo right phases is fixed by the strictly-lower entries of a
# unit lower-triangular frame. Orthonormalizing the frame's columns gives
# the unitary back.

import numpy as np

from flagckm import FlagCoordinates, coords_from_unitary, gram_schmidt_unitary
from flagckm.flag import closed_form_unitary_n3, kahler_data, normalization_factors

rng = np.random.default_rng(1)

# Three complex numbers x, y, z describe a 3x3 unitary up to phases.
c = FlagCoordinates.random(3, rng, radius=2.0)
print(c.named())

u = gram_schmidt_unitary(c)
print(np.round(u, 4))
print("unitarity defect:", np.abs(u.conj().T @ u - np.eye(3)).max())

# The closed form needs no loop at all and agrees to rounding.
print("closed form vs Gram-Schmidt:", np.abs(closed_form_unitary_n3(c) - u).max())

# The column norms are the normalization factors; their log product is
# the Kahler potential of the flag manifold.
print("deltas:", normalization_factors(c).deltas)
print(kahler_data(c))

# Reading the coordinates back off a unitary is an unpivoted LU.
# Right phases drop out.
phased = u * np.exp(1j * np.array([0.3, -1.1, 2.0]))
back = coords_from_unitary(phased)
print("round trip error:", np.abs(back.values() - c.values()).max())

# Any n works through Gram-Schmidt.
big = FlagCoordinates.random(6, rng)
print("n=6 round trip:", np.abs(coords_from_unitary(gram_schmidt_unitary(big)).values() - big.values()).max())
