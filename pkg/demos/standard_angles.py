# Standard mixing angles as flag coordinates
#
# The familiar three angles and one phase map to explicit coordinates.
# The map can be inverted when z and one combination of x, y are real.

import math

import numpy as np

from flagckm import coords_from_unitary
from flagckm.ckm import jarlskog_invariant
from flagckm.pdg import PdgAngles, coords_to_pdg, pdg_to_coords, pdg_unitary, standard_jarlskog

angles = PdgAngles(theta12=0.2274, theta13=0.00370, theta23=0.0415, delta=1.14)
c = pdg_to_coords(angles)
print(c.named())

# Extraction from the standard matrix gives the same numbers.
print("agreement:", np.abs(coords_from_unitary(pdg_unitary(angles)).values() - c.values()).max())

# Maximal 2-3 mixing sits at z = -1.
print(pdg_to_coords(PdgAngles(0.2, 0.01, math.pi / 4, 0.5)).named()["z"])

# Back to angles.
print(coords_to_pdg(c))

# The standard J formula and the plaquette agree.
print(standard_jarlskog(angles), jarlskog_invariant(pdg_unitary(angles)))
