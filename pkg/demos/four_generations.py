# Four generations
#
# Six complex coordinates per sector. The closed-form unitary and the CKM
# entry formulas carry over; a 4x4 matrix has several independent plaquettes.

import numpy as np

from flagckm import FlagCoordinates, build_ckm, gram_schmidt_unitary
from flagckm.ckm import all_plaquettes, closed_form_f_n4
from flagckm.flag import closed_form_unitary_n4

rng = np.random.default_rng(4)
left, right = FlagCoordinates.random(4, rng), FlagCoordinates.random(4, rng)
print(left.named())

print("closed form vs Gram-Schmidt:", np.abs(closed_form_unitary_n4(left) - gram_schmidt_unitary(left)).max())

res = build_ckm(left, right)
rebuilt = res.left_scales[:, None] * closed_form_f_n4(left, right) * res.right_scales[None, :]
print("f-matrix reconstruction:", np.abs(rebuilt - res.v).max())

values = np.array(list(all_plaquettes(res.v).values()))
print(len(values), "plaquettes, distinct |values| (rounded):", np.unique(np.round(np.abs(values), 10)).size)
