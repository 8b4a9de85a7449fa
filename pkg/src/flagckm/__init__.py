"""Geometric (flag-manifold) parametrization of quark mixing matrices.

Two unitaries U, U' are described by local complex coordinates of
U(n)/U(1)^n; the mixing matrix is V = U^dagger U'. The package provides the
closed forms for n = 3 and 4, a Gram-Schmidt path for any n, the Jarlskog
invariant and commutator-determinant identities, the standard-angle
correspondence, and a least-squares fit of coordinates to invariants.
"""

__version__ = "0.1.0"

from .ckm import (
    DEFAULT_PLAQUETTE,
    STANDARD_PLAQUETTE,
    CkmResult,
    Plaquette,
    all_plaquettes,
    build_ckm,
    closed_form_f_n3,
    closed_form_f_n4,
    jarlskog_from_coords,
    jarlskog_invariant,
    plaquette_sign,
    rephase,
)
from .errors import (
    DegenerateSpectrumError,
    FlagCkmError,
    GaugeSingularError,
    NotRepresentableError,
    ParityError,
    ShapeError,
    SingularPivotError,
    ValidationError,
)
from .fitting import FitProblem, FitResult, fit, residuals
from .flag import (
    FlagCoordinates,
    KahlerData,
    NormalizationFactors,
    closed_form_unitary_n3,
    closed_form_unitary_n4,
    coords_from_unitary,
    gram_schmidt_unitary,
    kahler_data,
    normalization_factors,
    unipotent_frame,
)
from .jarlskog_det import (
    MassSpectrum,
    Parity,
    build_mass_matrix,
    closed_form_det_n2,
    closed_form_det_n3,
    commutator_det,
    det_parity_check,
    jarlskog_identity_check,
)
from .pdg import PdgAngles, coords_to_pdg, pdg_to_coords, pdg_unitary
