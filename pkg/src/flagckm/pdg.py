"""Standard three-angle, one-phase parametrization and its link to flag coordinates."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotRepresentableError, ValidationError
from .flag import FlagCoordinates

ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class PdgAngles:
    """Mixing angles and CP phase in radians.

    ``alpha`` and ``beta`` set the left phase matrix
    ``diag(e^{i(alpha+beta)}, e^{i(alpha-beta)}, e^{-2i alpha})``.
    """

    theta12: float
    theta13: float
    theta23: float
    delta: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        for name in ("theta12", "theta13", "theta23"):
            theta = getattr(self, name)
            if not (-math.pi / 2 < theta < math.pi / 2) or math.cos(theta) <= ANGLE_TOL:
                raise ValidationError(f"{name} = {theta} must lie in (-pi/2, pi/2) with cos > {ANGLE_TOL}")


def pdg_unitary(a):
    """Left phase diagonal times the standard 3x3 mixing matrix."""
    c12, s12 = math.cos(a.theta12), math.sin(a.theta12)
    c13, s13 = math.cos(a.theta13), math.sin(a.theta13)
    c23, s23 = math.cos(a.theta23), math.sin(a.theta23)
    e = cmath.exp(1j * a.delta)
    km = np.array(
        [
            [c12 * c13, s12 * c13, s13 / e],
            [-s12 * c23 - c12 * s23 * s13 * e, c12 * c23 - s12 * s23 * s13 * e, s23 * c13],
            [s12 * s23 - c12 * c23 * s13 * e, -c12 * s23 - s12 * c23 * s13 * e, c23 * c13],
        ],
        dtype=np.complex128,
    )
    phases = np.exp(1j * np.array([a.alpha + a.beta, a.alpha - a.beta, -2.0 * a.alpha]))
    return phases[:, None] * km


def pdg_to_coords(a):
    """Flag coordinates (x, y, z) corresponding to the angles, ignoring alpha, beta."""
    c13 = math.cos(a.theta13)
    c23, s23 = math.cos(a.theta23), math.sin(a.theta23)
    t12, t13, t23 = math.tan(a.theta12), math.tan(a.theta13), math.tan(a.theta23)
    e = cmath.exp(1j * a.delta)
    x = -(t12 * c23 / c13 + s23 * t13 * e)
    y = t12 * s23 / c13 - c23 * t13 * e
    z = -t23
    return FlagCoordinates.n3(x, y, z)


def coords_to_pdg(c, atol=ANGLE_TOL):
    """Invert :func:`pdg_to_coords`.

    With ``theta23 = -atan(z)`` the combinations ``s23 y - c23 x = t12 / c13``
    and ``-(s23 x + c23 y) = t13 e^{i delta}`` separate the remaining angles.
    The returned branch has ``theta13 >= 0`` and ``delta`` in (-pi, pi];
    ``delta`` is 0 when ``theta13`` vanishes.

    Raises
    ------
    NotRepresentableError
        If ``z`` or ``t12 / c13`` has an imaginary part beyond ``atol``.
    """
    if c.n != 3:
        raise ValidationError("coords_to_pdg needs n = 3 coordinates")
    x, y, z = (complex(v) for v in c.values())
    scale = max(1.0, abs(x), abs(y), abs(z))
    if abs(z.imag) > atol * scale:
        raise NotRepresentableError(f"z = {z} is not real; rephase the unitary first")
    theta23 = -math.atan(z.real)
    c23, s23 = math.cos(theta23), math.sin(theta23)
    ratio = s23 * y - c23 * x
    if abs(ratio.imag) > atol * scale:
        raise NotRepresentableError(
            f"s23*y - c23*x = {ratio} must be real for a standard-angle preimage"
        )
    b = -(s23 * x + c23 * y)
    t13 = abs(b)
    theta13 = math.atan(t13)
    delta = cmath.phase(b) if t13 > 0 else 0.0
    if delta == -math.pi:
        delta = math.pi
    theta12 = math.atan(ratio.real * math.cos(theta13))
    return PdgAngles(theta12, theta13, theta23, delta)


def standard_jarlskog(a):
    """c12 s12 c23 s23 c13^2 s13 sin(delta)."""
    return (
        math.cos(a.theta12) * math.sin(a.theta12)
        * math.cos(a.theta23) * math.sin(a.theta23)
        * math.cos(a.theta13) ** 2 * math.sin(a.theta13)
        * math.sin(a.delta)
    )
