"""Local complex coordinates on the flag manifold U(n)/U(1)^n.

A point is represented by a unit lower-triangular frame ``F`` whose strictly
lower entries are the coordinates. Orthonormalizing the columns of ``F``
(Gram-Schmidt with positive diagonal) yields the unitary representative.

Coordinates are indexed by 1-based pairs ``(i, j)`` with ``i > j``. The
canonical ordering runs down each column of the lower triangle, so for
``n = 3`` it is ``x, y, z = (2,1), (3,1), (3,2)`` and for ``n = 4`` it is
``x1, x2, x3, y1, y2, z1 = (2,1), (3,1), (4,1), (3,2), (4,2), (4,3)``.
"""

import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import GaugeSingularError, SingularPivotError, ValidationError
from .linalg import as_matrix, identity, is_unitary, lu_unpivoted

NAMES = {
    3: ("x", "y", "z"),
    4: ("x1", "x2", "x3", "y1", "y2", "z1"),
}


def lower_indices(n):
    """1-based strictly-lower index pairs in canonical (column-major) order."""
    return [(i, j) for j in range(1, n) for i in range(j + 1, n + 1)]


@dataclass(frozen=True)
class FlagCoordinates:
    """The n(n-1)/2 complex coordinates of a point of U(n)/U(1)^n."""

    n: int
    coords: "MappingProxyType"

    def __init__(self, n, coords):
        n = int(n)
        if n < 2:
            raise ValidationError(f"n must be >= 2, got {n}")
        expected = lower_indices(n)
        clean = {}
        for key, value in dict(coords).items():
            i, j = (int(k) for k in key)
            clean[(i, j)] = complex(value)
        if sorted(clean) != sorted(expected):
            raise ValidationError(
                f"coordinates for n={n} need exactly the keys {expected}, got {sorted(clean)}"
            )
        for key, value in clean.items():
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValidationError(f"coordinate {key} is not finite")
        object.__setattr__(self, "n", n)
        object.__setattr__(
            self, "coords", MappingProxyType({k: clean[k] for k in expected})
        )

    def __getitem__(self, key):
        return self.coords[key]

    def __hash__(self):
        return hash((self.n, tuple(self.coords.items())))

    def __eq__(self, other):
        if not isinstance(other, FlagCoordinates):
            return NotImplemented
        return self.n == other.n and dict(self.coords) == dict(other.coords)

    @classmethod
    def from_values(cls, n, values):
        """Build from a flat sequence in canonical order."""
        keys = lower_indices(n)
        values = list(values)
        if len(values) != len(keys):
            raise ValidationError(f"n={n} needs {len(keys)} values, got {len(values)}")
        return cls(n, dict(zip(keys, values)))

    @classmethod
    def n3(cls, x, y, z):
        return cls.from_values(3, (x, y, z))

    @classmethod
    def n4(cls, x1, x2, x3, y1, y2, z1):
        return cls.from_values(4, (x1, x2, x3, y1, y2, z1))

    @classmethod
    def zeros(cls, n):
        return cls.from_values(n, [0.0] * (n * (n - 1) // 2))

    @classmethod
    def random(cls, n, rng, radius=1.0):
        """Coordinates drawn uniformly from the complex disc of given radius."""
        m = n * (n - 1) // 2
        r = radius * np.sqrt(rng.random(m))
        phi = 2.0 * np.pi * rng.random(m)
        return cls.from_values(n, r * np.exp(1j * phi))

    @classmethod
    def from_named(cls, n, named):
        """Build from ``{"x": ..., "y": ..., "z": ...}`` style names (n = 3 or 4)."""
        names = NAMES.get(n)
        if names is None:
            raise ValidationError(f"named coordinates exist only for n in (3, 4), got {n}")
        unknown = set(named) - set(names)
        if unknown or len(named) != len(names):
            raise ValidationError(f"n={n} needs exactly the names {names}, got {sorted(named)}")
        return cls.from_values(n, [named[k] for k in names])

    def values(self):
        """Coordinates as a complex array in canonical order."""
        return np.array(list(self.coords.values()), dtype=np.complex128)

    def named(self):
        names = NAMES.get(self.n)
        if names is None:
            raise ValidationError(f"no names for n={self.n}")
        return dict(zip(names, self.coords.values()))


@dataclass(frozen=True)
class NormalizationFactors:
    deltas: tuple


@dataclass(frozen=True)
class KahlerData:
    potential: float
    volume_density: float


def unipotent_frame(c):
    """Unit lower-triangular matrix carrying the coordinates below the diagonal."""
    f = identity(c.n)
    for (i, j), value in c.coords.items():
        f[i - 1, j - 1] = value
    return f


def gram_schmidt_unitary(c):
    """Orthonormalize the columns of the unipotent frame, any ``n >= 2``.

    Uses modified Gram-Schmidt with one reorthogonalization pass; the
    diagonal of the implied triangular factor is kept real positive, so the
    result is the unique representative with that normalization.
    """
    frame = unipotent_frame(c)
    n = c.n
    q = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        v = frame[:, k].copy()
        for _ in range(2):
            for j in range(k):
                v -= np.vdot(q[:, j], v) * q[:, j]
        q[:, k] = v / np.linalg.norm(v)
    return q


def _require_n(c, n):
    if c.n != n:
        raise ValidationError(f"expected n={n} coordinates, got n={c.n}")


def _abs2(z):
    return z.real * z.real + z.imag * z.imag


def closed_form_unitary_n3(c):
    """Explicit 3x3 unitary in terms of (x, y, z)."""
    _require_n(c, 3)
    x, y, z = c.values()
    xc, yc, zc = x.conjugate(), y.conjugate(), z.conjugate()
    w = x * z - y
    d1 = 1.0 + _abs2(x) + _abs2(y)
    d2 = 1.0 + _abs2(z) + _abs2(w)
    s1, s12, s2 = 1.0 / math.sqrt(d1), 1.0 / math.sqrt(d1 * d2), 1.0 / math.sqrt(d2)
    return np.array(
        [
            [s1, -(xc + yc * z) * s12, (xc * zc - yc) * s2],
            [x * s1, (1.0 - w * yc) * s12, -zc * s2],
            [y * s1, (z + xc * w) * s12, s2],
        ],
        dtype=np.complex128,
    )


def _n4_columns(c):
    """Unnormalized n=4 columns plus (d1, d2, d3).

    Returns the 4x4 matrix whose columns are (1, x1, x2, x3),
    (-T, d1 - x1 T, y1 d1 - x2 T, y2 d1 - x3 T), (a1..a4) and (b1..b4).
    """
    x1, x2, x3, y1, y2, z1 = c.values()
    x1c, x2c, x3c = x1.conjugate(), x2.conjugate(), x3.conjugate()
    y1c, y2c, z1c = y1.conjugate(), y2.conjugate(), z1.conjugate()

    d1 = 1.0 + _abs2(x1) + _abs2(x2) + _abs2(x3)
    d2 = (
        1.0
        + _abs2(y1)
        + _abs2(y2)
        + _abs2(x2 - x1 * y1)
        + _abs2(x3 - x1 * y2)
        + _abs2(x2 * y2 - x3 * y1)
    )
    d3 = (
        1.0
        + _abs2(z1)
        + _abs2(y2 - y1 * z1)
        + _abs2(x1 * (y2 - y1 * z1) - (x3 - x2 * z1))
    )

    t = x1c + x2c * y1 + x3c * y2
    tc = t.conjugate()
    col2 = (-t, d1 - x1 * t, y1 * d1 - x2 * t, y2 * d1 - x3 * t)

    p = x2c + z1 * x3c
    q = (y1c * d1 - x2c * tc) + z1 * (y2c * d1 - x3c * tc)
    a1 = -p * d2 + q * t
    a2 = -p * x1 * d2 - q * (d1 - x1 * t)
    a3 = d1 * d2 - p * x2 * d2 - q * (y1 * d1 - x2 * t)
    a4 = z1 * d1 * d2 - p * x3 * d2 - q * (y2 * d1 - x3 * t)

    b1 = -x3c + x1c * y2c + x2c * z1c - x1c * y1c * z1c
    b2 = -y2c + y1c * z1c
    b3 = -z1c
    b4 = 1.0

    cols = np.array(
        [
            [1.0, col2[0], a1, b1],
            [x1, col2[1], a2, b2],
            [x2, col2[2], a3, b3],
            [x3, col2[3], a4, b4],
        ],
        dtype=np.complex128,
    )
    return cols, (d1, d2, d3)


def _n4_scales(d1, d2, d3):
    return np.array(
        [
            1.0 / math.sqrt(d1),
            1.0 / math.sqrt(d1 * d2),
            1.0 / (d1 * math.sqrt(d2 * d3)),
            1.0 / math.sqrt(d3),
        ]
    )


def closed_form_unitary_n4(c):
    """Explicit 4x4 unitary in terms of (x1, x2, x3, y1, y2, z1)."""
    _require_n(c, 4)
    cols, deltas = _n4_columns(c)
    return cols * _n4_scales(*deltas)


def normalization_factors(c):
    """The Delta normalization sequence (n = 3 or 4)."""
    if c.n == 3:
        x, y, z = c.values()
        return NormalizationFactors(
            (float(1.0 + _abs2(x) + _abs2(y)), float(1.0 + _abs2(z) + _abs2(x * z - y)))
        )
    if c.n == 4:
        _, deltas = _n4_columns(c)
        return NormalizationFactors(tuple(float(d) for d in deltas))
    raise NotImplementedError(f"closed-form normalization factors exist only for n in (3, 4), got {c.n}")


def kahler_data(c):
    """Kahler potential log(D1 D2) and volume density 2 / (D1 D2)^2, n = 3 only."""
    if c.n != 3:
        raise NotImplementedError("Kahler data is only available for n = 3")
    d1, d2 = normalization_factors(c).deltas
    prod = d1 * d2
    return KahlerData(potential=math.log(prod), volume_density=float(2.0 / prod**2))


def coords_from_unitary(w, unitary_atol=1e-8, rtol=None):
    """Recover coordinates from a unitary, discarding right diagonal phases.

    The coordinates are the strictly lower entries of ``L`` in the unpivoted
    factorization ``w = L R``.

    Raises
    ------
    ValidationError
        If ``w`` is not unitary to ``unitary_atol`` (Frobenius).
    GaugeSingularError
        If a leading principal minor of ``w`` vanishes.
    """
    w = as_matrix(w, "w")
    if w.shape[0] != w.shape[1] or w.shape[0] < 2:
        raise ValidationError(f"expected a square matrix of size >= 2, got {w.shape}")
    if not is_unitary(w, atol=unitary_atol):
        raise ValidationError("matrix is not unitary")
    kwargs = {} if rtol is None else {"rtol": rtol}
    try:
        lower, _ = lu_unpivoted(w, **kwargs)
    except SingularPivotError as exc:
        raise GaugeSingularError(
            f"unitary is outside the coordinate chart: {exc}", index=exc.index
        ) from exc
    n = w.shape[0]
    return FlagCoordinates(n, {(i, j): lower[i - 1, j - 1] for i, j in lower_indices(n)})
