"""CKM matrix from two flag coordinate sets, and the Jarlskog invariant."""

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, ValidationError
from .flag import (
    NormalizationFactors,
    _n4_columns,
    _n4_scales,
    gram_schmidt_unitary,
    normalization_factors,
    unipotent_frame,
)
from .linalg import as_matrix


class NotAnInvariantWarning(UserWarning):
    """A plaquette value was requested for n != 3, where it is not a single invariant."""


@dataclass(frozen=True)
class Plaquette:
    """Rows ``(i, k)`` and columns ``(j, l)``, 1-based, ``i < k`` and ``j < l``."""

    rows: tuple
    cols: tuple

    def __post_init__(self):
        i, k = self.rows
        j, l = self.cols
        if not (1 <= i < k and 1 <= j < l):
            raise ValidationError(f"plaquette needs 1 <= i < k, 1 <= j < l; got {self}")


#: Rows (1,3) x cols (1,3): Im(V11 V33 conj(V13) conj(V31)).
DEFAULT_PLAQUETTE = Plaquette((1, 3), (1, 3))
#: The (1,2) x (1,2) choice, Im(V11 V22 conj(V12) conj(V21)).
STANDARD_PLAQUETTE = Plaquette((1, 2), (1, 2))


@dataclass(frozen=True)
class CkmResult:
    """``v = diag(left_scales) @ f @ diag(right_scales)``.

    ``left_deltas`` / ``right_deltas`` are only set for n in (3, 4), where
    the entry matrix ``f`` comes from closed forms.
    """

    v: np.ndarray
    f: np.ndarray
    left_scales: np.ndarray
    right_scales: np.ndarray
    left_deltas: NormalizationFactors = None
    right_deltas: NormalizationFactors = None


def _n3_scales(c):
    d1, d2 = normalization_factors(c).deltas
    return np.array([1.0 / math.sqrt(d1), 1.0 / math.sqrt(d1 * d2), 1.0 / math.sqrt(d2)])


def _generic_scales(c, u):
    # |V~_k| is the k-th diagonal entry of U^dagger F.
    r = u.conj().T @ unipotent_frame(c)
    return 1.0 / np.real(np.diag(r))


def closed_form_f_n3(left, right):
    """The nine entry polynomials f_ij in (x, y, z; u, v, w)."""
    if left.n != 3 or right.n != 3:
        raise ValidationError("closed_form_f_n3 needs n = 3 coordinates on both sides")
    x, y, z = left.values()
    u, v, w = right.values()
    xc, yc, zc = x.conjugate(), y.conjugate(), z.conjugate()
    uc, vc, wc = u.conjugate(), v.conjugate(), w.conjugate()
    xzy = x * z - y
    uwv = u * w - v
    # recurring factors
    r1 = uc + vc * w          # minus first entry of the primed column 2
    r2 = 1.0 - uwv * vc
    r3 = w + uc * uwv
    r4 = uc * wc - vc
    l1 = x + y * zc
    l2 = 1.0 - (xc * zc - yc) * y
    l3 = zc + x * (xc * zc - yc)

    f11 = 1.0 + xc * u + yc * v
    f12 = -r1 + xc * r2 + yc * r3
    f13 = r4 - xc * wc + yc
    f21 = -l1 + l2 * u + l3 * v
    f22 = l1 * r1 + l2 * r2 + l3 * r3
    f23 = -l1 * r4 - l2 * wc + l3
    f31 = xzy - z * u + v
    f32 = -xzy * r1 - z * r2 + r3
    f33 = xzy * r4 + z * wc + 1.0
    return np.array(
        [[f11, f12, f13], [f21, f22, f23], [f31, f32, f33]], dtype=np.complex128
    )


def closed_form_f_n4(left, right):
    """4x4 entry matrix: adjoint of the left column matrix times the right one."""
    if left.n != 4 or right.n != 4:
        raise ValidationError("closed_form_f_n4 needs n = 4 coordinates on both sides")
    cols_l, _ = _n4_columns(left)
    cols_r, _ = _n4_columns(right)
    return cols_l.conj().T @ cols_r


def build_ckm(left, right):
    """CKM matrix ``V = U(left)^dagger U(right)`` with its entry decomposition."""
    if left.n != right.n:
        raise ShapeError(f"coordinate sizes differ: {left.n} vs {right.n}")
    n = left.n
    u_left = gram_schmidt_unitary(left)
    u_right = gram_schmidt_unitary(right)
    v = u_left.conj().T @ u_right
    if n == 3:
        sl, sr = _n3_scales(left), _n3_scales(right)
        f = closed_form_f_n3(left, right)
        dl, dr = normalization_factors(left), normalization_factors(right)
    elif n == 4:
        dl, dr = normalization_factors(left), normalization_factors(right)
        sl, sr = _n4_scales(*dl.deltas), _n4_scales(*dr.deltas)
        f = closed_form_f_n4(left, right)
    else:
        sl, sr = _generic_scales(left, u_left), _generic_scales(right, u_right)
        f = v / np.outer(sl, sr)
        dl = dr = None
    return CkmResult(v=v, f=f, left_scales=sl, right_scales=sr, left_deltas=dl, right_deltas=dr)


def plaquette_product(v, p):
    """Complex quartic ``V_ij V_kl conj(V_il) conj(V_kj)``."""
    i, k = p.rows
    j, l = p.cols
    n_rows, n_cols = v.shape
    if k > n_rows or l > n_cols:
        raise IndexError(f"plaquette {p} out of range for a {v.shape} matrix")
    i, k, j, l = i - 1, k - 1, j - 1, l - 1
    return v[i, j] * v[k, l] * np.conj(v[i, l]) * np.conj(v[k, j])


def jarlskog_invariant(v, p=DEFAULT_PLAQUETTE):
    """Imaginary part of the plaquette quartic.

    For n = 3 every plaquette gives the same value up to the sign returned
    by :func:`plaquette_sign`. For other sizes the value is returned but a
    :class:`NotAnInvariantWarning` is issued; use :func:`all_plaquettes`.
    """
    v = as_matrix(v, "v")
    if v.shape != (3, 3):
        warnings.warn(
            f"plaquette value of a {v.shape} matrix is not a single invariant",
            NotAnInvariantWarning,
            stacklevel=2,
        )
    return float(np.imag(plaquette_product(v, p)))


def all_plaquettes(v):
    """``{Plaquette: Im(quartic)}`` over every row pair and column pair."""
    v = as_matrix(v, "v")
    n_rows, n_cols = v.shape
    out = {}
    for rows in itertools.combinations(range(1, n_rows + 1), 2):
        for cols in itertools.combinations(range(1, n_cols + 1), 2):
            p = Plaquette(rows, cols)
            out[p] = float(np.imag(plaquette_product(v, p)))
    return out


def plaquette_sign(p):
    """Sign relating a 3x3 plaquette to the (1,2)x(1,2) one.

    Equal to ``(-1)**(m + n)`` where ``m`` and ``n`` are the row and column
    left out of the plaquette.
    """
    (m,) = {1, 2, 3} - set(p.rows)
    (n,) = {1, 2, 3} - set(p.cols)
    return 1 if (m + n) % 2 == 0 else -1


def jarlskog_from_coords(left, right):
    """Rows (1,3) x cols (1,3) invariant evaluated directly from coordinates (n = 3)."""
    if left.n != 3 or right.n != 3:
        raise ValidationError("jarlskog_from_coords needs n = 3 coordinates on both sides")
    x, y, z = left.values()
    u, v, w = right.values()
    xc, yc, zc = x.conjugate(), y.conjugate(), z.conjugate()
    uc, vc, wc = u.conjugate(), v.conjugate(), w.conjugate()
    num = (
        (1.0 + xc * u + yc * v)
        * (1.0 + z * wc + (x * z - y) * (uc * wc - vc))
        * (xc * zc - yc - zc * uc + vc)
        * (u * w - v - x * w + y)
    )
    d1, d2 = normalization_factors(left).deltas
    e1, e2 = normalization_factors(right).deltas
    return float(num.imag / (d1 * d2 * e1 * e2))


def rephase(v, left_phases, right_phases):
    """``diag(exp(i left)) @ v @ diag(exp(i right))``."""
    v = as_matrix(v, "v")
    left_phases = np.asarray(left_phases, dtype=float)
    right_phases = np.asarray(right_phases, dtype=float)
    if left_phases.shape != (v.shape[0],) or right_phases.shape != (v.shape[1],):
        raise ShapeError(
            f"phase lengths {left_phases.shape}, {right_phases.shape} do not match {v.shape}"
        )
    return np.exp(1j * left_phases)[:, None] * v * np.exp(1j * right_phases)[None, :]

