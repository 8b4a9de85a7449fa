"""Mass matrices, the commutator determinant and its closed forms."""

import enum
from dataclasses import dataclass

import numpy as np

from .ckm import STANDARD_PLAQUETTE, build_ckm, jarlskog_invariant
from .errors import DegenerateSpectrumError, ParityError, ShapeError, ValidationError
from .flag import gram_schmidt_unitary
from .linalg import as_matrix, commutator, determinant, is_hermitian, is_unitary


@dataclass(frozen=True)
class MassSpectrum:
    """Strictly increasing positive masses of one quark sector."""

    masses: tuple

    def __init__(self, masses):
        masses = tuple(float(m) for m in masses)
        if len(masses) < 2:
            raise ValidationError("a spectrum needs at least two masses")
        if not all(np.isfinite(masses)) or min(masses) <= 0:
            raise ValidationError(f"masses must be finite and positive, got {masses}")
        if any(b <= a for a, b in zip(masses, masses[1:])):
            raise DegenerateSpectrumError(f"masses must be strictly increasing, got {masses}")
        object.__setattr__(self, "masses", masses)

    def __len__(self):
        return len(self.masses)

    def difference_product(self):
        """prod_{i<j} (m_j - m_i); for n = 3 this is (m3-m1)(m3-m2)(m2-m1)."""
        m = self.masses
        out = 1.0
        for i in range(len(m)):
            for j in range(i + 1, len(m)):
                out *= m[j] - m[i]
        return out

    @classmethod
    def random(cls, n, rng, low=1e-2, high=1e2):
        """Log-uniform masses on [low, high], sorted."""
        while True:
            m = np.sort(np.exp(rng.uniform(np.log(low), np.log(high), n)))
            if np.all(np.diff(m) > 0):
                return cls(m)


class Parity(enum.Enum):
    REAL = "real"
    PURE_IMAGINARY = "pure_imaginary"


def build_mass_matrix(u, s):
    """Hermitian ``U diag(s) U^dagger``, symmetrized to remove rounding drift."""
    u = as_matrix(u, "u")
    if u.shape != (len(s), len(s)):
        raise ShapeError(f"unitary {u.shape} does not match {len(s)} masses")
    if not is_unitary(u):
        raise ValidationError("u is not unitary")
    m = (u * np.asarray(s.masses)) @ u.conj().T
    return 0.5 * (m + m.conj().T)


def commutator_det(m, m_prime):
    """``det[M, M']`` for two hermitian matrices of the same size.

    The commutator and its elimination run in extended precision: the
    commutator of hierarchical mass matrices is badly conditioned, and
    complex128 alone loses up to ~1e-8 relative in the determinant.
    """
    m = as_matrix(m, "m")
    m_prime = as_matrix(m_prime, "m_prime")
    if m.shape != m_prime.shape:
        raise ShapeError(f"shapes differ: {m.shape} vs {m_prime.shape}")
    return determinant(commutator(m, m_prime, extended=True), extended=True)


def closed_form_det_n2(s, s_prime, v):
    """``(m2-m1)^2 (m2'-m1')^2 |V11|^2 |V21|^2``."""
    v = as_matrix(v, "v")
    if len(s) != 2 or len(s_prime) != 2 or v.shape != (2, 2):
        raise ShapeError("closed_form_det_n2 needs n = 2 inputs")
    (m1, m2), (p1, p2) = s.masses, s_prime.masses
    return float((m2 - m1) ** 2 * (p2 - p1) ** 2 * abs(v[0, 0]) ** 2 * abs(v[1, 0]) ** 2)


def closed_form_det_n3(s, s_prime, v):
    """Mass-difference products times ``2i Im(V11 V22 conj(V12) conj(V21))``."""
    v = as_matrix(v, "v")
    if len(s) != 3 or len(s_prime) != 3 or v.shape != (3, 3):
        raise ShapeError("closed_form_det_n3 needs n = 3 inputs")
    quartic = v[0, 0] * v[1, 1] * np.conj(v[0, 1]) * np.conj(v[1, 0])
    return complex(s.difference_product() * s_prime.difference_product() * 2j * quartic.imag)


def jarlskog_identity_check(left, right, s, s_prime, imag_rtol=1e-9):
    """Return ``(J_from_det, J_from_plaquette)`` for n = 3.

    ``J_from_det = Re(-i det[M, M'] / (2 T B))`` with ``T``, ``B`` the
    mass-difference products of the two sectors; ``J_from_plaquette`` uses
    rows (1,2) x cols (1,2) of ``V = U^dagger U'``. The imaginary residue
    of the determinant route must stay below ``imag_rtol`` relative.
    """
    if left.n != 3 or right.n != 3 or len(s) != 3 or len(s_prime) != 3:
        raise ValidationError("jarlskog_identity_check is defined for n = 3")
    t = s.difference_product()
    b = s_prime.difference_product()
    if t <= 0 or b <= 0:
        raise DegenerateSpectrumError("mass-difference products must be positive")
    m = build_mass_matrix(gram_schmidt_unitary(left), s)
    mp = build_mass_matrix(gram_schmidt_unitary(right), s_prime)
    ratio = -1j * commutator_det(m, mp) / (2.0 * t * b)
    if abs(ratio.imag) > imag_rtol * abs(ratio) + 1e-12:
        raise ParityError(f"-i det/(2TB) = {ratio} is not real")
    j_plaq = jarlskog_invariant(build_ckm(left, right).v, STANDARD_PLAQUETTE)
    return float(ratio.real), j_plaq


def det_parity_check(m, m_prime, rtol=1e-9, atol=1e-12):
    """Classify ``det[M, M']`` as real or pure imaginary.

    Raises :class:`ParityError` if the smaller component is not negligible
    (relative ``rtol``, or absolute ``atol`` when the determinant vanishes).
    """
    m = as_matrix(m, "m")
    m_prime = as_matrix(m_prime, "m_prime")
    if not (is_hermitian(m) and is_hermitian(m_prime)):
        raise ValidationError("det_parity_check needs hermitian matrices")
    d = commutator_det(m, m_prime)
    major, minor = max(abs(d.real), abs(d.imag)), min(abs(d.real), abs(d.imag))
    if minor >= max(rtol * major, atol):
        raise ParityError(f"determinant {d} is neither real nor pure imaginary")
    if major < atol:
        # numerically zero: fall back to the parity of n
        return Parity.REAL if m.shape[0] % 2 == 0 else Parity.PURE_IMAGINARY
    return Parity.REAL if abs(d.real) >= abs(d.imag) else Parity.PURE_IMAGINARY
