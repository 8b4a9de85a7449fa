import numpy as np
import pytest

from conftest import charpoly, random_unitary
from flagckm.ckm import STANDARD_PLAQUETTE, jarlskog_invariant
from flagckm.errors import DegenerateSpectrumError, ParityError, ShapeError, ValidationError
from flagckm.flag import FlagCoordinates, gram_schmidt_unitary
from flagckm.jarlskog_det import (
    MassSpectrum,
    Parity,
    build_mass_matrix,
    closed_form_det_n2,
    closed_form_det_n3,
    commutator_det,
    det_parity_check,
    jarlskog_identity_check,
)


def unitary_pair(rng, n):
    if n == 2:
        return random_unitary(rng, 2), random_unitary(rng, 2)
    return (
        gram_schmidt_unitary(FlagCoordinates.random(n, rng, 3.0)),
        gram_schmidt_unitary(FlagCoordinates.random(n, rng, 3.0)),
    )


class TestMassSpectrum:
    def test_valid(self):
        s = MassSpectrum([1, 2, 4])
        assert s.masses == (1.0, 2.0, 4.0)
        assert s.difference_product() == (4 - 1) * (4 - 2) * (2 - 1)

    @pytest.mark.parametrize("masses", [[1, 1, 2], [2, 1, 3]])
    def test_not_increasing(self, masses):
        with pytest.raises(DegenerateSpectrumError):
            MassSpectrum(masses)

    def test_non_positive(self):
        with pytest.raises(ValidationError):
            MassSpectrum([0, 1, 2])

    def test_random_log_uniform(self, rng):
        for _ in range(100):
            s = MassSpectrum.random(3, rng)
            assert 1e-2 <= s.masses[0] < s.masses[1] < s.masses[2] <= 1e2


class TestBuildMassMatrix:
    def test_identity(self):
        s = MassSpectrum([1, 2, 3])
        np.testing.assert_array_equal(build_mass_matrix(np.eye(3), s), np.diag([1, 2, 3]))

    def test_trace_and_hermiticity(self, rng):
        s = MassSpectrum([0.5, 2, 7])
        for _ in range(50):
            m = build_mass_matrix(random_unitary(rng, 3), s)
            assert np.trace(m) == pytest.approx(9.5, abs=1e-12)
            np.testing.assert_array_equal(m, m.conj().T)

    def test_spectrum_from_characteristic_polynomial(self, rng):
        s = MassSpectrum([1, 2, 3])
        for _ in range(50):
            m = build_mass_matrix(gram_schmidt_unitary(FlagCoordinates.random(3, rng, 3.0)), s)
            roots = np.sort(np.roots(charpoly(m)).real)
            np.testing.assert_allclose(roots, [1, 2, 3], atol=1e-10)

    def test_errors(self, rng):
        with pytest.raises(ShapeError):
            build_mass_matrix(np.eye(2), MassSpectrum([1, 2, 3]))
        with pytest.raises(ValidationError):
            build_mass_matrix(2 * np.eye(3), MassSpectrum([1, 2, 3]))


class TestCommutatorDet:
    def test_commuting_pairs(self, rng):
        u = random_unitary(rng, 3)
        s, sp = MassSpectrum([1, 2, 3]), MassSpectrum([1, 4, 9])
        m = build_mass_matrix(u, s)
        assert commutator_det(m, np.eye(3)) == 0
        assert abs(commutator_det(m, build_mass_matrix(u, sp))) < 1e-10

    def test_n3_pure_imaginary(self, rng):
        for _ in range(200):
            u, up = unitary_pair(rng, 3)
            d = commutator_det(
                build_mass_matrix(u, MassSpectrum.random(3, rng)),
                build_mass_matrix(up, MassSpectrum.random(3, rng)),
            )
            assert abs(d.real) <= 1e-10 * abs(d)

    def test_unitary_conjugation_invariance(self, rng):
        for _ in range(100):
            u, up = unitary_pair(rng, 3)
            m = build_mass_matrix(u, MassSpectrum.random(3, rng))
            mp = build_mass_matrix(up, MassSpectrum.random(3, rng))
            w = random_unitary(rng, 3)
            d = commutator_det(m, mp)
            d_conj = commutator_det(w @ m @ w.conj().T, w @ mp @ w.conj().T)
            assert abs(d - d_conj) <= 1e-10 * abs(d)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            commutator_det(np.eye(2), np.eye(3))


class TestClosedFormDeterminants:
    def test_n2_identity(self):
        assert closed_form_det_n2(MassSpectrum([1, 2]), MassSpectrum([1, 3]), np.eye(2)) == 0

    def test_n2_degenerate_limit(self, rng):
        v = random_unitary(rng, 2)
        values = [
            closed_form_det_n2(MassSpectrum([1, 1 + eps]), MassSpectrum([1, 3]), v)
            for eps in (1e-1, 1e-3, 1e-6)
        ]
        assert values[0] > values[1] > values[2] > 0
        assert values[2] < 1e-10

    def test_n2_matches_numeric_including_sign(self, rng):
        for _ in range(300):
            u, up = unitary_pair(rng, 2)
            s, sp = MassSpectrum.random(2, rng), MassSpectrum.random(2, rng)
            d = commutator_det(build_mass_matrix(u, s), build_mass_matrix(up, sp))
            closed = closed_form_det_n2(s, sp, u.conj().T @ up)
            assert closed >= 0
            assert abs(closed - d) <= 1e-10 * abs(d)

    def test_n3_zero_cases(self, rng):
        s, sp = MassSpectrum([1, 2, 3]), MassSpectrum([1, 4, 9])
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        assert closed_form_det_n3(s, sp, q) == 0
        assert closed_form_det_n3(s, sp, np.eye(3)) == 0

    def test_n3_matches_numeric(self, rng):
        s, sp = MassSpectrum([1, 2, 3]), MassSpectrum([1, 4, 9])
        for _ in range(300):
            u, up = unitary_pair(rng, 3)
            d = commutator_det(build_mass_matrix(u, s), build_mass_matrix(up, sp))
            closed = closed_form_det_n3(s, sp, u.conj().T @ up)
            assert abs(closed - d) <= 1e-9 * abs(d)

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            closed_form_det_n2(MassSpectrum([1, 2, 3]), MassSpectrum([1, 2]), np.eye(2))
        with pytest.raises(ShapeError):
            closed_form_det_n3(MassSpectrum([1, 2]), MassSpectrum([1, 2]), np.eye(2))


class TestJarlskogIdentity:
    def test_equal_pair(self, rng):
        c = FlagCoordinates.random(3, rng, 3.0)
        j_det, j_plaq = jarlskog_identity_check(c, c, MassSpectrum([1, 2, 3]), MassSpectrum([1, 4, 9]))
        assert j_det == pytest.approx(0, abs=1e-12)
        assert j_plaq == pytest.approx(0, abs=1e-15)

    def test_real_coordinates(self, rng):
        a = FlagCoordinates.from_values(3, rng.uniform(-3, 3, 3))
        b = FlagCoordinates.from_values(3, rng.uniform(-3, 3, 3))
        j_det, j_plaq = jarlskog_identity_check(a, b, MassSpectrum([1, 2, 3]), MassSpectrum([1, 4, 9]))
        assert j_det == pytest.approx(0, abs=1e-12)
        assert j_plaq == 0

    def test_random(self, rng):
        for _ in range(300):
            a, b = FlagCoordinates.random(3, rng, 3.0), FlagCoordinates.random(3, rng, 3.0)
            s, sp = MassSpectrum.random(3, rng), MassSpectrum.random(3, rng)
            j_det, j_plaq = jarlskog_identity_check(a, b, s, sp)
            assert abs(j_det - j_plaq) <= max(1e-9 * abs(j_plaq), 1e-12)

    def test_sign_fixed_by_ordering(self):
        # reversing which sector is "primed" flips J on both routes together
        a = FlagCoordinates.n3(0.3 + 0.2j, -0.4j, 0.7)
        b = FlagCoordinates.n3(-0.1, 0.5 + 0.5j, 0.2j)
        s, sp = MassSpectrum([1, 2, 3]), MassSpectrum([1, 4, 9])
        forward = jarlskog_identity_check(a, b, s, sp)
        backward = jarlskog_identity_check(b, a, sp, s)
        assert forward[0] == pytest.approx(-backward[0], rel=1e-10)
        assert forward[1] == pytest.approx(-backward[1], rel=1e-10)

    def test_requires_n3(self):
        z = FlagCoordinates.zeros(4)
        with pytest.raises(ValidationError):
            jarlskog_identity_check(z, z, MassSpectrum([1, 2, 3, 4]), MassSpectrum([1, 2, 3, 4]))


class TestParity:
    @pytest.mark.parametrize(
        "n, expected", [(2, Parity.REAL), (3, Parity.PURE_IMAGINARY), (4, Parity.REAL)]
    )
    def test_random_pairs(self, rng, n, expected):
        for _ in range(100):
            u, up = unitary_pair(rng, n)
            m = build_mass_matrix(u, MassSpectrum.random(n, rng))
            mp = build_mass_matrix(up, MassSpectrum.random(n, rng))
            assert det_parity_check(m, mp) is expected

    def test_vanishing_determinant_uses_size(self):
        m = np.diag([1.0, 2.0, 3.0])
        assert det_parity_check(m, m) is Parity.PURE_IMAGINARY

    def test_ambiguous(self, monkeypatch):
        import flagckm.jarlskog_det as mod

        monkeypatch.setattr(mod, "commutator_det", lambda m, mp: 1 + 1j)
        with pytest.raises(ParityError):
            det_parity_check(np.eye(2), np.eye(2))

    def test_requires_hermitian(self):
        with pytest.raises(ValidationError):
            det_parity_check(np.array([[0, 1], [0, 0]]), np.eye(2))


def test_identity_uses_standard_plaquette(rng):
    a, b = FlagCoordinates.random(3, rng, 3.0), FlagCoordinates.random(3, rng, 3.0)
    _, j_plaq = jarlskog_identity_check(a, b, MassSpectrum([1, 2, 3]), MassSpectrum([1, 4, 9]))
    v = gram_schmidt_unitary(a).conj().T @ gram_schmidt_unitary(b)
    assert j_plaq == jarlskog_invariant(v, STANDARD_PLAQUETTE)
