import itertools
import math

import numpy as np
import pytest

from conftest import random_unitary
from flagckm.ckm import (
    DEFAULT_PLAQUETTE,
    STANDARD_PLAQUETTE,
    NotAnInvariantWarning,
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
from flagckm.errors import ShapeError, ValidationError
from flagckm.flag import FlagCoordinates, gram_schmidt_unitary, normalization_factors


def pair(rng, n, radius=3.0):
    return FlagCoordinates.random(n, rng, radius), FlagCoordinates.random(n, rng, radius)


class TestBuildCkm:
    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_same_coordinates_give_identity(self, rng, n):
        c = FlagCoordinates.random(n, rng, 3.0)
        assert np.abs(build_ckm(c, c).v - np.eye(n)).max() < 1e-12

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_zero_left(self, rng, n):
        c = FlagCoordinates.random(n, rng, 3.0)
        np.testing.assert_allclose(
            build_ckm(FlagCoordinates.zeros(n), c).v, gram_schmidt_unitary(c), atol=1e-15
        )

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_decomposition(self, rng, n):
        for _ in range(50):
            res = build_ckm(*pair(rng, n))
            rebuilt = res.left_scales[:, None] * res.f * res.right_scales[None, :]
            assert np.abs(rebuilt - res.v).max() < 1e-11
            assert np.linalg.norm(res.v.conj().T @ res.v - np.eye(n)) < 1e-12

    def test_deltas_only_for_closed_forms(self, rng):
        assert build_ckm(*pair(rng, 3)).left_deltas is not None
        assert build_ckm(*pair(rng, 6)).left_deltas is None

    def test_size_mismatch(self):
        with pytest.raises(ShapeError):
            build_ckm(FlagCoordinates.zeros(3), FlagCoordinates.zeros(4))


class TestClosedFormF:
    def test_n3_zero(self):
        z = FlagCoordinates.zeros(3)
        np.testing.assert_array_equal(closed_form_f_n3(z, z), np.eye(3))

    def test_n3_equal_pair(self, rng):
        c = FlagCoordinates.random(3, rng, 3.0)
        d1, d2 = normalization_factors(c).deltas
        expected = np.diag([d1, d1 * d2, d2])
        assert np.abs(closed_form_f_n3(c, c) - expected).max() < 1e-10 * d1 * d2

    def test_n3_single_entry(self):
        x, y, u, v = 0.5j, -1 + 1j, 2.0, 0.3 - 0.1j
        f = closed_form_f_n3(FlagCoordinates.n3(x, y, 0), FlagCoordinates.n3(u, v, 0))
        assert f[0, 0] == pytest.approx(1 + np.conj(x) * u + np.conj(y) * v)

    def test_n3_against_product(self, rng):
        for _ in range(300):
            a, b = pair(rng, 3)
            res = build_ckm(a, b)
            v_closed = res.left_scales[:, None] * closed_form_f_n3(a, b) * res.right_scales
            assert np.abs(v_closed - res.v).max() < 1e-12

    def test_n4_zero(self):
        z = FlagCoordinates.zeros(4)
        np.testing.assert_array_equal(closed_form_f_n4(z, z), np.eye(4))

    def test_n4_against_product(self, rng):
        for _ in range(300):
            a, b = pair(rng, 4)
            res = build_ckm(a, b)
            v_closed = res.left_scales[:, None] * closed_form_f_n4(a, b) * res.right_scales
            assert np.abs(v_closed - res.v).max() < 1e-11

    def test_wrong_sizes(self):
        with pytest.raises(ValidationError):
            closed_form_f_n3(FlagCoordinates.zeros(4), FlagCoordinates.zeros(4))
        with pytest.raises(ValidationError):
            closed_form_f_n4(FlagCoordinates.zeros(3), FlagCoordinates.zeros(3))


class TestPlaquette:
    def test_validation(self):
        with pytest.raises(ValidationError):
            Plaquette((2, 1), (1, 2))
        with pytest.raises(ValidationError):
            Plaquette((0, 1), (1, 2))

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            jarlskog_invariant(np.eye(3), Plaquette((1, 4), (1, 2)))

    def test_sign_pattern(self):
        # left-out row/column parity
        assert plaquette_sign(STANDARD_PLAQUETTE) == 1
        assert plaquette_sign(DEFAULT_PLAQUETTE) == 1
        assert plaquette_sign(Plaquette((1, 2), (1, 3))) == -1
        assert plaquette_sign(Plaquette((2, 3), (2, 3))) == 1


class TestJarlskogInvariant:
    def test_identity(self):
        for p in all_plaquettes(np.eye(3)):
            assert jarlskog_invariant(np.eye(3), p) == 0

    def test_real_orthogonal(self, rng):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        assert all(v == 0 for v in all_plaquettes(q).values())

    def test_all_plaquettes_equal_modulus(self, rng):
        for _ in range(300):
            v = build_ckm(*pair(rng, 3)).v
            values = all_plaquettes(v)
            assert len(values) == 9
            j = jarlskog_invariant(v, STANDARD_PLAQUETTE)
            for p, val in values.items():
                assert abs(abs(val) - abs(j)) < 1e-12
                assert abs(val - plaquette_sign(p) * j) < 1e-12

    def test_plaquette_quartic_against_explicit_indexing(self, rng):
        v = random_unitary(rng, 3)
        for (i, k), (j, l) in itertools.product(itertools.combinations(range(3), 2), repeat=2):
            direct = np.imag(v[i, j] * v[k, l] * np.conj(v[i, l]) * np.conj(v[k, j]))
            assert jarlskog_invariant(v, Plaquette((i + 1, k + 1), (j + 1, l + 1))) == direct

    def test_bound(self, rng):
        cap = 1 / (6 * math.sqrt(3)) + 1e-12
        for _ in range(500):
            assert abs(jarlskog_invariant(build_ckm(*pair(rng, 3)).v)) <= cap
            assert abs(jarlskog_invariant(random_unitary(rng, 3))) <= cap

    def test_n4_warns_and_lists_36(self, rng):
        v = build_ckm(*pair(rng, 4)).v
        with pytest.warns(NotAnInvariantWarning):
            jarlskog_invariant(v)
        assert len(all_plaquettes(v)) == 36


class TestJarlskogFromCoords:
    def test_equal_pair(self, rng):
        c = FlagCoordinates.random(3, rng, 3.0)
        assert jarlskog_from_coords(c, c) == pytest.approx(0, abs=1e-15)

    def test_real_coordinates(self, rng):
        a = FlagCoordinates.from_values(3, rng.uniform(-3, 3, 3))
        b = FlagCoordinates.from_values(3, rng.uniform(-3, 3, 3))
        assert jarlskog_from_coords(a, b) == 0

    def test_matches_matrix_route(self, rng):
        for _ in range(500):
            a, b = pair(rng, 3)
            got = jarlskog_from_coords(a, b)
            assert abs(got - jarlskog_invariant(build_ckm(a, b).v, DEFAULT_PLAQUETTE)) < 1e-12

    def test_antisymmetric(self, rng):
        for _ in range(300):
            a, b = pair(rng, 3)
            assert abs(jarlskog_from_coords(a, b) + jarlskog_from_coords(b, a)) < 1e-13


class TestRephase:
    def test_zero_phases(self, rng):
        v = random_unitary(rng, 3)
        np.testing.assert_array_equal(rephase(v, np.zeros(3), np.zeros(3)), v)

    def test_identity_becomes_diagonal(self, rng):
        w = rephase(np.eye(3), rng.uniform(-3, 3, 3), rng.uniform(-3, 3, 3))
        assert np.allclose(w - np.diag(np.diag(w)), 0)
        np.testing.assert_allclose(np.abs(np.diag(w)), 1)

    def test_invariance(self, rng):
        for _ in range(300):
            v = build_ckm(*pair(rng, 3)).v
            w = rephase(v, rng.uniform(-np.pi, np.pi, 3), rng.uniform(-np.pi, np.pi, 3))
            before, after = all_plaquettes(v), all_plaquettes(w)
            for p in before:
                assert abs(before[p] - after[p]) < 1e-13

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            rephase(np.eye(3), [0, 0], [0, 0, 0])
