"""Cross-module identity suite used by the ``self-check`` command."""

import numpy as np

from .ckm import (
    STANDARD_PLAQUETTE,
    all_plaquettes,
    build_ckm,
    closed_form_f_n3,
    closed_form_f_n4,
    jarlskog_from_coords,
    jarlskog_invariant,
    plaquette_sign,
    rephase,
)
from .errors import FlagCkmError
from .flag import (
    FlagCoordinates,
    closed_form_unitary_n3,
    closed_form_unitary_n4,
    coords_from_unitary,
    gram_schmidt_unitary,
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
from .pdg import PdgAngles, pdg_to_coords, pdg_unitary

DEFAULT_TOLERANCES = {
    "closed_form_n3": 1e-12,
    "closed_form_n4": 1e-12,
    "f_n3": 1e-12,
    "f_n4": 1e-11,
    "j_from_coords": 1e-12,
    "jarlskog_identity": 1e-9,
    "det_n2": 1e-10,
    "det_n3": 1e-9,
    "plaquettes": 1e-12,
    "rephasing": 1e-13,
    "round_trip": 1e-10,
    "pdg": 1e-11,
}
RADIUS = 3.0


def _rel(a, b, floor):
    return abs(a - b) / max(abs(b), floor)


def _random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _closed_form(n, fn):
    def check(rng):
        c = FlagCoordinates.random(n, rng, RADIUS)
        return float(np.abs(fn(c) - gram_schmidt_unitary(c)).max())
    return check


def _f_entries(n, fn):
    def check(rng):
        a, b = FlagCoordinates.random(n, rng, RADIUS), FlagCoordinates.random(n, rng, RADIUS)
        res = build_ckm(a, b)
        v_closed = res.left_scales[:, None] * fn(a, b) * res.right_scales[None, :]
        return float(np.abs(v_closed - res.v).max())
    return check


def _j_from_coords(rng):
    a, b = FlagCoordinates.random(3, rng, RADIUS), FlagCoordinates.random(3, rng, RADIUS)
    return abs(jarlskog_from_coords(a, b) - jarlskog_invariant(build_ckm(a, b).v))


def _jarlskog_identity(rng):
    a, b = FlagCoordinates.random(3, rng, RADIUS), FlagCoordinates.random(3, rng, RADIUS)
    s, sp = MassSpectrum.random(3, rng), MassSpectrum.random(3, rng)
    j_det, j_plaq = jarlskog_identity_check(a, b, s, sp)
    return _rel(j_det, j_plaq, 1e-12 / 1e-9)


def _det_closed(n, fn):
    def check(rng):
        if n == 2:
            u, up = _random_unitary(2, rng), _random_unitary(2, rng)
        else:
            u = gram_schmidt_unitary(FlagCoordinates.random(n, rng, RADIUS))
            up = gram_schmidt_unitary(FlagCoordinates.random(n, rng, RADIUS))
        s, sp = MassSpectrum.random(n, rng), MassSpectrum.random(n, rng)
        d = commutator_det(build_mass_matrix(u, s), build_mass_matrix(up, sp))
        closed = fn(s, sp, u.conj().T @ up)
        return abs(closed - d) / max(abs(d), 1e-300)
    return check


def _parity(rng):
    for n, expected in ((2, Parity.REAL), (3, Parity.PURE_IMAGINARY), (4, Parity.REAL)):
        if n == 2:
            u, up = _random_unitary(2, rng), _random_unitary(2, rng)
        else:
            u = gram_schmidt_unitary(FlagCoordinates.random(n, rng, RADIUS))
            up = gram_schmidt_unitary(FlagCoordinates.random(n, rng, RADIUS))
        s, sp = MassSpectrum.random(n, rng), MassSpectrum.random(n, rng)
        try:
            got = det_parity_check(build_mass_matrix(u, s), build_mass_matrix(up, sp))
        except FlagCkmError:
            return float("inf")
        if got is not expected:
            return float("inf")
    return 0.0


def _plaquettes(rng):
    a, b = FlagCoordinates.random(3, rng, RADIUS), FlagCoordinates.random(3, rng, RADIUS)
    v = build_ckm(a, b).v
    j = jarlskog_invariant(v, STANDARD_PLAQUETTE)
    return max(abs(val - plaquette_sign(p) * j) for p, val in all_plaquettes(v).items())


def _rephasing(rng):
    a, b = FlagCoordinates.random(3, rng, RADIUS), FlagCoordinates.random(3, rng, RADIUS)
    v = build_ckm(a, b).v
    w = rephase(v, rng.uniform(-np.pi, np.pi, 3), rng.uniform(-np.pi, np.pi, 3))
    return max(abs(all_plaquettes(w)[p] - val) for p, val in all_plaquettes(v).items())


def _round_trip(rng):
    worst = 0.0
    for n in (3, 4, 6):
        c = FlagCoordinates.random(n, rng, RADIUS)
        u = gram_schmidt_unitary(c)
        phased = u * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
        for w in (u, phased):
            worst = max(worst, float(np.abs(coords_from_unitary(w).values() - c.values()).max()))
    return worst


def _pdg(rng):
    theta = rng.uniform(-1.4, 1.4, 3)
    a = PdgAngles(*theta, rng.uniform(-np.pi, np.pi))
    return float(np.abs(coords_from_unitary(pdg_unitary(a)).values() - pdg_to_coords(a).values()).max())


CHECKS = {
    "closed_form_n3": _closed_form(3, closed_form_unitary_n3),
    "closed_form_n4": _closed_form(4, closed_form_unitary_n4),
    "f_n3": _f_entries(3, closed_form_f_n3),
    "f_n4": _f_entries(4, closed_form_f_n4),
    "j_from_coords": _j_from_coords,
    "jarlskog_identity": _jarlskog_identity,
    "det_n2": _det_closed(2, closed_form_det_n2),
    "det_n3": _det_closed(3, closed_form_det_n3),
    "det_parity": _parity,
    "plaquettes": _plaquettes,
    "rephasing": _rephasing,
    "round_trip": _round_trip,
    "pdg": _pdg,
}


def run_self_check(seed=0, samples=200, tolerances=None):
    """Run every identity ``samples`` times; returns a JSON-ready report.

    Each check draws from its own generator derived from ``seed``, so the
    report is reproducible and independent of check order.
    """
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    report = {"seed": seed, "samples": samples, "checks": {}}
    all_ok = True
    for index, (name, check) in enumerate(CHECKS.items()):
        rng = np.random.default_rng([seed, index])
        limit = tol.get(name, 0.0)
        passed = 0
        worst = 0.0
        for _ in range(samples):
            try:
                err = float(check(rng))
            except FlagCkmError:
                err = float("inf")
            worst = max(worst, err)
            passed += err <= limit
        all_ok &= passed == samples
        report["checks"][name] = {
            "passed": passed,
            "total": samples,
            "tolerance": limit,
            "max_error": worst if np.isfinite(worst) else None,
        }
    report["all_passed"] = bool(all_ok)
    return report
