"""Fit flag coordinates of both sectors to rephasing-invariant CKM observables.

The observables are the squared moduli |V_ij|^2 and, for n = 3, the
Jarlskog invariant. The coordinate pair carries gauge redundancy (many
pairs give the same invariants), so results are judged in observable space.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .ckm import DEFAULT_PLAQUETTE, plaquette_product
from .errors import ValidationError
from .flag import FlagCoordinates, gram_schmidt_unitary

logger = logging.getLogger(__name__)


@dataclass
class FitProblem:
    """Target observables for :func:`fit`.

    Parameters
    ----------
    n : int
        3 or 4.
    target_magnitudes : array_like, shape (n, n)
        Target |V_ij|.
    target_j : float, optional
        Target Jarlskog invariant on rows (1,3) x cols (1,3); n = 3 only.
    weights : array_like, optional
        One positive weight per residual: n*n magnitude residuals in
        row-major order, then one for J if present. Defaults to ones.
    bound : float
        Largest admissible coordinate modulus.
    consistency_tol : float
        Allowed deviation of row/column sums of squared magnitudes from 1.
    """

    n: int
    target_magnitudes: np.ndarray
    target_j: float = None
    weights: np.ndarray = None
    bound: float = 10.0
    consistency_tol: float = 1e-6

    def __post_init__(self):
        if self.n not in (3, 4):
            raise ValidationError(f"fits are supported for n in (3, 4), got {self.n}")
        mags = np.asarray(self.target_magnitudes, dtype=float)
        if mags.shape != (self.n, self.n):
            raise ValidationError(f"target_magnitudes must be {self.n}x{self.n}, got {mags.shape}")
        if not np.all(np.isfinite(mags)) or mags.min() < 0 or mags.max() > 1:
            raise ValidationError("target magnitudes must lie in [0, 1]")
        self.target_magnitudes = mags
        if self.target_j is not None:
            if self.n != 3:
                raise ValidationError("a Jarlskog target is only defined for n = 3")
            self.target_j = float(self.target_j)
        n_res = self.n * self.n + (self.target_j is not None)
        if self.weights is None:
            self.weights = np.ones(n_res)
        else:
            self.weights = np.asarray(self.weights, dtype=float).ravel()
            if self.weights.shape != (n_res,) or np.any(self.weights <= 0):
                raise ValidationError(f"weights must be {n_res} positive numbers")
        if self.bound <= 0:
            raise ValidationError("bound must be positive")

    @property
    def unitarity_defect(self):
        """Largest deviation of a row or column sum of |V_ij|^2 from 1."""
        sq = self.target_magnitudes**2
        return float(max(np.abs(sq.sum(axis=0) - 1).max(), np.abs(sq.sum(axis=1) - 1).max()))

    @property
    def consistent(self):
        return self.unitarity_defect <= self.consistency_tol

    @classmethod
    def from_unitary(cls, v, with_j=True, **kwargs):
        """Targets read off a given CKM matrix."""
        v = np.asarray(v, dtype=complex)
        target_j = None
        if with_j and v.shape == (3, 3):
            target_j = float(np.imag(plaquette_product(v, DEFAULT_PLAQUETTE)))
        return cls(v.shape[0], np.abs(v), target_j, **kwargs)


@dataclass
class FitResult:
    left: FlagCoordinates
    right: FlagCoordinates
    residual_norm: float
    iterations: int
    converged: bool
    per_residual: np.ndarray
    start_index: int = 0
    consistent: bool = True
    start_norms: list = field(default_factory=list)


def _ckm(left, right):
    return gram_schmidt_unitary(left).conj().T @ gram_schmidt_unitary(right)


def residuals(problem, left, right):
    """Weighted residual vector: |V_ij|^2 - target_ij^2 row-major, then J - target_j."""
    if left.n != problem.n or right.n != problem.n:
        raise ValidationError("coordinate sizes do not match the problem")
    v = _ckm(left, right)
    res = (np.abs(v) ** 2 - problem.target_magnitudes**2).ravel()
    if problem.target_j is not None:
        j = np.imag(plaquette_product(v, DEFAULT_PLAQUETTE))
        res = np.append(res, j - problem.target_j)
    return problem.weights * res


def pack(left, right):
    """Real parameter vector [Re left, Im left, Re right, Im right]."""
    lv, rv = left.values(), right.values()
    return np.concatenate([lv.real, lv.imag, rv.real, rv.imag])


def unpack(n, p):
    m = n * (n - 1) // 2
    left = FlagCoordinates.from_values(n, p[:m] + 1j * p[m:2 * m])
    right = FlagCoordinates.from_values(n, p[2 * m:3 * m] + 1j * p[3 * m:])
    return left, right


def forward_jacobian(fun, p, f0=None, rel_step=1e-7):
    """Forward differences with step ``rel_step * max(1, |p_k|)``."""
    p = np.asarray(p, dtype=float)
    f0 = fun(p) if f0 is None else f0
    jac = np.empty((f0.size, p.size))
    for k in range(p.size):
        h = rel_step * max(1.0, abs(p[k]))
        q = p.copy()
        q[k] += h
        jac[:, k] = (fun(q) - f0) / h
    return jac


def central_jacobian(fun, p, step=1e-6):
    p = np.asarray(p, dtype=float)
    cols = []
    for k in range(p.size):
        q_plus, q_minus = p.copy(), p.copy()
        q_plus[k] += step
        q_minus[k] -= step
        cols.append((fun(q_plus) - fun(q_minus)) / (2 * step))
    return np.column_stack(cols)


def levenberg_marquardt(fun, p0, max_iter=500, tol=1e-12, damping=1e-3, admissible=None):
    """Damped Gauss-Newton on ``0.5 * ||fun(p)||^2``.

    The damping ``lambda`` of ``(J^T J + lambda I) dp = -J^T r`` is divided
    by 10 after an accepted step and multiplied by 10 after a rejected one.
    A step is rejected if it does not reduce the cost or leaves the
    ``admissible`` region. Returns ``(p, r, iterations, converged)``.
    """
    p = np.asarray(p0, dtype=float).copy()
    r = fun(p)
    cost = r @ r
    lam = damping
    it = 0
    while it < max_iter:
        if np.sqrt(cost) < tol:
            return p, r, it, True
        it += 1
        jac = forward_jacobian(fun, p, r)
        grad = jac.T @ r
        hess = jac.T @ jac
        eye = np.eye(p.size)
        while True:
            try:
                dp = np.linalg.solve(hess + lam * eye, -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = p + dp
            if admissible is None or admissible(trial):
                r_trial = fun(trial)
                cost_trial = r_trial @ r_trial
                if cost_trial < cost:
                    break
            lam *= 10.0
            if lam > 1e16:
                # no descent direction left at machine precision
                return p, r, it, bool(np.sqrt(cost) < tol)
        step_small = np.linalg.norm(dp) <= 1e-15 * (1.0 + np.linalg.norm(p))
        p, r, cost = trial, r_trial, cost_trial
        lam = max(lam / 10.0, 1e-15)
        if step_small:
            break
    return p, r, it, bool(np.sqrt(cost) < tol)


def fit(problem, seed=0, n_starts=8, max_iter=500, tol=1e-12):
    """Multi-start least-squares fit of (left, right) coordinates.

    Each start draws both coordinate sets uniformly from the unit disc
    using a generator seeded by ``seed``. The best start (smallest residual
    norm, lowest index on ties) is returned; ``converged`` is false when
    even that one misses ``tol``. Never raises on non-convergence.
    """
    if n_starts < 1:
        raise ValidationError("need at least one start")
    if not problem.consistent:
        logger.warning(
            "target magnitudes violate unitarity by %.3g; fit cannot reach zero residual",
            problem.unitarity_defect,
        )
    n = problem.n
    rng = np.random.default_rng(seed)

    def fun(p):
        left, right = unpack(n, p)
        return residuals(problem, left, right)

    def admissible(p):
        m = p.size // 4
        z = np.concatenate([p[:m] + 1j * p[m:2 * m], p[2 * m:3 * m] + 1j * p[3 * m:]])
        return bool(np.all(np.abs(z) <= problem.bound))

    best = None
    norms = []
    for start in range(n_starts):
        p0 = pack(FlagCoordinates.random(n, rng), FlagCoordinates.random(n, rng))
        p, r, iters, ok = levenberg_marquardt(fun, p0, max_iter=max_iter, tol=tol, admissible=admissible)
        norm = float(np.linalg.norm(r))
        norms.append(norm)
        if best is None or norm < best[0]:
            best = (norm, start, p, r, iters)
    norm, start, p, r, iters = best
    left, right = unpack(n, p)
    return FitResult(
        left=left,
        right=right,
        residual_norm=norm,
        iterations=iters,
        converged=bool(norm < tol and problem.consistent),
        per_residual=r,
        start_index=start,
        consistent=problem.consistent,
        start_norms=norms,
    )
