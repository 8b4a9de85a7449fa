# Fitting coordinates to observables
#
# Given measured |V_ij| and J, find a pair of coordinate sets that
# reproduces them. Many pairs do (the phases are unphysical), so the
# comparison is made on the observables.

import logging

import numpy as np

from flagckm import FitProblem, FlagCoordinates, build_ckm, fit, jarlskog_invariant

logging.basicConfig(level=logging.WARNING)
rng = np.random.default_rng(3)

truth = build_ckm(FlagCoordinates.random(3, rng), FlagCoordinates.random(3, rng)).v
problem = FitProblem.from_unitary(truth)
print("targets:\n", np.round(problem.target_magnitudes, 6), "\nJ:", problem.target_j)

result = fit(problem, seed=0)
print("converged:", result.converged, "residual:", result.residual_norm, "start:", result.start_index)

v = build_ckm(result.left, result.right).v
print("max |V| error:", np.abs(np.abs(v) - np.abs(truth)).max())
print("J error:", abs(jarlskog_invariant(v) - problem.target_j))

# Targets that break unitarity cannot be met; the fit says so instead of raising.
bad = problem.target_magnitudes.copy()
bad[0, 0] *= 1.05
result = fit(FitProblem(3, np.clip(bad, 0, 1), problem.target_j), seed=0, n_starts=2)
print("inconsistent targets -> converged:", result.converged, "residual:", result.residual_norm)
