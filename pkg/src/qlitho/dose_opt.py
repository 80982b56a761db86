"""Dose tuning for exposure plans: flatten the exposure along a ridge.

The target is the minimax error ``max_s |E(s) - 1|`` over ridge samples
``s``. Cyclic coordinate descent on that objective stalls at kinks, so each
sweep runs its golden-section line searches on the smooth surrogate
``(mean |E - 1|^p)^(1/p)``. A sweep is kept only if it strictly lowers the
minimax error; otherwise it is discarded and ``p`` is doubled. An accepted
sweep resets ``p``, so the search ends only at a point that no exponent up to
``MAX_EXPONENT`` can improve, and restarting from the result is a no-op.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .planner import ExposurePlan
from .render import ridge_path, shot_basis

INVPHI = (math.sqrt(5) - 1) / 2
START_EXPONENT = 4.0
MAX_EXPONENT = 2.0**16
IMPROVEMENT_TOL = 1e-12


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    """Minimizer of a unimodal ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def minimax_error(residual: np.ndarray) -> float:
    return float(np.abs(residual).max())


def _surrogate(residual, p):
    r = np.abs(residual)
    top = r.max()
    if top == 0:
        return 0.0
    return float(top * np.mean((r / top) ** p) ** (1 / p))


def optimize_doses(
    plan: ExposurePlan,
    free: Sequence[int],
    ridge: Sequence,
    dose_bounds: tuple[float, float] = (0.0, 1.5),
    samples_per_segment: int = 64,
    max_iterations: int = 1000,
    callback: Callable[[int, float], None] | None = None,
) -> ExposurePlan:
    """Return ``plan`` with the doses of the shots indexed by ``free`` retuned.

    ``ridge`` lists waypoints in pixel coordinates. ``callback(iteration,
    objective)`` is called once per sweep with the minimax error of the kept
    doses; that sequence never increases.
    """
    free = list(dict.fromkeys(int(i) for i in free))
    if not free:
        raise DomainError("at least one shot must have a free dose")
    if any(not 0 <= i < len(plan.shots) for i in free):
        raise DomainError(f"free shot indices out of range for {len(plan.shots)} shots")
    ridge = list(ridge)
    if not ridge:
        raise DomainError("ridge must contain at least one waypoint")
    if len(ridge) == 1:
        ridge = ridge * 2
    lo, hi = dose_bounds
    if not 0 <= lo <= hi:
        raise DomainError(f"dose bounds must satisfy 0 <= lo <= hi, got {dose_bounds!r}")
    if max_iterations < 0:
        raise DomainError(f"max_iterations must be nonnegative, got {max_iterations}")
    if max_iterations == 0:
        return plan

    _, x, y = ridge_path(plan.photon_number, ridge, samples_per_segment)
    basis = shot_basis(plan, x, y)
    doses = plan.doses
    doses[free] = np.clip(doses[free], lo, hi)
    residual = doses @ basis - 1.0
    best = minimax_error(residual)
    p = START_EXPONENT

    for it in range(max_iterations):
        trial = doses.copy()
        trial_res = residual.copy()
        for j in free:
            row = basis[j]
            base = trial_res - trial[j] * row

            def f(v, base=base, row=row):
                return _surrogate(base + v * row, p)

            v = golden_section(f, lo, hi)
            if f(v) < f(trial[j]):
                trial[j] = v
                trial_res = base + v * row
        err = minimax_error(trial_res)
        if err < best - IMPROVEMENT_TOL:
            doses, residual, best = trial, trial_res, err
            p = START_EXPONENT
        else:
            p *= 2
        if callback is not None:
            callback(it, best)
        if p > MAX_EXPONENT:
            break
    return plan.with_doses(doses)
