"""Entangled-state quantum lithography with reciprocal binomial states.

Deposition kernels (with operator-expectation oracles), exposure planning,
phase-plate banks, dose tuning and field rendering.
"""

from ._backend import BACKEND
from .dose_opt import optimize_doses
from .errors import DomainError
from .kernel import (
    KernelSpec,
    deposition_four_mode_oracle,
    deposition_two_mode_oracle,
    kernel_1d,
    kernel_1d_closed,
    kernel_2d,
    normalized_four_mode_oracle,
    normalized_two_mode_oracle,
    pixel_center,
    pixel_state,
)
from .planner import (
    ExposurePlan,
    ExposureShot,
    PixelMask,
    PlateBank,
    count_patterns,
    count_pure_states,
    load_mask,
    load_plan,
    mask_from_plan,
    plan_from_mask,
    plate_bank,
    preset_fig2,
    preset_fig3,
    preset_fig4,
    save_mask,
    save_plan,
)
from .quantum_state import TwoModeState, apply_relative_phase, propagate, reciprocal_binomial
from .render import (
    FieldMap,
    RidgeProfile,
    accumulate,
    background_penalty,
    exposure_at,
    ridge_profile,
    write_csv,
    write_pgm,
)

__version__ = "0.1.0"
