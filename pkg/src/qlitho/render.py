"""Accumulated exposure fields, ridge profiles, penalty metrics and writers."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .errors import DomainError
from .kernel import pixel_center, pixel_offset
from .planner import ExposurePlan

MIN_RESOLUTION = 8
MAX_RESOLUTION = 8192


@dataclass(frozen=True, eq=False)
class FieldMap:
    """Exposure sampled at cell centers of an ``R x R`` grid over the film.

    ``data[i, j]`` is the exposure at ``x = (i + 1/2) / (2R)``,
    ``y = (j + 1/2) / (2R)`` (wavelength units).
    """

    resolution: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.shape != (self.resolution, self.resolution):
            raise DomainError(f"data shape {data.shape} does not match R={self.resolution}")
        if not np.all(np.isfinite(data)) or np.any(data < 0):
            raise DomainError("field values must be finite and nonnegative")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def coordinates(self) -> np.ndarray:
        return cell_centers(self.resolution)


@dataclass(frozen=True, eq=False)
class RidgeProfile:
    arc_positions: np.ndarray
    values: np.ndarray
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)

    @property
    def min_value(self) -> float:
        return float(self.values.min())

    @property
    def max_value(self) -> float:
        return float(self.values.max())

    @property
    def ratio(self) -> float:
        return self.min_value / self.max_value if self.max_value > 0 else 0.0

    @property
    def ripple(self) -> float:
        return self.max_value - self.min_value


def cell_centers(resolution: int) -> np.ndarray:
    return (np.arange(resolution) + 0.5) / (2 * resolution)


def _axis_kernels(plan, coords, axis):
    N = plan.photon_number
    out = np.empty((len(plan.shots), len(coords)))
    for s, shot in enumerate(plan.shots):
        ell = shot.ell_x if axis == 0 else shot.ell_y
        out[s] = _backend.dirichlet(pixel_offset(N, ell, coords), N + 1)
    return out


def shot_basis(plan: ExposurePlan, x, y) -> np.ndarray:
    """Per-shot unit-dose exposure at points ``(x[p], y[p])``, shape (shots, points)."""
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    y = np.ascontiguousarray(y, dtype=np.float64).ravel()
    return _axis_kernels(plan, x, 0) * _axis_kernels(plan, y, 1)


def exposure_points(plan: ExposurePlan, x, y) -> np.ndarray:
    """Dose-weighted exposure at each point ``(x[p], y[p])``."""
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    y = np.ascontiguousarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DomainError("x and y must have the same number of points")
    if not plan.shots:
        return np.zeros(x.shape)
    return _backend.accumulate_points(
        _axis_kernels(plan, x, 0), _axis_kernels(plan, y, 1), plan.doses
    )


def exposure_at(plan: ExposurePlan, x: float, y: float) -> float:
    return float(exposure_points(plan, [x], [y])[0])


def accumulate(plan: ExposurePlan, resolution: int) -> FieldMap:
    """Dose-weighted sum of every shot's deposition rate over the film grid."""
    if not MIN_RESOLUTION <= resolution <= MAX_RESOLUTION:
        raise DomainError(
            f"resolution must be in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], got {resolution}"
        )
    coords = cell_centers(resolution)
    if not plan.shots:
        return FieldMap(resolution, np.zeros((resolution, resolution)))
    kx = _axis_kernels(plan, coords, 0)
    ky = _axis_kernels(plan, coords, 1)
    return FieldMap(resolution, _backend.accumulate_grid(kx, ky, plan.doses))


def ridge_path(N: int, waypoints, samples_per_segment: int):
    """Sample points along the polyline through the given pixel centers.

    Returns ``(arc, x, y)``; ``arc`` is path length in pixels.
    """
    if len(waypoints) < 2:
        raise DomainError("a ridge needs at least two waypoints")
    if samples_per_segment < 2:
        raise DomainError(f"samples_per_segment must be >= 2, got {samples_per_segment}")
    pts = np.asarray(waypoints, dtype=np.float64)
    t = np.linspace(0.0, 1.0, samples_per_segment)
    arcs, us, vs = [], [], []
    start = 0.0
    for k, (p0, p1) in enumerate(zip(pts[:-1], pts[1:])):
        seg = t if k == 0 else t[1:]
        us.append(p0[0] + (p1[0] - p0[0]) * seg)
        vs.append(p0[1] + (p1[1] - p0[1]) * seg)
        length = float(np.hypot(*(p1 - p0)))
        arcs.append(start + length * seg)
        start += length
    u = np.concatenate(us)
    v = np.concatenate(vs)
    return np.concatenate(arcs), pixel_center(N, u), pixel_center(N, v)


def ridge_profile(
    plan: ExposurePlan, waypoints: Sequence, samples_per_segment: int = 64
) -> RidgeProfile:
    arc, x, y = ridge_path(plan.photon_number, waypoints, samples_per_segment)
    return RidgeProfile(arc, exposure_points(plan, x, y), x, y)


def background_penalty(
    plan: ExposurePlan,
    exposed_pixels=None,
    resolution: int = 512,
    *,
    radius: float = 0.5,
    ridge=None,
    samples_per_segment: int = 64,
) -> float:
    """Largest exposure away from the exposed pixels, relative to the ridge maximum.

    A cell counts as background when its Chebyshev distance (in pixels) to
    every exposed pixel center exceeds ``radius``. ``exposed_pixels`` defaults
    to the plan's shot centers; ``ridge`` defaults to those centers in plan
    order.
    """
    if resolution < 64:
        raise DomainError(f"resolution must be >= 64 for the penalty metric, got {resolution}")
    if exposed_pixels is None:
        exposed_pixels = [s.pixel for s in plan.shots]
    exposed = np.asarray(list(exposed_pixels), dtype=np.float64).reshape(-1, 2)
    if not plan.shots:
        return 0.0
    if not len(exposed):
        raise DomainError("a nonempty plan needs at least one exposed pixel")
    fmap = accumulate(plan, resolution)
    m = plan.photon_number + 1
    u = 2 * m * fmap.coordinates + 0.5
    background = np.ones((resolution, resolution), dtype=bool)
    for a, b in exposed:
        near_x = np.abs(u - a) <= radius
        near_y = np.abs(u - b) <= radius
        background &= ~np.logical_and.outer(near_x, near_y)
    if ridge is None:
        ridge = [tuple(p) for p in exposed] if len(exposed) > 1 else [tuple(exposed[0])] * 2
    peak = ridge_profile(plan, ridge, samples_per_segment).max_value
    if not background.any() or peak <= 0:
        return 0.0
    return float(fmap.data[background].max() / peak)


# -- writers ----------------------------------------------------------------


def _pgm_levels(data, display_max):
    scaled = np.clip(np.asarray(data) / display_max, 0.0, 1.0) * 65535
    # round half away from zero; values are nonnegative here
    return np.floor(scaled + 0.5).astype(np.int64)


def write_pgm(fmap: FieldMap, destination: str | os.PathLike, display_max: float | None = None) -> None:
    """Plain PGM (P2, maxval 65535), one image row per line, increasing y."""
    if display_max is None:
        display_max = float(fmap.data.max()) or 1.0
    if not display_max > 0:
        raise DomainError(f"display_max must be positive, got {display_max!r}")
    levels = _pgm_levels(fmap.data, display_max)
    r = fmap.resolution
    lines = [f"P2\n{r} {r}\n65535\n"]
    for j in range(r):
        lines.append(" ".join(map(str, levels[:, j].tolist())) + "\n")
    with open(destination, "w", encoding="ascii") as fh:
        fh.writelines(lines)


def _fmt(v):
    return format(float(v), ".17g")


def write_csv(obj: FieldMap | RidgeProfile, destination: str | os.PathLike) -> None:
    """CSV with ``x,y,value`` records for a map or ``arc,value`` for a profile."""
    if isinstance(obj, FieldMap):
        coords = [_fmt(c) for c in obj.coordinates]
        lines = ["x,y,value\n"]
        for j in range(obj.resolution):
            col = obj.data[:, j]
            lines.extend(
                f"{coords[i]},{coords[j]},{_fmt(col[i])}\n" for i in range(obj.resolution)
            )
    elif isinstance(obj, RidgeProfile):
        lines = ["arc,value\n"]
        lines.extend(f"{_fmt(a)},{_fmt(v)}\n" for a, v in zip(obj.arc_positions, obj.values))
    else:
        raise TypeError(f"cannot write {type(obj).__name__} as CSV")
    with open(destination, "w", encoding="ascii") as fh:
        fh.writelines(lines)
