"""Exposure plans, pixel masks, phase-plate banks and pattern counting.

Pixel ``(a, b)`` means ``ell_x = a`` (column, along X) and ``ell_y = b`` (row,
along Y). Indices are 1-based; half-integer indices address the grid shifted
by half a pixel, realized with an extra ``lambda / (2 (N + 1))`` plate.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

HALF_STEP_TOL = 1e-12


def _snap_half(value, name):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    twice = round(2 * value)
    if abs(2 * value - twice) > HALF_STEP_TOL:
        raise DomainError(f"{name} must be a multiple of 1/2, got {value!r}")
    return twice / 2


def _check_photon_number(N):
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError(f"photon number must be a positive integer, got {N!r}")
    return int(N)


@dataclass(frozen=True)
class ExposureShot:
    ell_x: float
    ell_y: float
    dose: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ell_x", _snap_half(self.ell_x, "ell_x"))
        object.__setattr__(self, "ell_y", _snap_half(self.ell_y, "ell_y"))
        if not math.isfinite(self.dose) or self.dose < 0:
            raise DomainError(f"dose must be finite and nonnegative, got {self.dose!r}")
        object.__setattr__(self, "dose", float(self.dose))

    @property
    def pixel(self) -> tuple[float, float]:
        return (self.ell_x, self.ell_y)


def _wrap(ell, modulus):
    return (ell - 1) % modulus + 1


@dataclass(frozen=True)
class ExposurePlan:
    """A sequential exposure schedule: one dose-weighted shot after another.

    Pixel indices are reduced into ``[1, N + 2)`` modulo ``N + 1``; the
    deposition kernel has the same period, so wrapping never changes a field.
    """

    photon_number: int
    shots: tuple[ExposureShot, ...] = ()

    def __post_init__(self):
        N = _check_photon_number(self.photon_number)
        object.__setattr__(self, "photon_number", N)
        shots = []
        for shot in self.shots:
            if not isinstance(shot, ExposureShot):
                shot = ExposureShot(*shot)
            shots.append(
                replace(shot, ell_x=_wrap(shot.ell_x, N + 1), ell_y=_wrap(shot.ell_y, N + 1))
            )
        object.__setattr__(self, "shots", tuple(shots))

    def __len__(self):
        return len(self.shots)

    @property
    def doses(self) -> np.ndarray:
        return np.array([s.dose for s in self.shots], dtype=np.float64)

    def with_doses(self, doses: Sequence[float]) -> ExposurePlan:
        if len(doses) != len(self.shots):
            raise DomainError(f"expected {len(self.shots)} doses, got {len(doses)}")
        shots = tuple(replace(s, dose=float(d)) for s, d in zip(self.shots, doses))
        return ExposurePlan(self.photon_number, shots)

    def __add__(self, other: ExposurePlan) -> ExposurePlan:
        if other.photon_number != self.photon_number:
            raise DomainError("cannot merge plans with different photon numbers")
        return ExposurePlan(self.photon_number, self.shots + other.shots)


@dataclass(frozen=True, eq=False)
class PixelMask:
    """Target exposure on the ``(N + 1) x (N + 1)`` grid, ``values[ell_x - 1, ell_y - 1]``."""

    photon_number: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        N = _check_photon_number(self.photon_number)
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (N + 1, N + 1):
            raise DomainError(f"mask must be {N + 1}x{N + 1}, got shape {values.shape}")
        if not np.all((values >= 0) & (values <= 1)):
            raise DomainError("mask values must lie in [0, 1]")
        values.flags.writeable = False
        object.__setattr__(self, "photon_number", N)
        object.__setattr__(self, "values", values)


def plan_from_mask(mask: PixelMask) -> ExposurePlan:
    """One shot per positive mask entry, ordered by row then column."""
    m = mask.photon_number + 1
    shots = [
        ExposureShot(ix + 1, iy + 1, mask.values[ix, iy])
        for iy in range(m)
        for ix in range(m)
        if mask.values[ix, iy] > 0
    ]
    return ExposurePlan(mask.photon_number, tuple(shots))


def mask_from_plan(plan: ExposurePlan) -> PixelMask:
    """Inverse of :func:`plan_from_mask` for plans on the aligned grid.

    Doses of repeated pixels add; half-integer shots have no mask cell.
    """
    m = plan.photon_number + 1
    values = np.zeros((m, m))
    for shot in plan.shots:
        if shot.ell_x % 1 or shot.ell_y % 1:
            raise DomainError(f"shot {shot.pixel} is not on the integer pixel grid")
        values[int(shot.ell_x) - 1, int(shot.ell_y) - 1] += shot.dose
    return PixelMask(plan.photon_number, np.clip(values, 0.0, 1.0))


# Patterns from the three simulated figures, all with N = 6.
FIG2_PIXELS = (
    (2, 1), (2, 2), (2, 3), (2, 4), (3, 4), (4, 4), (5, 4), (5, 5), (5, 6), (5, 7),
    (6, 4),
)
FIG2_RIDGE = FIG2_PIXELS[:10]
FIG4_SHOTS = (
    (2, 1, 1.0), (2, 2, 1.0), (5, 7, 1.0),
    (2, 3, 0.83), (5, 6, 0.83),
    (3, 4, 0.66), (4, 5, 0.66),
    (2.5, 3.5, 0.66), (3.5, 4.5, 0.66), (4.5, 5.5, 0.66),
)
FIG4_FREE = tuple(i for i, (_, _, dose) in enumerate(FIG4_SHOTS) if dose < 1.0)
FIG3_PIXELS = ((2, 1), (2, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7))
# the profiled part of figs. 3 and 4 is the diagonal between the two straight legs
DIAGONAL_RIDGE = ((2, 3), (5, 6))
FIG3_RIDGE = DIAGONAL_RIDGE
FIG4_RIDGE = DIAGONAL_RIDGE


def preset_fig2() -> ExposurePlan:
    """Serpentine line plus the isolated pixel (6, 4), unit doses."""
    return ExposurePlan(6, tuple(ExposureShot(a, b) for a, b in FIG2_PIXELS))


def preset_fig3() -> ExposurePlan:
    """Diagonal S-curve on the aligned grid, unit doses."""
    return ExposurePlan(6, tuple(ExposureShot(a, b) for a, b in FIG3_PIXELS))


def preset_fig4() -> ExposurePlan:
    """The fig. 3 curve with graded doses and three half-pixel intermediates."""
    return ExposurePlan(6, tuple(ExposureShot(*s) for s in FIG4_SHOTS))


PRESETS = {"fig2": preset_fig2, "fig3": preset_fig3, "fig4": preset_fig4}
PRESET_RIDGES = {"fig2": FIG2_RIDGE, "fig3": FIG3_RIDGE, "fig4": FIG4_RIDGE}


@dataclass(frozen=True)
class PlateBank:
    """Birefringent plates inserted in one bank.

    Plate ``k`` has an optical path difference of ``2**k * lambda / (N + 1)``;
    the optional half-shift plate adds ``lambda / (2 (N + 1))``.
    """

    photon_number: int
    plates: tuple[int, ...]
    half_shift: bool = False

    def retardances(self) -> list[Fraction]:
        """Optical path difference of each selected plate, in wavelengths."""
        m = self.photon_number + 1
        out = [Fraction(2**k, m) for k in self.plates]
        if self.half_shift:
            out.append(Fraction(1, 2 * m))
        return out

    @property
    def total(self) -> Fraction:
        return sum(self.retardances(), Fraction(0))

    def __len__(self):
        return len(self.plates) + int(self.half_shift)


def plates_required(N: int) -> int:
    """Number of distinct integer-step plates a bank must hold for ``N``."""
    return _check_photon_number(N).bit_length()


def plate_bank(ell: float, N: int) -> PlateBank:
    """Plates realizing the relative phase of pixel index ``ell``.

    ``ell`` is reduced modulo ``N + 1``; its integer part is written in binary
    and a remaining half selects the half-shift plate.
    """
    N = _check_photon_number(N)
    if not math.isfinite(ell):
        raise DomainError(f"ell must be finite, got {ell!r}")
    twice = round(2 * ell)
    if abs(2 * ell - twice) > HALF_STEP_TOL:
        raise DomainError(f"ell must be a multiple of 1/2, got {ell!r}")
    twice %= 2 * (N + 1)
    whole, half = divmod(twice, 2)
    plates = tuple(k for k in range(whole.bit_length()) if whole >> k & 1)
    return PlateBank(N, plates, bool(half))


def count_pure_states(N: int) -> int:
    """Number of N-photon pure number states over four modes."""
    if N < 0:
        raise DomainError(f"N must be nonnegative, got {N!r}")
    return (N + 1) * (N + 2) * (N + 3) // 6


def count_patterns(N: int) -> int:
    """Number of binary patterns on the ``(N + 1) x (N + 1)`` grid."""
    if N < 0:
        raise DomainError(f"N must be nonnegative, got {N!r}")
    return 1 << (N + 1) ** 2


# -- file formats -----------------------------------------------------------


def plan_to_json(plan: ExposurePlan) -> str:
    doc = {
        "n_photons": plan.photon_number,
        "shots": [{"lx": s.ell_x, "ly": s.ell_y, "dose": s.dose} for s in plan.shots],
    }
    return json.dumps(doc, indent=2) + "\n"


def plan_from_json(text: str) -> ExposurePlan:
    try:
        doc = json.loads(text)
        shots = tuple(
            ExposureShot(float(s["lx"]), float(s["ly"]), float(s["dose"]))
            for s in doc["shots"]
        )
        return ExposurePlan(doc["n_photons"], shots)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DomainError(f"malformed exposure plan: {exc}") from exc


def save_plan(plan: ExposurePlan, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(plan_to_json(plan))


def load_plan(path: str | os.PathLike) -> ExposurePlan:
    with open(path, encoding="utf-8") as fh:
        return plan_from_json(fh.read())


def _pgm_tokens(text: str) -> Iterable[str]:
    for line in text.splitlines():
        yield from line.split("#", 1)[0].split()


def mask_to_pgm(mask: PixelMask) -> str:
    m = mask.photon_number + 1
    levels = np.floor(mask.values * 255 + 0.5).astype(int)
    rows = (" ".join(str(levels[ix, iy]) for ix in range(m)) for iy in range(m))
    return f"P2\n{m} {m}\n255\n" + "\n".join(rows) + "\n"


def mask_from_pgm(text: str) -> PixelMask:
    """Parse a plain PGM; the first image row holds ``ell_y = 1``."""
    tokens = list(_pgm_tokens(text))
    if not tokens or tokens[0] != "P2":
        raise DomainError("mask must be a plain-text PGM (P2)")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
        pixels = [int(t) for t in tokens[4:]]
    except ValueError as exc:
        raise DomainError(f"malformed PGM: {exc}") from exc
    if width != height or width < 2:
        raise DomainError(f"mask must be square with side >= 2, got {width}x{height}")
    if maxval <= 0 or len(pixels) != width * height:
        raise DomainError("malformed PGM: bad maxval or pixel count")
    values = np.array(pixels, dtype=np.float64).reshape(height, width).T / maxval
    return PixelMask(width - 1, values)


def save_mask(mask: PixelMask, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(mask_to_pgm(mask))


def load_mask(path: str | os.PathLike) -> PixelMask:
    with open(path, encoding="ascii") as fh:
        return mask_from_pgm(fh.read())
