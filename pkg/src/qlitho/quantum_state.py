"""Two-mode, fixed photon number Fock states.

A state with ``N`` photons is stored densely as ``N + 1`` complex amplitudes,
where amplitude ``n`` multiplies the ket ``|n, N - n>`` (``n`` photons in
mode 1, ``N - n`` in mode 2). All operations return new states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

import numpy as np

from .errors import DomainError

MAX_PHOTONS = 170
NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TwoModeState:
    photon_number: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = self.photon_number
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise DomainError(f"photon number must be a positive integer, got {n!r}")
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (n + 1,):
            raise DomainError(
                f"expected {n + 1} amplitudes for N={n}, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state is not normalized (norm {norm!r})")
        amps.flags.writeable = False
        object.__setattr__(self, "photon_number", int(n))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def _with(self, amplitudes) -> TwoModeState:
        return TwoModeState(self.photon_number, amplitudes)

    def __repr__(self):
        return f"TwoModeState(N={self.photon_number}, amplitudes={self.amplitudes!r})"


def reciprocal_binomial(N: int) -> TwoModeState:
    """Reciprocal binomial state with amplitudes proportional to sqrt(n!(N-n)!).

    Factorials and the normalization sum are exact integers; each amplitude
    is rounded to floating point once, as the square root of an exact ratio.
    """
    if isinstance(N, bool) or int(N) != N or not 1 <= N <= MAX_PHOTONS:
        raise DomainError(f"photon number must be in [1, {MAX_PHOTONS}], got {N!r}")
    return _reciprocal_binomial(int(N))


@lru_cache(maxsize=None)
def _reciprocal_binomial(N):
    weights = [math.factorial(n) * math.factorial(N - n) for n in range(N + 1)]
    total = sum(weights)
    return TwoModeState(N, [math.sqrt(Fraction(w, total)) for w in weights])


def propagate(state: TwoModeState, x: float) -> TwoModeState:
    """Free-space phases at position ``x`` (units of wavelength).

    Mode 1 travels a distance ``x`` and mode 2 the distance ``1 - x``; after
    dropping a global phase, amplitude ``n`` picks up ``exp(2 pi i x (2n - N))``.
    """
    if not math.isfinite(x):
        raise DomainError(f"position must be finite, got {x!r}")
    N = state.photon_number
    n = np.arange(N + 1)
    return state._with(state.amplitudes * np.exp(2j * np.pi * x * (2 * n - N)))


def apply_relative_phase(state: TwoModeState, ell: float) -> TwoModeState:
    """Shift mode 1 by ``2 pi ell / (N + 1)`` relative to mode 2."""
    if not math.isfinite(ell):
        raise DomainError(f"ell must be finite, got {ell!r}")
    N = state.photon_number
    n = np.arange(N + 1)
    # reduce ell*n modulo N+1 first so that ell and ell + (N+1) agree exactly
    turns = np.mod(ell * n, N + 1) / (N + 1)
    return state._with(state.amplitudes * np.exp(2j * np.pi * turns))
