"""Deposition-rate kernels and the operator-expectation oracles behind them.

Positions are in units of the wavelength. The film spans ``[0, 1/2)`` on each
axis and is divided into ``N + 1`` pixels; pixel ``ell`` (1-based, half
integers allowed) is centred at ``(ell - 1/2) / (2 (N + 1))``. Every kernel is
normalized so that a single exposure of unit dose peaks at exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import _backend
from .errors import DomainError
from .quantum_state import (
    TwoModeState,
    apply_relative_phase,
    propagate,
    reciprocal_binomial,
)

TWO_MODE_ORACLE_MAX_N = 20
FOUR_MODE_ORACLE_MAX_N = 4
SINGULARITY_GUARD = 1e-8


def _check_photon_number(N):
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError(f"photon number must be a positive integer, got {N!r}")
    return int(N)


def pixel_center(N: int, ell: float) -> float:
    """Position of the kernel peak for pixel index ``ell``."""
    return (ell - 0.5) / (2 * (N + 1))


def pixel_offset(N: int, ell: float, x):
    """Signed distance from the center of pixel ``ell`` to ``x``, in pixels."""
    return 2 * (N + 1) * np.asarray(x, dtype=np.float64) - (ell - 0.5)


@dataclass(frozen=True)
class KernelSpec:
    photon_number: int
    ell: float

    def __post_init__(self):
        object.__setattr__(self, "photon_number", _check_photon_number(self.photon_number))
        if not math.isfinite(self.ell):
            raise DomainError(f"ell must be finite, got {self.ell!r}")

    @property
    def center(self) -> float:
        return pixel_center(self.photon_number, self.ell)


def _as_output(values, x):
    return float(values[0]) if np.ndim(x) == 0 else values.reshape(np.shape(x))


def kernel_1d(spec: KernelSpec, x):
    """One-axis deposition rate, evaluated as a finite Dirichlet sum.

    Returns ``|(1/(N+1)) sum_n exp(4 pi i (x - x_ell) n)|^2``, which lies in
    ``[0, 1]``, equals 1 at the pixel center and has period 1/2 in ``x``.
    """
    d = pixel_offset(spec.photon_number, spec.ell, x).ravel()
    return _as_output(_backend.dirichlet(d, spec.photon_number + 1), x)


def kernel_1d_closed(spec: KernelSpec, x):
    """Sine-ratio form of :func:`kernel_1d`.

    At its removable singularities (the peaks) the Dirichlet sum is used.
    """
    m = spec.photon_number + 1
    d = pixel_offset(spec.photon_number, spec.ell, x).ravel()
    den_arg = d / m
    den_frac = den_arg - np.round(den_arg)
    singular = np.abs(den_frac) < SINGULARITY_GUARD
    # sin^2 only depends on the argument modulo 1; reduce before multiplying by pi
    num = np.sin(np.pi * (d - np.round(d))) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / (m * m * np.sin(np.pi * den_frac) ** 2)
    if singular.any():
        out[singular] = _backend.dirichlet(np.ascontiguousarray(d[singular]), m)
    return _as_output(out, x)


def kernel_2d(N: int, ell_x: float, ell_y: float, x, y):
    """Product of the two single-axis kernels."""
    N = _check_photon_number(N)
    return kernel_1d(KernelSpec(N, ell_x), x) * kernel_1d(KernelSpec(N, ell_y), y)


def pixel_state(N: int, ell: float, x: float) -> TwoModeState:
    """Reciprocal binomial state as seen at ``x`` when aimed at pixel ``ell``.

    The plate bank retards mode 1 by ``2 pi (ell - 1/2) / (N + 1)``; the half
    pixel comes from the fixed substrate offset of a quarter pixel width.
    """
    return propagate(apply_relative_phase(reciprocal_binomial(N), -(ell - 0.5)), x)


@lru_cache(maxsize=None)
def _two_mode_weights(N):
    # C(N, n) sqrt(n! (N-n)!) with a single rounding of an exact integer
    weights = np.array(
        [
            math.sqrt(math.comb(N, n) ** 2 * math.factorial(n) * math.factorial(N - n))
            for n in range(N + 1)
        ]
    )
    scale = float(Fraction(1, 2**N * math.factorial(N)))
    return weights, scale


def deposition_two_mode_oracle(state: TwoModeState) -> float:
    """``<e+^N e^N> / N!`` for ``e = (a1 + a2) / sqrt(2)``.

    ``e^N`` maps ``|n, N-n>`` to ``2^(-N/2) C(N, n) sqrt(n! (N-n)!) |0, 0>``, so
    the expectation is the squared modulus of a single weighted sum.
    """
    N = state.photon_number
    if N > TWO_MODE_ORACLE_MAX_N:
        raise DomainError(
            f"two-mode oracle supports N <= {TWO_MODE_ORACLE_MAX_N}, got {N}"
        )
    weights, scale = _two_mode_weights(N)
    amp = np.dot(state.amplitudes, weights)
    return scale * abs(amp) ** 2


@lru_cache(maxsize=None)
def _four_mode_terms(N):
    """Expansion of ``(a1 + a2 + a3 + a4)^(2N)`` applied to product kets.

    Returns, for each product ket ``(m, n)`` (``m`` photons in mode 1, ``n`` in
    mode 3), the list of ``(resulting ket, coefficient)`` pairs.
    """
    K = 2 * N
    tuples = [k for k in product(range(K + 1), repeat=3) if sum(k) <= K]
    tuples = [k + (K - sum(k),) for k in tuples]
    fact = math.factorial
    terms = {}
    for m in range(N + 1):
        for n in range(N + 1):
            occ = (m, N - m, n, N - n)
            out = []
            for k in tuples:
                if any(ki > oi for ki, oi in zip(k, occ)):
                    continue
                multinomial = fact(K)
                for ki in k:
                    multinomial //= fact(ki)
                falling = 1
                for ki, oi in zip(k, occ):
                    falling *= fact(oi) // fact(oi - ki)
                ket = tuple(oi - ki for ki, oi in zip(k, occ))
                out.append((ket, multinomial * math.sqrt(falling)))
            terms[m, n] = out
    scale = float(Fraction(1, 4**K * fact(K)))
    return terms, scale


def deposition_four_mode_oracle(state_x: TwoModeState, state_y: TwoModeState) -> float:
    """``<e+^(2N) e^(2N)> / (2N)!`` for ``e = (a1 + a2 + a3 + a4) / 2``.

    The product state ``state_x (modes 1, 2) x state_y (modes 3, 4)`` is
    expanded over four-mode number kets and ``e^(2N)`` is applied term by term
    with exact multinomial coefficients.
    """
    N = state_x.photon_number
    if state_y.photon_number != N:
        raise DomainError(
            f"photon numbers differ: {N} on X, {state_y.photon_number} on Y"
        )
    if N > FOUR_MODE_ORACLE_MAX_N:
        raise DomainError(
            f"four-mode oracle supports N <= {FOUR_MODE_ORACLE_MAX_N}, got {N}"
        )
    terms, scale = _four_mode_terms(N)
    result = {}
    for (m, n), out in terms.items():
        c = state_x.amplitudes[m] * state_y.amplitudes[n]
        if c == 0:
            continue
        for ket, coef in out:
            result[ket] = result.get(ket, 0) + c * coef
    return scale * sum(abs(a) ** 2 for a in result.values())


def normalized_two_mode_oracle(N: int, ell: float, x: float) -> float:
    """Two-mode oracle at ``x`` divided by its value at the pixel center."""
    peak = deposition_two_mode_oracle(pixel_state(N, ell, pixel_center(N, ell)))
    return deposition_two_mode_oracle(pixel_state(N, ell, x)) / peak


def normalized_four_mode_oracle(
    N: int, ell_x: float, ell_y: float, x: float, y: float
) -> float:
    peak = deposition_four_mode_oracle(
        pixel_state(N, ell_x, pixel_center(N, ell_x)),
        pixel_state(N, ell_y, pixel_center(N, ell_y)),
    )
    value = deposition_four_mode_oracle(pixel_state(N, ell_x, x), pixel_state(N, ell_y, y))
    return value / peak
