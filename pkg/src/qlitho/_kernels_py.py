"""numpy implementations of the inner loops in ``_kernels.pyx``."""

import numpy as np

_CHUNK = 1 << 20


def dirichlet(offsets, m):
    d = np.ascontiguousarray(offsets, dtype=np.float64)
    d = d - m * np.round(d / m)
    step = 2.0 * np.pi * d / m
    n = np.arange(m, dtype=np.float64)
    out = np.empty_like(d)
    rows = max(1, _CHUNK // m)
    for start in range(0, d.size, rows):
        phase = step[start:start + rows, None] * n
        # sequential accumulation over n, same order as the compiled loop
        re = np.zeros(phase.shape[0])
        im = np.zeros(phase.shape[0])
        for k in range(m):
            re += np.cos(phase[:, k])
            im += np.sin(phase[:, k])
        re /= m
        im /= m
        out[start:start + rows] = re * re + im * im
    return out


def accumulate_grid(kx, ky, doses):
    kx = np.asarray(kx, dtype=np.float64)
    ky = np.asarray(ky, dtype=np.float64)
    out = np.zeros((kx.shape[1], ky.shape[1]))
    for s, dose in enumerate(np.asarray(doses, dtype=np.float64)):
        out += np.multiply.outer(dose * kx[s], ky[s])
    return out


def accumulate_points(kx, ky, doses):
    kx = np.asarray(kx, dtype=np.float64)
    ky = np.asarray(ky, dtype=np.float64)
    out = np.zeros(kx.shape[1])
    for s, dose in enumerate(np.asarray(doses, dtype=np.float64)):
        out += (dose * kx[s]) * ky[s]
    return out
