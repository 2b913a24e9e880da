"""Deterministic summation helpers and the smooth cutoff used for slowly
convergent Dirichlet series."""

from __future__ import annotations

import numpy as np


def neumaier_sum(values) -> complex:
    """Compensated (Kahan-Babuska-Neumaier) sum in the given order.

    Real and imaginary parts are compensated separately.
    """
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(_neumaier_real(arr.real.ravel()), _neumaier_real(arr.imag.ravel()))
    return _neumaier_real(arr.ravel().astype(float))


def _neumaier_real(x: np.ndarray) -> float:
    s = 0.0
    comp = 0.0
    for v in x.tolist():
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
    return s + comp


def block_sum(values, block: int = 4096) -> complex:
    """Fixed-order blockwise sum: numpy pairwise sums inside blocks, then a
    compensated sum over the block partials. Deterministic for a given input
    length, and far faster than a scalar compensated loop."""
    arr = np.asarray(values).ravel()
    if arr.size <= block:
        return complex(arr.sum()) if np.iscomplexobj(arr) else float(arr.sum())
    pad = (-arr.size) % block
    if pad:
        arr = np.concatenate([arr, np.zeros(pad, dtype=arr.dtype)])
    partials = arr.reshape(-1, block).sum(axis=1)
    return neumaier_sum(partials)


def smooth_cutoff(u) -> np.ndarray:
    """C-infinity step: 1 on [0, 1], 0 on [2, inf), monotone in between.

    Built from psi(v) = exp(-1/v); used to weight partial sums so that
    truncation error decays faster than any power of the cutoff for
    Dirichlet series with entire continuation.
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    out[u <= 1.0] = 1.0
    mid = (u > 1.0) & (u < 2.0)
    a = 2.0 - u[mid]
    b = u[mid] - 1.0
    # ratio form exp(-1/a) / (exp(-1/a) + exp(-1/b)) without underflow
    with np.errstate(over="ignore"):
        out[mid] = 1.0 / (1.0 + np.exp(1.0 / a - 1.0 / b))
    return out
