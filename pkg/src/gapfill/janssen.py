"""Janssen's autoregressive gap interpolation.

Alternates between fitting an AR model to the current (filled) segment and
re-estimating the missing samples as the minimiser of the prediction-error
energy with the reliable samples held fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg


@dataclass(frozen=True)
class JanssenConfig:
    iterations: int = 50
    window_length: int = 2800
    order: int | None = None  # None: min(3H + 2, w // 3)
    ar_method: str = "covariance"

    def order_for(self, missing: int) -> int:
        if self.order is not None:
            return self.order
        return min(3 * missing + 2, self.window_length // 3)


def autocorrelation(x, maxlag: int) -> np.ndarray:
    """Biased autocorrelation ``r[k] = sum_t x[t] x[t + k]`` for ``k = 0..maxlag``."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    nfft = 1 << int(np.ceil(np.log2(2 * n - 1)))
    spec = np.fft.rfft(x, nfft)
    r = np.fft.irfft(spec * np.conj(spec), nfft)[:maxlag + 1]
    if maxlag >= n:
        r[n:] = 0.0
    return r


def levinson_durbin(r, order: int) -> tuple[np.ndarray, float]:
    """Monic prediction-error filter and final error from autocorrelation ``r``."""
    a = np.zeros(order + 1)
    a[0] = 1.0
    err = float(r[0])
    for i in range(1, order + 1):
        if err <= 0:
            break
        k = -(r[i] + np.dot(a[1:i], r[i - 1:0:-1])) / err
        a[1:i] = a[1:i] + k * a[i - 1:0:-1]
        a[i] = k
        err *= 1 - k * k
    return a, err


def covariance_matrix(x, order: int) -> np.ndarray:
    """``C[i, j] = sum_{t=p}^{n-1} x[t-i] x[t-j]`` for ``i, j = 0..p``."""
    x = np.asarray(x, dtype=float)
    n, p = len(x), order
    C = np.empty((p + 1, p + 1))
    head = x[p:]
    C[0] = [np.dot(head, x[p - j:n - j]) for j in range(p + 1)]
    C[:, 0] = C[0]
    for i in range(1, p + 1):
        # slide both lags by one: add the sample entering at the front, drop the one leaving
        C[i, i:] = C[i - 1, i - 1:p] + x[p - i] * x[p - np.arange(i, p + 1)] \
            - x[n - i] * x[n - np.arange(i, p + 1)]
        C[i:, i] = C[i, i:]
    return C


def estimate_ar(segment, order: int, method: str = "autocorrelation") -> np.ndarray:
    """AR fit returning the monic prediction-error filter ``(1, a_1, ..., a_p)``.

    ``autocorrelation`` (Levinson-Durbin on the biased autocorrelation) always
    yields a minimum-phase filter.  ``covariance`` minimises the residual over
    the rows ``t = p..n-1`` only, without implicit zero padding.
    """
    segment = np.asarray(segment, dtype=float)
    if order < 0:
        raise ValueError("order must be non-negative")
    if len(segment) <= order:
        raise ValueError(f"segment of length {len(segment)} too short for order {order}")
    trivial = np.zeros(order + 1)
    trivial[0] = 1.0
    if order == 0 or not np.any(segment):
        return trivial
    if method == "autocorrelation":
        a, _ = levinson_durbin(autocorrelation(segment, order), order)
        return a
    if method != "covariance":
        raise ValueError(f"unknown AR method {method!r}")
    C = covariance_matrix(segment, order)
    R = C[1:, 1:]
    load = 1e-12 * np.trace(R) / order
    try:
        coefs = linalg.solve(R + load * np.eye(order), -C[1:, 0], assume_a="pos")
    except linalg.LinAlgError:
        coefs = linalg.lstsq(R, -C[1:, 0])[0]
    return np.concatenate(([1.0], coefs))


def _fill(z, missing: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Minimise ``||A z||^2`` over ``z[missing]`` where ``A`` is valid convolution with ``a``."""
    p = len(a) - 1
    known = z.copy()
    known[missing] = 0.0
    resid = np.convolve(known, a, mode="valid")  # rows t = p..n-1
    # sum_t a[t - j] * resid[t] for every sample j
    rhs = -np.convolve(resid, a[::-1])[missing]
    ra = np.correlate(a, a, mode="full")[p:]  # ra[k] = sum_i a_i a_{i+k}
    diffs = np.abs(missing[:, None] - missing[None, :])
    if len(missing) > 1 and np.all(np.diff(missing) == 1):
        col = np.zeros(len(missing))
        col[:min(len(missing), p + 1)] = ra[:min(len(missing), p + 1)]
        sol = linalg.solve_toeplitz(col, rhs)
    else:
        G = np.where(diffs <= p, ra[np.minimum(diffs, p)], 0.0)
        sol = linalg.cho_solve(linalg.cho_factor(G), rhs)
    out = z.copy()
    out[missing] = sol
    return out


def janssen_inpaint(segment, mask, config: JanssenConfig = JanssenConfig()) -> np.ndarray:
    """Fill the missing samples (``mask == False``) of ``segment``.

    Missing samples must sit at least ``p`` samples away from both segment
    ends so every prediction-error row touching them is available.
    """
    segment = np.asarray(segment, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != segment.shape:
        raise ValueError("mask and segment lengths differ")
    missing = np.flatnonzero(~mask)
    H = len(missing)
    if H == 0:
        return segment.copy()
    p = config.order_for(H)
    n = len(segment)
    if p < 1 or p >= n - H:
        raise ValueError(f"AR order {p} too large for a segment of {n} samples with {H} missing")
    if missing[0] < p or missing[-1] > n - 1 - p:
        raise ValueError(f"missing samples must lie at least {p} samples inside the segment")
    z = np.where(mask, segment, 0.0)
    for _ in range(config.iterations):
        a = estimate_ar(z, p, config.ar_method)
        z = _fill(z, missing, a)
        z[mask] = segment[mask]
    return z

