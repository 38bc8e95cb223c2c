"""Independent reference computations used by the tests."""

import numpy as np


def prox_abs_bruteforce(x: complex, t: float, levels: int = 60, n: int = 41) -> complex:
    """Minimise ``t|u| + |u - x|**2 / 2`` over complex ``u`` by zooming grid search."""
    centre = complex(x)
    span = abs(x) + t + 1.0
    best = centre
    for _ in range(levels):
        re = centre.real + np.linspace(-span, span, n)
        im = centre.imag + np.linspace(-span, span, n)
        u = re[:, None] + 1j * im[None, :]
        u = np.append(u.ravel(), 0.0)  # the kink is always a candidate
        cost = t * np.abs(u) + 0.5 * np.abs(u - x) ** 2
        best = complex(u[np.argmin(cost)])
        centre = best
        # shrink slowly: near the kink the cost is almost flat along x
        span *= 0.5
    return best


def multipliers_lstsq(X, Y) -> np.ndarray:
    """Solve ``min_m ||Y - diag(m) X||_F**2`` as one dense least-squares problem."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    m, G = X.shape
    A = np.zeros((m * G, m))
    for i in range(m):
        A[i * G:(i + 1) * G, i] = X[i]
    return np.linalg.lstsq(A, Y.ravel(), rcond=None)[0]


def clamped_spline(x, y, at):
    """Clamped cubic spline (zero end slopes) by solving the moment system directly."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    h = np.diff(x)
    A = np.zeros((n, n))
    r = np.zeros(n)
    A[0, :2] = [2 * h[0], h[0]]
    r[0] = 6 * ((y[1] - y[0]) / h[0])
    A[-1, -2:] = [h[-1], 2 * h[-1]]
    r[-1] = -6 * ((y[-1] - y[-2]) / h[-1])
    for i in range(1, n - 1):
        A[i, i - 1:i + 2] = [h[i - 1], 2 * (h[i - 1] + h[i]), h[i]]
        r[i] = 6 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1])
    M = np.linalg.solve(A, r)  # second derivatives at the knots
    at = np.asarray(at, dtype=float)
    k = np.clip(np.searchsorted(x, at, side="right") - 1, 0, n - 2)
    dx0, dx1, hk = at - x[k], x[k + 1] - at, h[k]
    return (M[k] * dx1**3 / (6 * hk) + M[k + 1] * dx0**3 / (6 * hk)
            + (y[k] / hk - M[k] * hk / 6) * dx1 + (y[k + 1] / hk - M[k + 1] * hk / 6) * dx0)


def prediction_error_energy(z, a):
    """Prediction-error energy of ``z`` under the valid convolution with ``a``."""
    return float(np.sum(np.convolve(z, a, mode="valid") ** 2))
