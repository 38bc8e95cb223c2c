"""Synthetic test signals shipped with the package."""

from __future__ import annotations

import numpy as np


def sine(duration: float = 1.0, rate: int = 44100, freq: float = 500.0,
         amplitude: float = 0.5, phase: float = 0.3) -> np.ndarray:
    t = np.arange(int(round(duration * rate))) / rate
    return amplitude * np.sin(2 * np.pi * freq * t + phase)


def harmonic(duration: float = 1.0, rate: int = 44100, fundamental: float = 220.0,
             partials: int = 6, amplitude: float = 0.5, seed: int = 7) -> np.ndarray:
    """Harmonic tone with 1/k partial amplitudes and fixed random phases."""
    rng = np.random.default_rng(seed)
    t = np.arange(int(round(duration * rate))) / rate
    k = np.arange(1, partials + 1)
    phases = rng.uniform(0, 2 * np.pi, partials)
    x = np.sum(np.sin(2 * np.pi * fundamental * k[:, None] * t + phases[:, None]) / k[:, None], axis=0)
    return amplitude * x / np.max(np.abs(x))


def exact_ar(order: int = 32, duration: float = 1.0, rate: int = 44100,
             seed: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Sum of ``order // 2`` undamped sinusoids, which obeys an AR(order) recursion exactly.

    Frequencies are spread across the band so the prediction filter stays well
    conditioned.  Returns ``(signal, prediction_error_filter)``.
    """
    if order % 2:
        raise ValueError("order must be even")
    rng = np.random.default_rng(seed)
    n = order // 2
    freqs = (np.arange(n) + 0.5 + rng.uniform(-0.3, 0.3, n)) / (2 * n)  # cycles/sample
    phases = rng.uniform(0, 2 * np.pi, n)
    amps = rng.uniform(0.1, 1.0, n)
    t = np.arange(int(round(duration * rate)))
    x = np.sum(amps[:, None] * np.cos(2 * np.pi * freqs[:, None] * t + phases[:, None]), axis=0)
    roots = np.exp(2j * np.pi * np.concatenate([freqs, -freqs]))
    return x / np.max(np.abs(x)) * 0.5, np.real(np.poly(roots))


SYNTHETIC = {"sine": sine, "harmonic": harmonic, "ar32": lambda **kw: exact_ar(**kw)[0]}


def synthetic(name: str, duration: float = 10.0, rate: int = 44100) -> np.ndarray:
    try:
        make = SYNTHETIC[name]
    except KeyError:
        raise ValueError(f"unknown synthetic signal {name!r}; choose from {sorted(SYNTHETIC)}") from None
    return make(duration=duration, rate=rate)
