"""Parseval-tight Gabor frames on C^L.

Conventions used throughout the package:

* Frame ``k`` (0-based) has its window centred on sample ``k * a``
  (0-based), i.e. sample ``1 + k * a`` in 1-based indexing.
* Frequency-invariant phase: the atom ``(k, m)`` is the translated tight
  window multiplied by ``exp(2j * pi * m * t / M)`` where ``t`` is the
  absolute (unwrapped) time index.  Realised by placing each windowed
  slice at ``t mod M`` inside the length-``M`` FFT buffer.
* DFTs are unitary (``norm="ortho"``), so the tight window satisfies
  ``sum_k g[n - k a]**2 == 1`` and ``D @ D* == Id``.

Signals are treated circularly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy import fft as sp_fft

WindowKind = Literal["hann", "rectangular"]
OffsetVariant = Literal["none", "half", "full"]


@dataclass(frozen=True)
class GaborParams:
    window_length: int
    hop: int
    channels: int
    signal_length: int
    window_kind: WindowKind = "hann"

    def __post_init__(self):
        w, a, M, L = self.window_length, self.hop, self.channels, self.signal_length
        if a < 1 or w < a:
            raise ValueError(f"need 1 <= hop <= window_length, got a={a}, w={w}")
        if M < w:
            raise ValueError(f"need channels >= window_length (painless case), got M={M}, w={w}")
        if L < w or L % a:
            raise ValueError(f"signal_length must be >= w and a multiple of a, got L={L}")
        if self.window_kind not in ("hann", "rectangular"):
            raise ValueError(f"unknown window kind {self.window_kind!r}")

    @property
    def num_frames(self) -> int:
        return self.signal_length // self.hop

    @property
    def num_coefficients(self) -> int:
        return self.num_frames * self.channels

    @property
    def redundancy(self) -> float:
        return self.channels / self.hop

    def with_length(self, signal_length: int) -> "GaborParams":
        return GaborParams(self.window_length, self.hop, self.channels,
                           signal_length, self.window_kind)


def prototype_window(kind: str, length: int) -> np.ndarray:
    if kind == "hann":
        # periodic Hann: peak at length // 2, symmetric about it
        n = np.arange(length)
        return 0.5 - 0.5 * np.cos(2 * np.pi * n / length)
    if kind == "rectangular":
        return np.ones(length)
    raise ValueError(f"unknown window kind {kind!r}")


def tight_window(g: np.ndarray, hop: int) -> np.ndarray:
    """Canonical tight window ``g / sqrt(sum_k g[n - k*hop]**2)``."""
    g = np.asarray(g, dtype=float)
    w = len(g)
    padded = np.zeros(-(-w // hop) * hop)
    padded[:w] = g**2
    cover = padded.reshape(-1, hop).sum(axis=0)
    if np.any(cover <= 0):
        raise ValueError("window translates do not cover every sample")
    return g / np.sqrt(cover[np.arange(w) % hop])


@dataclass(frozen=True, eq=False)
class TightGaborFrame:
    """Immutable frame object realising the operators D (synthesize) and D* (analyze)."""

    params: GaborParams
    window: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = self.params
        K, w, a, M, L = p.num_frames, p.window_length, p.hop, p.channels, p.signal_length
        start = np.arange(K)[:, None] * a - w // 2
        t = start + np.arange(w)[None, :]
        object.__setattr__(self, "_time_idx", t % L)
        # flat positions inside the (K, M) FFT buffer
        object.__setattr__(self, "_buf_idx", (np.arange(K)[:, None] * M + t % M).ravel())
        # block overlap-add is possible when windows tile the hop grid exactly
        blocky = w % a == 0 and (w // 2) % a == 0 and K >= w // a
        object.__setattr__(self, "_blocky", blocky)
        self.window.setflags(write=False)

    def _gather(self, buf) -> np.ndarray:
        return buf.ravel()[self._buf_idx].reshape(-1, self.params.window_length) * self.window

    def _scatter(self, bufshape, slices) -> np.ndarray:
        buf = np.zeros(bufshape, dtype=slices.dtype)
        buf.ravel()[self._buf_idx] = (slices * self.window).ravel()
        return buf

    def _overlap_add(self, slices) -> np.ndarray:
        p = self.params
        L = p.signal_length
        if self._blocky:
            a, K = p.hop, p.num_frames
            blocks = slices.reshape(K, -1, a)
            shift = p.window_length // 2 // a
            out = np.zeros((K, a), dtype=slices.dtype)
            for j in range(blocks.shape[1]):
                # block j of frame k covers hop block k + j - shift
                out += np.roll(blocks[:, j, :], j - shift, axis=0)
            return out.ravel()
        idx = self._time_idx.ravel()
        flat = slices.ravel()
        if np.iscomplexobj(flat):
            out = np.bincount(idx, weights=flat.real, minlength=L).astype(complex)
            out.imag = np.bincount(idx, weights=flat.imag, minlength=L)
            return out
        return np.bincount(idx, weights=flat, minlength=L)

    @property
    def shape(self) -> tuple[int, int]:
        return self.params.num_frames, self.params.channels

    @property
    def frame_support(self) -> np.ndarray:
        """``(K, w)`` array of sample indices covered by each time frame's window."""
        return self._time_idx

    def _check_signal(self, signal):
        signal = np.asarray(signal)
        if signal.shape != (self.params.signal_length,):
            raise ValueError(f"expected signal of length {self.params.signal_length}, "
                             f"got shape {signal.shape}")
        return signal

    def analyze(self, signal) -> np.ndarray:
        signal = self._check_signal(signal)
        buf = self._scatter(self.shape, signal[self._time_idx].astype(complex))
        return sp_fft.fft(buf, axis=1, norm="ortho")

    def synthesize(self, coefs) -> np.ndarray:
        coefs = np.asarray(coefs)
        if coefs.shape != self.shape:
            raise ValueError(f"expected coefficients of shape {self.shape}, got {coefs.shape}")
        buf = sp_fft.ifft(coefs, axis=1, norm="ortho")
        return self._overlap_add(self._gather(buf))

    # Real signals have Hermitian coefficients, c[k, M - m] == conj(c[k, m]);
    # the *_half variants work on the non-redundant channels 0..M//2 only.

    @property
    def half_channels(self) -> int:
        return self.params.channels // 2 + 1

    @property
    def channel_multiplicity(self) -> np.ndarray:
        """How often each half-spectrum channel occurs in the full grid."""
        M = self.params.channels
        mult = np.full(self.half_channels, 2.0)
        mult[0] = 1.0
        if M % 2 == 0:
            mult[-1] = 1.0
        return mult

    def analyze_half(self, signal) -> np.ndarray:
        signal = self._check_signal(signal)
        if np.iscomplexobj(signal):
            raise ValueError("half-spectrum analysis needs a real signal")
        buf = self._scatter(self.shape, signal[self._time_idx])
        return sp_fft.rfft(buf, axis=1, norm="ortho")

    def synthesize_half(self, coefs) -> np.ndarray:
        """Real part of the synthesis of the Hermitian extension of ``coefs``."""
        buf = sp_fft.irfft(coefs, n=self.params.channels, axis=1, norm="ortho")
        return self._overlap_add(self._gather(buf))

    def expand_half(self, coefs) -> np.ndarray:
        M = self.params.channels
        full = np.empty(self.shape, dtype=complex)
        h = self.half_channels
        full[:, :h] = coefs
        full[:, h:] = np.conj(coefs[:, 1:M - h + 1][:, ::-1])
        return full

    def atom(self, k: int, m: int) -> np.ndarray:
        """Materialise the atom at time frame ``k``, channel ``m`` (slow; for checks)."""
        p = self.params
        t = np.arange(p.signal_length)
        rel = (t - k * p.hop + p.window_length // 2) % p.signal_length
        inside = rel < p.window_length
        unwrapped = k * p.hop - p.window_length // 2 + rel
        out = np.zeros(p.signal_length, dtype=complex)
        out[inside] = (self.window[rel[inside]]
                       * np.exp(2j * np.pi * m * unwrapped[inside] / p.channels)
                       / math.sqrt(p.channels))
        return out


@lru_cache(maxsize=32)
def build_tight_frame(params: GaborParams) -> TightGaborFrame:
    g = prototype_window(params.window_kind, params.window_length)
    return TightGaborFrame(params, tight_window(g, params.hop))


def synthesize(frame: TightGaborFrame, coefs) -> np.ndarray:
    return frame.synthesize(coefs)


def analyze(frame: TightGaborFrame, signal) -> np.ndarray:
    return frame.analyze(signal)


@dataclass(frozen=True)
class OffsetSpec:
    variant: OffsetVariant = "none"
    value: int = 0


def compute_offset(s: int, f: int, a: int, variant: OffsetVariant) -> OffsetSpec:
    """Shift that aligns the gap centre with a window centre (full) or a midpoint (half).

    ``s`` and ``f`` are 1-based, inclusive.  Window centres sit at ``1 + k*a``.
    """
    if s > f or s < 1:
        raise ValueError(f"invalid gap range [{s}, {f}]")
    if variant == "none":
        return OffsetSpec("none", 0)
    if variant not in ("half", "full"):
        raise ValueError(f"unknown offset variant {variant!r}")
    c = (s + f) // 2
    k = (c - 1) // a
    d = 1 + k * a
    if variant == "half":
        d += -(-a // 2)
    return OffsetSpec(variant, c - d)


def apply_offset(signal, offset: OffsetSpec | int) -> np.ndarray:
    """Move sample ``i`` to ``i - offset`` (circularly)."""
    value = offset.value if isinstance(offset, OffsetSpec) else int(offset)
    return np.roll(signal, -value)


def undo_offset(signal, offset: OffsetSpec | int) -> np.ndarray:
    value = offset.value if isinstance(offset, OffsetSpec) else int(offset)
    return np.roll(signal, value)
