"""Gap ranges, the reliable mask and the gap SNR."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SNR_CAP_DB = 99.0


@dataclass(frozen=True, order=True)
class GapSpec:
    """Contiguous run of missing samples, 1-based and inclusive."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 1 or self.end < self.start:
            raise ValueError(f"invalid gap [{self.start}, {self.end}]")

    @classmethod
    def from_length(cls, start: int, length: int) -> "GapSpec":
        return cls(start, start + length - 1)

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def center(self) -> int:
        return (self.start + self.end) // 2

    @property
    def slice(self) -> slice:
        """0-based slice covering the gap."""
        return slice(self.start - 1, self.end)

    def shifted(self, delta: int) -> "GapSpec":
        return GapSpec(self.start + delta, self.end + delta)

    def overlaps(self, other: "GapSpec") -> bool:
        return self.start <= other.end and other.start <= self.end


def reliable_mask(length: int, gaps: Iterable[GapSpec]) -> np.ndarray:
    """Boolean mask, ``True`` on reliable samples."""
    mask = np.ones(length, dtype=bool)
    for gap in gaps:
        if gap.end > length:
            raise ValueError(f"gap {gap} exceeds signal length {length}")
        mask[gap.slice] = False
    if not mask.any():
        raise ValueError("mask has no reliable samples")
    return mask


def gaps_from_mask(mask) -> list[GapSpec]:
    missing = ~np.asarray(mask, dtype=bool)
    edges = np.diff(np.concatenate(([0], missing.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    return [GapSpec(int(s) + 1, int(e)) for s, e in zip(starts, ends)]


def _check(mask, *signals):
    n = len(mask)
    for s in signals:
        if len(s) != n:
            raise ValueError(f"length mismatch: mask has {n} samples, signal has {len(s)}")


def mask_apply(mask, signal) -> np.ndarray:
    """Keep reliable samples, zero the rest."""
    mask = np.asarray(mask, dtype=bool)
    signal = np.asarray(signal)
    _check(mask, signal)
    return np.where(mask, signal, 0)


def project_feasible(mask, observed, candidate) -> np.ndarray:
    """Closest signal to ``candidate`` that agrees with ``observed`` on reliable samples."""
    mask = np.asarray(mask, dtype=bool)
    observed = np.asarray(observed)
    candidate = np.asarray(candidate)
    _check(mask, observed, candidate)
    return np.where(mask, observed, candidate)


def snr(original, inpainted, gaps: Sequence[GapSpec], cap: float = SNR_CAP_DB) -> float:
    """SNR in dB evaluated on the union of ``gaps`` only."""
    if not gaps:
        raise ValueError("at least one gap is required")
    original = np.asarray(original)
    inpainted = np.asarray(inpainted)
    if original.shape != inpainted.shape:
        raise ValueError("signals must have equal lengths")
    idx = np.concatenate([np.arange(g.start - 1, g.end) for g in gaps])
    ref = original[idx]
    num = float(np.sum(np.abs(ref) ** 2))
    if num == 0:
        raise ValueError("original is silent inside the gap; SNR undefined")
    den = float(np.sum(np.abs(ref - inpainted[idx]) ** 2))
    if den == 0:
        return cap
    return 10 * math.log10(num / den)
