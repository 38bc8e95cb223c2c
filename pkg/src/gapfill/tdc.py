"""Time-domain compensation of the energy lost inside an l1-filled gap.

Artificial gaps are punched into the reliable neighbourhood and inpainted
with the same method.  Comparing their segment-wise energy with the known
original yields per-segment gain factors, which are symmetrised, turned into
a smooth clamped cubic spline and multiplied onto the filled gap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .gaps import GapSpec, project_feasible

log = logging.getLogger(__name__)

# inpaint(observed, mask, gap) -> restored signal of the same length
Inpainter = Callable[[np.ndarray, np.ndarray, GapSpec], np.ndarray]


@dataclass(frozen=True)
class TdcConfig:
    num_artificial_gaps: int = 4
    num_segments: int = 10
    segment_length: int | None = None  # None: gap length // 4
    window_length: int = 2800  # sets the gap spacing: w from the edge, then w/2 apart

    def __post_init__(self):
        if self.num_artificial_gaps < 0 or self.num_artificial_gaps % 2:
            raise ValueError("num_artificial_gaps must be a non-negative even number")
        if self.num_segments < 2:
            raise ValueError("num_segments must be >= 2")
        if self.segment_length is not None and self.segment_length < 1:
            raise ValueError("segment_length must be >= 1")

    def segment_length_for(self, gap_length: int) -> int:
        if self.segment_length is not None:
            return self.segment_length
        return max(1, gap_length // 4)


@dataclass
class CompensationCurve:
    amplitudes: np.ndarray  # symmetrised knot values
    knots: np.ndarray  # segment centres t_1..t_m (1-based sample positions)
    curve: np.ndarray  # one gain per gap sample
    unimodal: bool
    spline: CubicSpline | None = field(default=None, repr=False)


def place_artificial_gaps(gap: GapSpec, config: TdcConfig, signal_length: int) -> list[GapSpec]:
    """Gaps of the same length, alternating left/right, moving outwards.

    The first pair sits ``w`` reliable samples away from the gap edges; each
    further pair keeps ``w // 2`` reliable samples to the previous one.
    """
    h = gap.length
    w = config.window_length
    out = []
    for j in range(config.num_artificial_gaps // 2):
        distance = w + j * (h + w // 2)
        left = GapSpec.from_length(gap.start - distance - h, h) if gap.start - distance - h >= 1 else None
        right_start = gap.end + distance + 1
        if left is None or right_start + h - 1 > signal_length:
            raise ValueError(f"insufficient context to place {config.num_artificial_gaps} "
                             f"artificial gaps around {gap}")
        out += [left, GapSpec.from_length(right_start, h)]
    return sorted(out)


def segment_layout(gap: GapSpec, m: int, segment_length: int) -> tuple[np.ndarray, np.ndarray]:
    """Segment start samples (1-based) and real-valued centres, equally spaced in the gap."""
    h = gap.length
    if segment_length > h:
        raise ValueError(f"segment length {segment_length} exceeds gap length {h}")
    spread = (h - segment_length) / (m - 1)
    offsets = spread * np.arange(m)
    centers = gap.start + offsets + (segment_length - 1) / 2
    starts = gap.start + np.floor(offsets + 0.5).astype(int)
    return starts, centers


def energy_progression(signal, gap: GapSpec, m: int, segment_length: int) -> np.ndarray:
    signal = np.asarray(signal)
    starts, _ = segment_layout(gap, m, segment_length)
    idx = starts[:, None] - 1 + np.arange(segment_length)[None, :]
    return np.sum(np.abs(signal[idx]) ** 2, axis=1)


def solve_multipliers(X, Y) -> np.ndarray:
    """Row-wise least squares ``m_i = sum_j y_ij x_ij / sum_j x_ij**2``."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape:
        raise ValueError("X and Y must have the same shape")
    den = np.sum(X**2, axis=1)
    num = np.sum(X * Y, axis=1)
    degenerate = den == 0
    if degenerate.any():
        log.warning("zero-energy rows %s; multiplier set to 1", np.flatnonzero(degenerate))
    return np.where(degenerate, 1.0, num / np.where(degenerate, 1.0, den))


def symmetrize(n) -> np.ndarray:
    n = np.array(n, dtype=float)
    m = len(n)
    half = m // 2
    for i in range(half):
        n[i] = (n[i] + n[m - 1 - i]) / 2
    for i in range(half, m):
        n[i] = n[m - 1 - i]
    return n


def _is_unimodal(q, tol=1e-12) -> bool:
    c = (len(q) - 1) // 2
    d = np.diff(q)
    return bool(np.all(d[:c] >= -tol) and np.all(d[c:] <= tol))


def build_curve(n, knots, gap: GapSpec) -> CompensationCurve:
    """Clamped cubic spline through ``(s, 1), (t_i, n_i), (f, 1)``, sampled on the gap."""
    n = np.asarray(n, dtype=float)
    knots = np.asarray(knots, dtype=float)
    x = np.concatenate(([gap.start], knots, [gap.end]))
    if np.any(np.diff(x) <= 0):
        raise ValueError("spline knots must be strictly increasing inside the gap")
    spline = CubicSpline(x, np.concatenate(([1.0], n, [1.0])), bc_type=((1, 0.0), (1, 0.0)))
    q = spline(np.arange(gap.start, gap.end + 1, dtype=float))
    q[0] = q[-1] = 1.0
    q = np.maximum(q, 1.0)
    unimodal = _is_unimodal(q)
    if not unimodal:
        log.info("compensation curve for %s is not unimodal", gap)
    return CompensationCurve(n, knots, q, unimodal, spline)


def compensation_curve(original, inpainted_list, artificial: list[GapSpec], gap: GapSpec,
                       config: TdcConfig) -> CompensationCurve:
    m = config.num_segments
    seg = config.segment_length_for(gap.length)
    _, knots = segment_layout(gap, m, seg)
    if not artificial:
        return CompensationCurve(np.ones(m), knots, np.ones(gap.length), True)
    X = np.column_stack([energy_progression(z, g, m, seg) for z, g in zip(inpainted_list, artificial)])
    Y = np.column_stack([energy_progression(original, g, m, seg) for g in artificial])
    amplitudes = symmetrize(np.sqrt(solve_multipliers(X, Y)))
    return build_curve(amplitudes, knots, gap)


def tdc_inpaint(observed, mask, gap: GapSpec, inpaint: Inpainter,
                config: TdcConfig = TdcConfig()) -> tuple[np.ndarray, CompensationCurve]:
    """Inpaint ``gap`` with ``inpaint`` and rescale it by the learned curve.

    ``inpaint`` must be the complete inner method (offset handling included);
    it is applied unchanged to the true gap and to every artificial gap.
    """
    observed = np.asarray(observed)
    mask = np.asarray(mask, dtype=bool)
    restored = inpaint(observed, mask, gap)
    artificial = place_artificial_gaps(gap, config, len(observed))
    filled = []
    for g in artificial:
        if not mask[g.slice].all():
            raise ValueError(f"artificial gap {g} overlaps missing samples")
        art_mask = mask.copy()
        art_mask[g.slice] = False
        filled.append(inpaint(np.where(art_mask, observed, 0), art_mask, g))
    curve = compensation_curve(observed, filled, artificial, gap, config)
    out = restored.copy()
    out[gap.slice] = out[gap.slice] * curve.curve
    return project_feasible(mask, observed, out), curve

