"""Per-gap inpainting pipeline.

Each gap is processed on its own context segment: the gap plus
``context_windows * w`` samples on each side, aligned to the hop grid of the
full signal.  The segment is shifted by the gap's offset, solved, shifted
back, and only the gap samples are spliced into the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .frame import GaborParams, apply_offset, build_tight_frame, compute_offset, undo_offset
from .gaps import GapSpec, reliable_mask
from .gradual import GradualConfig, gradual_inpaint
from .janssen import JanssenConfig, janssen_inpaint
from .methods import ALL_SCHEMES, MODELS, solve
from .reweight import ReweightConfig
from .solvers import SolverConfig
from .tdc import TdcConfig, tdc_inpaint

OFFSETS = ("none", "half", "full")


@dataclass(frozen=True)
class FrameConfig:
    window_length: int = 2800
    hop: int = 700
    channels: int = 2800
    window_kind: str = "hann"

    def params(self, signal_length: int) -> GaborParams:
        return GaborParams(self.window_length, self.hop, self.channels,
                           signal_length, self.window_kind)


@dataclass(frozen=True)
class Method:
    """What to run on a gap.  ``model='janssen'`` ignores weights and offset."""

    model: str = "ana"
    weights: str = "none"
    offset: str = "half"
    gradual_step: float | None = None
    tdc: bool = False
    tdc_gaps: int = 4
    tdc_segments: int = 10

    def __post_init__(self):
        if self.model not in MODELS + ("janssen",):
            raise ValueError(f"unknown model {self.model!r}")
        if self.weights not in ALL_SCHEMES:
            raise ValueError(f"unknown weighting scheme {self.weights!r}")
        if self.offset not in OFFSETS:
            raise ValueError(f"unknown offset {self.offset!r}")
        if self.gradual_step is not None:
            if self.model == "janssen":
                raise ValueError("gradual inpainting needs an l1 model")
            if not 0 < self.gradual_step <= 0.5:
                raise ValueError("gradual step must lie in (0, 1/2]")
        if self.tdc:
            TdcConfig(self.tdc_gaps, self.tdc_segments)
            if self.model != "janssen" and self.offset == "none":
                # the curve assumes a symmetric energy drop, which needs an aligned frame
                raise ValueError("time-domain compensation needs a half or full offset")

    @property
    def inner(self) -> "Method":
        return replace(self, tdc=False)

    @property
    def label(self) -> str:
        """Method descriptor without the offset (reported in its own column)."""
        if self.model == "janssen":
            base = "janssen"
        else:
            base = f"{self.model}-{self.weights}"
        if self.gradual_step is not None:
            base += f"+gradual{self.gradual_step:g}"
        if self.tdc:
            base += f"+tdc{self.tdc_gaps}x{self.tdc_segments}"
        return base


@dataclass(frozen=True)
class Settings:
    frame: FrameConfig = field(default_factory=FrameConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    outer_iterations: int = 10
    reweight_epsilon: float = 1e-3
    reweight_delta: float = 1e-2
    janssen: JanssenConfig = field(default_factory=JanssenConfig)
    tdc_segment_length: int | None = None
    context_windows: int = 4
    strict_gradual: bool = False

    @property
    def reweight(self) -> ReweightConfig:
        return ReweightConfig(self.outer_iterations, self.reweight_epsilon,
                              self.reweight_delta, self.solver)

    def tdc_config(self, method: Method) -> TdcConfig:
        return TdcConfig(method.tdc_gaps, method.tdc_segments, self.tdc_segment_length,
                         self.frame.window_length)


@dataclass
class GapOutcome:
    gap: GapSpec
    signal: np.ndarray  # full-length signal with this gap filled
    iterations: int
    converged: bool
    info: dict = field(default_factory=dict)


def context_extent(gap_length: int, method: Method, settings: Settings) -> int:
    """Reliable samples needed on each side of a gap of this length."""
    w = settings.frame.window_length
    if method.model == "janssen":
        pad = settings.janssen.window_length
    else:
        pad = settings.context_windows * w + settings.frame.hop
    if method.tdc:
        pairs = method.tdc_gaps // 2
        if pairs:
            pad += w + (pairs - 1) * (gap_length + w // 2) + gap_length
    return pad


def _extract(signal, start: int, length: int, fill=0):
    """``signal[start:start+length]`` with out-of-range samples set to ``fill``."""
    out = np.full(length, fill, dtype=np.asarray(signal).dtype)
    lo, hi = max(start, 0), min(start + length, len(signal))
    if hi > lo:
        out[lo - start:hi - start] = signal[lo:hi]
    return out


def _l1_segment(observed, mask, gap: GapSpec, method: Method, settings: Settings):
    fc = settings.frame
    a = fc.hop
    pad = settings.context_windows * fc.window_length
    start = ((gap.start - 1 - pad) // a) * a
    length = math.ceil((gap.end + pad - start) / a) * a
    seg = _extract(observed, start, length)
    seg_mask = _extract(mask, start, length, fill=True)
    local = gap.shifted(-start)
    offset = compute_offset(local.start, local.end, a, method.offset)
    seg = apply_offset(seg, offset)
    seg_mask = apply_offset(seg_mask, offset)
    shifted = local.shifted(-offset.value)
    frame = build_tight_frame(fc.params(length))
    if method.gradual_step is not None:
        cfg = GradualConfig(method.gradual_step, method.model, method.weights,
                            settings.solver, settings.reweight, settings.strict_gradual)
        result = gradual_inpaint(frame, shifted, seg, cfg, mask=seg_mask)
    else:
        result = solve(frame, seg_mask, seg, method.model, method.weights,
                       settings.solver, settings.reweight)
    restored = undo_offset(result.signal, offset)
    info = dict(result.info, offset=offset.value, segment_start=start + 1, segment_length=length)
    return restored[local.slice], result.iterations, result.converged, info


def _janssen_segment(observed, mask, gap: GapSpec, settings: Settings):
    ctx = settings.janssen.window_length
    start = gap.start - 1 - ctx
    length = gap.length + 2 * ctx
    seg = _extract(observed, start, length)
    seg_mask = _extract(mask, start, length, fill=True)
    restored = janssen_inpaint(seg, seg_mask, settings.janssen)
    local = gap.shifted(-start)
    return restored[local.slice], settings.janssen.iterations, True, {}


def inpaint_gap(observed, mask, gap: GapSpec, method: Method,
                settings: Settings = Settings()) -> GapOutcome:
    """Fill one gap; every sample outside ``gap`` is returned untouched."""
    observed = np.asarray(observed, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != observed.shape:
        raise ValueError("mask and signal lengths differ")
    if gap.end > len(observed) or mask[gap.slice].any():
        raise ValueError(f"gap {gap} is not marked missing in the mask")
    clean = np.where(mask, observed, 0.0)

    if method.tdc:
        stats = []

        def inner(obs, m, g):
            outcome = inpaint_gap(obs, m, g, method.inner, settings)
            stats.append(outcome)
            return outcome.signal

        filled, curve = tdc_inpaint(clean, mask, gap, inner, settings.tdc_config(method))
        out = observed.copy()
        out[gap.slice] = filled[gap.slice]
        info = {"tdc_unimodal": curve.unimodal, "tdc_amplitudes": curve.amplitudes.tolist()}
        return GapOutcome(gap, out, stats[0].iterations, stats[0].converged, info)

    if method.model == "janssen":
        values, its, conv, info = _janssen_segment(clean, mask, gap, settings)
    else:
        values, its, conv, info = _l1_segment(clean, mask, gap, method, settings)
    out = observed.copy()
    out[gap.slice] = values
    return GapOutcome(gap, out, its, conv, info)


def inpaint(observed, gaps: list[GapSpec], method: Method,
            settings: Settings = Settings()) -> tuple[np.ndarray, list[GapOutcome]]:
    """Fill every gap independently and splice all of them into one signal."""
    observed = np.asarray(observed, dtype=float)
    mask = reliable_mask(len(observed), gaps)
    out = observed.copy()
    outcomes = []
    for gap in sorted(gaps):
        outcome = inpaint_gap(observed, mask, gap, method, settings)
        out[gap.slice] = outcome.signal[gap.slice]
        outcomes.append(outcome)
    return out, outcomes
