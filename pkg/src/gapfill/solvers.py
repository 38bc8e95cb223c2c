"""Proximal operators and the two core l1 inpainting solvers.

``dr_synthesis`` solves ``min ||w * x||_1  s.t.  D x in Gamma`` with
Douglas-Rachford; ``cp_analysis`` solves ``min ||w * D* z||_1  s.t.  z in
Gamma`` with Chambolle-Pock.  Both rely on D being a Parseval frame.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .frame import TightGaborFrame
from .gaps import mask_apply, project_feasible

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    dr_tau: float = 1.0
    cp_tau: float = 0.9
    cp_sigma: float = 0.9
    tolerance: float = 1e-4
    max_iterations: int = 1000

    def __post_init__(self):
        if min(self.dr_tau, self.cp_tau, self.cp_sigma) <= 0:
            raise ValueError("step sizes must be positive")
        if self.cp_tau * self.cp_sigma >= 1:
            raise ValueError(f"cp_tau * cp_sigma must be < 1, got {self.cp_tau * self.cp_sigma}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance >= 0:
            raise ValueError("tolerance must be non-negative")


@dataclass
class SolverResult:
    signal: np.ndarray
    coefficients: np.ndarray
    iterations: int
    converged: bool
    objective: np.ndarray = field(repr=False)
    # solver state for warm starts (q for DR; (p, q) for CP)
    state: tuple = field(default=(), repr=False)
    info: dict = field(default_factory=dict)


def _split(x, thresholds) -> tuple[np.ndarray, np.ndarray]:
    """``(soft(x), clip(x))`` with ``soft + clip == x`` bit for bit.

    Whichever part is at least half of ``x`` is computed by scaling; the other
    one is the difference, which is then exact (Sterbenz).
    """
    x = np.asarray(x)
    thresholds = np.asarray(thresholds)
    if thresholds.shape != x.shape and thresholds.ndim:
        raise ValueError(f"length mismatch: {x.shape} vs {thresholds.shape}")
    flat = x.reshape(-1)
    t = np.broadcast_to(thresholds, x.shape).reshape(-1)
    mag = np.abs(flat)
    with np.errstate(divide="ignore", over="ignore"):
        gain = np.maximum(1 - t / np.maximum(mag, np.finfo(float).tiny), 0.0)
    soft = flat * gain
    kept = flat - soft
    # zero gain is already exact; only 0 < gain < 1/2 needs the other order
    redo = np.flatnonzero((gain > 0) & (gain < 0.5))
    if redo.size:
        kept[redo] = flat[redo] * (1 - gain[redo])
        soft[redo] = flat[redo] - kept[redo]
    return soft.reshape(x.shape), kept.reshape(x.shape)


def soft_threshold(x, thresholds) -> np.ndarray:
    """Entry-wise ``sign(x) * max(|x| - t, 0)`` for complex ``x``."""
    return _split(x, thresholds)[0]


def clip(x, bounds) -> np.ndarray:
    """Projection onto ``{|x_i| <= b_i}``, equal to ``x - soft(x, b)``."""
    return _split(x, bounds)[1]


def _weights(weights, shape) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim == 0:
        w = np.full(shape, float(w))
    if w.shape != shape:
        raise ValueError(f"weights of shape {w.shape} do not match coefficients {shape}")
    if np.any(w <= 0):
        raise ValueError("weights must be strictly positive")
    return w


def _prepare(frame, mask, observed):
    mask = np.asarray(mask, dtype=bool)
    observed = np.asarray(observed)
    L = frame.params.signal_length
    if mask.shape != (L,) or observed.shape != (L,):
        raise ValueError(f"mask and observed signal must have length {L}")
    return mask, observed, _Ops(frame, not np.iscomplexobj(observed))


class _Ops:
    """Frame operators on the coefficient layout the solvers iterate on.

    For real signals every iterate is Hermitian in the channel index (the
    weights are constant across channels, or at least symmetric), so only
    channels ``0..M//2`` are stored; norms count the mirrored channels twice.
    """

    def __init__(self, frame: TightGaborFrame, real: bool):
        self.frame, self.real = frame, real
        if real:
            self.h = frame.half_channels
            self.mult = frame.channel_multiplicity
        else:
            self.h = frame.params.channels
            self.mult = None
        self.shape = (frame.params.num_frames, self.h)

    def analyze(self, signal):
        return self.frame.analyze_half(signal) if self.real else self.frame.analyze(signal)

    def synthesize(self, coefs):
        return self.frame.synthesize_half(coefs) if self.real else self.frame.synthesize(coefs)

    def reduce(self, full):
        """Full-grid array (weights, warm-start coefficients) to the working layout."""
        full = np.asarray(full)
        if full.shape == self.frame.shape and self.real:
            return full[:, :self.h]
        return full

    def expand(self, coefs):
        return self.frame.expand_half(coefs) if self.real else coefs

    def norm(self, x) -> float:
        if self.mult is None:
            return float(np.linalg.norm(x))
        return float(np.sqrt(np.sum(self.mult * (x.real**2 + x.imag**2))))

    def weighted_l1(self, w, x) -> float:
        mag = w * np.abs(x)
        return float(np.sum(mag if self.mult is None else self.mult * mag))


def dr_synthesis(frame: TightGaborFrame, mask, observed, weights=1.0,
                 config: SolverConfig = SolverConfig(), init=None) -> SolverResult:
    """Douglas-Rachford iterations for the weighted synthesis problem.

    ``init`` is the ``state`` of an earlier result, ``(q,)``; it replaces the
    default starting point ``q0 = D*(M_R y)``.
    """
    mask, observed, ops = _prepare(frame, mask, observed)
    w = ops.reduce(_weights(weights, frame.shape))
    thresholds = config.dr_tau * w

    data = ops.analyze(mask_apply(mask, observed))
    q = data.copy() if init is None else ops.reduce(np.array(init[0], dtype=complex))
    x_prev = None
    objective = []
    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        x = soft_threshold(q, thresholds)
        # q + prox_f1(2x - q) - x, prox_f1(u) = u - D* M_R D u + D* M_R y
        q = x - ops.analyze(mask_apply(mask, ops.synthesize(2 * x - q))) + data
        objective.append(ops.weighted_l1(w, x))
        if x_prev is not None:
            diff = ops.norm(x - x_prev)
            if diff == 0 or diff < config.tolerance * ops.norm(x_prev):
                converged = True
                break
        x_prev = x
    restored = project_feasible(mask, observed, ops.synthesize(x))
    log.debug("DR stopped after %d iterations (converged=%s)", it, converged)
    return SolverResult(restored, ops.expand(x), it, converged, np.array(objective),
                        state=(q,))


def cp_analysis(frame: TightGaborFrame, mask, observed, weights=1.0,
                config: SolverConfig = SolverConfig(), init=None) -> SolverResult:
    """Chambolle-Pock iterations for the weighted analysis problem.

    Defaults: ``p0 = M_R y`` and ``q0 = 0``; ``init=(p0, q0)`` overrides both.
    """
    mask, observed, ops = _prepare(frame, mask, observed)
    w = ops.reduce(_weights(weights, frame.shape))
    tau, sigma = config.cp_tau, config.cp_sigma
    if tau * sigma >= 1:
        raise ValueError("cp_tau * cp_sigma must be < 1")

    if init is None:
        p = mask_apply(mask, observed).astype(float if ops.real else complex)
        q = np.zeros(ops.shape, dtype=complex)
    else:
        p, q = np.array(init[0]), ops.reduce(np.array(init[1]))
    ybar = p
    coefs = ops.analyze(ybar)
    objective = []
    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        q = clip(q + sigma * coefs, w)
        p_next = project_feasible(mask, observed, p - tau * ops.synthesize(q))
        ybar_next = 2 * p_next - p
        p = p_next
        coefs = ops.analyze(ybar_next)
        objective.append(ops.weighted_l1(w, coefs))
        diff = np.linalg.norm(ybar_next - ybar)
        done = diff == 0 or diff < config.tolerance * np.linalg.norm(ybar)
        ybar = ybar_next
        if done:
            converged = True
            break
    restored = project_feasible(mask, observed, ybar)
    log.debug("CP stopped after %d iterations (converged=%s)", it, converged)
    return SolverResult(restored, ops.expand(coefs), it, converged, np.array(objective),
                        state=(p, q))


def analysis_objective(frame: TightGaborFrame, signal, weights=1.0) -> float:
    coefs = frame.analyze(signal)
    return float(np.sum(_weights(weights, frame.shape) * np.abs(coefs)))
