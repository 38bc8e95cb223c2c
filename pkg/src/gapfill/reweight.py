"""Iteratively reweighted l1 inpainting (synthesis and analysis variants)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frame import TightGaborFrame
from .solvers import SolverConfig, SolverResult, cp_analysis, dr_synthesis


@dataclass(frozen=True)
class ReweightConfig:
    outer_iterations: int = 10
    epsilon: float = 1e-3
    delta: float = 1e-2
    solver: SolverConfig = field(default_factory=SolverConfig)
    warm_start: bool = True

    def __post_init__(self):
        if self.outer_iterations < 1:
            raise ValueError("outer_iterations must be >= 1")
        if self.epsilon <= 0 or self.delta <= 0:
            raise ValueError("epsilon and delta must be positive")


def next_weights(coefficients, epsilon: float) -> np.ndarray:
    """``1 / (|z| + eps)``: strictly positive and at most ``1 / eps``."""
    return 1.0 / (np.abs(coefficients) + epsilon)


def _reweighted(solve, coefficients_of, frame, mask, observed, config):
    weights = np.ones(frame.shape)
    z_prev = None
    result = None
    init = None
    total = 0
    history = []
    for k in range(1, config.outer_iterations + 1):
        result = solve(frame, mask, observed, weights, config.solver, init=init)
        total += result.iterations
        z = coefficients_of(result)
        change = None if z_prev is None else float(np.linalg.norm(z - z_prev))
        history.append({"outer": k, "inner_iterations": result.iterations,
                        "converged": result.converged, "change": change})
        weights = next_weights(z, config.epsilon)
        if change is not None and change < config.delta:
            break
        z_prev = z
        if config.warm_start:
            init = result.state
    result.info = {"outer_iterations": len(history), "history": history,
                   "inner_iterations_total": total}
    result.iterations = total
    return result


def reweighted_synthesis(frame: TightGaborFrame, mask, observed,
                         config: ReweightConfig = ReweightConfig()) -> SolverResult:
    """Repeated DR solves with weights ``1 / (|z| + eps)`` from the last coefficients."""
    # the DR result already carries proj_Gamma(D z) of the last solve
    return _reweighted(dr_synthesis, lambda r: r.coefficients,
                       frame, mask, observed, config)


def reweighted_analysis(frame: TightGaborFrame, mask, observed,
                        config: ReweightConfig = ReweightConfig()) -> SolverResult:
    """Repeated CP solves; weights come from ``D* x`` of the last restored signal."""
    return _reweighted(cp_analysis, lambda r: frame.analyze(r.signal),
                       frame, mask, observed, config)
