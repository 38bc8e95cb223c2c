"""Single entry point mapping (model, weighting scheme) to a solver run."""

from __future__ import annotations

from .frame import TightGaborFrame
from .reweight import ReweightConfig, reweighted_analysis, reweighted_synthesis
from .solvers import SolverConfig, SolverResult, cp_analysis, dr_synthesis
from .weights import SCHEMES, compute_weights

MODELS = ("syn", "ana")
ALL_SCHEMES = SCHEMES + ("iterative",)


def check_method(model: str, scheme: str) -> None:
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    if scheme not in ALL_SCHEMES:
        raise ValueError(f"unknown weighting scheme {scheme!r}; expected one of {ALL_SCHEMES}")


def solve(frame: TightGaborFrame, mask, observed, model: str = "ana", scheme: str = "none",
          solver: SolverConfig = SolverConfig(),
          reweight: ReweightConfig | None = None, init=None) -> SolverResult:
    """Run one weighted (or reweighted) l1 solve.

    ``init`` is a warm-start state taken from an earlier ``SolverResult.state``
    of the same model; it is ignored by the reweighting drivers.
    """
    check_method(model, scheme)
    if scheme == "iterative":
        cfg = reweight or ReweightConfig(solver=solver)
        driver = reweighted_synthesis if model == "syn" else reweighted_analysis
        return driver(frame, mask, observed, cfg)
    weights = compute_weights(frame, mask, scheme).values
    core = dr_synthesis if model == "syn" else cp_analysis
    return core(frame, mask, observed, weights, solver, init=init)
