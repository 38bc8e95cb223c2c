import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gapfill import gradual
from gapfill.frame import GaborParams, build_tight_frame
from gapfill.gaps import GapSpec, reliable_mask
from gapfill.gradual import GradualConfig, grade_count, gradual_inpaint, step_size
from gapfill.methods import solve
from gapfill.solvers import SolverConfig

FRAME = build_tight_frame(GaborParams(256, 64, 256, 8192))
QUICK = SolverConfig(max_iterations=30)


def signal():
    t = np.arange(8192)
    return 0.5 * np.sin(2 * np.pi * 0.013 * t) + 0.2 * np.sin(2 * np.pi * 0.071 * t + 1)


def test_step_and_grade_arithmetic():
    assert step_size(1764, 1 / 8) == 220
    assert grade_count(1764, 220) == 5
    assert step_size(5, 1 / 8) == 1


def test_forty_ms_gap_runs_five_grades():
    x = signal()
    gap = GapSpec.from_length(3000, 1764)
    cfg = GradualConfig(1 / 8, "ana", "energy", QUICK)
    res = gradual_inpaint(FRAME, gap, np.where(reliable_mask(8192, [gap]), x, 0), cfg)
    assert res.info == {"grades": 5, "step": 220}


@given(st.integers(1, 5000), st.floats(0.01, 0.5))
def test_grade_count_matches_loop(h, fraction):
    r = step_size(h, fraction)
    s, f, grades = 1, h, 0
    while s <= f:
        s, f, grades = s + r, f - r, grades + 1
    assert grades == grade_count(h, r) == math.ceil(h / (2 * r))


@pytest.mark.parametrize("model", ["syn", "ana"])
def test_half_step_is_single_plain_solve(model):
    x = signal()
    gap = GapSpec.from_length(3000, 300)
    mask = reliable_mask(8192, [gap])
    y = np.where(mask, x, 0)
    res = gradual_inpaint(FRAME, gap, y, GradualConfig(0.5, model, "energy", QUICK))
    plain = solve(FRAME, mask, y, model, "energy", QUICK)
    assert res.info["grades"] == 1
    assert np.array_equal(res.signal, plain.signal)


def test_frozen_samples_never_change(monkeypatch):
    calls = []

    def spy(frame, mask, observed, *args, **kwargs):
        result = solve(frame, mask, observed, *args, **kwargs)
        calls.append((mask.copy(), result.signal.copy()))
        return result

    monkeypatch.setattr(gradual, "solve", spy)
    x = signal()
    gap = GapSpec.from_length(3000, 400)
    y = np.where(reliable_mask(8192, [gap]), x, 0)
    res = gradual_inpaint(FRAME, gap, y, GradualConfig(1 / 8, "ana", "energy", QUICK))
    assert len(calls) == res.info["grades"] == 4
    for (mask_a, out_a), (mask_b, _) in zip(calls, calls[1:]):
        assert np.all(mask_b[mask_a])  # reliable sets only grow
        assert mask_b.sum() > mask_a.sum()
    for g, (mask_g, _) in enumerate(calls):
        for _, later in calls[g:]:
            assert np.array_equal(later[mask_g], calls[g][1][mask_g] if g else y[mask_g])
    assert np.array_equal(res.signal, calls[-1][1])


def test_other_missing_samples_stay_missing():
    x = signal()
    gap = GapSpec.from_length(3000, 200)
    other = GapSpec.from_length(6000, 50)
    mask = reliable_mask(8192, [gap, other])
    res = gradual_inpaint(FRAME, gap, np.where(mask, x, 0),
                          GradualConfig(1 / 4, "syn", "norm", QUICK), mask=mask)
    assert np.array_equal(res.signal[mask], x[mask])


def test_config_validation():
    with pytest.raises(ValueError):
        GradualConfig(step_fraction=0)
    with pytest.raises(ValueError):
        GradualConfig(step_fraction=0.6)
    with pytest.raises(ValueError):
        GradualConfig(scheme="none", strict=True)
    with pytest.raises(ValueError):
        GradualConfig(model="lasso")
    GradualConfig(scheme="none", strict=False)
