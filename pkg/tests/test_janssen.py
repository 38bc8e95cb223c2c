import numpy as np
import pytest
from scipy import linalg, signal as sps

from gapfill.gaps import GapSpec, reliable_mask, snr
from gapfill.janssen import (JanssenConfig, _fill, autocorrelation, covariance_matrix,
                             estimate_ar, janssen_inpaint, levinson_durbin)
from gapfill.signals import exact_ar

from oracles import prediction_error_energy


def ar2_process(n=20000, seed=0):
    e = np.random.default_rng(seed).standard_normal(n)
    return sps.lfilter([1.0], [1.0, -1.5, 0.7], e)


@pytest.mark.parametrize("method", ["autocorrelation", "covariance"])
def test_recovers_ar2_coefficients(method):
    a = estimate_ar(ar2_process(), 2, method)
    assert a[0] == 1.0
    np.testing.assert_allclose(a[1:], [-1.5, 0.7], rtol=0.05)


def test_trivial_filters():
    assert estimate_ar(np.zeros(100), 5).tolist() == [1, 0, 0, 0, 0, 0]
    assert estimate_ar(np.random.default_rng(0).random(10), 0).tolist() == [1.0]
    with pytest.raises(ValueError):
        estimate_ar(np.ones(5), 5)
    with pytest.raises(ValueError):
        estimate_ar(np.ones(50), 3, "burg")


def test_autocorrelation_and_levinson_against_direct_solutions(rng):
    x = rng.standard_normal(300)
    r = autocorrelation(x, 12)
    direct = np.array([np.dot(x[:300 - k], x[k:]) for k in range(13)])
    np.testing.assert_allclose(r, direct, atol=1e-10)
    a, err = levinson_durbin(r, 12)
    coefs = linalg.solve_toeplitz(r[:12], -r[1:13])
    np.testing.assert_allclose(a[1:], coefs, atol=1e-10)
    assert err == pytest.approx(r[0] + np.dot(coefs, r[1:13]))


def test_autocorrelation_filter_is_minimum_phase():
    a = estimate_ar(ar2_process(3000, seed=4), 16)
    assert np.all(np.abs(np.roots(a)) < 1)


def test_covariance_matrix_definition(rng):
    x = rng.standard_normal(60)
    p = 7
    C = covariance_matrix(x, p)
    direct = np.array([[sum(x[t - i] * x[t - j] for t in range(p, 60)) for j in range(p + 1)]
                       for i in range(p + 1)])
    np.testing.assert_allclose(C, direct, atol=1e-10)


def test_order_rule():
    assert JanssenConfig().order_for(10) == 32
    assert JanssenConfig().order_for(882) == 933
    assert JanssenConfig(order=5).order_for(882) == 5


@pytest.mark.parametrize("missing", [np.arange(40, 55), np.array([30, 31, 35, 50, 51, 52, 70])])
def test_fill_is_exact_minimiser(rng, missing):
    z = rng.standard_normal(120)
    a = np.array([1.0, -0.9, 0.4, 0.1])
    filled = _fill(z, missing, a)
    # dense least squares over the missing samples
    n, p = len(z), len(a) - 1
    A = np.zeros((n - p, n))
    for t in range(p, n):
        A[t - p, t - p:t + 1] = a[::-1]
    known = np.setdiff1d(np.arange(n), missing)
    sol = np.linalg.lstsq(A[:, missing], -A[:, known] @ z[known], rcond=None)[0]
    np.testing.assert_allclose(filled[missing], sol, atol=1e-10)
    assert np.array_equal(filled[known], z[known])
    assert prediction_error_energy(filled, a) <= prediction_error_energy(z, a) + 1e-12


def test_all_reliable_returns_input(rng):
    x = rng.standard_normal(500)
    assert np.array_equal(janssen_inpaint(x, np.ones(500, bool)), x)


def test_reliable_samples_unchanged_and_deterministic():
    x = ar2_process(3000, seed=2)
    mask = reliable_mask(3000, [GapSpec.from_length(1400, 60)])
    cfg = JanssenConfig(iterations=5, window_length=1200)
    a = janssen_inpaint(np.where(mask, x, 0), mask, cfg)
    b = janssen_inpaint(np.where(mask, x, 0), mask, cfg)
    assert np.array_equal(a[mask], x[mask])
    assert np.array_equal(a, b)


def test_exact_ar_signal_is_recovered():
    x, true_filter = exact_ar(order=8, duration=0.1)
    gap = GapSpec.from_length(2000, 200)
    mask = reliable_mask(len(x), [gap])
    seg = slice(gap.start - 1 - 600, gap.end + 600)
    local = GapSpec.from_length(601, 200)
    cfg = JanssenConfig(iterations=20, order=8)
    out = janssen_inpaint(np.where(mask, x, 0)[seg], mask[seg], cfg)
    assert snr(x[seg], out, [local]) >= 60
    # the true signal is a fixed point of the iteration
    assert np.abs(np.convolve(x, true_filter, mode="valid")).max() < 1e-9


def test_errors():
    x = np.ones(100)
    mask = reliable_mask(100, [GapSpec(50, 60)])
    with pytest.raises(ValueError):
        janssen_inpaint(x, mask, JanssenConfig(order=95))
    with pytest.raises(ValueError):
        janssen_inpaint(x, reliable_mask(100, [GapSpec(3, 10)]), JanssenConfig(order=5))
    with pytest.raises(ValueError):
        janssen_inpaint(x, mask[:50])
