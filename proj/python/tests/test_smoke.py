"""Smoke tests for the python bindings against the CMake-built module."""

import math

import numpy as np
import pytest

import pawf


@pytest.fixture
def pa():
    return pawf.PaParams(10.0, 1.0)


def test_scalar_pa_model(pa):
    assert pa.saturation_power() == pytest.approx(0.01, rel=1e-15)
    assert pawf.alpha(0.01, pa) == pytest.approx(6.8268949213708590, rel=1e-12)
    assert pawf.clip_transfer(0.2, pa) == 1.0
    p_out = pawf.output_power(0.01, pa)
    sigma = pawf.distortion_variance(0.01, pa)
    a = pawf.alpha(0.01, pa)
    assert p_out == pytest.approx(a * a * 0.01 + sigma, rel=1e-12)
    b = pawf.bussgang_point(0.01, pa)
    assert b.alpha == pawf.alpha(0.01, pa)
    assert b.d_alpha_dp < 0
    with pytest.raises(ValueError):
        pawf.alpha(-1.0, pa)


def test_gradients_match_finite_differences(pa):
    for p in (0.003, 0.01, 0.3):
        h = 1e-6 * p
        fd = (pawf.alpha(p + h, pa) - pawf.alpha(p - h, pa)) / (2 * h)
        assert pawf.alpha_gradient(p, pa) == pytest.approx(fd, rel=1e-5)
        fd_s = (
            pawf.distortion_variance(p + h, pa) - pawf.distortion_variance(p - h, pa)
        ) / (2 * h)
        assert pawf.distortion_gradient(p, pa) == pytest.approx(fd_s, rel=1e-5)


def test_monte_carlo_is_deterministic(pa):
    a = pawf.monte_carlo_bussgang(0.01, pa, 50_000, seed=3)
    b = pawf.monte_carlo_bussgang(0.01, pa, 50_000, seed=3)
    assert a.alpha_hat == b.alpha_hat
    assert a.residual_corr == pytest.approx(0.0, abs=1e-12)


def test_channel_generation_and_io(tmp_path, pa):
    h = pawf.generate_channel("rayleigh", 8, 8, seed=5)
    assert h.shape == (8, 8)
    assert h.dtype == np.complex128
    path = tmp_path / "h.csv"
    pawf.write_channel(h, path)
    back = pawf.read_channel(path)
    assert np.array_equal(h, back)

    lowrank = pawf.generate_channel("multipath", 8, 8, seed=5, n_paths=3)
    s = np.linalg.svd(lowrank, compute_uv=False)
    assert (s > 1e-9 * s[0]).sum() == 3


def test_capacity_and_gradient(pa):
    h = pawf.generate_channel("rayleigh", 4, 4, seed=9)
    p = np.full(4, 0.01)
    c = pawf.capacity(h, p, pa, 1e-6)
    assert c > 0
    g = pawf.capacity_gradient(h, p, pa, 1e-6)
    i = 0
    step = 1e-6 * p[i]
    hi, lo = p.copy(), p.copy()
    hi[i] += step
    lo[i] -= step
    fd = (pawf.capacity(h, hi, pa, 1e-6) - pawf.capacity(h, lo, pa, 1e-6)) / (2 * step)
    assert g[i] == pytest.approx(fd, rel=1e-5)

    r = pawf.effective_noise_covariance(h, p, pa, 1e-6)
    assert np.allclose(r, r.conj().T)


def test_allocators(pa):
    assert np.allclose(pawf.project_budget(np.array([2.0, 2.0]), 2.0), [1.0, 1.0])
    assert np.allclose(pawf.project_budget(np.array([3.0, -1.0]), 2.0), [2.0, 0.0])

    h = pawf.generate_channel("rayleigh", 4, 4, seed=2)
    rep = pawf.pgd_optimize(h, 0.04, pa, 1e-6)
    assert rep.capacity > 0
    assert 0.0 <= rep.utilization <= 1.0
    assert rep.capacity_trace == sorted(rep.capacity_trace)
    wf = pawf.waterfill_baseline(h, 0.04, 1e-6, pa.gain)
    assert wf.sum() == pytest.approx(0.04, rel=1e-9)
    assert rep.capacity >= pawf.capacity(h, wf, pa, 1e-6) - 1e-9

    opts = pawf.PgdOptions()
    opts.max_iters = 5
    rep_short = pawf.pgd_optimize(h, 0.04, pa, 1e-6, opts)
    assert rep_short.iterations <= 5


def test_regimes_and_units(pa):
    h = np.eye(4, dtype=complex)
    th = pawf.noise_threshold(h, pa, 0.02)
    assert th == pytest.approx(pawf.distortion_variance(0.02, pa), rel=1e-12)
    rep = pawf.classify(10 * th, th, band=1.0)
    assert rep.regime == "NoiseLimited"
    assert pawf.dbm_to_watt(pawf.watt_to_dbm(0.25)) == pytest.approx(0.25, rel=1e-12)


def test_pa_curve_csv(tmp_path):
    out = tmp_path / "pa.csv"
    pawf.run_pa_curve([0.5, 1.0], -20.0, 20.0, 11, 10.0, out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "p_dbm,v_cc,alpha,sigma_eta2_dbm,p_sat_dbm"
    assert len(lines) == 1 + 2 * 11
