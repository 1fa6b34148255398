import math

import numpy as np
import pytest

from mottfefet.acceptance import dense_oracle_current
from mottfefet.constants import thermal_voltage_ev
from mottfefet.network import (
    ConvergenceError,
    ImtParams,
    IvTrace,
    build_grid,
    extract_thresholds,
    filament_path,
    monte_carlo_step,
    p_imt,
    p_mit,
    relax,
    solve_network,
    sweep_iv,
)


def test_imt_params_validation():
    with pytest.raises(ValueError):
        ImtParams(e_b=-0.1)
    with pytest.raises(ValueError):
        ImtParams(gamma=0.0)
    with pytest.raises(ValueError):
        ImtParams(r_met=0.0)
    with pytest.raises(ValueError):
        ImtParams(r_ins_mean=50.0, r_met=60.0)


def test_build_grid_requires_contrast():
    # legal parameters, but not enough insulating/metallic contrast to build
    params = ImtParams(r_ins_mean=50.0, r_ins_sigma=0.0, r_met=10.0)
    with pytest.raises(ValueError):
        build_grid(3, 3, params, seed=0)


def test_single_domain_grid(imt_params):
    grid = build_grid(1, 1, imt_params, seed=0)
    assert grid.n_edges == 1
    sol = solve_network(grid, 2.0)
    assert sol.terminal_current == pytest.approx(2.0 / grid.r_ins_v[0, 0])
    assert sol.device_resistance == pytest.approx(grid.r_ins_v[0, 0])


def test_uniform_2x2_reduces_to_single_resistance():
    params = ImtParams(r_ins_sigma=0.0)
    grid = build_grid(2, 2, params, seed=0)
    sol = solve_network(grid, 1.0)
    # symmetric bridge: the horizontal edge carries nothing and the device
    # resistance equals one domain resistance
    assert sol.device_resistance == pytest.approx(params.r_ins_mean, rel=1e-10)
    assert sol.drop_h[0, 0] == pytest.approx(0.0, abs=1e-12)


def test_metallic_column_resistance(imt_params):
    grid = build_grid(5, 4, imt_params, seed=1)
    grid.metal_v[:, 2] = True
    sol = solve_network(grid, 1.0)
    assert sol.device_resistance == pytest.approx(5 * imt_params.r_met, rel=1e-3)


def test_solver_matches_dense_oracle(imt_params, rng):
    for rows in (1, 2, 3):
        for cols in (1, 2, 3):
            for _ in range(10):
                grid = build_grid(rows, cols, imt_params,
                                  seed=int(rng.integers(2**31)))
                grid.metal_v[:] = rng.random(grid.metal_v.shape) < 0.5
                if grid.metal_h.size:
                    grid.metal_h[:] = rng.random(grid.metal_h.shape) < 0.5
                v = float(rng.uniform(0.1, 5.0))
                i_fast = solve_network(grid, v).terminal_current
                i_ref = dense_oracle_current(grid, v)
                assert i_fast == pytest.approx(i_ref, rel=1e-8)


def test_zero_bias_solution_is_zero(imt_params):
    grid = build_grid(3, 3, imt_params, seed=2)
    sol = solve_network(grid, 0.0)
    assert sol.terminal_current == 0.0
    assert np.all(sol.drop_v == 0.0)
    assert math.isfinite(sol.device_resistance)


def test_kcl_residual_small(imt_params):
    grid = build_grid(10, 10, imt_params, seed=3)
    sol = solve_network(grid, 1.5)
    assert sol.kcl_residual < 1e-10


def test_solution_scales_linearly(imt_params):
    grid = build_grid(4, 4, imt_params, seed=4)
    a = solve_network(grid, 1.0)
    b = solve_network(grid, 2.5)
    assert b.terminal_current == pytest.approx(2.5 * a.terminal_current, rel=1e-10)
    assert b.device_resistance == pytest.approx(a.device_resistance, rel=1e-10)


def test_p_imt_formula(imt_params):
    kt = thermal_voltage_ev(imt_params.temperature)
    dv, psi = 0.05, 0.1
    expected = math.exp(-(imt_params.e_b - dv / imt_params.gamma
                          - imt_params.alpha * psi) / kt)
    assert p_imt(dv, psi, imt_params) == pytest.approx(min(expected, 1.0))


def test_p_imt_monotone_in_bias_and_gate(imt_params):
    assert p_imt(0.10, 0.0, imt_params) > p_imt(0.05, 0.0, imt_params)
    assert p_imt(0.05, 0.3, imt_params) > p_imt(0.05, 0.0, imt_params)


def test_p_imt_clamped(imt_params):
    assert p_imt(100.0, 0.0, imt_params) == 1.0
    assert 0.0 <= p_imt(0.0, 0.0, imt_params) <= 1.0


def test_p_mit_formula(imt_params):
    kt = thermal_voltage_ev(imt_params.temperature)
    expected = math.exp((imt_params.e_b - imt_params.e_c) / kt)
    assert p_mit(imt_params) == pytest.approx(min(expected, 1.0))


def test_monte_carlo_step_deterministic(imt_params):
    grid1 = build_grid(8, 8, imt_params, seed=5)
    grid2 = grid1.copy()
    sol1 = solve_network(grid1, 1.5)
    sol2 = solve_network(grid2, 1.5)
    n1 = monte_carlo_step(grid1, sol1, 0.0, np.random.default_rng(77))
    n2 = monte_carlo_step(grid2, sol2, 0.0, np.random.default_rng(77))
    assert n1 == n2
    assert np.array_equal(grid1.metal_v, grid2.metal_v)


def test_relax_quiet_at_low_bias(imt_params):
    grid = build_grid(10, 10, imt_params, seed=6)
    res = relax(grid, 0.2, 0.0, np.random.default_rng(0))
    assert res.converged
    assert grid.n_metallic == 0


def test_relax_fires_at_high_bias(imt_params):
    grid = build_grid(10, 10, imt_params, seed=6)
    res = relax(grid, 3.0, 0.0, np.random.default_rng(0), r_series=5200.0)
    assert res.converged
    assert filament_path(grid) is not None


def test_series_resistor_limits_current(imt_params):
    grid = build_grid(10, 10, imt_params, seed=6)
    r_series = 5200.0
    res = relax(grid, 2.0, 0.0, np.random.default_rng(0), r_series=r_series)
    assert res.converged
    i = res.solution.terminal_current
    assert i <= 2.0 / r_series * (1.0 + 1e-9)


def test_sweep_iv_rows_and_threshold(imt_params):
    grid = build_grid(12, 12, imt_params, seed=7)
    wave = np.linspace(0.0, 2.2, 45)
    trace = sweep_iv(grid, wave, 0.0, np.random.default_rng(1),
                     r_series=5200.0)
    th = extract_thresholds(trace)
    assert th.v_t is not None
    k = int(np.searchsorted(wave, th.v_t))
    assert trace.current[k] >= 10.0 * trace.current[k - 1]


def test_extract_thresholds_synthetic():
    v = np.array([0.0, 0.5, 1.0, 1.5, 1.0, 0.5, 0.0])
    i = np.array([0.0, 1e-7, 2e-7, 1e-4, 9e-5, 8e-5, 1e-7])
    d = np.array([1, 1, 1, 1, -1, -1, -1])
    trace = IvTrace(v_applied=v, current=i, n_metallic=np.zeros(7, dtype=int),
                    direction=d)
    th = extract_thresholds(trace)
    assert th.v_t == pytest.approx(1.5)
    assert th.v_h == pytest.approx(0.0)


def test_sweep_determinism(imt_params):
    grid1 = build_grid(10, 10, imt_params, seed=8)
    grid2 = build_grid(10, 10, imt_params, seed=8)
    wave = np.linspace(0.0, 2.0, 41)
    t1 = sweep_iv(grid1, wave, 0.1, np.random.default_rng(9), r_series=5200.0)
    t2 = sweep_iv(grid2, wave, 0.1, np.random.default_rng(9), r_series=5200.0)
    assert np.array_equal(t1.current, t2.current)
    assert np.array_equal(t1.n_metallic, t2.n_metallic)


def test_convergence_error_carries_index():
    # e_c barely above e_b makes metallic domains relax almost immediately,
    # so a fired network churns and the sweep must report where it gave up
    params = ImtParams(e_b=0.55, e_c=0.5501)
    grid = build_grid(10, 10, params, seed=10)
    wave = np.linspace(0.0, 3.0, 31)
    with pytest.raises(ConvergenceError) as err:
        sweep_iv(grid, wave, 0.0, np.random.default_rng(2), max_steps=200)
    assert err.value.waveform_index is not None


def test_grid_reset_and_copy(imt_params):
    grid = build_grid(6, 6, imt_params, seed=11)
    grid.metal_v[0, 0] = True
    clone = grid.copy()
    clone.reset()
    assert grid.metal_v[0, 0]
    assert clone.n_metallic == 0
    assert np.array_equal(clone.r_ins_v, grid.r_ins_v)


def test_build_grid_resampling_floor():
    params = ImtParams(r_ins_mean=3e6, r_ins_sigma=2e6, r_met=10.0)
    grid = build_grid(15, 15, params, seed=12)
    lo = max(10.0 * params.r_met, params.r_ins_mean - 4.0 * params.r_ins_sigma)
    assert np.all(grid.r_ins_v >= lo)


def test_build_grid_zero_sigma():
    params = ImtParams(r_ins_sigma=0.0)
    grid = build_grid(4, 4, params, seed=13)
    assert np.all(grid.r_ins_v == params.r_ins_mean)
