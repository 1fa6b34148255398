import numpy as np
import pytest

from mottfefet.constants import areal_capacitance
from mottfefet.ferroelectric import PreisachParams
from mottfefet.gatestack import (
    GateStack,
    default_pulse,
    default_stack,
    program,
    surface_potential,
)


def series_divider_psi(v_gate, c_fe, c_il, c_ch):
    """Surface potential of three ideal linear capacitors in series."""
    c_tot = 1.0 / (1.0 / c_fe + 1.0 / c_il + 1.0 / c_ch)
    return c_tot * v_gate / c_ch


def test_linear_limit_matches_capacitive_divider():
    # negligible switching polarization leaves a plain capacitive divider
    fe = PreisachParams(p_s=1e-9, p_r=0.5e-9)
    stack = default_stack(fe)
    c_fe = areal_capacitance(fe.eps_fe, fe.t_fe)
    for v_gate in (-3.0, -0.7, 0.5, 2.0, 6.0):
        sp = surface_potential(stack, v_gate)
        expected = series_divider_psi(v_gate, c_fe, stack.c_il, stack.c_ch)
        assert sp.psi_s == pytest.approx(expected, rel=1e-6, abs=1e-12)


def test_bias_point_balances():
    stack = default_stack()
    program(stack, 7.0)
    for v_gate in (0.0, 1.5, -2.0):
        sp = surface_potential(stack, v_gate)
        assert sp.v_gate() == pytest.approx(v_gate, abs=1e-9)
        # same charge on every element
        q_ch = stack.c_ch * sp.psi_s
        q_il = stack.c_il * sp.v_il
        assert q_ch == pytest.approx(q_il, rel=1e-9)


def test_virgin_stack_has_zero_surface_potential():
    sp = surface_potential(default_stack(), 0.0)
    assert sp.psi_s == pytest.approx(0.0, abs=1e-12)


def test_programming_sets_surface_potential_sign():
    stack = default_stack()
    program(stack, 7.0)
    psi1 = surface_potential(stack, 0.0).psi_s
    program(stack, -7.0)
    psi0 = surface_potential(stack, 0.0).psi_s
    assert psi1 > 0.05
    assert psi0 < -0.05


def test_programming_is_idempotent():
    stack = default_stack()
    program(stack, 7.0)
    psi_a = surface_potential(stack, 0.0).psi_s
    program(stack, 7.0)
    psi_b = surface_potential(stack, 0.0).psi_s
    assert psi_b == pytest.approx(psi_a, abs=1e-9)


def test_split_grows_with_write_voltage():
    splits = []
    for v_write in (2.0, 4.0, 7.0):
        stack = default_stack()
        program(stack, v_write)
        hi = surface_potential(stack, 0.0).psi_s
        program(stack, -v_write)
        lo = surface_potential(stack, 0.0).psi_s
        splits.append(hi - lo)
    assert splits[0] < splits[1] < splits[2]


def test_surface_potential_is_read_only():
    stack = default_stack()
    program(stack, 7.0)
    before = stack.fe.copy()
    surface_potential(stack, 4.0)
    assert stack.fe.v_now == before.v_now
    assert stack.fe.p_now == before.p_now
    assert stack.fe.history == before.history


def test_default_pulse_shape():
    pulse = default_pulse(5.0)
    assert pulse.max() == pytest.approx(5.0)
    assert pulse[-1] == pytest.approx(0.0)
    assert np.all(np.diff(pulse[:8]) > 0)


def test_pulse_must_end_at_zero():
    stack = default_stack()
    with pytest.raises(ValueError):
        program(stack, 5.0, pulse=[2.0, 5.0])


def test_stack_validation():
    fe = PreisachParams()
    with pytest.raises(ValueError):
        GateStack(fe=None, c_il=0.0)  # invalid capacitance checked first
