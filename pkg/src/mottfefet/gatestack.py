"""Charge-balance model of the ferroelectric / interlayer / channel stack.

The gate voltage splits across three series elements: the ferroelectric film
(switching polarization plus a linear background permittivity), a thin
interlayer, and the channel surface modeled as a linear effective
capacitance. Charge continuity

    Q = P(v_fe) + c_fe * v_fe = c_il * v_il = c_ch * psi_s

together with v_gate = v_fe + v_il + psi_s determines the surface potential
psi_s. The residual is monotone in v_fe, so the solve is a bracketed root
find.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .constants import areal_capacitance
from .ferroelectric import PreisachParams, PreisachState, virgin_state

# Voltage-partition solver tolerance (V)
_VTOL = 1e-12


@dataclass
class GateStack:
    """Ferroelectric state plus the linear capacitances around it.

    c_il and c_ch are areal capacitances in uF/cm^2; area in um^2.
    """

    fe: PreisachState
    c_il: float = areal_capacitance(3.9, 1.0)   # 1 nm SiO2-like interlayer
    c_ch: float = 5.0                            # effective channel capacitance
    area: float = 1.0

    def __post_init__(self):
        if self.c_il <= 0.0 or self.c_ch <= 0.0:
            raise ValueError("capacitances must be positive")
        if self.area <= 0.0:
            raise ValueError("area must be positive")

    @property
    def c_fe_linear(self) -> float:
        """Background (non-switching) ferroelectric capacitance (uF/cm^2)."""
        p = self.fe.params
        return areal_capacitance(p.eps_fe, p.t_fe)

    def copy(self) -> "GateStack":
        return GateStack(fe=self.fe.copy(), c_il=self.c_il, c_ch=self.c_ch,
                         area=self.area)


def default_stack(fe_params: PreisachParams | None = None,
                  t_il: float = 1.0, eps_il: float = 3.9,
                  c_ch: float = 5.0) -> GateStack:
    """Stack with a virgin ferroelectric and default layer dimensions."""
    fe_params = fe_params or PreisachParams()
    return GateStack(fe=virgin_state(fe_params),
                     c_il=areal_capacitance(eps_il, t_il), c_ch=c_ch)


@dataclass(frozen=True)
class SurfacePotential:
    """One solved bias point of the stack."""

    psi_s: float
    v_fe: float
    v_il: float

    def v_gate(self) -> float:
        return self.v_fe + self.v_il + self.psi_s


def surface_potential(stack: GateStack, v_gate: float) -> SurfacePotential:
    """Partition v_gate across the stack; ferroelectric state is read-only."""
    c_fe = stack.c_fe_linear
    c_ser = 1.0 / stack.c_il + 1.0 / stack.c_ch

    def charge(v_fe: float) -> float:
        return stack.fe.polarization_at(v_fe) + c_fe * v_fe

    def residual(v_fe: float) -> float:
        return v_fe + charge(v_fe) * c_ser - v_gate

    # Bracket: |v_fe| can exceed |v_gate| by at most the polarization swing.
    span = abs(v_gate) + stack.fe.params.p_s * c_ser + 1.0
    lo, hi = -span, span
    if residual(lo) > 0.0 or residual(hi) < 0.0:  # widen (should not trigger)
        lo, hi = 10.0 * lo, 10.0 * hi
    try:
        v_fe = brentq(residual, lo, hi, xtol=_VTOL, maxiter=200)
    except RuntimeError as exc:
        raise RuntimeError(f"gate-stack charge balance did not converge at "
                           f"v_gate={v_gate:g} V") from exc
    q = charge(v_fe)
    return SurfacePotential(psi_s=q / stack.c_ch, v_fe=v_fe, v_il=q / stack.c_il)


def default_pulse(v_write: float, n_ramp: int = 8) -> np.ndarray:
    """Triangular gate pulse 0 -> v_write -> 0."""
    ramp_up = np.linspace(0.0, v_write, n_ramp + 1)[1:]
    ramp_down = np.linspace(v_write, 0.0, n_ramp + 1)[1:]
    return np.concatenate([ramp_up, ramp_down])


def program(stack: GateStack, v_write: float, pulse=None) -> GateStack:
    """Drive the gate through a write pulse, updating the ferroelectric.

    Each pulse point is partitioned via the charge balance; the ferroelectric
    then commits the voltage it actually saw. Positive v_write pushes the
    polarization positive (bit 1), negative pushes it negative (bit 0).
    Mutates and returns the stack.
    """
    if pulse is None:
        pulse = default_pulse(v_write)
    pulse = np.asarray(pulse, dtype=float)
    if pulse.size and abs(pulse[-1]) > 1e-12:
        raise ValueError("write pulse must return to 0 V at its end")
    for v_gate in pulse:
        sp = surface_potential(stack, float(v_gate))
        stack.fe.apply_voltage(sp.v_fe)
    # settle the stack at zero gate bias (depolarization field acts on the film)
    sp = surface_potential(stack, 0.0)
    stack.fe.apply_voltage(sp.v_fe)
    return stack
