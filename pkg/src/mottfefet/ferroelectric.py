"""Preisach-style hysteresis model of a ferroelectric capacitor.

Polarization vs. voltage is built from tanh saturation branches plus a
turning-point stack for minor loops: on each direction reversal the current
point is pushed, and the new branch is the saturation branch of the new
direction rescaled so it starts at the reversal point and closes exactly on
the turning point it targets (return-point memory by construction).
Turning points enclosed by a larger excursion are wiped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Saturation branches are treated as fully saturated once the tanh argument
# reaches this value; defines the effective saturation voltage.
_SAT_ARG = 8.0


@dataclass(frozen=True)
class PreisachParams:
    """Ferroelectric film parameters.

    p_s, p_r in uC/cm^2; v_c is the coercive voltage across the film (V);
    t_fe in nm; eps_fe is the background (non-switching) relative
    permittivity handled by the gate-stack model, carried here for
    convenience.
    """

    p_s: float = 5.0
    p_r: float = 2.5
    v_c: float = 1.0
    t_fe: float = 10.0
    eps_fe: float = 10.0

    def __post_init__(self):
        if not (0.0 < self.p_r < self.p_s):
            raise ValueError("require 0 < p_r < p_s")
        if self.v_c <= 0.0:
            raise ValueError("require v_c > 0")
        if self.t_fe <= 0.0:
            raise ValueError("require t_fe > 0")

    @property
    def branch_width(self) -> float:
        """Shape parameter w: chosen so the down branch passes (0, +p_r)."""
        return self.v_c / math.log((self.p_s + self.p_r) / (self.p_s - self.p_r))

    @property
    def v_sat(self) -> float:
        """Voltage beyond which a branch is effectively saturated."""
        return self.v_c + _SAT_ARG * 2.0 * self.branch_width


def saturation_branch(v: float, direction: str, params: PreisachParams) -> float:
    """Major-loop polarization branch (uC/cm^2).

    direction 'up': branch passes through (+v_c, 0);
    direction 'down': branch passes through (0, +p_r) and (-v_c, 0).
    """
    w2 = 2.0 * params.branch_width
    if direction == "up":
        return params.p_s * math.tanh((v - params.v_c) / w2)
    if direction == "down":
        return params.p_s * math.tanh((v + params.v_c) / w2)
    raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")


@dataclass
class PreisachState:
    """Mutable hysteresis state: turning-point stack plus current point.

    The stack alternates maxima and minima (oldest first). An empty stack
    means the state is on the virgin curve anchored at (0, 0).
    """

    params: PreisachParams
    history: list[tuple[float, float]] = field(default_factory=list)
    v_now: float = 0.0
    p_now: float = 0.0
    _direction: int = 0  # +1 rising, -1 falling, 0 virgin/at rest

    def copy(self) -> "PreisachState":
        return PreisachState(
            params=self.params,
            history=list(self.history),
            v_now=self.v_now,
            p_now=self.p_now,
            _direction=self._direction,
        )

    def _anchor(self) -> tuple[float, float]:
        if self.history:
            return self.history[-1]
        return (0.0, 0.0)

    def _target(self, direction: int) -> tuple[float, float]:
        if len(self.history) >= 2:
            return self.history[-2]
        p = self.params
        if direction > 0:
            return (p.v_sat, saturation_branch(p.v_sat, "up", p))
        return (-p.v_sat, saturation_branch(-p.v_sat, "down", p))

    def _branch_value(self, v: float, direction: int) -> float:
        """Scaled saturation branch through the current anchor and target."""
        name = "up" if direction > 0 else "down"
        va, pa = self._anchor()
        vb, pb = self._target(direction)
        sa = saturation_branch(va, name, self.params)
        sb = saturation_branch(vb, name, self.params)
        sv = saturation_branch(v, name, self.params)
        if sb == sa:  # degenerate (anchor at target); flat branch
            return pa
        return pa + (pb - pa) * (sv - sa) / (sb - sa)

    def apply_voltage(self, v: float) -> "PreisachState":
        """Quasi-statically move the applied voltage to v; returns self."""
        if v == self.v_now:
            return self
        d = 1 if v > self.v_now else -1
        if self._direction != 0 and d != self._direction:
            self.history.append((self.v_now, self.p_now))
        self._direction = d
        # Wipe-out: enclosing excursions delete interior turning points.
        tp = self.history
        while len(tp) >= 2 and ((d > 0 and v >= tp[-2][0]) or (d < 0 and v <= tp[-2][0])):
            tp.pop()
            tp.pop()
        self.p_now = self._branch_value(v, d)
        self.v_now = v
        return self

    def polarization_at(self, v: float) -> float:
        """Polarization the state would take at v, without mutating it."""
        return self.copy().apply_voltage(v).p_now

    def remnant(self) -> float:
        """Polarization at zero applied voltage; caller's state unchanged."""
        return self.polarization_at(0.0)


def virgin_state(params: PreisachParams) -> PreisachState:
    """Unpoled state at the origin with empty history."""
    return PreisachState(params=params)
