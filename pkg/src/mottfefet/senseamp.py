"""Behavioral current sense amplifier.

Compares a source-line current against a reference and outputs a rail level.
A fractional dead band around the reference holds the previous decision so
that inputs hovering near the reference cannot toggle the output.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CsaParams:
    """Comparator settings: reference current (A), output high level (V),
    and the fractional width of the hold band around the reference."""

    i_ref: float = 10e-6
    v_dd: float = 1.2
    hysteresis_band: float = 0.1

    def __post_init__(self):
        if self.i_ref <= 0.0:
            raise ValueError("require i_ref > 0")
        if not (0.0 <= self.hysteresis_band < 1.0):
            raise ValueError("require 0 <= hysteresis_band < 1")


@dataclass(frozen=True)
class SenseResult:
    bit: int
    v_out: float
    i_sl: float


class CurrentSenseAmp:
    """Stateful comparator; one instance per source line.

    Above i_ref*(1+band) the output is 1, below i_ref*(1-band) it is 0.
    Inside the band the previous decision is held (0 before any decision
    has been made).
    """

    def __init__(self, params: CsaParams | None = None):
        self.params = params or CsaParams()
        self._last_bit = 0

    def sense(self, i_sl: float) -> SenseResult:
        if i_sl < 0.0:
            raise ValueError(f"sense current must be non-negative, got {i_sl:g} A")
        p = self.params
        if i_sl > p.i_ref * (1.0 + p.hysteresis_band):
            bit = 1
        elif i_sl < p.i_ref * (1.0 - p.hysteresis_band):
            bit = 0
        else:
            bit = self._last_bit
        self._last_bit = bit
        return SenseResult(bit=bit, v_out=p.v_dd if bit else 0.0, i_sl=i_sl)


def sense(i_sl: float, params: CsaParams | None = None) -> SenseResult:
    """One-shot decision with a fresh amplifier."""
    return CurrentSenseAmp(params).sense(i_sl)
