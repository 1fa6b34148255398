"""The full three-terminal device: ferroelectric gate over a VO2 channel.

The stored bit is the sign of the remnant polarization; it sets the surface
potential at zero gate bias, which shifts the channel's switching threshold.
Reading is drain-driven at zero gate bias with a series load in the sense
path, so the on-state current is set by the load and the off-state current
by the insulating network.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

import numpy as np

from .gatestack import GateStack, default_stack, program, surface_potential
from .network import (
    ConvergenceError,
    DomainGrid,
    ImtParams,
    IvTrace,
    Thresholds,
    build_grid,
    extract_thresholds,
    relax,
    sweep_iv,
)


def derived_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Independent RNG stream for one unit of ensemble work."""
    return np.random.default_rng(np.random.SeedSequence((master_seed,) + key))


@dataclass(frozen=True)
class SweepConfig:
    """Quasi-static sweep settings shared by device-level experiments."""

    v_max: float = 2.2
    v_step: float = 0.05
    r_series: float = 5200.0
    k_quiet: int = 5
    max_steps: int = 10000
    jump_factor: float = 10.0

    def up_waveform(self) -> np.ndarray:
        n = int(round(self.v_max / self.v_step))
        return np.linspace(0.0, self.v_max, n + 1)

    def updown_waveform(self) -> np.ndarray:
        up = self.up_waveform()
        return np.concatenate([up, up[::-1][1:]])


@dataclass
class MottFeFet:
    """Gate stack plus channel grid plus sweep configuration."""

    stack: GateStack
    grid: DomainGrid
    sweep: SweepConfig = field(default_factory=SweepConfig)
    master_seed: int = 0

    def psi_s(self) -> float:
        """Surface potential at zero gate bias (read condition)."""
        return surface_potential(self.stack, 0.0).psi_s

    def program_bit(self, bit: int, v_write: float) -> "MottFeFet":
        """Write the given bit by a +/- v_write gate pulse."""
        program(self.stack, v_write if bit else -v_write)
        return self


def default_device(master_seed: int = 0, rows: int = 20, cols: int = 20,
                   imt: ImtParams | None = None,
                   sweep: SweepConfig | None = None,
                   stack: GateStack | None = None) -> MottFeFet:
    imt = imt or ImtParams()
    return MottFeFet(
        stack=stack if stack is not None else default_stack(),
        grid=build_grid(rows, cols, imt, seed=master_seed),
        sweep=sweep or SweepConfig(),
        master_seed=master_seed,
    )


def ids_vds_sweep(dev: MottFeFet, seed: int, updown: bool = False) -> IvTrace:
    """Drain sweep at zero gate bias with the current ferroelectric state.

    Uses a fresh all-insulating copy of the device grid and a step RNG
    derived from the seed.
    """
    psi = dev.psi_s()
    grid = dev.grid.copy().reset()
    rng = derived_rng(dev.master_seed, 1, seed)
    wave = dev.sweep.updown_waveform() if updown else dev.sweep.up_waveform()
    return sweep_iv(grid, wave, psi, rng, r_series=dev.sweep.r_series,
                    k_quiet=dev.sweep.k_quiet, max_steps=dev.sweep.max_steps)


def threshold_sweep(dev: MottFeFet, seed: int) -> Thresholds:
    trace = ids_vds_sweep(dev, seed)
    return extract_thresholds(trace, jump_factor=dev.sweep.jump_factor)


def read_current(dev: MottFeFet, v_read: float, seed: int) -> float:
    """Relaxed drain current at v_read (fresh channel, series load in circuit)."""
    psi = dev.psi_s()
    grid = dev.grid.copy().reset()
    rng = derived_rng(dev.master_seed, 2, seed)
    res = relax(grid, v_read, psi, rng, k_quiet=dev.sweep.k_quiet,
                max_steps=dev.sweep.max_steps, r_series=dev.sweep.r_series)
    if not res.converged:
        raise ConvergenceError(f"read relax did not settle at v_read={v_read:g} V")
    return res.solution.terminal_current


@dataclass(frozen=True)
class Characterization:
    """Two-state summary: thresholds, memory window, read currents."""

    v_t_state1: float
    v_t_state0: float
    delta_v_t: float
    v_read: float
    i_bit1: float
    i_bit0: float
    ratio: float
    read_valid: bool


class ReadPointError(ValueError):
    """v_read does not sit between the two median thresholds."""


def characterize(dev: MottFeFet, v_read: float | None = None, n_seeds: int = 25,
                 v_write: float = 7.0, strict: bool = True) -> Characterization:
    """Program both states and measure thresholds and read currents.

    Thresholds and currents are medians over n_seeds independent step-RNG
    streams. v_read defaults to the midpoint of the two median thresholds.
    """
    if n_seeds < 1:
        raise ValueError("require n_seeds >= 1")

    def state_thresholds(bit: int) -> float:
        dev.program_bit(bit, v_write)
        vts = []
        for s in range(n_seeds):
            th = threshold_sweep(dev, s)
            if th.v_t is None:
                raise ConvergenceError("no IMT transition found in sweep range")
            vts.append(th.v_t)
        return statistics.median(vts)

    v_t1 = state_thresholds(1)
    v_t0 = state_thresholds(0)
    if v_read is None:
        v_read = 0.5 * (v_t1 + v_t0)
    read_valid = v_t1 < v_read < v_t0
    if strict and not read_valid:
        raise ReadPointError(
            f"read voltage invalid: v_read={v_read:g} not in ({v_t1:g}, {v_t0:g})")

    dev.program_bit(1, v_write)
    i1 = statistics.median(read_current(dev, v_read, s) for s in range(n_seeds))
    dev.program_bit(0, v_write)
    i0 = statistics.median(read_current(dev, v_read, s) for s in range(n_seeds))
    return Characterization(
        v_t_state1=v_t1, v_t_state0=v_t0, delta_v_t=v_t0 - v_t1,
        v_read=v_read, i_bit1=i1, i_bit0=i0,
        ratio=i1 / i0 if i0 > 0 else float("inf"),
        read_valid=read_valid,
    )


@dataclass(frozen=True)
class ProgramPoint:
    """One entry of a program-voltage scan."""

    v_prog: float
    delta_v_t: float
    i_bit1: float
    i_bit0: float
    ratio: float
    read_valid: bool


def ratio_vs_program_voltage(dev: MottFeFet, v_prog_list, v_read: float | None = None,
                             n_seeds: int = 25) -> list[ProgramPoint]:
    """Read-current ratio and memory window across program voltages.

    Invalid read points are flagged on their entry; the scan continues.
    """
    points = []
    for v_prog in v_prog_list:
        ch = characterize(dev, v_read=v_read, n_seeds=n_seeds,
                          v_write=float(v_prog), strict=False)
        points.append(ProgramPoint(
            v_prog=float(v_prog), delta_v_t=ch.delta_v_t,
            i_bit1=ch.i_bit1, i_bit0=ch.i_bit0, ratio=ch.ratio,
            read_valid=ch.read_valid,
        ))
    return points


@dataclass(frozen=True)
class ThresholdDistribution:
    """Sampled switching-threshold statistics for the current state."""

    mean: float
    sigma: float
    samples: tuple[float, ...]

    @property
    def median(self) -> float:
        return statistics.median(self.samples)


def threshold_distribution(dev: MottFeFet, n_sweeps: int = 25) -> ThresholdDistribution:
    """One threshold per independent sweep, for the device as programmed."""
    if n_sweeps < 2:
        raise ValueError("require n_sweeps >= 2")
    samples = []
    for s in range(n_sweeps):
        th = threshold_sweep(dev, s)
        if th.v_t is None:
            raise ConvergenceError("no IMT transition found in sweep range")
        samples.append(th.v_t)
    return ThresholdDistribution(
        mean=statistics.fmean(samples),
        sigma=statistics.pstdev(samples),
        samples=tuple(samples),
    )
