"""Deterministic, seedable simulator of a ferroelectric-gated Mott device:
hysteretic gate stack, stochastic resistor-network channel, coupled device
characterization, and a small NOR memory array with current-sense readout."""

from .constants import K_B_EV, areal_capacitance, thermal_voltage_ev
from .device import (
    Characterization,
    MottFeFet,
    SweepConfig,
    characterize,
    default_device,
    ids_vds_sweep,
    ratio_vs_program_voltage,
    threshold_distribution,
)
from .ferroelectric import PreisachParams, PreisachState, virgin_state
from .gatestack import GateStack, default_stack, program, surface_potential
from .memarray import (
    AccessParams,
    ArrayConfig,
    ArrayState,
    BiasAssignment,
    DisturbReport,
    access_transistor,
    bias_for_read,
    bias_for_write,
)
from .network import (
    ConvergenceError,
    DomainGrid,
    ImtParams,
    build_grid,
    extract_thresholds,
    filament_path,
    p_imt,
    p_mit,
    relax,
    solve_network,
    sweep_iv,
)
from .senseamp import CsaParams, CurrentSenseAmp, sense

__version__ = "0.1.0"
