"""NOR memory array of gated Mott channels with behavioral access devices.

Wiring: the write word line (WLW) of a row gates that row's access
transistors; each access transistor passes its column's bit line (BL) to the
cell gate. The read word line (WLR) of a row drives the drains of that row's
cells, and each column's source line (SL) collects the cell currents at
virtual ground.

Writes assert one WLW and put +/- v_write on one BL; all other lines sit at
their inactive levels so non-target cells either see a conducting transistor
with a 0 V bit line (half-accessed row) or an off transistor (half-accessed
column and unaccessed cells). Reads keep every gate at 0 V and drive a
single WLR, so reading cannot move any ferroelectric state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .device import SweepConfig, derived_rng
from .gatestack import GateStack, default_stack, program, surface_potential
from .network import DomainGrid, ImtParams, build_grid, relax


@dataclass(frozen=True)
class AccessParams:
    """Behavioral n-type pass device: off below v_th, ohmic above, with a
    smooth 50 mV hand-off between the regions."""

    v_th: float = 0.4
    r_on: float = 1e4
    leakage: float = 100e-12

    def __post_init__(self):
        if self.r_on <= 0.0:
            raise ValueError("require r_on > 0")
        if self.leakage < 0.0:
            raise ValueError("require leakage >= 0")


# Width of the off-to-on transition of the access device (V)
_BAND = 0.05


def access_transistor(v_gs: float, v_ds: float, params: AccessParams) -> float:
    """Drain current (A) of the behavioral pass device."""
    i_off = params.leakage * np.sign(v_ds)
    i_on = v_ds / params.r_on
    x = (v_gs - params.v_th) / _BAND + 0.5
    if x <= 0.0:
        return float(i_off)
    if x >= 1.0:
        return float(i_on)
    s = x * x * (3.0 - 2.0 * x)
    return float(i_off + (i_on - i_off) * s)


@dataclass(frozen=True)
class ArrayConfig:
    """Array geometry, rail levels, and per-cell device settings.

    wlw_active defaults to v_write + v_dd so the pass device stays ohmic
    while its source node charges to the full bit-line level; wlw_inactive
    stays at ground so half-selected devices cannot conduct for either
    bit-line polarity.
    """

    rows: int = 3
    cols: int = 3
    v_dd: float = 1.2
    v_write: float = 7.0
    v_read: float = 1.25
    access: AccessParams = field(default_factory=AccessParams)
    imt: ImtParams = field(default_factory=ImtParams)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    grid_rows: int = 20
    grid_cols: int = 20
    wlw_active: float | None = None
    wlw_inactive: float = 0.0
    stack_template: GateStack | None = None

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("require rows, cols >= 1")
        if self.v_read <= 0.0:
            raise ValueError("require v_read > 0")
        if self.v_write <= 0.0:
            raise ValueError("require v_write > 0")

    @property
    def wlw_on(self) -> float:
        if self.wlw_active is not None:
            return self.wlw_active
        return self.v_write + self.v_dd


@dataclass(frozen=True)
class BiasAssignment:
    """Per-line voltages for one bias phase (V)."""

    wlw: tuple[float, ...]
    wlr: tuple[float, ...]
    bl: tuple[float, ...]
    sl: tuple[float, ...]
    phase: str
    start: float = 0.0
    duration: float = 1.0

    def as_dict(self) -> dict:
        return {"phase": self.phase, "start": self.start,
                "duration": self.duration,
                "wlw": list(self.wlw), "wlr": list(self.wlr),
                "bl": list(self.bl), "sl": list(self.sl)}


def bias_for_write(cfg: ArrayConfig, r: int, c: int, bit: int) -> BiasAssignment:
    """Write phase: one WLW asserted, the target BL at +/- v_write."""
    if not (0 <= r < cfg.rows and 0 <= c < cfg.cols):
        raise IndexError(f"cell ({r}, {c}) out of range for "
                         f"{cfg.rows}x{cfg.cols} array")
    wlw = [cfg.wlw_inactive] * cfg.rows
    wlw[r] = cfg.wlw_on
    bl = [0.0] * cfg.cols
    bl[c] = cfg.v_write if bit else -cfg.v_write
    return BiasAssignment(
        wlw=tuple(wlw), wlr=(0.0,) * cfg.rows,
        bl=tuple(bl), sl=(0.0,) * cfg.cols,
        phase=f"write r={r} c={c} bit={int(bool(bit))}")


def bias_for_read(cfg: ArrayConfig, r: int) -> BiasAssignment:
    """Read phase: one WLR driven, all gates grounded, SLs at virtual ground."""
    if not (0 <= r < cfg.rows):
        raise IndexError(f"row {r} out of range for {cfg.rows}-row array")
    wlr = [0.0] * cfg.rows
    wlr[r] = cfg.v_read
    return BiasAssignment(
        wlw=(cfg.wlw_inactive,) * cfg.rows, wlr=tuple(wlr),
        bl=(0.0,) * cfg.cols, sl=(0.0,) * cfg.cols,
        phase=f"read r={r}")


@dataclass(frozen=True)
class DisturbReport:
    """Per-cell remnant-polarization change caused by one write."""

    target: tuple[int, int]
    delta_p: np.ndarray          # (rows, cols), uC/cm^2, absolute values
    categories: np.ndarray       # (rows, cols) of {"T", "HAR", "HAC", "UA"}

    def worst_nontarget(self) -> float:
        mask = self.categories != "T"
        return float(np.max(self.delta_p[mask])) if mask.any() else 0.0


class WriteError(RuntimeError):
    """Target cell failed to reach the commanded polarization sign."""


def _cell_seed(master_seed: int, r: int, c: int) -> int:
    """Deterministic per-cell integer seed for grid construction."""
    return int(np.random.SeedSequence((master_seed, 4, r, c)).generate_state(1)[0])


class ArrayState:
    """Cells plus an append-only transcript of every operation."""

    def __init__(self, cfg: ArrayConfig, master_seed: int = 0):
        self.cfg = cfg
        self.master_seed = master_seed
        template = cfg.stack_template or default_stack()
        self.stacks: list[list[GateStack]] = [
            [template.copy() for _ in range(cfg.cols)] for _ in range(cfg.rows)]
        self.grids: list[list[DomainGrid]] = [
            [build_grid(cfg.grid_rows, cfg.grid_cols, cfg.imt,
                        seed=_cell_seed(master_seed, r, c))
             for c in range(cfg.cols)] for r in range(cfg.rows)]
        self.transcript: list[dict] = []

    def remnant_map(self) -> np.ndarray:
        """Remnant polarization of every cell (uC/cm^2)."""
        return np.array([[self.stacks[r][c].fe.remnant()
                          for c in range(self.cfg.cols)]
                         for r in range(self.cfg.rows)])

    def psi_map(self) -> np.ndarray:
        """Surface potential of every cell at zero gate bias (V)."""
        return np.array([[surface_potential(self.stacks[r][c], 0.0).psi_s
                          for c in range(self.cfg.cols)]
                         for r in range(self.cfg.rows)])

    def _log(self, op: str, bias: BiasAssignment, **extra):
        rec = {"op": op, **bias.as_dict(), **extra}
        self.transcript.append(rec)

    # -- write path --------------------------------------------------------

    def _gate_voltage(self, bias: BiasAssignment, r: int, c: int) -> float:
        """Voltage reaching the cell gate through its access transistor.

        The pass device is n-type with its source at whichever of the bit
        line or the gate node is lower; it conducts only when the WLW level
        exceeds the higher of the two by v_th. A conducting device settles
        the gate node at the bit-line level (no DC gate current); otherwise
        the gate node stays at 0 V.
        """
        v_bl = bias.bl[c]
        v_on = max(v_bl, 0.0) + self.cfg.access.v_th
        return v_bl if bias.wlw[r] >= v_on else 0.0

    def write_bit(self, r: int, c: int, bit: int) -> DisturbReport:
        """Program one cell; returns the disturb report for all others."""
        cfg = self.cfg
        bias = bias_for_write(cfg, r, c, bit)
        p_before = self.remnant_map()
        for rr in range(cfg.rows):
            for cc in range(cfg.cols):
                v_gate = self._gate_voltage(bias, rr, cc)
                if v_gate != 0.0:
                    program(self.stacks[rr][cc], v_gate)
        p_after = self.remnant_map()

        want = 1.0 if bit else -1.0
        if p_after[r, c] * want <= 0.0:
            raise WriteError(
                f"cell ({r}, {c}) remnant {p_after[r, c]:.3g} uC/cm^2 did not "
                f"reach the commanded sign; increase v_write")

        cats = np.empty((cfg.rows, cfg.cols), dtype=object)
        for rr in range(cfg.rows):
            for cc in range(cfg.cols):
                if (rr, cc) == (r, c):
                    cats[rr, cc] = "T"
                elif rr == r:
                    cats[rr, cc] = "HAR"
                elif cc == c:
                    cats[rr, cc] = "HAC"
                else:
                    cats[rr, cc] = "UA"
        report = DisturbReport(target=(r, c),
                               delta_p=np.abs(p_after - p_before),
                               categories=cats)
        self._log("write", bias,
                  target=[r, c], bit=int(bool(bit)),
                  p_before=p_before.tolist(), p_after=p_after.tolist(),
                  delta_p=report.delta_p.tolist())
        return report

    def write_pattern(self, bits: np.ndarray) -> list[DisturbReport]:
        """Write a full (rows, cols) 0/1 pattern cell by cell."""
        bits = np.asarray(bits)
        if bits.shape != (self.cfg.rows, self.cfg.cols):
            raise ValueError(f"pattern shape {bits.shape} does not match "
                             f"{self.cfg.rows}x{self.cfg.cols} array")
        return [self.write_bit(r, c, int(bits[r, c]))
                for r in range(self.cfg.rows) for c in range(self.cfg.cols)]

    # -- read path ---------------------------------------------------------

    def read_row(self, r: int) -> list[float]:
        """SL currents (A) for one row read; ferroelectric states untouched.

        Each selected cell relaxes a fresh copy of its grid at v_read under
        its own surface potential. Unselected rows see 0 V on their drains
        and contribute nothing to the source lines.
        """
        cfg = self.cfg
        bias = bias_for_read(cfg, r)
        currents = []
        for c in range(cfg.cols):
            psi = surface_potential(self.stacks[r][c], 0.0).psi_s
            grid = self.grids[r][c].copy().reset()
            rng = derived_rng(self.master_seed, 3, r, c)
            res = relax(grid, cfg.v_read, psi, rng,
                        k_quiet=cfg.sweep.k_quiet,
                        max_steps=cfg.sweep.max_steps,
                        r_series=cfg.sweep.r_series)
            if not res.converged:
                raise RuntimeError(
                    f"cell ({r}, {c}) did not settle during row read")
            currents.append(res.solution.terminal_current)
        self._log("read", bias, row=r, sl_currents=list(currents))
        return currents

    def read_pattern(self, csa_params=None) -> np.ndarray:
        """Read every row and threshold the SL currents into bits."""
        from .senseamp import CurrentSenseAmp, CsaParams
        params = csa_params or CsaParams(v_dd=self.cfg.v_dd)
        amps = [CurrentSenseAmp(params) for _ in range(self.cfg.cols)]
        out = np.zeros((self.cfg.rows, self.cfg.cols), dtype=int)
        for r in range(self.cfg.rows):
            for c, i_sl in enumerate(self.read_row(r)):
                out[r, c] = amps[c].sense(i_sl).bit
        return out

    def export_transcript(self, path) -> None:
        """Write the transcript as JSON lines, one record per phase."""
        with open(path, "w") as fh:
            for rec in self.transcript:
                fh.write(json.dumps(rec) + "\n")


def parse_pattern(text: str, rows: int, cols: int) -> np.ndarray:
    """Parse a text grid of 0/1 characters into a pattern array."""
    lines = [ln.split() if " " in ln else list(ln)
             for ln in text.strip().splitlines() if ln.strip()]
    arr = np.array([[int(tok) for tok in ln] for ln in lines])
    if arr.shape != (rows, cols) or not np.isin(arr, (0, 1)).all():
        raise ValueError(f"pattern must be a {rows}x{cols} grid of 0/1")
    return arr
