"""Stochastic 2D resistor-network model of a VO2 channel.

The channel is a rectangular lattice of two-state resistive domains between
full-width top and bottom electrode rails. A grid of shape (rows, cols) has
`rows` layers of vertical edges in `cols` columns, internal nodes on a
(rows-1) x cols lattice, and horizontal edges between laterally adjacent
internal nodes. Each Kirchhoff solve is a sparse nodal analysis with the top
rail at the applied voltage and the bottom rail grounded.

Domain switching is a synchronous Bernoulli process: insulating edges turn
metallic with a probability that grows exponentially with the voltage drop
across them (and with the gate-induced surface potential), metallic edges
decay back with a fixed probability. Avalanche, filament formation,
threshold switching and hysteresis all emerge from this process.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .constants import thermal_voltage_ev


class ConvergenceError(RuntimeError):
    """Monte Carlo relaxation failed to settle within the step budget."""

    def __init__(self, message, waveform_index=None):
        super().__init__(message)
        self.waveform_index = waveform_index


@dataclass(frozen=True)
class ImtParams:
    """Domain switching and resistance parameters.

    e_b, e_c in eV; gamma dimensionless (divides the per-domain voltage drop
    before it enters the switching exponent); alpha couples the surface
    potential; resistances in Ohm. Defaults are calibrated so a 20x20 grid
    shows an abrupt IMT near 1-2 V with R_OFF/R_ON > 1e4.
    """

    e_b: float = 0.55
    e_c: float = 0.73
    gamma: float = 0.18
    alpha: float = 0.5
    temperature: float = 300.0
    r_ins_mean: float = 3.0e6
    r_ins_sigma: float = 3.0e5
    r_met: float = 10.0

    def __post_init__(self):
        if self.e_b <= 0.0:
            raise ValueError("require e_b > 0")
        if self.e_c <= self.e_b:
            raise ValueError("require e_c > e_b (keeps the MIT probability below 1)")
        if self.gamma <= 0.0:
            raise ValueError("require gamma > 0")
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError("require 0 <= alpha <= 1")
        if self.temperature <= 0.0:
            raise ValueError("require temperature > 0")
        if self.r_met <= 0.0 or self.r_ins_mean <= 0.0:
            raise ValueError("resistances must be positive")
        if self.r_met >= self.r_ins_mean:
            raise ValueError("require r_met < r_ins_mean")
        if self.r_ins_sigma < 0.0:
            raise ValueError("require r_ins_sigma >= 0")


@dataclass
class DomainGrid:
    """Lattice of two-state domains with per-domain insulating resistances."""

    rows: int
    cols: int
    params: ImtParams
    seed: int
    r_ins_v: np.ndarray  # (rows, cols) vertical-edge insulating resistance
    r_ins_h: np.ndarray  # (rows-1, cols-1) horizontal-edge resistance
    metal_v: np.ndarray = field(default=None)  # bool, (rows, cols)
    metal_h: np.ndarray = field(default=None)  # bool, (rows-1, cols-1)

    def __post_init__(self):
        if self.metal_v is None:
            self.metal_v = np.zeros((self.rows, self.cols), dtype=bool)
        if self.metal_h is None:
            self.metal_h = np.zeros((max(self.rows - 1, 0), max(self.cols - 1, 0)), dtype=bool)

    @property
    def n_edges(self) -> int:
        return self.metal_v.size + self.metal_h.size

    @property
    def n_metallic(self) -> int:
        return int(self.metal_v.sum() + self.metal_h.sum())

    def conductances(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-edge conductance arrays (vertical, horizontal)."""
        g_met = 1.0 / self.params.r_met
        g_v = np.where(self.metal_v, g_met, 1.0 / self.r_ins_v)
        if self.r_ins_h.size:
            g_h = np.where(self.metal_h, g_met, 1.0 / self.r_ins_h)
        else:
            g_h = np.zeros_like(self.r_ins_h)
        return g_v, g_h

    def reset(self) -> "DomainGrid":
        """All domains back to insulating; resistances untouched."""
        self.metal_v[:] = False
        self.metal_h[:] = False
        return self

    def copy(self) -> "DomainGrid":
        return DomainGrid(
            rows=self.rows,
            cols=self.cols,
            params=self.params,
            seed=self.seed,
            r_ins_v=self.r_ins_v.copy(),
            r_ins_h=self.r_ins_h.copy(),
            metal_v=self.metal_v.copy(),
            metal_h=self.metal_h.copy(),
        )

    def edge_table(self):
        """Rows of (row, col, orientation, state) for snapshot export."""
        for (i, j), metal in np.ndenumerate(self.metal_v):
            yield i, j, "v", "metallic" if metal else "insulating"
        for (i, j), metal in np.ndenumerate(self.metal_h):
            yield i, j, "h", "metallic" if metal else "insulating"


def build_grid(rows: int, cols: int, params: ImtParams, seed: int) -> DomainGrid:
    """All-insulating grid with Gaussian-sampled domain resistances.

    Samples are truncated below at max(10 * r_met, r_ins_mean - 4 sigma) by
    resampling, so every domain keeps a healthy insulating/metallic contrast.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be >= 1")
    lo = max(10.0 * params.r_met, params.r_ins_mean - 4.0 * params.r_ins_sigma)
    if params.r_ins_mean < 10.0 * params.r_met:
        raise ValueError("require r_ins_mean >= 10 * r_met")
    rng = np.random.default_rng(seed)

    def sample(shape):
        if params.r_ins_sigma == 0.0:
            return np.full(shape, params.r_ins_mean)
        r = params.r_ins_mean + params.r_ins_sigma * rng.standard_normal(shape)
        while np.any(r < lo):
            bad = r < lo
            r[bad] = params.r_ins_mean + params.r_ins_sigma * rng.standard_normal(int(bad.sum()))
        return r

    r_v = sample((rows, cols))
    r_h = sample((rows - 1, cols - 1)) if rows > 1 and cols > 1 else np.zeros((max(rows - 1, 0), max(cols - 1, 0)))
    return DomainGrid(rows=rows, cols=cols, params=params, seed=seed, r_ins_v=r_v, r_ins_h=r_h)


@dataclass
class NetworkSolution:
    """One Kirchhoff solve: potentials, per-edge drops, terminal current."""

    v_applied: float
    node_potentials: np.ndarray  # (rows-1, cols) internal node voltages
    drop_v: np.ndarray           # (rows, cols) |dV| on vertical edges
    drop_h: np.ndarray           # (rows-1, cols-1) |dV| on horizontal edges
    terminal_current: float
    device_resistance: float
    kcl_residual: float          # max relative KCL residual over internal nodes

    def scaled(self, factor: float) -> "NetworkSolution":
        return NetworkSolution(
            v_applied=self.v_applied * factor,
            node_potentials=self.node_potentials * factor,
            drop_v=self.drop_v * abs(factor),
            drop_h=self.drop_h * abs(factor),
            terminal_current=self.terminal_current * factor,
            device_resistance=self.device_resistance,
            kcl_residual=self.kcl_residual,
        )


def solve_network(grid: DomainGrid, v_applied: float) -> NetworkSolution:
    """Nodal solve with the top rail at v_applied, bottom rail grounded."""
    if not math.isfinite(v_applied):
        raise ValueError("v_applied must be finite")
    if v_applied == 0.0:
        # Linear network: probe at 1 V for the resistance, report zero fields.
        probe = solve_network(grid, 1.0)
        return probe.scaled(0.0)

    rows, cols = grid.rows, grid.cols
    g_v, g_h = grid.conductances()

    if rows == 1:
        current = float(np.sum(g_v) * v_applied)
        return NetworkSolution(
            v_applied=v_applied,
            node_potentials=np.zeros((0, cols)),
            drop_v=np.full((1, cols), abs(v_applied)),
            drop_h=np.zeros((0, max(cols - 1, 0))),
            terminal_current=current,
            device_resistance=v_applied / current,
            kcl_residual=0.0,
        )

    n = (rows - 1) * cols

    diag = np.zeros(n)
    b = np.zeros(n)

    # Vertical edges: layer i connects node (i-1, j) [top rail if i == 0]
    # to node (i, j) [bottom rail if i == rows-1].
    j_all = np.arange(cols)
    diag[j_all] += g_v[0]
    b[j_all] += g_v[0] * v_applied
    diag[(rows - 2) * cols + j_all] += g_v[rows - 1]

    off_a = []
    off_c = []
    off_g = []
    if rows > 2:
        ii, jj = np.meshgrid(np.arange(1, rows - 1), j_all, indexing="ij")
        off_a.append(((ii - 1) * cols + jj).ravel())
        off_c.append((ii * cols + jj).ravel())
        off_g.append(g_v[1:rows - 1].ravel())
    if cols > 1:
        ii, jj = np.meshgrid(np.arange(rows - 1), np.arange(cols - 1), indexing="ij")
        off_a.append((ii * cols + jj).ravel())
        off_c.append((ii * cols + jj + 1).ravel())
        off_g.append(g_h.ravel())

    if off_a:
        a = np.concatenate(off_a)
        c = np.concatenate(off_c)
        g = np.concatenate(off_g)
        np.add.at(diag, a, g)
        np.add.at(diag, c, g)
        lap = sp.coo_matrix(
            (np.concatenate([diag, -g, -g]),
             (np.concatenate([np.arange(n), a, c]),
              np.concatenate([np.arange(n), c, a]))),
            shape=(n, n),
        ).tocsc()
    else:
        lap = sp.diags(diag).tocsc()
    phi = spla.spsolve(lap, b)

    residual = lap @ phi - b
    scale = float(np.max(np.abs(diag)) * max(abs(v_applied), 1.0))
    kcl = float(np.max(np.abs(residual)) / scale)

    phi2 = phi.reshape(rows - 1, cols)
    top = np.full(cols, v_applied)
    bot = np.zeros(cols)
    levels = np.vstack([top, phi2, bot])  # (rows+1, cols)
    drop_v = np.abs(levels[:-1] - levels[1:])
    drop_h = np.abs(phi2[:, :-1] - phi2[:, 1:]) if cols > 1 else np.zeros((rows - 1, 0))

    i_top = float(np.sum(g_v[0] * (v_applied - phi2[0])))
    i_bot = float(np.sum(g_v[-1] * phi2[-1]))
    current = 0.5 * (i_top + i_bot)
    resistance = v_applied / current if current != 0.0 else math.inf
    return NetworkSolution(
        v_applied=v_applied,
        node_potentials=phi2,
        drop_v=drop_v,
        drop_h=drop_h,
        terminal_current=current,
        device_resistance=resistance,
        kcl_residual=kcl,
    )


def p_imt(delta_v, psi_s: float, params: ImtParams):
    """Insulator-to-metal switching probability for a domain.

    exp(-(e_b - |dV|/gamma - alpha * psi_s) / kT), clamped to [0, 1].
    Accepts scalar or array delta_v.
    """
    kt = thermal_voltage_ev(params.temperature)
    expo = -(params.e_b - np.abs(delta_v) / params.gamma - params.alpha * psi_s) / kt
    return np.clip(np.exp(np.minimum(expo, 0.0)), 0.0, 1.0)


def p_mit(params: ImtParams) -> float:
    """Metal-to-insulator relaxation probability (bias independent)."""
    kt = thermal_voltage_ev(params.temperature)
    return float(np.clip(math.exp((params.e_b - params.e_c) / kt), 0.0, 1.0))


def monte_carlo_step(grid: DomainGrid, sol: NetworkSolution, psi_s: float,
                     rng: np.random.Generator) -> int:
    """Synchronous Bernoulli update of every domain against `sol`.

    All flip decisions are made against the pre-step solution; returns the
    number of domains that changed state.
    """
    pm = p_mit(grid.params)
    prob_v = np.where(grid.metal_v, pm, p_imt(sol.drop_v, psi_s, grid.params))
    flips_v = rng.random(prob_v.shape) < prob_v
    if grid.metal_h.size:
        prob_h = np.where(grid.metal_h, pm, p_imt(sol.drop_h, psi_s, grid.params))
        flips_h = rng.random(prob_h.shape) < prob_h
    else:
        flips_h = np.zeros_like(grid.metal_h)
    grid.metal_v ^= flips_v
    if grid.metal_h.size:
        grid.metal_h ^= flips_h
    return int(flips_v.sum() + (flips_h.sum() if grid.metal_h.size else 0))


@dataclass
class RelaxResult:
    solution: NetworkSolution
    steps: int
    converged: bool


def _solve_with_series(grid: DomainGrid, v_source: float, r_series: float) -> NetworkSolution:
    """Solve with an optional series load dividing the source voltage."""
    if r_series <= 0.0 or v_source == 0.0:
        return solve_network(grid, v_source)
    unit = solve_network(grid, 1.0)
    r_dev = unit.device_resistance
    v_dev = v_source * r_dev / (r_dev + r_series)
    return unit.scaled(v_dev)


def relax(grid: DomainGrid, v_applied: float, psi_s: float, rng: np.random.Generator,
          k_quiet: int = 5, max_steps: int = 10000, r_series: float = 0.0) -> RelaxResult:
    """Alternate solves and Monte Carlo steps until the grid goes quiet.

    Terminates after k_quiet consecutive zero-flip steps; reports (does not
    silently swallow) hitting the max_steps budget.
    """
    if k_quiet < 1:
        raise ValueError("require k_quiet >= 1")
    quiet = 0
    steps = 0
    while steps < max_steps:
        sol = _solve_with_series(grid, v_applied, r_series)
        flips = monte_carlo_step(grid, sol, psi_s, rng)
        steps += 1
        quiet = quiet + 1 if flips == 0 else 0
        if quiet >= k_quiet:
            return RelaxResult(sol, steps, True)
    return RelaxResult(_solve_with_series(grid, v_applied, r_series), steps, False)


@dataclass
class IvTrace:
    """Quasi-static I-V sweep: one record per commanded source voltage."""

    v_applied: np.ndarray
    current: np.ndarray
    n_metallic: np.ndarray
    direction: np.ndarray  # +1 up-sweep point, -1 down-sweep point

    def __len__(self) -> int:
        return len(self.v_applied)

    def rows(self):
        for k in range(len(self.v_applied)):
            yield (self.v_applied[k], self.current[k], int(self.n_metallic[k]),
                   "up" if self.direction[k] > 0 else "down")


def sweep_iv(grid: DomainGrid, waveform, psi_s: float, rng: np.random.Generator,
             r_series: float = 0.0, k_quiet: int = 5, max_steps: int = 10000) -> IvTrace:
    """Relax at each waveform point in order, carrying the grid state."""
    waveform = np.asarray(waveform, dtype=float)
    if waveform.size == 0:
        raise ValueError("waveform must be non-empty")
    currents = np.zeros(waveform.size)
    n_met = np.zeros(waveform.size, dtype=int)
    for k, v in enumerate(waveform):
        res = relax(grid, float(v), psi_s, rng, k_quiet=k_quiet,
                    max_steps=max_steps, r_series=r_series)
        if not res.converged:
            raise ConvergenceError(
                f"relax did not settle at waveform index {k} (v={v:g} V)",
                waveform_index=k,
            )
        currents[k] = res.solution.terminal_current
        n_met[k] = grid.n_metallic
    dv = np.diff(waveform)
    direction = np.ones(waveform.size, dtype=int)
    if waveform.size > 1:
        step_dir = np.where(dv >= 0, 1, -1)
        direction[1:] = step_dir
        direction[0] = step_dir[0]
    return IvTrace(v_applied=waveform, current=currents, n_metallic=n_met,
                   direction=direction)


@dataclass
class Thresholds:
    """IMT trigger and MIT hold voltages; None when no jump was found."""

    v_t: float | None
    v_h: float | None


def extract_thresholds(trace: IvTrace, jump_factor: float = 10.0) -> Thresholds:
    """Locate the first abrupt current jump on the up and down sweeps."""
    v, i, d = trace.v_applied, trace.current, trace.direction
    v_t = None
    v_h = None
    for k in range(1, len(v)):
        if d[k] > 0 and d[k - 1] > 0 and v[k - 1] > 0 and i[k - 1] > 0:
            if v_t is None and i[k] >= jump_factor * i[k - 1]:
                v_t = float(v[k])
        if d[k] < 0 and d[k - 1] < 0 and i[k] >= 0 and i[k - 1] > 0:
            if v_h is None and i[k] <= i[k - 1] / jump_factor:
                v_h = float(v[k])
    return Thresholds(v_t=v_t, v_h=v_h)


def filament_path(grid: DomainGrid):
    """Electrode-to-electrode path of metallic edges, or None.

    Breadth-first search from the top rail over metallic edges only; returns
    the edge list [(orientation, i, j), ...] of one shortest path.
    """
    rows, cols = grid.rows, grid.cols
    TOP, BOT = ("top",), ("bot",)

    def neighbors(node):
        if node == TOP:
            for j in range(cols):
                if grid.metal_v[0, j]:
                    yield (BOT if rows == 1 else (0, j)), ("v", 0, j)
            return
        if node == BOT:
            return
        i, j = node
        # vertical edge above: layer i connects (i-1, j) / top to (i, j)
        if grid.metal_v[i, j]:
            yield (TOP if i == 0 else (i - 1, j)), ("v", i, j)
        if grid.metal_v[i + 1, j]:
            yield (BOT if i == rows - 2 else (i + 1, j)), ("v", i + 1, j)
        if j > 0 and grid.metal_h[i, j - 1]:
            yield (i, j - 1), ("h", i, j - 1)
        if j + 1 < cols and grid.metal_h[i, j]:
            yield (i, j + 1), ("h", i, j)

    parent: dict = {TOP: None}
    via: dict = {}
    queue = deque([TOP])
    while queue:
        node = queue.popleft()
        for nxt, edge in neighbors(node):
            if nxt in parent:
                continue
            parent[nxt] = node
            via[nxt] = edge
            if nxt == BOT:
                path = []
                cur = BOT
                while parent[cur] is not None:
                    path.append(via[cur])
                    cur = parent[cur]
                path.reverse()
                return path
            queue.append(nxt)
    return None
