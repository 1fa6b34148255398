"""Release gate: the twelve behavioral checks behind `mott-sim check`.

Each criterion is a function of a resolved configuration returning a
CriterionResult; the suite caches the expensive shared ensembles (two-state
threshold sweeps, read currents) so `check` stays desk-scale. The network
check compares against a brute-force dense solver written independently of
the production sparse path.
"""

from __future__ import annotations

import statistics
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .device import MottFeFet, derived_rng, ids_vds_sweep, ratio_vs_program_voltage
from .experiments import max_workers, run_experiment
from .ferroelectric import virgin_state
from .memarray import ArrayState
from .network import DomainGrid, build_grid, extract_thresholds, relax, solve_network, sweep_iv
from .senseamp import CsaParams


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.index:2d} {self.name}: {self.detail}"


def dense_oracle_current(grid: DomainGrid, v_applied: float) -> float:
    """Terminal current by full dense nodal analysis, rails as supernodes.

    Builds the complete (internal nodes + 2 rails) Laplacian edge by edge
    and solves with the rail potentials imposed as constraint rows. Shares
    no code with the sparse production solver.
    """
    rows, cols = grid.rows, grid.cols
    g_v, g_h = grid.conductances()

    top = (rows - 1) * cols        # supernode indices after the internals
    bot = top + 1
    n = bot + 1

    def node(i: int, j: int) -> int:
        # i indexes the rows+1 horizontal node levels of the lattice
        if i == 0:
            return top
        if i == rows:
            return bot
        return (i - 1) * cols + j

    lap = np.zeros((n, n))

    def stamp(a: int, b: int, g: float) -> None:
        lap[a, a] += g
        lap[b, b] += g
        lap[a, b] -= g
        lap[b, a] -= g

    for i in range(rows):
        for j in range(cols):
            stamp(node(i, j), node(i + 1, j), g_v[i, j])
    for i in range(rows - 1):
        for j in range(cols - 1):
            stamp(node(i + 1, j), node(i + 1, j + 1), g_h[i, j])

    rhs = np.zeros(n)
    injected = lap[top].copy(), lap[bot].copy()
    lap[top] = 0.0
    lap[top, top] = 1.0
    rhs[top] = v_applied
    lap[bot] = 0.0
    lap[bot, bot] = 1.0
    phi = np.linalg.solve(lap, rhs)
    # current out of the top rail equals the replaced Laplacian row applied
    # to the solved potentials
    return float(injected[0] @ phi)


def _fresh_device(cfg: dict, seed_offset: int = 0) -> MottFeFet:
    d = cfg["device"]
    seed = cfg["run"]["seed"] + seed_offset
    return MottFeFet(
        stack=cfgmod.stack_for(cfg),
        grid=build_grid(d["grid_rows"], d["grid_cols"], cfgmod.imt_params(cfg),
                        seed=seed),
        sweep=cfgmod.sweep_config(cfg),
        master_seed=seed,
    )


class AcceptanceSuite:
    """Runs the criteria against one configuration, sharing ensembles."""

    def __init__(self, cfg: dict | None = None):
        self.cfg = cfg or cfgmod.load_config()
        self._thresholds: tuple[list[float], list[float]] | None = None
        self._reads: tuple[float, float, float] | None = None

    # -- shared ensembles --------------------------------------------------

    def two_state_thresholds(self) -> tuple[list[float], list[float]]:
        """Per-seed IMT thresholds after a saturating write of each bit."""
        if self._thresholds is None:
            d = self.cfg["device"]
            dev = _fresh_device(self.cfg)
            out = []
            for bit in (1, 0):
                dev.program_bit(bit, d["v_write"])
                vts = []
                for s in range(d["n_seeds"]):
                    th = extract_thresholds(ids_vds_sweep(dev, s),
                                            jump_factor=dev.sweep.jump_factor)
                    vts.append(th.v_t if th.v_t is not None else float("nan"))
                out.append(vts)
            self._thresholds = (out[0], out[1])
        return self._thresholds

    def read_currents(self) -> tuple[float, float, float]:
        """(v_read, median i_bit1, median i_bit0) at the midpoint read bias."""
        if self._reads is None:
            from .device import read_current
            vt1, vt0 = self.two_state_thresholds()
            v_read = 0.5 * (statistics.median(vt1) + statistics.median(vt0))
            d = self.cfg["device"]
            dev = _fresh_device(self.cfg)
            meds = []
            for bit in (1, 0):
                dev.program_bit(bit, d["v_write"])
                meds.append(statistics.median(
                    read_current(dev, v_read, s) for s in range(d["n_seeds"])))
            self._reads = (v_read, meds[0], meds[1])
        return self._reads

    # -- criteria ----------------------------------------------------------

    def criterion_1(self) -> CriterionResult:
        """Sparse solver matches a dense brute-force oracle on small grids."""
        t0 = time.time()
        imt = cfgmod.imt_params(self.cfg)
        rng = np.random.default_rng(123)
        worst = 0.0
        n_cases = 0
        for rows in (1, 2, 3):
            for cols in (1, 2, 3):
                for _ in range(20):
                    grid = build_grid(rows, cols, imt,
                                      seed=int(rng.integers(2**31)))
                    grid.metal_v[:] = rng.random(grid.metal_v.shape) < 0.4
                    if grid.metal_h.size:
                        grid.metal_h[:] = rng.random(grid.metal_h.shape) < 0.4
                    v = float(rng.uniform(0.2, 3.0))
                    i_fast = solve_network(grid, v).terminal_current
                    i_ref = dense_oracle_current(grid, v)
                    worst = max(worst, abs(i_fast - i_ref) / abs(i_ref))
                    n_cases += 1
        dt = time.time() - t0
        ok = worst < 1e-8 and dt < 10.0
        return CriterionResult(1, "network solver vs dense oracle", ok,
                               f"{n_cases} grids, worst rel err {worst:.2e}, "
                               f"{dt:.1f}s")

    def criterion_2(self) -> CriterionResult:
        """Abrupt hysteretic switching on every up-down sweep."""
        d = self.cfg["device"]
        dev = _fresh_device(self.cfg)
        n_jump = 0
        vts, vhs = [], []
        for s in range(d["n_seeds"]):
            trace = ids_vds_sweep(dev, s, updown=True)
            th = extract_thresholds(trace, jump_factor=dev.sweep.jump_factor)
            if th.v_t is not None:
                n_jump += 1
                vts.append(th.v_t)
            vhs.append(th.v_h if th.v_h is not None else 0.0)
        ok = (n_jump == d["n_seeds"]
              and statistics.median(vts) >= statistics.median(vhs))
        return CriterionResult(
            2, "abrupt hysteretic transition", ok,
            f"{n_jump}/{d['n_seeds']} traces jumped >=10x, "
            f"median v_t {statistics.median(vts):.3g} V >= "
            f"median v_h {statistics.median(vhs):.3g} V")

    def criterion_3(self) -> CriterionResult:
        """Off/on resistance contrast of the relaxed channel."""
        dev = _fresh_device(self.cfg)
        sw = dev.sweep
        grid = dev.grid.copy().reset()
        rng = derived_rng(dev.master_seed, 6, 0)
        r_off = relax(grid, 0.8, 0.0, rng, k_quiet=sw.k_quiet,
                      max_steps=sw.max_steps,
                      r_series=sw.r_series).solution.device_resistance
        r_on = relax(grid, 2.0, 0.0, rng, k_quiet=sw.k_quiet,
                     max_steps=sw.max_steps,
                     r_series=sw.r_series).solution.device_resistance
        ratio = r_off / r_on
        return CriterionResult(3, "off/on resistance ratio", ratio > 1e4,
                               f"R_off {r_off:.3g}, R_on {r_on:.3g}, "
                               f"ratio {ratio:.3g} (> 1e4 required)")

    def criterion_4(self) -> CriterionResult:
        """Median threshold strictly decreases with surface potential."""
        d = self.cfg["device"]
        dev = _fresh_device(self.cfg)
        sw = dev.sweep
        medians = []
        for psi in d["psi_list"]:
            vts = []
            for s in range(d["n_seeds"]):
                grid = dev.grid.copy().reset()
                rng = derived_rng(dev.master_seed, 7, s)
                trace = sweep_iv(grid, sw.up_waveform(), psi, rng,
                                 r_series=sw.r_series, k_quiet=sw.k_quiet,
                                 max_steps=sw.max_steps)
                th = extract_thresholds(trace, jump_factor=sw.jump_factor)
                if th.v_t is None:
                    return CriterionResult(4, "gate modulation", False,
                                           f"no transition at psi={psi}")
                vts.append(th.v_t)
            medians.append(statistics.median(vts))
        ok = all(b < a for a, b in zip(medians, medians[1:]))
        pairs = ", ".join(f"{p}:{m:.3g}" for p, m in zip(d["psi_list"], medians))
        return CriterionResult(4, "gate modulation of threshold", ok,
                               f"median v_t by psi_s {{{pairs}}} strictly "
                               f"decreasing: {ok}")

    def criterion_5(self) -> CriterionResult:
        """Memory window size and ordering after saturating writes."""
        vt1, vt0 = self.two_state_thresholds()
        ordered = sum(a < b for a, b in zip(vt1, vt0))
        window = statistics.median(vt0) - statistics.median(vt1)
        ok = ordered == len(vt1) and 0.25 <= window <= 0.75
        return CriterionResult(
            5, "memory window", ok,
            f"median delta_v_t {window:.3g} V (target 0.5 +/- 0.25), "
            f"state-1 threshold lower in {ordered}/{len(vt1)} seeds")

    def criterion_6(self) -> CriterionResult:
        """Read ratio stays flat while the window scales with write voltage."""
        d = self.cfg["device"]
        dev = _fresh_device(self.cfg)
        pts = ratio_vs_program_voltage(dev, d["v_prog_list"],
                                       n_seeds=d["n_seeds"])
        ratios = [p.ratio for p in pts]
        windows = [p.delta_v_t for p in pts]
        spread = max(ratios) / min(ratios)
        span = max(windows) / min(windows)
        ok = (spread <= 1.25 and span >= 2.0 and len(pts) >= 4
              and all(p.read_valid for p in pts))
        return CriterionResult(
            6, "ratio/window decoupling", ok,
            f"{len(pts)} program voltages, ratio spread {spread:.3g} "
            f"(<= 1.25), window span {span:.3g}x (>= 2)")

    def criterion_7(self) -> CriterionResult:
        """Absolute read currents and their contrast at the read point."""
        v_read, i1, i0 = self.read_currents()
        ratio = i1 / i0
        ok = (ratio >= 100.0
              and 225e-6 / 2 <= i1 <= 225e-6 * 2
              and 450e-9 / 2 <= i0 <= 450e-9 * 2)
        return CriterionResult(
            7, "read distinguishability", ok,
            f"v_read {v_read:.3g} V, i_bit1 {i1:.3g} A (target 225 uA x2), "
            f"i_bit0 {i0:.3g} A (target 450 nA x2), ratio {ratio:.3g}")

    def criterion_8(self) -> CriterionResult:
        """Threshold stochasticity: nonzero spread, separated states."""
        vt1, vt0 = self.two_state_thresholds()
        s1 = statistics.pstdev(vt1)
        s0 = statistics.pstdev(vt0)
        m1 = statistics.median(vt1)
        m0 = statistics.median(vt0)
        ok = s1 > 0.0 and s0 > 0.0 and m1 != m0
        return CriterionResult(
            8, "threshold distributions", ok,
            f"sigma1 {s1:.3g}, sigma0 {s0:.3g} (both > 0), "
            f"medians {m1:.3g}/{m0:.3g} V separated")

    def criterion_9(self) -> CriterionResult:
        """Half-select safety for every write in the array."""
        acfg = cfgmod.array_config(self.cfg)
        p_r = acfg.stack_template.fe.params.p_r if acfg.stack_template else 2.5
        state = ArrayState(acfg, master_seed=self.cfg["run"]["seed"])
        worst = 0.0
        n_ops = 0
        for bit in (1, 0):
            for r in range(acfg.rows):
                for c in range(acfg.cols):
                    rep = state.write_bit(r, c, bit)
                    worst = max(worst, rep.worst_nontarget())
                    n_ops += 1
        limit = 0.01 * p_r
        return CriterionResult(
            9, "array write isolation", worst < limit,
            f"{n_ops} writes, worst non-target |dP| {worst:.3g} uC/cm^2 "
            f"(< {limit:.3g})")

    def criterion_10(self) -> CriterionResult:
        """Every bit pattern survives a write/read round trip."""
        t0 = time.time()
        acfg = cfgmod.array_config(self.cfg)
        csa = CsaParams(i_ref=10e-6, v_dd=acfg.v_dd)
        seed = self.cfg["run"]["seed"]
        n_cells = acfg.rows * acfg.cols

        def run_one(k: int) -> bool:
            bits = np.array([(k >> b) & 1 for b in range(n_cells)])
            pattern = bits.reshape(acfg.rows, acfg.cols)
            st = ArrayState(acfg, master_seed=seed)
            st.write_pattern(pattern)
            return bool(np.array_equal(st.read_pattern(csa), pattern))

        with ThreadPoolExecutor(max_workers=max_workers()) as pool:
            oks = list(pool.map(run_one, range(2 ** n_cells)))
        dt = time.time() - t0
        n_ok = sum(oks)
        ok = n_ok == len(oks) and dt < 300.0
        return CriterionResult(
            10, "array pattern round trip", ok,
            f"{n_ok}/{len(oks)} patterns exact, {dt:.0f}s (< 300s)")

    def criterion_11(self) -> CriterionResult:
        """Repeated runs with one master seed are byte-identical."""
        overrides = ["run.experiment=iv_sweep", "run.seed=7",
                     "device.n_seeds=3", "device.psi_list=[0.0, 0.2]"]
        cfg = cfgmod.load_config(overrides=overrides)
        with tempfile.TemporaryDirectory() as tmp:
            d1 = run_experiment(cfg, Path(tmp) / "a")
            d2 = run_experiment(cfg, Path(tmp) / "b")
            names1 = sorted(p.name for p in d1.iterdir())
            names2 = sorted(p.name for p in d2.iterdir())
            same = names1 == names2 and all(
                (d1 / n).read_bytes() == (d2 / n).read_bytes() for n in names1)
        return CriterionResult(11, "artifact determinism", same,
                               f"{len(names1)} files compared byte for byte")

    def criterion_12(self) -> CriterionResult:
        """Hysteresis-model properties over random drive sequences."""
        params = cfgmod.fe_params(self.cfg)
        rng = np.random.default_rng(99)
        span = 3.0 * params.v_sat
        n_seq = 1000

        # return-point memory: a nested reversal excursion (one that stays
        # inside the innermost open loop, so it wipes no prior turning
        # points) must close exactly on return
        worst_rpm = 0.0
        for _ in range(n_seq):
            st = virgin_state(params)
            for v in rng.uniform(-span, span, size=8):
                st.apply_voltage(float(v))
            v0, p0 = st.v_now, st.p_now
            if st._direction == 0:
                continue
            frac = float(rng.uniform(0.05, 0.95))
            if st.history:
                v1 = v0 + frac * (st.history[-1][0] - v0)
            elif st._direction >= 0:
                v1 = v0 - frac * span
            else:
                v1 = v0 + frac * span
            if v1 == v0:
                continue
            st.apply_voltage(v1)
            st.apply_voltage(v0)
            worst_rpm = max(worst_rpm, abs(st.p_now - p0))

        clamp_ok = True
        for _ in range(n_seq):
            st = virgin_state(params)
            for v in rng.uniform(-span, span, size=30):
                st.apply_voltage(float(v))
                if abs(st.p_now) > params.p_s + 1e-12:
                    clamp_ok = False

        worst_sym = 0.0
        for _ in range(n_seq):
            seq = rng.uniform(-span, span, size=10)
            a = virgin_state(params)
            b = virgin_state(params)
            for v in seq:
                a.apply_voltage(float(v))
                b.apply_voltage(float(-v))
            worst_sym = max(worst_sym, abs(a.remnant() + b.remnant()))

        ok = worst_rpm < 1e-9 and clamp_ok and worst_sym < 1e-9
        return CriterionResult(
            12, "hysteresis model properties", ok,
            f"{n_seq} sequences each: return-point err {worst_rpm:.2e}, "
            f"clamp {'ok' if clamp_ok else 'VIOLATED'}, "
            f"symmetry err {worst_sym:.2e}")

    def run_all(self, echo=print) -> list[CriterionResult]:
        results = []
        for k in range(1, 13):
            res = getattr(self, f"criterion_{k}")()
            results.append(res)
            if echo:
                echo(res.line())
        return results


def check(cfg: dict | None = None, echo=print) -> bool:
    results = AcceptanceSuite(cfg).run_all(echo=echo)
    return all(r.passed for r in results)
