"""Experiment runners: named campaigns that emit CSV/JSON artifacts.

Every runner writes into one output directory: its result files, a
`resolved_config.json` echo of the exact configuration used, and a
`manifest.json` listing each output with a SHA-256 content hash. All output
is deterministic in the master seed, so reruns are byte-identical.

The environment variable MOTT_SIM_THREADS caps the worker count for
ensemble fan-out; result ordering is canonical regardless of parallelism.
"""

from __future__ import annotations

import hashlib
import json
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .device import (
    MottFeFet,
    characterize,
    derived_rng,
    ids_vds_sweep,
    ratio_vs_program_voltage,
    threshold_distribution,
)
from .memarray import ArrayState
from .network import build_grid, extract_thresholds, sweep_iv
from .senseamp import CurrentSenseAmp


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.10g}"


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def max_workers() -> int:
    cap = os.environ.get("MOTT_SIM_THREADS")
    n = os.cpu_count() or 1
    if cap is not None:
        n = min(n, max(1, int(cap)))
    return n


def _device(cfg: dict, master_seed: int) -> MottFeFet:
    d = cfg["device"]
    return MottFeFet(
        stack=cfgmod.stack_for(cfg),
        grid=build_grid(d["grid_rows"], d["grid_cols"], cfgmod.imt_params(cfg),
                        seed=master_seed),
        sweep=cfgmod.sweep_config(cfg),
        master_seed=master_seed,
    )


# -- experiments -----------------------------------------------------------

def run_iv_sweep(cfg: dict, out: Path) -> list[Path]:
    """Up-down drain sweeps plus threshold-vs-surface-potential medians."""
    d = cfg["device"]
    seed = cfg["run"]["seed"]
    dev = _device(cfg, seed)
    rows = []
    for s in range(d["n_seeds"]):
        trace = ids_vds_sweep(dev, s, updown=True)
        for v, i, n, direction in trace.rows():
            rows.append((s, v, i, n, 1 if direction == "up" else -1))
    f_iv = out / "iv_sweep.csv"
    write_csv(f_iv, ["seed", "v_applied", "current", "n_metallic", "direction"],
              rows)

    # threshold medians across imposed surface potentials
    sw = dev.sweep
    med_rows = []
    for psi in d["psi_list"]:
        vts = []
        for s in range(d["n_seeds"]):
            grid = dev.grid.copy().reset()
            rng = derived_rng(seed, 5, s)
            trace = sweep_iv(grid, sw.up_waveform(), psi, rng,
                             r_series=sw.r_series, k_quiet=sw.k_quiet,
                             max_steps=sw.max_steps)
            th = extract_thresholds(trace, jump_factor=sw.jump_factor)
            if th.v_t is not None:
                vts.append(th.v_t)
        med_rows.append((psi, statistics.median(vts) if vts else float("nan"),
                         len(vts)))
    f_mod = out / "fig1d.csv"
    write_csv(f_mod, ["psi_s", "median_v_t", "n_found"], med_rows)
    return [f_iv, f_mod]


def run_characterize(cfg: dict, out: Path) -> list[Path]:
    """Two-state sweeps plus the memory-window / read-current summary."""
    d = cfg["device"]
    seed = cfg["run"]["seed"]
    dev = _device(cfg, seed)
    ch = characterize(dev, n_seeds=d["n_seeds"], v_write=d["v_write"])

    rows = []
    for bit in (1, 0):
        dev.program_bit(bit, d["v_write"])
        trace = ids_vds_sweep(dev, 0, updown=True)
        for v, i, n, direction in trace.rows():
            rows.append((bit, v, i, 1 if direction == "up" else -1))
    f_iv = out / "fig2b.csv"
    write_csv(f_iv, ["bit", "v_applied", "current", "direction"], rows)

    f_sum = out / "characterize.json"
    write_json(f_sum, {
        "v_t_state1": ch.v_t_state1, "v_t_state0": ch.v_t_state0,
        "delta_v_t": ch.delta_v_t, "v_read": ch.v_read,
        "i_bit1": ch.i_bit1, "i_bit0": ch.i_bit0, "ratio": ch.ratio,
        "read_valid": ch.read_valid,
    })
    return [f_iv, f_sum]


def run_ratio_sweep(cfg: dict, out: Path) -> list[Path]:
    """Read-current ratio and memory window across program voltages."""
    d = cfg["device"]
    dev = _device(cfg, cfg["run"]["seed"])
    points = ratio_vs_program_voltage(dev, d["v_prog_list"],
                                      n_seeds=d["n_seeds"])
    f = out / "fig2c.csv"
    write_csv(f, ["v_prog", "delta_v_t", "i_bit1", "i_bit0", "ratio",
                  "read_valid"],
              [(p.v_prog, p.delta_v_t, p.i_bit1, p.i_bit0, p.ratio,
                p.read_valid) for p in points])
    return [f]


def run_threshold_dist(cfg: dict, out: Path) -> list[Path]:
    """Per-sweep switching thresholds for both stored states."""
    d = cfg["device"]
    dev = _device(cfg, cfg["run"]["seed"])
    rows = []
    summary = {}
    for bit in (0, 1):
        dev.program_bit(bit, d["v_write"])
        dist = threshold_distribution(dev, n_sweeps=d["n_seeds"])
        for k, v_t in enumerate(dist.samples):
            rows.append((bit, k, v_t))
        summary[f"state{bit}"] = {"mean": dist.mean, "sigma": dist.sigma,
                                  "median": dist.median}
    f_csv = out / "figS1.csv"
    write_csv(f_csv, ["bit", "sweep", "v_t"], rows)
    f_sum = out / "threshold_dist.json"
    write_json(f_sum, summary)
    return [f_csv, f_sum]


def run_array_demo(cfg: dict, out: Path) -> list[Path]:
    """Second-row showcase: neighbors at 0, center written 0 then 1, with a
    row read and sense decisions after each write."""
    state = ArrayState(cfgmod.array_config(cfg), master_seed=cfg["run"]["seed"])
    csa = cfgmod.csa_params(cfg)
    state.write_bit(1, 0, 0)
    state.write_bit(1, 2, 0)
    rows = []
    for center_bit in (0, 1):
        state.write_bit(1, 1, center_bit)
        currents = state.read_row(1)
        amps = [CurrentSenseAmp(csa) for _ in currents]
        for c, i_sl in enumerate(currents):
            res = amps[c].sense(i_sl)
            rows.append((center_bit, c, i_sl, res.bit, res.v_out))
    f_csv = out / "fig3h.csv"
    write_csv(f_csv, ["center_bit", "sl", "i_sl", "csa_bit", "csa_v_out"], rows)
    f_tr = out / "transcript.jsonl"
    state.export_transcript(f_tr)
    return [f_csv, f_tr]


def run_array_exhaustive(cfg: dict, out: Path) -> list[Path]:
    """All 2^(rows*cols) patterns written and read back through the CSA."""
    acfg = cfgmod.array_config(cfg)
    csa = cfgmod.csa_params(cfg)
    seed = cfg["run"]["seed"]
    n_cells = acfg.rows * acfg.cols
    n_patterns = 2 ** n_cells

    def run_one(k: int):
        bits = np.array([(k >> b) & 1 for b in range(n_cells)])
        pattern = bits.reshape(acfg.rows, acfg.cols)
        state = ArrayState(acfg, master_seed=seed)
        reports = state.write_pattern(pattern)
        worst = max(r.worst_nontarget() for r in reports)
        readback = state.read_pattern(csa)
        return k, bool(np.array_equal(readback, pattern)), worst

    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        results = list(pool.map(run_one, range(n_patterns)))
    results.sort()
    failures = [k for k, ok, _ in results if not ok]
    f = out / "roundtrip.json"
    write_json(f, {
        "n_patterns": n_patterns,
        "n_exact": n_patterns - len(failures),
        "failures": failures,
        "worst_nontarget_delta_p": max(w for _, _, w in results),
    })
    return [f]


_RUNNERS = {
    "iv_sweep": run_iv_sweep,
    "characterize": run_characterize,
    "ratio_sweep": run_ratio_sweep,
    "threshold_dist": run_threshold_dist,
    "array_demo": run_array_demo,
    "array_exhaustive": run_array_exhaustive,
}


def run_experiment(cfg: dict, out_dir: str | Path | None = None) -> Path:
    """Execute the configured experiment; returns the output directory."""
    out = Path(out_dir if out_dir is not None else cfg["run"]["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    files = _RUNNERS[cfg["run"]["experiment"]](cfg, out)

    # echo everything except the output location, so runs that differ only
    # in destination stay byte-identical
    echo = {k: dict(v) for k, v in cfg.items()}
    echo["run"].pop("out_dir", None)
    f_cfg = out / "resolved_config.json"
    write_json(f_cfg, echo)
    files.append(f_cfg)

    manifest = {}
    for f in sorted(files):
        manifest[f.name] = hashlib.sha256(f.read_bytes()).hexdigest()
    write_json(out / "manifest.json", manifest)
    return out
