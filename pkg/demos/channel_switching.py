"""Watch the resistor-network channel fire: avalanche, filament, hysteresis.

    python demos/channel_switching.py [seed]

Sweeps the drain up and down at three surface potentials and prints where
each trace jumps, plus an ASCII snapshot of the metallic filament.
"""

import sys

import numpy as np

from mottfefet import (
    ImtParams,
    build_grid,
    extract_thresholds,
    filament_path,
    relax,
    sweep_iv,
)

R_SERIES = 5200.0


def ascii_grid(grid):
    rows = []
    for i in range(grid.rows):
        rows.append("".join("#" if grid.metal_v[i, j] else "."
                            for j in range(grid.cols)))
    return "\n".join(rows)


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    params = ImtParams()
    wave = np.concatenate([np.linspace(0, 2.2, 45), np.linspace(2.2, 0, 45)[1:]])

    print(f"20x20 grid, seed {seed}, series load {R_SERIES:.0f} Ohm")
    for psi in (0.0, 0.15, 0.3):
        grid = build_grid(20, 20, params, seed=seed)
        trace = sweep_iv(grid, wave, psi, np.random.default_rng(seed),
                         r_series=R_SERIES)
        th = extract_thresholds(trace)
        i_max = trace.current.max()
        print(f"  psi_s = {psi:4.2f} V   v_t = {th.v_t!s:>5} V   "
              f"v_h = {th.v_h!s:>5} V   peak current {i_max * 1e6:7.1f} uA")

    # freeze a filament at 2 V and draw it
    grid = build_grid(20, 20, params, seed=seed)
    relax(grid, 2.0, 0.0, np.random.default_rng(seed), r_series=R_SERIES)
    path = filament_path(grid)
    print(f"\nmetallic domains after relaxing at 2 V: {grid.n_metallic}"
          f" ({'bridging path found' if path else 'no bridge'})")
    print(ascii_grid(grid))


if __name__ == "__main__":
    main()
