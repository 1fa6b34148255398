"""Trace the ferroelectric P-V major loop and a family of minor loops.

Run from the repository root:

    python demos/hysteresis_loops.py

Writes loops.csv next to this script and prints the loop landmarks.
"""

import csv
from pathlib import Path

import numpy as np

from mottfefet import PreisachParams, virgin_state


def trace(state, voltages):
    pts = []
    for v in voltages:
        state.apply_voltage(float(v))
        pts.append((state.v_now, state.p_now))
    return pts


def main():
    params = PreisachParams()
    v_max = params.v_sat

    # virgin curve up, then one full major loop
    state = virgin_state(params)
    major = trace(state, np.linspace(0, v_max, 60))
    major += trace(state, np.linspace(v_max, -v_max, 120))
    major += trace(state, np.linspace(-v_max, v_max, 120))
    p_rem = state.remnant()

    # minor loops of growing amplitude, each started from negative remanence
    minors = []
    for amp in (0.6, 1.0, 1.6, 2.4):
        state = virgin_state(params)
        trace(state, [-v_max, 0.0])
        loop = trace(state, np.concatenate([
            np.linspace(0, amp, 30),
            np.linspace(amp, -amp, 60),
            np.linspace(-amp, amp, 60),
        ]))
        minors.append((amp, loop))

    out = Path(__file__).with_name("loops.csv")
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["loop", "v", "p"])
        for v, p in major:
            w.writerow(["major", f"{v:.5f}", f"{p:.6f}"])
        for amp, loop in minors:
            for v, p in loop:
                w.writerow([f"minor_{amp}", f"{v:.5f}", f"{p:.6f}"])

    print(f"saturation polarization  {params.p_s:.2f} uC/cm^2")
    print(f"remnant polarization     {p_rem:+.3f} uC/cm^2 "
          f"(parameter p_r = {params.p_r})")
    print(f"coercive voltage         {params.v_c:.2f} V")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
