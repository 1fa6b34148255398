"""Program both polarization states and measure the memory window.

    python demos/memory_window.py

Shows the threshold shift between the two stored bits, the read currents at
the midpoint bias, and how the window grows with program voltage while the
read-current ratio stays put.
"""

from mottfefet import characterize, default_device, ratio_vs_program_voltage

N_SEEDS = 9  # odd so medians land on samples


def main():
    dev = default_device(master_seed=0)
    ch = characterize(dev, n_seeds=N_SEEDS)

    print("two-state characterization (medians over "
          f"{N_SEEDS} sweep seeds)")
    print(f"  v_t state 1 (P > 0): {ch.v_t_state1:5.2f} V")
    print(f"  v_t state 0 (P < 0): {ch.v_t_state0:5.2f} V")
    print(f"  memory window:       {ch.delta_v_t:5.2f} V")
    print(f"  read at {ch.v_read:.2f} V: "
          f"i_bit1 = {ch.i_bit1 * 1e6:.1f} uA, "
          f"i_bit0 = {ch.i_bit0 * 1e9:.0f} nA, "
          f"ratio {ch.ratio:.0f}")

    print("\nprogram-voltage scan (window moves, ratio does not)")
    for p in ratio_vs_program_voltage(dev, [3.0, 4.0, 5.0, 7.0],
                                      n_seeds=N_SEEDS):
        flag = "" if p.read_valid else "  (read point outside window!)"
        print(f"  +/-{p.v_prog:.0f} V write: window {p.delta_v_t:4.2f} V, "
              f"ratio {p.ratio:5.0f}{flag}")


if __name__ == "__main__":
    main()
