"""Physical constants in the unit system used throughout the package.

Voltages in V, energies in eV, areal capacitances in uF/cm^2,
polarization in uC/cm^2, resistances in Ohm, currents in A.
"""

# Boltzmann constant (eV/K)
K_B_EV = 8.617333262e-5

# Vacuum permittivity (uF/cm): eps0 = 8.8541878128e-14 F/cm = 8.8541878128e-8 uF/cm
EPS0_UF_PER_CM = 8.8541878128e-8


def thermal_voltage_ev(temperature: float) -> float:
    """kT in eV at the given temperature (K)."""
    return K_B_EV * temperature


def areal_capacitance(eps_r: float, thickness_nm: float) -> float:
    """Areal capacitance (uF/cm^2) of a dielectric layer.

    eps_r: relative permittivity; thickness_nm: thickness in nm.
    """
    t_cm = thickness_nm * 1e-7
    return eps_r * EPS0_UF_PER_CM / t_cm
