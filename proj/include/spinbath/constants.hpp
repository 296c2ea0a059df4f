#pragma once

// Physical constants and silicon host parameters used across the library.
// Everything that is a measured quantity lives here or in the donor preset
// files under presets/; operations take these as inputs and never hard-code
// them.

namespace spinbath::constants {

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;  // J s

// mu_0 / 4pi
inline constexpr double mu0_over_4pi = 1e-7;  // N A^-2

// Free-electron gyromagnetic ratio, rad s^-1 T^-1 (CODATA 2018).
inline constexpr double gamma_electron = 1.76085963023e11;

// Nuclear gyromagnetic ratios, rad s^-1 T^-1.
// 29Si: gamma/2pi = -8.465 MHz/T (negative moment).
inline constexpr double gamma_si29 = -5.319e7;
// 209Bi: mu = 4.1106 mu_N, I = 9/2  ->  gamma/2pi = 6.963 MHz/T.
inline constexpr double gamma_bi209 = 4.3747e7;
// 75As: gamma/2pi = 7.315 MHz/T.
inline constexpr double gamma_as75 = 4.596e7;

// Silicon crystal.
inline constexpr double silicon_lattice_constant_angstrom = 5.43;
inline constexpr double natural_si29_abundance = 0.0467;

// Kohn-Luttinger donor envelope in silicon: anisotropic hydrogenic radii of
// the effective-mass ground state (transverse / longitudinal relative to the
// valley axis), the conduction-valley wavevector fraction k0 = 0.85 * 2pi/a0,
// and the Bloch charge-density enhancement at a lattice site.  Radii are
// rescaled by sqrt(reference_binding / ionization_energy) for deep donors.
inline constexpr double kl_radius_transverse_angstrom = 25.09;
inline constexpr double kl_radius_longitudinal_angstrom = 14.43;
inline constexpr double kl_reference_binding_ev = 0.029;
inline constexpr double kl_valley_wavevector_fraction = 0.85;
inline constexpr double kl_charge_density_eta = 186.0;

}  // namespace spinbath::constants
