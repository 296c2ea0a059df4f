#pragma once

#include <string>

namespace spinbath {

// Parameters of the central donor system: an electron spin 1/2 coupled to the
// host nucleus of spin I_h by an isotropic hyperfine constant A.  All angular
// frequencies are rad/s; gyromagnetic ratios are rad s^-1 T^-1.
struct DonorParams {
  std::string label;
  double electron_gyromag = 0.0;      // gamma_e
  double host_nuclear_gyromag = 0.0;  // gamma of the host nucleus
  double hyperfine = 0.0;             // A, rad/s
  double host_spin = 0.0;             // I_h, half-integer >= 1/2
  double ionization_energy_ev = 0.0;  // donor binding energy (bath coupling model)

  // gamma_host / gamma_e, the small parameter separating clock transitions
  // from optimal working points.
  double delta() const { return host_nuclear_gyromag / electron_gyromag; }

  // 2(2 I_h + 1)
  int level_count() const { return static_cast<int>(2.0 * (2.0 * host_spin + 1.0) + 0.5); }

  // Throws ConfigError on invalid values (A <= 0, non-half-integer I_h, ...).
  void validate() const;
};

// Parse a flat key = value donor file (see presets/).  Keys: label, host_spin,
// hyperfine_hz, electron_gyromagnetic_rad_per_s_t,
// host_nuclear_gyromagnetic_rad_per_s_t, ionization_energy_ev.
DonorParams load_donor_file(const std::string& path);

// Resolve a donor given either a preset name ("bismuth", "arsenic") or a file
// path.  Preset files are searched in preset_dir.
DonorParams resolve_donor(const std::string& name_or_path, const std::string& preset_dir);

}  // namespace spinbath
