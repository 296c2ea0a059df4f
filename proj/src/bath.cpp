#include "spinbath/bath.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/io.hpp"

namespace spinbath {

namespace {

constexpr double kPi = std::numbers::pi;

// Fully specified uniform in [0, 1) from the standard mt19937_64 stream, so
// baths replay identically across standard libraries.
double next_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

constexpr int kBasisCount = 8;
// Diamond-cubic conventional cell: fcc plus the (1/4,1/4,1/4) sublattice.
constexpr double kBasis[kBasisCount][3] = {
    {0.00, 0.00, 0.00}, {0.00, 0.50, 0.50}, {0.50, 0.00, 0.50}, {0.50, 0.50, 0.00},
    {0.25, 0.25, 0.25}, {0.25, 0.75, 0.75}, {0.75, 0.25, 0.75}, {0.75, 0.75, 0.25}};

}  // namespace

void LatticeSpec::validate() const {
  if (lattice_constant <= 0.0) throw ConfigError("lattice constant must be > 0");
  if (superlattice_side <= 0.0) throw ConfigError("superlattice side must be > 0");
  if (abundance < 0.0 || abundance > 1.0) throw ConfigError("abundance must be in [0, 1]");
  if (std::abs(field_direction.norm() - 1.0) > 1e-12)
    throw ConfigError("field direction must be normalized");
}

KohnLuttingerModel KohnLuttingerModel::for_donor(const DonorParams& donor, double gamma_n,
                                                 double lattice_constant,
                                                 bool valley_oscillation) {
  namespace c = spinbath::constants;
  if (donor.ionization_energy_ev <= 0.0)
    throw ConfigError("donor ionization energy must be > 0");
  const double scale = std::sqrt(c::kl_reference_binding_ev / donor.ionization_energy_ev);
  KohnLuttingerModel m;
  m.radius_transverse = scale * c::kl_radius_transverse_angstrom;
  m.radius_longitudinal = scale * c::kl_radius_longitudinal_angstrom;
  m.k0 = c::kl_valley_wavevector_fraction * 2.0 * kPi / lattice_constant;
  // (8 pi / 3) mu0' gamma_e |gamma_n| hbar eta, with |psi|^2 in angstrom^-3.
  m.prefactor = (8.0 * kPi / 3.0) * c::mu0_over_4pi * donor.electron_gyromag *
                std::abs(gamma_n) * c::hbar * c::kl_charge_density_eta * 1e30;
  m.valley_oscillation = valley_oscillation;
  return m;
}

double KohnLuttingerModel::density(const Eigen::Vector3d& r) const {
  const double at2 = radius_transverse * radius_transverse;
  const double al2 = radius_longitudinal * radius_longitudinal;
  const double norm = 1.0 / std::sqrt(kPi * at2 * radius_longitudinal);
  const double r2 = r.squaredNorm();
  double sum = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double para = r[axis];
    const double perp2 = r2 - para * para;
    const double envelope = norm * std::exp(-std::sqrt(perp2 / at2 + para * para / al2));
    const double phase = valley_oscillation ? std::cos(k0 * para) : 1.0;
    sum += 2.0 * envelope * phase;  // the two valleys on this axis
  }
  return sum * sum / 6.0;
}

double KohnLuttingerModel::coupling(const Eigen::Vector3d& r) const {
  return prefactor * density(r);
}

double hyperfine_coupling(const KohnLuttingerModel& model, const Eigen::Vector3d& position,
                          const Eigen::Vector3d& donor_site) {
  const Eigen::Vector3d r = position - donor_site;
  if (r.norm() < 1e-9)
    throw ConfigError("hyperfine coupling requested at the donor site itself");
  return model.coupling(r);
}

BathRealization generate_bath(const LatticeSpec& spec, const DonorParams& donor,
                              double gamma_n, const Eigen::Vector3d& donor_site,
                              bool valley_oscillation) {
  spec.validate();
  donor.validate();
  const auto model =
      KohnLuttingerModel::for_donor(donor, gamma_n, spec.lattice_constant, valley_oscillation);

  BathRealization bath;
  bath.spec = spec;
  bath.gamma_n = gamma_n;
  bath.donor_site = donor_site;

  const double a0 = spec.lattice_constant;
  const double half = 0.5 * spec.superlattice_side;
  const double tol = 1e-9;
  std::mt19937_64 gen(spec.seed);

  // Conventional cells covering the cube, enumerated in a fixed order so the
  // random stream maps to sites deterministically.
  Eigen::Vector3i lo, hi;
  for (int d = 0; d < 3; ++d) {
    lo[d] = static_cast<int>(std::floor((donor_site[d] - half) / a0)) - 1;
    hi[d] = static_cast<int>(std::ceil((donor_site[d] + half) / a0)) + 1;
  }
  for (int cx = lo[0]; cx <= hi[0]; ++cx)
    for (int cy = lo[1]; cy <= hi[1]; ++cy)
      for (int cz = lo[2]; cz <= hi[2]; ++cz)
        for (int b = 0; b < kBasisCount; ++b) {
          const Eigen::Vector3d site(a0 * (cx + kBasis[b][0]), a0 * (cy + kBasis[b][1]),
                                     a0 * (cz + kBasis[b][2]));
          const Eigen::Vector3d rel = site - donor_site;
          if (std::abs(rel[0]) > half + tol || std::abs(rel[1]) > half + tol ||
              std::abs(rel[2]) > half + tol)
            continue;
          if (rel.norm() < tol) continue;  // the donor occupies this site
          if (next_unit(gen) >= spec.abundance) continue;
          BathSpin spin;
          spin.position = site;
          spin.orientation = next_unit(gen) < 0.5 ? +1 : -1;
          spin.j = model.coupling(rel);
          bath.spins.push_back(spin);
        }
  return bath;
}

Eigen::Matrix3d dipolar_tensor(const Eigen::Vector3d& r_ab, double gamma_n) {
  namespace c = spinbath::constants;
  const double r = r_ab.norm();
  if (r <= 0.0) throw ConfigError("dipolar tensor needs a nonzero separation");
  const double pref = c::mu0_over_4pi * c::hbar * gamma_n * gamma_n * 1e30;  // angstrom^3
  const double r3 = r * r * r;
  const double r5 = r3 * r * r;
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity() * (pref / r3);
  d -= (3.0 * pref / r5) * (r_ab * r_ab.transpose());
  return d;
}

double flip_flop_coupling(const Eigen::Matrix3d& dipolar) {
  // 2 <ud| I1.D.I2 |du>; only the m-conserving combination survives, and for a
  // symmetric tensor it equals (D_xx + D_yy)/4 = -D_zz/4 per matrix element.
  return 0.5 * (dipolar(0, 0) + dipolar(1, 1));
}

double flip_flop_coupling(const Eigen::Vector3d& r_ab, double gamma_n,
                          const Eigen::Vector3d& field_dir) {
  namespace c = spinbath::constants;
  const double r = r_ab.norm();
  if (r <= 0.0) throw ConfigError("flip-flop coupling needs a nonzero separation");
  const double cos_theta = r_ab.dot(field_dir) / r;
  const double pref = c::mu0_over_4pi * c::hbar * gamma_n * gamma_n * 1e30;
  return pref * (3.0 * cos_theta * cos_theta - 1.0) / (2.0 * r * r * r);
}

std::string serialize_bath(const BathRealization& bath) {
  std::ostringstream out;
  out.precision(17);
  out << "# spinbath bath realization v1\n";
  out << "# seed = " << bath.spec.seed << "\n";
  out << "# lattice_constant_angstrom = " << bath.spec.lattice_constant << "\n";
  out << "# superlattice_side_angstrom = " << bath.spec.superlattice_side << "\n";
  out << "# abundance = " << bath.spec.abundance << "\n";
  out << "# field_direction = " << bath.spec.field_direction[0] << " "
      << bath.spec.field_direction[1] << " " << bath.spec.field_direction[2] << "\n";
  out << "# gamma_n_rad_per_s_t = " << bath.gamma_n << "\n";
  out << "# donor_site_angstrom = " << bath.donor_site[0] << " " << bath.donor_site[1]
      << " " << bath.donor_site[2] << "\n";
  out << "# columns: index x_angstrom y_angstrom z_angstrom j_rad_per_s orientation\n";
  for (std::size_t i = 0; i < bath.spins.size(); ++i) {
    const auto& s = bath.spins[i];
    out << i << " " << s.position[0] << " " << s.position[1] << " " << s.position[2]
        << " " << s.j << " " << (s.orientation > 0 ? "+0.5" : "-0.5") << "\n";
  }
  return out.str();
}

BathRealization parse_bath(const std::string& text) {
  BathRealization bath;
  bath.spec.field_direction = Eigen::Vector3d(1, 0, 0);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      std::istringstream val(line.substr(eq + 1));
      if (key == "seed") val >> bath.spec.seed;
      else if (key == "lattice_constant_angstrom") val >> bath.spec.lattice_constant;
      else if (key == "superlattice_side_angstrom") val >> bath.spec.superlattice_side;
      else if (key == "abundance") val >> bath.spec.abundance;
      else if (key == "gamma_n_rad_per_s_t") val >> bath.gamma_n;
      else if (key == "field_direction")
        val >> bath.spec.field_direction[0] >> bath.spec.field_direction[1] >>
            bath.spec.field_direction[2];
      else if (key == "donor_site_angstrom")
        val >> bath.donor_site[0] >> bath.donor_site[1] >> bath.donor_site[2];
      continue;
    }
    std::istringstream row(line);
    std::size_t index;
    BathSpin s;
    double orientation;
    if (!(row >> index >> s.position[0] >> s.position[1] >> s.position[2] >> s.j >>
          orientation))
      throw ConfigError("malformed bath row: " + line);
    s.orientation = orientation > 0 ? +1 : -1;
    bath.spins.push_back(s);
  }
  return bath;
}

}  // namespace spinbath
