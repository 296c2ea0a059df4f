#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "spinbath/donor.hpp"

namespace spinbath {

// Randomized placement of spin-1/2 nuclei on the diamond-cubic lattice inside
// a cube of side superlattice_side centered on the donor.  Every site is
// occupied independently with probability `abundance` from the seeded stream,
// so a (seed, spec) pair reproduces the bath bit for bit.
struct LatticeSpec {
  double lattice_constant = 5.43;      // angstrom
  double superlattice_side = 160.0;    // angstrom
  double abundance = 0.0467;
  Eigen::Vector3d field_direction = Eigen::Vector3d(1, 0, 0);  // crystal frame
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

struct BathSpin {
  Eigen::Vector3d position;  // angstrom, crystal frame
  double j = 0.0;            // contact hyperfine to the donor electron, rad/s
  int orientation = +1;      // +1 = m_I +1/2, -1 = m_I -1/2
};

// Kohn-Luttinger six-valley envelope for the donor electron: J(r) is the
// Fermi-contact strength at a 29Si site at r (angstrom, relative to the
// donor), proportional to |psi(r)|^2 with
//   psi(r) = (1/sqrt(6)) sum_valleys F_valley(r) cos(k0 r_axis),
// anisotropic hydrogenic F with radii scaled by sqrt(E_ref / E_ionization).
struct KohnLuttingerModel {
  double radius_transverse = 0.0;   // angstrom, scaled
  double radius_longitudinal = 0.0; // angstrom, scaled
  double k0 = 0.0;                  // rad / angstrom
  double prefactor = 0.0;           // rad/s per angstrom^-3 of |psi|^2 (eta folded in)
  bool valley_oscillation = true;

  static KohnLuttingerModel for_donor(const DonorParams& donor, double gamma_n,
                                      double lattice_constant,
                                      bool valley_oscillation = true);

  double density(const Eigen::Vector3d& r) const;  // |psi|^2, angstrom^-3
  double coupling(const Eigen::Vector3d& r) const; // J, rad/s (>= 0)
};

struct BathRealization {
  LatticeSpec spec;
  double gamma_n = 0.0;  // bath species gyromagnetic ratio, rad s^-1 T^-1
  Eigen::Vector3d donor_site = Eigen::Vector3d::Zero();
  std::vector<BathSpin> spins;
};

// Enumerates lattice sites, occupies them with the seeded generator, and
// attaches hyperfine couplings from the model.  Deterministic per (seed, spec).
BathRealization generate_bath(const LatticeSpec& spec, const DonorParams& donor,
                              double gamma_n, const Eigen::Vector3d& donor_site,
                              bool valley_oscillation = true);

// J(r) for a single site; rejects the donor site itself.
double hyperfine_coupling(const KohnLuttingerModel& model, const Eigen::Vector3d& position,
                          const Eigen::Vector3d& donor_site);

// Dipole-dipole coupling tensor D_ij = mu0' hbar gamma_n^2 (delta_ij/r^3 -
// 3 r_i r_j / r^5) in rad/s, r in angstrom.  Symmetric and traceless.
Eigen::Matrix3d dipolar_tensor(const Eigen::Vector3d& r_ab, double gamma_n);

// Strength of the secular flip-flop coupling: twice the <up,down|H|down,up>
// matrix element of I1.D.I2, i.e. -D_zz/2 with z the quantization axis of the
// tensor's frame.
double flip_flop_coupling(const Eigen::Matrix3d& dipolar);

// Same quantity evaluated directly for two spins separated by r_ab (crystal
// frame) in a field along field_dir: -D_zz/2 in the field frame,
// mu0' hbar gamma^2 (3 cos^2 theta - 1) / (2 r^3).
double flip_flop_coupling(const Eigen::Vector3d& r_ab, double gamma_n,
                          const Eigen::Vector3d& field_dir);

// Column text format (site index, x, y, z, J, orientation) used to replay the
// exact same configuration across runs and to fingerprint outputs.
std::string serialize_bath(const BathRealization& bath);
BathRealization parse_bath(const std::string& text);

}  // namespace spinbath
