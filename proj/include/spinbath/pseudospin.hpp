#pragma once

#include <complex>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/pulses.hpp"

namespace spinbath {

// Closed two-level model of one flip-flopping bath pair conditioned on the
// qubit state.  In the { |du>, |ud> } subspace the conditional Hamiltonians
// are
//
//   h_i = (1/4) (delta_i sigma_z + c12 sigma_x),    i = u, l,
//
// where the stored fields use the doubled normalization that makes this
// exact for physical inputs:  delta_i = 2 P_i (J1 - J2) and c12 = 2 C12 with
// P_i = <S_z> in [-1/2, 1/2] and C12 the flip-flop coupling (twice the
// <ud|H_dd|du> matrix element).  Eigenfrequencies and precession angles:
//
//   omega_i = (1/4) sqrt(delta_i^2 + c12^2),  theta_i = atan2(c12, delta_i).
struct PseudospinPair {
  double delta_u = 0.0, delta_l = 0.0;  // rad/s (doubled convention)
  double c12 = 0.0;                     // rad/s (doubled convention)
  double omega_u = 0.0, omega_l = 0.0;  // rad/s
  double theta_u = 0.0, theta_l = 0.0;  // rad, in [0, pi]
};

PseudospinPair pair_from_couplings(double p_u, double p_l, double j1, double j2,
                                   double c12);

// Pauli components of the Hahn block T(1) = A0 1 - i A.sigma built from the
// two conditional rotations over interval tau each:
//   A0 =  cos wu t cos wl t - sin wu t sin wl t cos(theta_u - theta_l)
//   Ay = -sin wu t sin wl t sin(theta_u - theta_l)
// (Ax, Az from the explicit product).  A0^2 + |A|^2 = 1.
struct HahnComponents {
  double a0 = 1.0, ax = 0.0, ay = 0.0, az = 0.0;
};
HahnComponents hahn_components(const PseudospinPair& pair, double tau);

// |L(2 tau)|^2 for the Hahn echo: exactly 1 - 4 Ay^2 (A0^2 + Az^2); reduces
// to 1 - 4 Ay^2 A0^2 whenever Az = 0 (the unmixed-qubit limit
// theta_u = pi - theta_l with omega_u = omega_l).
double envelope_cpmg1(const PseudospinPair& pair, double tau);

// Coherence at t = 2 N tau for even N:
//   Re L = 1 - [2 Ay^2 / (Ay^2 + A0^2)] sin^2(N phi / 2),  cos phi = A0(2 tau)
//   Im L = -2 Ax Ay sin(N phi) / sin(phi)
// The real part is the pair coherence's real part exactly, in every regime.
double envelope_cpmg_even(const PseudospinPair& pair, double tau, int n_pulses);

// Complex pair coherence <du| T_l^dag T_u |du> for any sequence, by direct
// composition of the 2x2 conditional propagators.  This is the general path
// (odd N > 1 has no closed form) and the reference the closed forms equal.
std::complex<double> pair_coherence(const PseudospinPair& pair, SequenceKind kind,
                                    int n_pulses, double total_time);

// One active (antiparallel-initial-orientation) flip-flopping pair of a bath
// realization; parallel pairs contribute unit factors and are skipped.
struct BathPairSet {
  std::vector<PseudospinPair> pairs;
  std::size_t skipped_parallel = 0;
};
BathPairSet pairs_from_bath(const BathRealization& bath, double p_u, double p_l,
                            double cutoff);

// Pointwise product of per-pair coherence magnitudes over the time grid; the
// independent-pair (pair-correlation) decay.  Deterministic order, parallel
// over pairs.
std::vector<double> product_over_pairs(const std::vector<PseudospinPair>& pairs,
                                       SequenceKind kind, int n_pulses,
                                       const std::vector<double>& timepoints);

}  // namespace spinbath
