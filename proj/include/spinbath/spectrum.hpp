#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinbath/donor.hpp"

namespace spinbath {

// One eigenstate of the central Hamiltonian
//
//   H_cs = omega0 S_z + delta omega0 I_z + A I.S,     omega0 = gamma_e B,
//
// labeled by the conserved quantum number m = m_S + m_I and a branch sign.
// Apart from the two stretched states |1/2, I> and |-1/2, -I> (which stay
// unmixed at every field and have beta = 0), states come in doublets of equal
// m mixed by the angle beta_m:
//
//   |+,m> =  cos(beta/2) |1/2, m-1/2> + sin(beta/2) |-1/2, m+1/2>
//   |-,m> = -sin(beta/2) |1/2, m-1/2> + cos(beta/2) |-1/2, m+1/2>
//
// with tan(beta_m) = sqrt(X_m)/Z_m, X_m = I(I+1) + 1/4 - m^2 and
// Z_m = m + (omega0/A)(1 - delta).  The block is solved exactly, so the
// analytic spectrum and a direct diagonalization agree to machine precision.
//
// Level indices are 1-based and assigned by ascending energy at a reference
// field of 0.6 T, then carried adiabatically (each (branch, m) label is a
// smooth function of B).  With this convention the two unmixed states of
// bismuth come out as levels 10 and 20.
struct AdiabaticLevel {
  int index = 0;       // 1 .. 2(2 I_h + 1)
  double m = 0.0;      // m_S + m_I, half-integer
  int branch = +1;     // +1 / -1; unmixed states carry +1
  double beta = 0.0;   // mixing angle, rad; 0 for unmixed states
  double energy = 0.0; // rad/s
  double P = 0.0;      // <S_z>, in [-1/2, 1/2]
  bool unmixed = false;
};

struct Transition {
  int upper = 0;  // level index
  int lower = 0;
};

// All 2(2 I_h + 1) levels at field B (tesla), ordered by index.
std::vector<AdiabaticLevel> build_spectrum(const DonorParams& donor, double field_t);

// <i|S_z|i> for one level.
double polarization(const DonorParams& donor, double field_t, int level_index);

// E_upper - E_lower in rad/s.
double transition_frequency(const DonorParams& donor, double field_t, Transition t);

// m_upper - m_lower.
double transition_delta_m(const DonorParams& donor, Transition t);

// Root of P_u(B) - P_l(B) inside [b_lo, b_hi] by bisection.  Throws
// NoSignChangeError if the bracket does not straddle a root.
double find_owp(const DonorParams& donor, Transition t, double b_lo, double b_hi);

// Root of df/dB (central difference, step 1e-5 T) inside [b_lo, b_hi].
// At the returned field, P_u - P_l + delta dm / (1 + delta) = 0 holds to
// better than 1e-6.
double find_clock_transition(const DonorParams& donor, Transition t, double b_lo,
                             double b_hi);

// Eigenvalues of the matrix representation of H_cs, ascending.  This is the
// cross-check path for the analytic construction (and supplies the central
// operators for the full-hyperfine mode of the engine).
std::vector<double> diagonalized_energies(const DonorParams& donor, double field_t);

// <i|S_z|i> evaluated from the diagonalized eigenvector whose energy matches
// level_index; independent of the analytic beta path.
double polarization_from_eigenvector(const DonorParams& donor, double field_t,
                                     int level_index);

// H_cs in the product Zeeman basis |m_S> x |m_I> (both ordered by descending
// quantum number).  Real symmetric, dimension 2(2 I_h + 1).
Eigen::MatrixXd central_hamiltonian_matrix(const DonorParams& donor, double field_t);

// The adiabatic eigenvector of one level in that basis, built from beta_m.
Eigen::VectorXd central_state_vector(const DonorParams& donor, double field_t,
                                     int level_index);

}  // namespace spinbath
