#include "spinbath/pseudospin.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "spinbath/clusters.hpp"
#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

using complexd = std::complex<double>;

// T_n(c) and U_{n-1}(c): cos(n phi) and sin(n phi)/sin(phi) for c = cos(phi).
// Stable three-term recurrences for |c| <= 1.
struct Chebyshev {
  double t_n;
  double u_nm1;
};

Chebyshev chebyshev(double c, int n) {
  double t_prev = 1.0, t_cur = c;    // T_0, T_1
  double u_prev = 1.0, u_cur = 2.0 * c;  // U_0, U_1
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double t_next = 2.0 * c * t_cur - t_prev;
    const double u_next = 2.0 * c * u_cur - u_prev;
    t_prev = t_cur;
    t_cur = t_next;
    u_prev = u_cur;
    u_cur = u_next;
  }
  return {t_cur, u_prev};
}

Eigen::Matrix2cd conditional_propagator(double omega, double theta, double duration) {
  const double angle = omega * duration;
  const complexd c(std::cos(angle), 0.0);
  const complexd s(0.0, -std::sin(angle));
  Eigen::Matrix2cd u;
  u(0, 0) = c + s * std::cos(theta);
  u(0, 1) = s * std::sin(theta);
  u(1, 0) = s * std::sin(theta);
  u(1, 1) = c - s * std::cos(theta);
  return u;
}

}  // namespace

PseudospinPair pair_from_couplings(double p_u, double p_l, double j1, double j2,
                                   double c12) {
  PseudospinPair pair;
  pair.delta_u = 2.0 * p_u * (j1 - j2);
  pair.delta_l = 2.0 * p_l * (j1 - j2);
  pair.c12 = 2.0 * c12;
  pair.omega_u = 0.25 * std::hypot(pair.delta_u, pair.c12);
  pair.omega_l = 0.25 * std::hypot(pair.delta_l, pair.c12);
  pair.theta_u = std::atan2(pair.c12, pair.delta_u);
  pair.theta_l = std::atan2(pair.c12, pair.delta_l);
  return pair;
}

HahnComponents hahn_components(const PseudospinPair& pair, double tau) {
  if (tau < 0.0) throw ConfigError("tau must be >= 0");
  const double cu = std::cos(pair.omega_u * tau), su = std::sin(pair.omega_u * tau);
  const double cl = std::cos(pair.omega_l * tau), sl = std::sin(pair.omega_l * tau);
  const double dth = pair.theta_u - pair.theta_l;
  HahnComponents a;
  a.a0 = cu * cl - su * sl * std::cos(dth);
  a.ay = -su * sl * std::sin(dth);
  a.ax = cl * su * std::sin(pair.theta_u) + cu * sl * std::sin(pair.theta_l);
  a.az = cl * su * std::cos(pair.theta_u) + cu * sl * std::cos(pair.theta_l);
  return a;
}

double envelope_cpmg1(const PseudospinPair& pair, double tau) {
  const auto a = hahn_components(pair, tau);
  return 1.0 - 4.0 * a.ay * a.ay * (a.a0 * a.a0 + a.az * a.az);
}

double envelope_cpmg_even(const PseudospinPair& pair, double tau, int n_pulses) {
  if (n_pulses < 2 || n_pulses % 2 != 0)
    throw ConfigError("closed form needs an even pulse count; compose odd N directly");
  const auto a = hahn_components(pair, tau);
  const double ay2 = a.ay * a.ay;
  if (ay2 == 0.0) return 1.0;
  const double p = a.a0 * a.a0 + ay2;
  const double cos_phi = hahn_components(pair, 2.0 * tau).a0;
  const double sin2_half = 0.5 * (1.0 - chebyshev(cos_phi, n_pulses).t_n);
  return 1.0 - (2.0 * ay2 / p) * sin2_half;
}

std::complex<double> pair_coherence(const PseudospinPair& pair, SequenceKind kind,
                                    int n_pulses, double total_time) {
  if (total_time == 0.0) return 1.0;
  const auto seq = schedule(kind, n_pulses, total_time);
  const auto durations = seq.segment_durations();
  Eigen::Matrix2cd u_branch = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd l_branch = Eigen::Matrix2cd::Identity();
  for (std::size_t s = 0; s < durations.size(); ++s) {
    const bool on_u = (s % 2 == 0);
    const auto up = conditional_propagator(pair.omega_u, pair.theta_u, durations[s]);
    const auto lp = conditional_propagator(pair.omega_l, pair.theta_l, durations[s]);
    u_branch = (on_u ? up : lp) * u_branch;
    l_branch = (on_u ? lp : up) * l_branch;
  }
  return (l_branch.adjoint() * u_branch)(0, 0);
}

BathPairSet pairs_from_bath(const BathRealization& bath, double p_u, double p_l,
                            double cutoff) {
  BathPairSet set;
  const auto graph = build_neighbor_graph(bath, cutoff);
  for (int i = 0; i < static_cast<int>(bath.spins.size()); ++i) {
    for (int j : graph.adjacency[i]) {
      if (j <= i) continue;
      if (bath.spins[i].orientation == bath.spins[j].orientation) {
        ++set.skipped_parallel;  // |uu>, |dd> cannot flip-flop
        continue;
      }
      const double c12 =
          flip_flop_coupling(bath.spins[j].position - bath.spins[i].position, bath.gamma_n,
                             bath.spec.field_direction);
      set.pairs.push_back(
          pair_from_couplings(p_u, p_l, bath.spins[i].j, bath.spins[j].j, c12));
    }
  }
  return set;
}

std::vector<double> product_over_pairs(const std::vector<PseudospinPair>& pairs,
                                       SequenceKind kind, int n_pulses,
                                       const std::vector<double>& timepoints) {
  const std::size_t nt = timepoints.size();
  const std::size_t np = pairs.size();
  std::vector<double> magnitudes(np * nt);

  const bool even_cpmg = kind == SequenceKind::cpmg && n_pulses >= 2 && n_pulses % 2 == 0;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(np); ++k) {
    const auto& pair = pairs[static_cast<std::size_t>(k)];
    double* row = magnitudes.data() + static_cast<std::size_t>(k) * nt;
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = timepoints[it];
      if (t == 0.0) {
        row[it] = 1.0;
      } else if (kind == SequenceKind::cpmg && n_pulses == 1) {
        row[it] = std::sqrt(std::max(0.0, envelope_cpmg1(pair, 0.5 * t)));
      } else if (even_cpmg) {
        const double tau = t / (2.0 * n_pulses);
        const auto a = hahn_components(pair, tau);
        const double ay2 = a.ay * a.ay;
        if (ay2 == 0.0) {
          row[it] = 1.0;
          continue;
        }
        const double p = a.a0 * a.a0 + ay2;
        const auto ch = chebyshev(hahn_components(pair, 2.0 * tau).a0, n_pulses);
        const double re = 1.0 - (2.0 * ay2 / p) * 0.5 * (1.0 - ch.t_n);
        const double im = -2.0 * a.ax * a.ay * ch.u_nm1;
        row[it] = std::hypot(re, im);
      } else {
        row[it] = std::abs(pair_coherence(pair, kind, n_pulses, t));
      }
    }
  }

  // Fixed-order reduction: results do not depend on the worker count.
  std::vector<double> decay(nt, 1.0);
  for (std::size_t k = 0; k < np; ++k)
    for (std::size_t it = 0; it < nt; ++it) decay[it] *= magnitudes[k * nt + it];
  return decay;
}

}  // namespace spinbath
