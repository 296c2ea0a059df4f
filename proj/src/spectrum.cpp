#include "spinbath/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <tuple>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

constexpr double kReferenceField = 0.6;  // T, defines the index convention
constexpr double kDerivativeStep = 1e-5; // T, central difference for df/dB

struct LevelLabel {
  int branch;  // +1 / -1
  double m;
  bool unmixed;
};

struct LevelValues {
  double energy;  // rad/s
  double beta;
  double P;
};

// All (branch, m) labels of the donor, unmixed states included.
std::vector<LevelLabel> level_labels(const DonorParams& d) {
  const double ih = d.host_spin;
  std::vector<LevelLabel> labels;
  labels.push_back({+1, ih + 0.5, true});
  labels.push_back({+1, -(ih + 0.5), true});
  const int doublets = static_cast<int>(2.0 * ih + 0.5);
  for (int j = 0; j < doublets; ++j) {
    const double m = -(ih - 0.5) + j;
    labels.push_back({+1, m, false});
    labels.push_back({-1, m, false});
  }
  return labels;
}

// Exact in-block solution of the (branch, m) level at field B.
LevelValues evaluate(const DonorParams& d, double field_t, const LevelLabel& lab) {
  const double a = d.hyperfine;
  const double ih = d.host_spin;
  const double delta = d.delta();
  const double wt = d.electron_gyromag * field_t / a;  // omega0 / A
  if (lab.unmixed) {
    const double sign = lab.m > 0 ? 1.0 : -1.0;
    const double energy = a * (ih / 2.0 + sign * wt * (0.5 + delta * ih));
    return {energy, 0.0, sign * 0.5};
  }
  const double x = ih * (ih + 1.0) + 0.25 - lab.m * lab.m;
  const double z = lab.m + wt * (1.0 - delta);
  const double r = std::hypot(z, std::sqrt(x));
  const double beta = std::atan2(std::sqrt(x), z);
  const double energy = a * (-0.25 + delta * wt * lab.m + 0.5 * lab.branch * r);
  return {energy, beta, 0.5 * lab.branch * z / r};
}

// Labels ordered by the index convention: ascending energy at the reference
// field.  Index i (1-based) -> labels[i-1].
std::vector<LevelLabel> indexed_labels(const DonorParams& d) {
  auto labels = level_labels(d);
  std::stable_sort(labels.begin(), labels.end(),
                   [&](const LevelLabel& p, const LevelLabel& q) {
                     return evaluate(d, kReferenceField, p).energy <
                            evaluate(d, kReferenceField, q).energy;
                   });
  return labels;
}

void check_field(double field_t) {
  if (field_t < 0.0 || !std::isfinite(field_t))
    throw ConfigError("magnetic field must be >= 0 T");
}

LevelLabel label_for_index(const DonorParams& d, int index) {
  if (index < 1 || index > d.level_count())
    throw ConfigError("level index out of range");
  return indexed_labels(d)[static_cast<std::size_t>(index - 1)];
}

}  // namespace

void DonorParams::validate() const {
  if (hyperfine <= 0.0) throw ConfigError("hyperfine A must be > 0");
  if (electron_gyromag <= 0.0) throw ConfigError("electron gyromagnetic ratio must be > 0");
  const double twice = 2.0 * host_spin;
  if (host_spin < 0.5 - 1e-12 || std::abs(twice - std::round(twice)) > 1e-9)
    throw ConfigError("host spin must be a half-integer >= 1/2");
}

std::vector<AdiabaticLevel> build_spectrum(const DonorParams& donor, double field_t) {
  donor.validate();
  check_field(field_t);
  const auto labels = indexed_labels(donor);
  std::vector<AdiabaticLevel> levels(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto v = evaluate(donor, field_t, labels[i]);
    levels[i] = {static_cast<int>(i) + 1, labels[i].m, labels[i].branch,
                 v.beta,  v.energy,       v.P,         labels[i].unmixed};
  }
  return levels;
}

double polarization(const DonorParams& donor, double field_t, int level_index) {
  donor.validate();
  check_field(field_t);
  return evaluate(donor, field_t, label_for_index(donor, level_index)).P;
}

double transition_frequency(const DonorParams& donor, double field_t, Transition t) {
  donor.validate();
  check_field(field_t);
  if (t.upper == t.lower) throw ConfigError("transition needs two distinct levels");
  const auto upper = label_for_index(donor, t.upper);
  const auto lower = label_for_index(donor, t.lower);
  return evaluate(donor, field_t, upper).energy - evaluate(donor, field_t, lower).energy;
}

double transition_delta_m(const DonorParams& donor, Transition t) {
  return label_for_index(donor, t.upper).m - label_for_index(donor, t.lower).m;
}

namespace {

// Bisection to (essentially) machine precision; the spec tolerances of
// 1e-6 T are met with large margin.
template <class F>
double bisect(F&& g, double lo, double hi, const char* what) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw NoSignChangeError(std::string(what) + ": no sign change in bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double find_owp(const DonorParams& donor, Transition t, double b_lo, double b_hi) {
  donor.validate();
  if (!(b_lo >= 0.0 && b_hi > b_lo)) throw ConfigError("bad field bracket");
  const auto upper = label_for_index(donor, t.upper);
  const auto lower = label_for_index(donor, t.lower);
  auto gap = [&](double b) {
    return evaluate(donor, b, upper).P - evaluate(donor, b, lower).P;
  };
  return bisect(gap, b_lo, b_hi, "find_owp");
}

double find_clock_transition(const DonorParams& donor, Transition t, double b_lo,
                             double b_hi) {
  donor.validate();
  if (!(b_lo >= 0.0 && b_hi > b_lo)) throw ConfigError("bad field bracket");
  auto dfdb = [&](double b) {
    const double h = kDerivativeStep;
    return transition_frequency(donor, b + h, t) - transition_frequency(donor, b - h, t);
  };
  return bisect(dfdb, b_lo, b_hi, "find_clock_transition");
}

// H_cs in the product Zeeman basis |m_S> x |m_I>, both ordered by descending
// magnetic quantum number.  Real symmetric.
Eigen::MatrixXd central_hamiltonian_matrix(const DonorParams& d, double field_t) {
  const int ni = d.level_count() / 2;  // 2 I_h + 1
  const double ih = d.host_spin;
  const double w0 = d.electron_gyromag * field_t;
  const double wn = d.host_nuclear_gyromag * field_t;
  const int dim = 2 * ni;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  auto idx = [ni](int s, int i) { return s * ni + i; };
  for (int s = 0; s < 2; ++s) {
    const double ms = s == 0 ? 0.5 : -0.5;
    for (int i = 0; i < ni; ++i) {
      const double mi = ih - i;
      h(idx(s, i), idx(s, i)) = w0 * ms + wn * mi + d.hyperfine * ms * mi;
      // A/2 (S+ I- + S- I+): couples |1/2, mi> with |-1/2, mi + 1>.
      if (s == 1 && i > 0) {
        const double amp = 0.5 * d.hyperfine *
                           std::sqrt(ih * (ih + 1.0) - mi * (mi + 1.0));
        h(idx(0, i - 1), idx(1, i)) = amp;
        h(idx(1, i), idx(0, i - 1)) = amp;
      }
    }
  }
  return h;
}

Eigen::VectorXd central_state_vector(const DonorParams& donor, double field_t,
                                     int level_index) {
  donor.validate();
  check_field(field_t);
  const auto lab = label_for_index(donor, level_index);
  const int ni = donor.level_count() / 2;
  const double ih = donor.host_spin;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * ni);
  auto idx = [ni, ih](int s, double mi) {
    return s * ni + static_cast<int>(std::lround(ih - mi));
  };
  if (lab.unmixed) {
    if (lab.m > 0)
      v[idx(0, ih)] = 1.0;  // |1/2, I>
    else
      v[idx(1, -ih)] = 1.0;  // |-1/2, -I>
    return v;
  }
  const double beta = evaluate(donor, field_t, lab).beta;
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  if (lab.branch > 0) {
    v[idx(0, lab.m - 0.5)] = c;
    v[idx(1, lab.m + 0.5)] = s;
  } else {
    v[idx(0, lab.m - 0.5)] = -s;
    v[idx(1, lab.m + 0.5)] = c;
  }
  return v;
}

std::vector<double> diagonalized_energies(const DonorParams& donor, double field_t) {
  donor.validate();
  check_field(field_t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      central_hamiltonian_matrix(donor, field_t));
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double polarization_from_eigenvector(const DonorParams& donor, double field_t,
                                     int level_index) {
  donor.validate();
  check_field(field_t);
  const double target =
      evaluate(donor, field_t, label_for_index(donor, level_index)).energy;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      central_hamiltonian_matrix(donor, field_t));
  int best = 0;
  double best_gap = std::abs(solver.eigenvalues()(0) - target);
  for (int i = 1; i < solver.eigenvalues().size(); ++i) {
    const double gap = std::abs(solver.eigenvalues()(i) - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  const int ni = donor.level_count() / 2;
  const Eigen::VectorXd v = solver.eigenvectors().col(best);
  const double up = v.head(ni).squaredNorm();
  const double down = v.tail(ni).squaredNorm();
  return 0.5 * (up - down);
}

}  // namespace spinbath
