#include "spinbath/cce.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

using complexd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

int popcount(unsigned v) { return __builtin_popcount(v); }

// ---------------------------- pure dephasing --------------------------------

// Conditional bath Hamiltonians on the 2^k product basis (bit a set = spin a
// up).  Secular intrabath coupling: C_ab [ (I+I- + I-I+)/2 - 2 Iz Iz ].  The
// uniform bath Zeeman term commutes with everything here and cancels between
// the two branches, so it is omitted.
struct DephasingOperators {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig_u, eig_l;
};

MatrixXd conditional_hamiltonian(const ClusterProblem& p, double polarization) {
  const int k = static_cast<int>(p.members.size());
  const int dim = 1 << k;
  MatrixXd h = MatrixXd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int a = 0; a < k; ++a) {
      const double ma = (s >> a) & 1 ? 0.5 : -0.5;
      diag += polarization * p.couplings[a] * ma;
      for (int b = a + 1; b < k; ++b) {
        const double mb = (s >> b) & 1 ? 0.5 : -0.5;
        diag += -2.0 * p.flip_flop(a, b) * ma * mb;
        if (((s >> a) & 1) != ((s >> b) & 1)) {
          const int flipped = s ^ ((1 << a) | (1 << b));
          if (flipped > s) h(flipped, s) = h(s, flipped) = 0.5 * p.flip_flop(a, b);
        }
      }
    }
    h(s, s) = diag;
  }
  return h;
}

// psi <- V e^{-i lambda d} V^T psi, splitting real and imaginary parts so the
// matvecs stay real.
void apply_propagator(const MatrixXd& v, const VectorXd& lambda, double duration,
                      VectorXcd& psi) {
  const VectorXd re = v.transpose() * psi.real();
  const VectorXd im = v.transpose() * psi.imag();
  const VectorXd phase = lambda * duration;
  const VectorXd c = phase.array().cos();
  const VectorXd s = phase.array().sin();
  const VectorXd wre = re.cwiseProduct(c) + im.cwiseProduct(s);
  const VectorXd wim = im.cwiseProduct(c) - re.cwiseProduct(s);
  psi.real() = v * wre;
  psi.imag() = v * wim;
}

complexd dephasing_point(const DephasingOperators& ops, int init, SequenceKind kind,
                         int n_pulses, double t) {
  if (t == 0.0) return 1.0;
  const auto seq = schedule(kind, n_pulses, t);
  const auto durations = seq.segment_durations();
  const int dim = static_cast<int>(ops.eig_u.eigenvalues().size());
  VectorXcd psi_u = VectorXcd::Zero(dim);
  VectorXcd psi_l = VectorXcd::Zero(dim);
  psi_u[init] = 1.0;
  psi_l[init] = 1.0;
  for (std::size_t seg = 0; seg < durations.size(); ++seg) {
    const bool on_u = (seg % 2 == 0);
    const auto& first = on_u ? ops.eig_u : ops.eig_l;
    const auto& second = on_u ? ops.eig_l : ops.eig_u;
    apply_propagator(first.eigenvectors(), first.eigenvalues(), durations[seg], psi_u);
    apply_propagator(second.eigenvectors(), second.eigenvalues(), durations[seg], psi_l);
  }
  return psi_l.dot(psi_u);
}

std::vector<complexd> dephasing_curve(const ClusterProblem& p, SequenceKind kind,
                                      int n_pulses, const std::vector<double>& timepoints,
                                      bool thermal_average) {
  DephasingOperators ops;
  const MatrixXd h_u = conditional_hamiltonian(p, p.p_u);
  const MatrixXd h_l = conditional_hamiltonian(p, p.p_l);
  if (!h_u.isApprox(h_u.transpose()) || !h_l.isApprox(h_l.transpose()))
    throw NumericalError("conditional Hamiltonian is not Hermitian");
  ops.eig_u.compute(h_u);
  ops.eig_l.compute(h_l);

  const int dim = 1 << p.members.size();
  std::vector<complexd> curve(timepoints.size());
  for (std::size_t i = 0; i < timepoints.size(); ++i) {
    if (!thermal_average) {
      curve[i] = dephasing_point(ops, p.initial_state, kind, n_pulses, timepoints[i]);
    } else {
      complexd acc = 0.0;
      for (int s = 0; s < dim; ++s) acc += dephasing_point(ops, s, kind, n_pulses, timepoints[i]);
      curve[i] = acc / static_cast<double>(dim);
    }
  }
  return curve;
}

// ----------------------------- full hyperfine -------------------------------

// Joint Hamiltonian on (central) x (bath) with basis index c * 2^k + b.
// Includes the S-+I+- cross terms of the contact interaction and the bath
// Zeeman term (which no longer cancels once those terms are present).
MatrixXd joint_hamiltonian(const ClusterProblem& p) {
  const auto& central = *p.central;
  const int nc = static_cast<int>(central.h_cs.rows());
  const int ni = nc / 2;  // host-spin dimension; m_S = +1/2 occupies c < ni
  const int k = static_cast<int>(p.members.size());
  const int nb = 1 << k;
  const int dim = nc * nb;
  MatrixXd h = MatrixXd::Zero(dim, dim);
  auto id = [nb](int c, int b) { return c * nb + b; };

  for (int c = 0; c < nc; ++c)
    for (int cp = 0; cp < nc; ++cp)
      if (central.h_cs(c, cp) != 0.0)
        for (int b = 0; b < nb; ++b) h(id(c, b), id(cp, b)) += central.h_cs(c, cp);

  for (int b = 0; b < nb; ++b) {
    double bath_diag = 0.0;
    for (int a = 0; a < k; ++a) {
      const double ma = (b >> a) & 1 ? 0.5 : -0.5;
      bath_diag += central.bath_zeeman * ma;
      for (int a2 = a + 1; a2 < k; ++a2) {
        const double ma2 = (b >> a2) & 1 ? 0.5 : -0.5;
        bath_diag += -2.0 * p.flip_flop(a, a2) * ma * ma2;
        if (((b >> a) & 1) != ((b >> a2) & 1)) {
          const int flipped = b ^ ((1 << a) | (1 << a2));
          if (flipped > b)
            for (int c = 0; c < nc; ++c)
              h(id(c, flipped), id(c, b)) = h(id(c, b), id(c, flipped)) =
                  0.5 * p.flip_flop(a, a2);
        }
      }
    }
    for (int c = 0; c < nc; ++c) h(id(c, b), id(c, b)) += bath_diag;
  }

  // sum_a J_a [ S_z Iz_a + (S+ I-_a + S- I+_a)/2 ].
  for (int a = 0; a < k; ++a) {
    const double j = p.couplings[a];
    for (int b = 0; b < nb; ++b) {
      const double ma = (b >> a) & 1 ? 0.5 : -0.5;
      for (int c = 0; c < nc; ++c) {
        const double ms = c < ni ? 0.5 : -0.5;
        h(id(c, b), id(c, b)) += j * ms * ma;
      }
      // S+ I-_a: |m_S=-1/2, up_a>  ->  |m_S=+1/2, down_a>
      if ((b >> a) & 1) {
        const int bp = b ^ (1 << a);
        for (int i = 0; i < ni; ++i) {
          const int c_from = ni + i;  // m_S = -1/2
          const int c_to = i;         // m_S = +1/2
          h(id(c_to, bp), id(c_from, b)) += 0.5 * j;
          h(id(c_from, b), id(c_to, bp)) += 0.5 * j;
        }
      }
    }
  }
  return h;
}

std::vector<complexd> full_curve(const ClusterProblem& p, SequenceKind kind, int n_pulses,
                                 const std::vector<double>& timepoints,
                                 bool thermal_average) {
  if (!p.central) throw ConfigError("full-hyperfine mode needs a central context");
  const auto& central = *p.central;
  const int nc = static_cast<int>(central.h_cs.rows());
  const int k = static_cast<int>(p.members.size());
  const int nb = 1 << k;
  const int dim = nc * nb;

  const MatrixXd h = joint_hamiltonian(p);
  if (!h.isApprox(h.transpose())) throw NumericalError("joint Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);

  const VectorXd vu = central.state_u;
  const VectorXd vl = central.state_l;
  auto id = [nb](int c, int b) { return c * nb + b; };

  auto coherence = [&](const VectorXcd& psi) {
    // <u| Tr_bath |psi><psi| |l> accumulated over bath columns.
    complexd acc = 0.0;
    for (int b = 0; b < nb; ++b) {
      complexd au = 0.0, al = 0.0;
      for (int c = 0; c < nc; ++c) {
        if (vu[c] != 0.0) au += vu[c] * psi[id(c, b)];
        if (vl[c] != 0.0) al += vl[c] * psi[id(c, b)];
      }
      acc += au * std::conj(al);
    }
    return acc;
  };

  auto apply_pulse = [&](VectorXcd& psi) {
    // Pi = 1 - |u><u| - |l><l| + |u><l| + |l><u| acting on the central factor.
    for (int b = 0; b < nb; ++b) {
      complexd au = 0.0, al = 0.0;
      for (int c = 0; c < nc; ++c) {
        if (vu[c] != 0.0) au += vu[c] * psi[id(c, b)];
        if (vl[c] != 0.0) al += vl[c] * psi[id(c, b)];
      }
      const complexd du = al - au;  // new amplitude along u minus old
      const complexd dl = au - al;
      for (int c = 0; c < nc; ++c) {
        if (vu[c] != 0.0) psi[id(c, b)] += vu[c] * du;
        if (vl[c] != 0.0) psi[id(c, b)] += vl[c] * dl;
      }
    }
  };

  auto run_from = [&](int bath_state, const std::vector<double>& grid) {
    std::vector<complexd> curve(grid.size());
    VectorXcd psi0 = VectorXcd::Zero(dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int c = 0; c < nc; ++c)
      psi0[id(c, bath_state)] = inv_sqrt2 * (vu[c] + vl[c]);
    const complexd norm0 = complexd(0.5, 0.0);  // <u|rho(0)|l>
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == 0.0) {
        curve[i] = 1.0;
        continue;
      }
      const auto seq = schedule(kind, n_pulses, grid[i]);
      const auto durations = seq.segment_durations();
      VectorXcd psi = psi0;
      for (std::size_t seg = 0; seg < durations.size(); ++seg) {
        if (seg > 0) apply_pulse(psi);
        apply_propagator(eig.eigenvectors(), eig.eigenvalues(), durations[seg], psi);
      }
      curve[i] = coherence(psi) / norm0;
    }
    return curve;
  };

  if (!thermal_average) return run_from(p.initial_state, timepoints);
  std::vector<complexd> acc(timepoints.size(), 0.0);
  for (int s = 0; s < nb; ++s) {
    const auto one = run_from(s, timepoints);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += one[i];
  }
  for (auto& v : acc) v /= static_cast<double>(nb);
  return acc;
}

}  // namespace

// ------------------------------- public API ---------------------------------

std::shared_ptr<const CentralContext> make_central_context(const DonorParams& donor,
                                                           double field_t, Transition t,
                                                           double gamma_n) {
  auto ctx = std::make_shared<CentralContext>();
  ctx->h_cs = central_hamiltonian_matrix(donor, field_t);
  ctx->state_u = central_state_vector(donor, field_t, t.upper);
  ctx->state_l = central_state_vector(donor, field_t, t.lower);
  ctx->p_u = polarization(donor, field_t, t.upper);
  ctx->p_l = polarization(donor, field_t, t.lower);
  ctx->bath_zeeman = gamma_n * field_t;
  return ctx;
}

ClusterProblem make_cluster_problem(const BathRealization& bath, const Cluster& cluster,
                                    const DonorParams& donor, double field_t,
                                    Transition transition, CceMode mode,
                                    std::shared_ptr<const CentralContext> central) {
  if (cluster.size() < 1 || cluster.size() > 5)
    throw ConfigError("cluster size must be in [1, 5]");
  ClusterProblem p;
  p.members = cluster;
  p.mode = mode;
  const int k = static_cast<int>(cluster.size());
  p.couplings.resize(k);
  p.flip_flop = MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a) {
    const auto& sa = bath.spins[static_cast<std::size_t>(cluster[a])];
    p.couplings[a] = sa.j;
    if (sa.orientation > 0) p.initial_state |= 1 << a;
    for (int b = a + 1; b < k; ++b) {
      const auto& sb = bath.spins[static_cast<std::size_t>(cluster[b])];
      const double c12 = flip_flop_coupling(sb.position - sa.position, bath.gamma_n,
                                            bath.spec.field_direction);
      p.flip_flop(a, b) = p.flip_flop(b, a) = c12;
    }
  }
  if (mode == CceMode::full_hyperfine) {
    p.central = central ? central
                        : make_central_context(donor, field_t, transition, bath.gamma_n);
  } else {
    p.p_u = polarization(donor, field_t, transition.upper);
    p.p_l = polarization(donor, field_t, transition.lower);
  }
  return p;
}

std::vector<complexd> cluster_coherence(const ClusterProblem& problem, SequenceKind kind,
                                        int n_pulses, const std::vector<double>& timepoints,
                                        bool thermal_average) {
  if (problem.members.size() > 5) throw ConfigError("cluster size must be <= 5");
  if (problem.mode == CceMode::pure_dephasing)
    return dephasing_curve(problem, kind, n_pulses, timepoints, thermal_average);
  return full_curve(problem, kind, n_pulses, timepoints, thermal_average);
}

std::vector<complexd> cce_term(
    const std::vector<complexd>& raw,
    const std::vector<const std::vector<complexd>*>& subset_terms, double epsilon,
    long* divergence_events) {
  std::vector<complexd> tilde(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    complexd denom = 1.0;
    for (const auto* sub : subset_terms) denom *= (*sub)[i];
    if (std::abs(denom) < epsilon) {
      tilde[i] = 1.0;
      if (divergence_events) ++*divergence_events;
    } else {
      tilde[i] = raw[i] / denom;
    }
  }
  return tilde;
}

long CceResult::total_divergence_events() const {
  long total = 0;
  for (const auto& [k, order] : orders) total += order.divergence_events;
  return total;
}

CceResult run_cce_on_clusters(const DonorParams& donor, double field_t,
                              Transition transition, const BathRealization& bath,
                              const std::vector<std::vector<Cluster>>& clusters_per_size,
                              SequenceKind kind, int n_pulses,
                              const std::vector<double>& timepoints,
                              const CceOptions& options) {
  if (options.max_order < 2 || options.max_order > 5)
    throw ConfigError("CCE order must be in [2, 5]");
  const int k_max = std::min<int>(options.max_order,
                                  static_cast<int>(clusters_per_size.size()) - 1);

  std::shared_ptr<const CentralContext> central;
  if (options.mode == CceMode::full_hyperfine)
    central = make_central_context(donor, field_t, transition, bath.gamma_n);

  const std::size_t nt = timepoints.size();
  CceResult result;
  result.timepoints = timepoints;

  // Index every cluster for subset lookups across sizes.
  std::map<Cluster, const std::vector<complexd>*> tilde_of;
  std::vector<complexd> running = std::vector<complexd>(nt, 1.0);  // L_[k]

  // Storage must outlive the map.
  std::vector<std::vector<std::vector<complexd>>> tilde_store(
      static_cast<std::size_t>(k_max) + 1);

  for (int k = 2; k <= k_max; ++k) {
    const auto& clusters = clusters_per_size[static_cast<std::size_t>(k)];
    auto& tildes = tilde_store[static_cast<std::size_t>(k)];
    tildes.assign(clusters.size(), {});
    long events = 0;

    std::vector<std::vector<complexd>> raw(clusters.size());
    auto solve_one = [&](std::size_t c) {
      const auto problem = make_cluster_problem(bath, clusters[c], donor, field_t,
                                                transition, options.mode, central);
      raw[c] = cluster_coherence(problem, kind, n_pulses, timepoints,
                                 options.thermal_average);
    };
    if (options.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(clusters.size()); ++c)
        solve_one(static_cast<std::size_t>(c));
    } else {
      for (std::size_t c = 0; c < clusters.size(); ++c) solve_one(c);
    }

    // Recursion in canonical order; size-1 subsets are unit factors.
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      std::vector<const std::vector<complexd>*> subs;
      const auto& members = clusters[c];
      const unsigned full = (1u << members.size()) - 1u;
      for (unsigned mask = 1; mask < full; ++mask) {
        if (popcount(mask) < 2) continue;
        Cluster subset;
        for (std::size_t a = 0; a < members.size(); ++a)
          if ((mask >> a) & 1u) subset.push_back(members[a]);
        const auto it = tilde_of.find(subset);
        if (it != tilde_of.end()) subs.push_back(it->second);
      }
      tildes[c] = cce_term(raw[c], subs, options.divergence_epsilon, &events);
    }
    for (std::size_t c = 0; c < clusters.size(); ++c) tilde_of[clusters[c]] = &tildes[c];

    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (std::size_t i = 0; i < nt; ++i) running[i] *= tildes[c][i];

    OrderResult order;
    order.curve = running;
    order.magnitude.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) order.magnitude[i] = std::abs(running[i]);
    order.cluster_count = clusters.size();
    order.divergence_events = events;
    if (k > 2) {
      const auto& prev = result.orders.at(k - 1).magnitude;
      double gap = 0.0;
      for (std::size_t i = 0; i < nt; ++i)
        gap = std::max(gap, std::abs(prev[i] - order.magnitude[i]));
      order.converged_from_previous = gap < options.convergence_threshold;
    }
    result.orders.emplace(k, std::move(order));
  }
  return result;
}

CceResult run_cce(const DonorParams& donor, double field_t, Transition transition,
                  const BathRealization& bath, SequenceKind kind, int n_pulses,
                  const std::vector<double>& timepoints, const CceOptions& options) {
  const double cutoff =
      options.cutoff > 0.0 ? options.cutoff : default_cutoff(bath.spec.lattice_constant);
  const auto graph = build_neighbor_graph(bath, cutoff);
  const auto clusters = enumerate_clusters(graph, options.max_order);
  return run_cce_on_clusters(donor, field_t, transition, bath, clusters, kind, n_pulses,
                             timepoints, options);
}

}  // namespace spinbath
