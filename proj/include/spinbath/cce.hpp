#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/clusters.hpp"
#include "spinbath/pulses.hpp"
#include "spinbath/spectrum.hpp"

namespace spinbath {

enum class CceMode { pure_dephasing, full_hyperfine };
enum class Execution { serial, parallel };

// Precomputed central-system data for the full-hyperfine mode: H_cs in the
// product Zeeman basis plus the two adiabatic state vectors addressed by the
// pulses.
struct CentralContext {
  Eigen::MatrixXd h_cs;
  Eigen::VectorXd state_u, state_l;
  double p_u = 0.0, p_l = 0.0;
  double bath_zeeman = 0.0;  // gamma_n * B, rad/s per unit m_I
};

std::shared_ptr<const CentralContext> make_central_context(const DonorParams& donor,
                                                           double field_t, Transition t,
                                                           double gamma_n);

// One qubit (x) cluster dynamics problem.  In pure-dephasing mode the bath
// evolves under h^(i) = P_i sum_a J_a I_a^z + H_bath with the conditioning
// swapped at each pi pulse; in full mode the joint state evolves under
// H_cs + sum_a J_a S.I_a + H_bath with explicit pulse operators.
struct ClusterProblem {
  Cluster members;
  Eigen::VectorXd couplings;   // J_a, rad/s
  Eigen::MatrixXd flip_flop;   // C_ab, rad/s (secular flip-flop strengths)
  int initial_state = 0;       // bath basis index; bit a set = spin a up
  CceMode mode = CceMode::pure_dephasing;
  double p_u = 0.0, p_l = 0.0;
  std::shared_ptr<const CentralContext> central;  // full mode only
};

ClusterProblem make_cluster_problem(const BathRealization& bath, const Cluster& cluster,
                                    const DonorParams& donor, double field_t,
                                    Transition transition, CceMode mode,
                                    std::shared_ptr<const CentralContext> central = nullptr);

// Normalized coherence curve L_K(t) of a single cluster over the time grid;
// each timepoint is an independent experiment with tau = t / 2N.
std::vector<std::complex<double>> cluster_coherence(const ClusterProblem& problem,
                                                    SequenceKind kind, int n_pulses,
                                                    const std::vector<double>& timepoints,
                                                    bool thermal_average = false);

// The recursion step: L~_K = L_K / prod of proper-subset terms, elementwise.
// Where the denominator magnitude drops below epsilon the value is clamped to
// one and the event counted.
std::vector<std::complex<double>> cce_term(
    const std::vector<std::complex<double>>& raw,
    const std::vector<const std::vector<std::complex<double>>*>& subset_terms,
    double epsilon, long* divergence_events);

struct CceOptions {
  int max_order = 2;              // k_max in [2, 5]
  double cutoff = 0.0;            // angstrom; <= 0 picks sqrt(11) a0 / 4
  CceMode mode = CceMode::pure_dephasing;
  bool thermal_average = false;   // average cluster states over all 2^k products
  double divergence_epsilon = 1e-10;
  double convergence_threshold = 0.05;  // sup-norm between consecutive orders
  Execution execution = Execution::parallel;
};

struct OrderResult {
  std::vector<std::complex<double>> curve;  // L_[k](t)
  std::vector<double> magnitude;            // |L_[k](t)|
  std::size_t cluster_count = 0;
  long divergence_events = 0;
  bool converged_from_previous = false;
};

struct CceResult {
  std::vector<double> timepoints;
  std::map<int, OrderResult> orders;  // k = 2 .. max_order
  long total_divergence_events() const;
};

// Enumerates clusters under the cutoff, solves them (in parallel; per-cluster
// results land in preassigned slots and the products run in canonical order,
// so curves are bit-identical for any worker count), applies the recursion,
// and assembles the truncated products per order.
CceResult run_cce(const DonorParams& donor, double field_t, Transition transition,
                  const BathRealization& bath, SequenceKind kind, int n_pulses,
                  const std::vector<double>& timepoints, const CceOptions& options);

// Same, but on an externally supplied cluster list (used by the pair-versus-
// triangle decomposition experiment, where the pair list is derived from the
// 3-cluster set rather than the cutoff graph).
CceResult run_cce_on_clusters(const DonorParams& donor, double field_t,
                              Transition transition, const BathRealization& bath,
                              const std::vector<std::vector<Cluster>>& clusters_per_size,
                              SequenceKind kind, int n_pulses,
                              const std::vector<double>& timepoints,
                              const CceOptions& options);

}  // namespace spinbath
