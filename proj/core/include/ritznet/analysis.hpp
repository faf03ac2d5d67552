#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ritznet/losses.hpp"
#include "ritznet/stats.hpp"
#include "ritznet/trainer.hpp"

namespace ritznet {

/// H1 distance (integral (a-b)^2 + |grad a - grad b|^2)^(1/2) by quadrature.
double h1_distance(const Field& a, const Field& b, const QuadratureGrid& grid);
double h1_error(const Field& u, const PdeProblem& problem, const QuadratureGrid& grid);

/// H2 distance: adds the squared Frobenius norm of the Hessian difference.
double h2_distance(const Field& a, const Field& b, const QuadratureGrid& grid);
double h2_error(const Field& u, const PdeProblem& problem, const QuadratureGrid& grid);

/// Interior quadrature grid for population integrals, with panels split at
/// the network's kink coordinates when every unit is axis-aligned (always
/// true in one dimension). Kink-aligned panels make piecewise-smooth network
/// integrands exact; otherwise the grid is a plain dense composite rule.
QuadratureGrid interior_grid_for(const PdeProblem& problem, const ShallowNet* net = nullptr,
                                 int nodes_per_axis = 12, int panels_per_axis = 8);

/// Both sides of the strong-convexity sandwich between energy excess and
/// squared H1 distance. For the Schrodinger family,
///   excess / max(1, V_max) <= |u - u*|_H1^2 <= excess / min(1, V_min);
/// for Poisson only the constant-free left inequality excess <= |u - u*|^2
/// is evaluated (the upper side carries the unknown Poincare constant).
struct SandwichReport {
  double excess = 0.0;
  double h1_sq = 0.0;
  double lower = 0.0;        // must be <= h1_sq
  double upper = 0.0;        // must be >= h1_sq; +inf for Poisson
  double slack_lower = 0.0;  // h1_sq - lower
  double slack_upper = 0.0;  // upper - h1_sq; +inf for Poisson

  bool holds(double tol) const { return slack_lower >= -tol && slack_upper >= -tol; }
};

SandwichReport sandwich_check(const Field& u, const PdeProblem& problem,
                              const QuadratureGrid& grid);

struct RademacherEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int sign_draws = 0;
};

/// Monte Carlo estimate of the multi-task Rademacher complexity of a finite
/// class over fixed batches:
///   E_sigma sup_c (1/T) sum_t (1/N_t) sum_i sigma_t^i f_{c,t}(X_t^i).
/// task_values[t] is the (class_size x N_t) matrix of f_{c,t}(X_t^i). T = 1
/// recovers the single-task complexity. This is a finite-sample lower-bound
/// estimator of the complexity of any continuous class containing the sample.
RademacherEstimate empirical_rademacher(const std::vector<Eigen::MatrixXd>& task_values,
                                        int sign_draws, std::uint64_t seed);

/// Exact expectation by enumerating all 2^(sum N_t) sign patterns; total
/// sample count is capped at 24.
double rademacher_exact_enumeration(const std::vector<Eigen::MatrixXd>& task_values);

/// Value matrix (fields x batch points) for single-task estimators.
Eigen::MatrixXd field_values_matrix(const std::vector<const Field*>& fields,
                                    const SampleBatch& batch);

/// Finite class of vector-valued functions for the concentration audit.
/// members[c][t] is member c on task t; task t samples uniformly from
/// (0,1)^(task_dims[t]). All |f| must stay within range_bound.
struct MultiTaskClass {
  std::vector<std::vector<ScalarFn>> members;
  std::vector<int> task_dims;
  double range_bound = 1.0;

  int size() const { return static_cast<int>(members.size()); }
  int tasks() const { return static_cast<int>(task_dims.size()); }
};

struct ConcentrationAudit {
  int class_size = 0;
  int tasks = 0;
  Eigen::Index n = 0;
  double x = 0.0;
  int trials = 0;
  double violation_rate = 0.0;
  double rademacher_estimate = 0.0;
  double rademacher_stderr = 0.0;
  double variance_proxy = 0.0;  // r
  double range_bound = 0.0;     // b
  double bound_value = 0.0;     // 4R + 2 sqrt(xr/(nT)) + 5bx/(nT)

  std::string to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Audits the concentration bound at alpha = 1: the empirical frequency over
/// fresh sample draws of sup_f (Pf - P_N f) exceeding
///   4 R + 2 sqrt(x r / (nT)) + 5 b x / (nT),
/// with R the Monte Carlo Rademacher estimate plus 3 standard errors.
/// Population means and the variance proxy come from quadrature. Classes
/// whose range exceeds range_bound on the probe grid are rejected.
ConcentrationAudit concentration_audit(const MultiTaskClass& cls, Eigen::Index n, double x,
                                       int trials, std::uint64_t seed,
                                       int rademacher_outer = 200);

/// Greedy farthest-point epsilon-net size of the sampled networks in the
/// empirical L2(P_n) metric: within a factor 2 of the optimal covering number
/// and deterministic given the input ordering.
int empirical_covering(const std::vector<ShallowNet>& class_sample, const SampleBatch& batch,
                       double epsilon);

struct RateCell {
  Eigen::Index n = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  int width = 0;
  double excess = 0.0;
  double h1 = 0.0;
};

struct RateReport {
  std::vector<Eigen::Index> n_grid;
  std::vector<double> mean_excess;
  std::vector<double> std_excess;
  std::vector<RateCell> cells;
  LinearFit fit;                    // log(mean excess) against log(n)
  double reference_exponent = 0.0;  // -(3d+2) / (2(3d+1))

  std::string to_json() const;
  /// CSV with header "n,repeat,seed,width,excess,h1_error".
  std::string cells_csv() const;
};

/// For each n: fresh batch, width from the rule, budget from the declared
/// Barron bound, train, record the population energy excess. Cells run in
/// parallel across `jobs` workers; aggregation order is fixed by (n, repeat).
RateReport rate_sweep(LossKind kind, const PdeProblem& problem,
                      const std::vector<Eigen::Index>& n_grid, int repeats,
                      const TrainConfig& base_config, std::uint64_t master_seed, int jobs = 1);

struct GapSlopeReport {
  std::vector<Eigen::Index> n_grid;
  std::vector<double> mean_abs_gap;
  double population_value = 0.0;
  LinearFit fit;  // log(mean |gap|) against log(n)
};

/// Monte Carlo error isolated from optimization: slope of log E|empirical -
/// population| against log n for a FIXED field u.
GapSlopeReport mc_gap_slope(const Field& u, const PdeProblem& problem, LossKind kind,
                            const std::vector<Eigen::Index>& n_grid, int repeats,
                            const QuadratureGrid& grid, std::uint64_t seed);

}  // namespace ritznet
