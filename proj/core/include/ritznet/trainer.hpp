#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ritznet/losses.hpp"
#include "ritznet/shallow_net.hpp"

namespace ritznet {

enum class Optimizer { plain_gd, adam };
enum class StepSchedule { constant, cosine };

struct TrainConfig {
  int steps = 1000;
  Optimizer optimizer = Optimizer::adam;
  double step_size = 1e-2;
  StepSchedule schedule = StepSchedule::constant;
  int project_every = 1;
  std::uint64_t seed = 0;
  int width = 16;
  double budget = 1.0;
  int order = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Bandwidth of the smoothed indicator derivative used in the descent
  /// direction. The empirical |grad u|^2 term is a step function of the
  /// biases for ReLU networks, so its exact a.e. gradient carries no signal
  /// for kink positions; a box-kernel surrogate of width `kink_smoothing`
  /// restores it. 0 falls back to exact subgradient steps. Loss values and
  /// loss_gradient() are unaffected.
  double kink_smoothing = 0.05;
  /// Independent runs from derived init seeds; the report with the lowest
  /// empirical loss wins. The ERM target is the empirical minimizer over the
  /// class, so keeping the best restart is the closer approximation.
  int restarts = 1;
};

struct TrainReport {
  ShallowNet final_net;             // best-so-far iterate, not necessarily the last
  std::vector<double> loss_trace;   // best-so-far empirical loss, length steps+1
  std::vector<double> raw_trace;    // per-iterate empirical loss, length steps+1
  int best_step = 0;
  double wall_seconds = 0.0;
  TrainConfig config;
  std::uint64_t sample_seed = 0;

  std::string to_json() const;
  /// CSV with header "step,loss" from the best-so-far trace.
  std::string trace_csv() const;
};

/// Thrown when the empirical loss blows past the divergence guard
/// (loss > initial + 10 * (1 + |initial|)).
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// ERM over one fixed sample batch: projected first-order minimization of the
/// empirical loss over a ShallowNet. Every recorded iterate is feasible and
/// the returned network is the best iterate found. Deterministic given
/// (config, batch).
TrainReport train_erm(LossKind kind, const PdeProblem& problem, const SampleBatch& interior,
                      const SampleBatch* boundary, const TrainConfig& config);

/// Width from the sample size: round((n/d)^(3d / (2(3d+1)))), floored at 1.
int width_rule(Eigen::Index n, int d);

}  // namespace ritznet
