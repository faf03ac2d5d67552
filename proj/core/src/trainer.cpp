#include "ritznet/trainer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ritznet/rng.hpp"

namespace ritznet {

namespace {

const char* optimizer_name(Optimizer o) {
  return o == Optimizer::adam ? "adam" : "plain_gd";
}
const char* schedule_name(StepSchedule s) {
  return s == StepSchedule::cosine ? "cosine" : "constant";
}

struct AdamState {
  Eigen::VectorXd m_gamma, v_gamma;
  Eigen::MatrixXd m_dirs, v_dirs;
  Eigen::VectorXd m_bias, v_bias;
  long t = 0;

  explicit AdamState(const ShallowNet& net)
      : m_gamma(Eigen::VectorXd::Zero(net.width())),
        v_gamma(Eigen::VectorXd::Zero(net.width())),
        m_dirs(Eigen::MatrixXd::Zero(net.width(), net.dim())),
        v_dirs(Eigen::MatrixXd::Zero(net.width(), net.dim())),
        m_bias(Eigen::VectorXd::Zero(net.width())),
        v_bias(Eigen::VectorXd::Zero(net.width())) {}
};

template <typename Param>
void adam_update(Param& p, const Param& g, Param& m, Param& v, double lr, double b1, double b2,
                 double eps, long t) {
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  p -= (lr / c1) * (m.array() / ((v.array() / c2).sqrt() + eps)).matrix();
}

// Descent direction: the exact a.e. loss gradient plus a box-kernel
// surrogate for the indicator jumps the subgradient convention drops. For
// ReLU networks the |grad u|^2 term, and for ReLU^2 the Hessian term, depend
// on kink positions only through those jumps.
ParamCotangent search_direction(LossKind kind, const ShallowNet& net,
                                const SampleBatch& interior, const SampleBatch* boundary,
                                const PdeProblem& problem, double bandwidth) {
  ParamCotangent grad = loss_gradient(kind, net, interior, boundary, problem);
  if (bandwidth <= 0.0) return grad;
  const double kappa = 0.5 / bandwidth;
  const Eigen::Index n = interior.size();
  const int m = net.width();

  if (kind == LossKind::drm_poisson || kind == LossKind::drm_schrodinger) {
    if (net.order() != 1) return grad;  // sigma_2 has a continuous first derivative
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::VectorXd x = interior.points.row(j);
      const Eigen::VectorXd cot_grad = 2.0 / n * net.gradient(x);
      const Eigen::VectorXd z = net.directions() * x + net.biases();
      for (int i = 0; i < m; ++i) {
        if (std::fabs(z[i]) > bandwidth || net.gamma()[i] == 0.0) continue;
        const double dz = net.gamma()[i] * cot_grad.dot(net.directions().row(i)) * kappa;
        grad.d_biases[i] += dz;
        grad.d_directions.row(i) += dz * x.transpose();
      }
    }
    return grad;
  }

  // pinn with order-2 networks: sigma_2'' = 2*1{z>=0} jumps at the kinks.
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd x = interior.points.row(j);
    const double r = pde_residual(problem, net, x);
    const EllipticCoefficients coeff = elliptic_coefficients(problem, x);
    const Eigen::MatrixXd cot_hess = (-2.0 * r / n) * coeff.a;
    const Eigen::VectorXd z = net.directions() * x + net.biases();
    for (int i = 0; i < m; ++i) {
      if (std::fabs(z[i]) > bandwidth || net.gamma()[i] == 0.0) continue;
      const double quad = net.directions().row(i) * cot_hess * net.directions().row(i).transpose();
      const double dz = net.gamma()[i] * 2.0 * quad * kappa;
      grad.d_biases[i] += dz;
      grad.d_directions.row(i) += dz * x.transpose();
    }
  }
  return grad;
}

}  // namespace

namespace {

TrainReport train_single(LossKind kind, const PdeProblem& problem, const SampleBatch& interior,
                         const SampleBatch* boundary, const TrainConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();

  ShallowNet net = init_network(config.width, problem.dim, config.budget, config.order,
                                config.seed);
  net = project(net);  // identity on a feasible init, but keeps the invariant explicit

  auto loss_of = [&](const ShallowNet& u) {
    return empirical_loss(kind, u, interior, boundary, problem);
  };

  TrainReport report;
  report.config = config;
  report.sample_seed = interior.seed;

  const double initial = loss_of(net);
  const double guard = initial + 10.0 * (1.0 + std::fabs(initial));
  double best = initial;
  ShallowNet best_net = net;
  report.raw_trace.push_back(initial);
  report.loss_trace.push_back(initial);

  AdamState adam(net);
  for (int step = 1; step <= config.steps; ++step) {
    const ParamCotangent grad =
        search_direction(kind, net, interior, boundary, problem, config.kink_smoothing);
    double lr = config.step_size;
    if (config.schedule == StepSchedule::cosine)
      lr *= 0.5 * (1.0 + std::cos(M_PI * static_cast<double>(step - 1) / config.steps));

    if (config.optimizer == Optimizer::adam) {
      adam.t = step;
      adam_update(net.mutable_gamma(), grad.d_gamma, adam.m_gamma, adam.v_gamma, lr,
                  config.adam_beta1, config.adam_beta2, config.adam_eps, adam.t);
      adam_update(net.mutable_directions(), grad.d_directions, adam.m_dirs, adam.v_dirs, lr,
                  config.adam_beta1, config.adam_beta2, config.adam_eps, adam.t);
      adam_update(net.mutable_biases(), grad.d_biases, adam.m_bias, adam.v_bias, lr,
                  config.adam_beta1, config.adam_beta2, config.adam_eps, adam.t);
    } else {
      net.mutable_gamma() -= lr * grad.d_gamma;
      net.mutable_directions() -= lr * grad.d_directions;
      net.mutable_biases() -= lr * grad.d_biases;
    }

    if (step % config.project_every == 0) net = project(net);

    const double loss = loss_of(net);
    if (loss > guard || !std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "train_erm: diverged at step " << step << " (loss " << loss << ", initial "
          << initial << ")";
      throw DivergenceError(msg.str());
    }
    report.raw_trace.push_back(loss);
    if (loss < best) {
      best = loss;
      best_net = net;
      report.best_step = step;
    }
    report.loss_trace.push_back(best);
  }

  report.final_net = project(best_net);  // recorded iterates are always feasible
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace

TrainReport train_erm(LossKind kind, const PdeProblem& problem, const SampleBatch& interior,
                      const SampleBatch* boundary, const TrainConfig& config) {
  if (config.steps < 1) throw std::invalid_argument("train_erm: steps >= 1 required");
  if (!(config.step_size >= 0.0)) throw std::invalid_argument("train_erm: step_size must be >= 0");
  if (config.project_every < 1)
    throw std::invalid_argument("train_erm: project_every >= 1 required");
  if (config.restarts < 1) throw std::invalid_argument("train_erm: restarts >= 1 required");
  if (kind == LossKind::pinn && config.order != 2)
    throw std::invalid_argument("train_erm: pinn requires order-2 networks");

  if (config.restarts == 1) return train_single(kind, problem, interior, boundary, config);

  Rng seeder(config.seed, 0x7265737461727473ULL);
  TrainReport best;
  double total_seconds = 0.0;
  for (int r = 0; r < config.restarts; ++r) {
    TrainConfig run = config;
    run.seed = r == 0 ? config.seed : seeder.next_u64();
    TrainReport report = train_single(kind, problem, interior, boundary, run);
    total_seconds += report.wall_seconds;
    if (r == 0 || report.loss_trace.back() < best.loss_trace.back()) best = std::move(report);
  }
  best.wall_seconds = total_seconds;
  best.config = config;
  return best;
}

int width_rule(Eigen::Index n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("width_rule: positive n and d required");
  const double exponent = 3.0 * d / (2.0 * (3.0 * d + 1.0));
  const double m = std::pow(static_cast<double>(n) / d, exponent);
  return std::max(1, static_cast<int>(std::lround(m)));
}

std::string TrainReport::to_json() const {
  nlohmann::json j;
  j["config"] = {{"steps", config.steps},
                 {"optimizer", optimizer_name(config.optimizer)},
                 {"step_size", config.step_size},
                 {"schedule", schedule_name(config.schedule)},
                 {"project_every", config.project_every},
                 {"seed", config.seed},
                 {"width", config.width},
                 {"budget", config.budget},
                 {"order", config.order}};
  j["sample_seed"] = sample_seed;
  j["best_step"] = best_step;
  j["wall_seconds"] = wall_seconds;
  j["final_loss"] = loss_trace.empty() ? 0.0 : loss_trace.back();
  j["loss_trace"] = loss_trace;
  j["raw_trace"] = raw_trace;
  j["network"] = nlohmann::json::parse(final_net.to_json());
  return j.dump(2);
}

std::string TrainReport::trace_csv() const {
  std::ostringstream out;
  out << "step,loss\n";
  char buf[64];
  for (std::size_t i = 0; i < loss_trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, loss_trace[i]);
    out << buf;
  }
  return out.str();
}

}  // namespace ritznet
