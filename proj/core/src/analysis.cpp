#include "ritznet/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ritznet/rng.hpp"

namespace ritznet {

double h1_distance(const Field& a, const Field& b, const QuadratureGrid& grid) {
  std::vector<double> terms(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd x = grid.nodes.row(i);
    const double dv = a.value(x) - b.value(x);
    const double dg = (a.gradient(x) - b.gradient(x)).squaredNorm();
    terms[i] = grid.weights[i] * (dv * dv + dg);
  }
  return std::sqrt(std::max(pairwise_sum(terms), 0.0));
}

double h1_error(const Field& u, const PdeProblem& problem, const QuadratureGrid& grid) {
  return h1_distance(u, *problem.exact, grid);
}

double h2_distance(const Field& a, const Field& b, const QuadratureGrid& grid) {
  std::vector<double> terms(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd x = grid.nodes.row(i);
    const double dv = a.value(x) - b.value(x);
    const double dg = (a.gradient(x) - b.gradient(x)).squaredNorm();
    const double dh = (a.hessian(x) - b.hessian(x)).squaredNorm();
    terms[i] = grid.weights[i] * (dv * dv + dg + dh);
  }
  return std::sqrt(std::max(pairwise_sum(terms), 0.0));
}

double h2_error(const Field& u, const PdeProblem& problem, const QuadratureGrid& grid) {
  return h2_distance(u, *problem.exact, grid);
}

QuadratureGrid interior_grid_for(const PdeProblem& problem, const ShallowNet* net,
                                 int nodes_per_axis, int panels_per_axis) {
  const Hypercube cube(problem.dim);
  if (net) {
    if (auto breaks = net->axis_kink_coordinates()) {
      return tensor_quadrature_with_breaks(cube, nodes_per_axis, *breaks, Region::interior,
                                           panels_per_axis);
    }
  }
  return tensor_quadrature(cube, nodes_per_axis, Region::interior, panels_per_axis);
}

SandwichReport sandwich_check(const Field& u, const PdeProblem& problem,
                              const QuadratureGrid& grid) {
  SandwichReport rep;
  const double h1 = h1_distance(u, *problem.exact, grid);
  rep.h1_sq = h1 * h1;
  switch (problem.family) {
    case ProblemFamily::poisson:
      rep.excess = energy_excess(u, problem, grid, nullptr, LossKind::drm_poisson);
      rep.lower = rep.excess;
      rep.upper = std::numeric_limits<double>::infinity();
      break;
    case ProblemFamily::schrodinger:
      rep.excess = energy_excess(u, problem, grid, nullptr, LossKind::drm_schrodinger);
      rep.lower = rep.excess / std::max(1.0, problem.v_max);
      rep.upper = rep.excess / std::min(1.0, problem.v_min);
      break;
    case ProblemFamily::elliptic_dirichlet:
      throw std::invalid_argument("sandwich_check: only DRM families have energy sandwiches");
  }
  rep.slack_lower = rep.h1_sq - rep.lower;
  rep.slack_upper = rep.upper - rep.h1_sq;
  return rep;
}

RademacherEstimate empirical_rademacher(const std::vector<Eigen::MatrixXd>& task_values,
                                        int sign_draws, std::uint64_t seed) {
  if (task_values.empty()) throw std::invalid_argument("empirical_rademacher: no tasks");
  if (sign_draws < 100)
    throw std::invalid_argument("empirical_rademacher: sign_draws >= 100 required");
  const int T = static_cast<int>(task_values.size());
  const Eigen::Index C = task_values[0].rows();
  for (const auto& m : task_values)
    if (m.rows() != C) throw std::invalid_argument("empirical_rademacher: ragged class");
  if (C < 1) throw std::invalid_argument("empirical_rademacher: empty class");

  Rng rng(seed);
  std::vector<double> sups(sign_draws);
  Eigen::VectorXd acc(C);
  for (int draw = 0; draw < sign_draws; ++draw) {
    acc.setZero();
    for (int t = 0; t < T; ++t) {
      const Eigen::Index n_t = task_values[t].cols();
      Eigen::VectorXd signs(n_t);
      for (Eigen::Index i = 0; i < n_t; ++i) signs[i] = rng.sign();
      acc += task_values[t] * signs / (static_cast<double>(n_t) * T);
    }
    sups[draw] = acc.maxCoeff();
  }
  RademacherEstimate out;
  out.estimate = mean(sups);
  out.std_error = sample_std(sups) / std::sqrt(static_cast<double>(sign_draws));
  out.sign_draws = sign_draws;
  return out;
}

double rademacher_exact_enumeration(const std::vector<Eigen::MatrixXd>& task_values) {
  const int T = static_cast<int>(task_values.size());
  Eigen::Index total = 0;
  for (const auto& m : task_values) total += m.cols();
  if (total > 24)
    throw std::invalid_argument("rademacher_exact_enumeration: too many sign variables");
  const Eigen::Index C = task_values[0].rows();

  const std::uint64_t patterns = 1ull << total;
  std::vector<double> sups(patterns);
  Eigen::VectorXd acc(C);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    acc.setZero();
    Eigen::Index bit = 0;
    for (int t = 0; t < T; ++t) {
      const Eigen::Index n_t = task_values[t].cols();
      for (Eigen::Index i = 0; i < n_t; ++i, ++bit) {
        const double sign = (mask >> bit) & 1ull ? -1.0 : 1.0;
        acc += sign / (static_cast<double>(n_t) * T) * task_values[t].col(i);
      }
    }
    sups[mask] = acc.maxCoeff();
  }
  return mean(sups);
}

Eigen::MatrixXd field_values_matrix(const std::vector<const Field*>& fields,
                                    const SampleBatch& batch) {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(fields.size()), batch.size());
  for (std::size_t c = 0; c < fields.size(); ++c)
    for (Eigen::Index i = 0; i < batch.size(); ++i)
      values(static_cast<Eigen::Index>(c), i) = fields[c]->value(batch.points.row(i));
  return values;
}

namespace {

struct TaskMoments {
  std::vector<double> means;      // per class member
  std::vector<double> variances;  // per class member
};

TaskMoments task_moments(const MultiTaskClass& cls, int task, int nodes, int panels) {
  const Hypercube cube(cls.task_dims[task]);
  const QuadratureGrid grid = tensor_quadrature(cube, nodes, Region::interior, panels);
  TaskMoments out;
  out.means.resize(cls.size());
  out.variances.resize(cls.size());
  for (int c = 0; c < cls.size(); ++c) {
    const auto& f = cls.members[c][task];
    double m1 = 0.0, m2 = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const Eigen::VectorXd x = grid.nodes.row(i);
      const double v = f(x);
      if (std::fabs(v) > cls.range_bound * (1.0 + 1e-9))
        throw std::invalid_argument("concentration_audit: class member exceeds range bound");
      m1 += grid.weights[i] * v;
      m2 += grid.weights[i] * v * v;
    }
    out.means[c] = m1;
    out.variances[c] = std::max(m2 - m1 * m1, 0.0);
  }
  return out;
}

}  // namespace

ConcentrationAudit concentration_audit(const MultiTaskClass& cls, Eigen::Index n, double x,
                                       int trials, std::uint64_t seed, int rademacher_outer) {
  if (cls.size() < 1 || cls.tasks() < 1)
    throw std::invalid_argument("concentration_audit: empty class");
  for (const auto& member : cls.members)
    if (static_cast<int>(member.size()) != cls.tasks())
      throw std::invalid_argument("concentration_audit: member task count mismatch");
  if (n < 1 || trials < 1 || !(x > 0.0))
    throw std::invalid_argument("concentration_audit: bad n, trials, or x");

  const int T = cls.tasks();
  const int C = cls.size();

  // Population moments (quadrature oracle) and the variance proxy
  // r = sup_c (1/T) sum_t Var(f_{c,t}).
  std::vector<TaskMoments> moments;
  moments.reserve(T);
  for (int t = 0; t < T; ++t) moments.push_back(task_moments(cls, t, 6, 48));
  double r = 0.0;
  for (int c = 0; c < C; ++c) {
    double sum_var = 0.0;
    for (int t = 0; t < T; ++t) sum_var += moments[t].variances[c];
    r = std::max(r, sum_var / T);
  }

  Rng rng(seed);

  auto draw_task_points = [&](Rng& r_local, int task, Eigen::MatrixXd& pts) {
    const int d = cls.task_dims[task];
    pts.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) pts(i, j) = r_local.uniform01();
  };

  // Rademacher complexity over both the sample and the signs.
  std::vector<double> rad_sups(rademacher_outer);
  {
    Rng rad_rng = rng.split(1);
    Eigen::MatrixXd pts;
    Eigen::VectorXd acc(C);
    for (int outer = 0; outer < rademacher_outer; ++outer) {
      acc.setZero();
      for (int t = 0; t < T; ++t) {
        draw_task_points(rad_rng, t, pts);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double sign = rad_rng.sign();
          const Eigen::VectorXd xi = pts.row(i);
          for (int c = 0; c < C; ++c)
            acc[c] += sign * cls.members[c][t](xi) / (static_cast<double>(n) * T);
        }
      }
      rad_sups[outer] = acc.maxCoeff();
    }
  }

  ConcentrationAudit audit;
  audit.class_size = C;
  audit.tasks = T;
  audit.n = n;
  audit.x = x;
  audit.trials = trials;
  audit.range_bound = cls.range_bound;
  audit.variance_proxy = r;
  audit.rademacher_estimate = mean(rad_sups);
  audit.rademacher_stderr =
      sample_std(rad_sups) / std::sqrt(static_cast<double>(rademacher_outer));

  const double nT = static_cast<double>(n) * T;
  const double rad_upper = audit.rademacher_estimate + 3.0 * audit.rademacher_stderr;
  audit.bound_value = 4.0 * rad_upper + 2.0 * std::sqrt(x * r / nT) +
                      5.0 * cls.range_bound * x / nT;

  Rng trial_rng = rng.split(2);
  int violations = 0;
  Eigen::MatrixXd pts;
  for (int trial = 0; trial < trials; ++trial) {
    double sup_gap = -std::numeric_limits<double>::infinity();
    std::vector<double> emp(C, 0.0);
    for (int t = 0; t < T; ++t) {
      draw_task_points(trial_rng, t, pts);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd xi = pts.row(i);
        for (int c = 0; c < C; ++c) emp[c] += cls.members[c][t](xi) / (static_cast<double>(n) * T);
      }
    }
    for (int c = 0; c < C; ++c) {
      double pf = 0.0;
      for (int t = 0; t < T; ++t) pf += moments[t].means[c] / T;
      sup_gap = std::max(sup_gap, pf - emp[c]);
    }
    if (sup_gap > audit.bound_value) ++violations;
  }
  audit.violation_rate = static_cast<double>(violations) / trials;
  return audit;
}

std::string ConcentrationAudit::csv_header() {
  return "class_size,tasks,n,x,trials,violation_rate,target_rate,rademacher_estimate,"
         "rademacher_stderr,variance_proxy,range_bound,bound_value\n";
}

std::string ConcentrationAudit::csv_row() const {
  char buf[360];
  std::snprintf(buf, sizeof(buf),
                "%d,%d,%lld,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", class_size,
                tasks, static_cast<long long>(n), x, trials, violation_rate, std::exp(-x),
                rademacher_estimate, rademacher_stderr, variance_proxy, range_bound, bound_value);
  return buf;
}

std::string ConcentrationAudit::to_json() const {
  nlohmann::json j;
  j["class_size"] = class_size;
  j["tasks"] = tasks;
  j["n"] = n;
  j["x"] = x;
  j["trials"] = trials;
  j["violation_rate"] = violation_rate;
  j["target_rate"] = std::exp(-x);
  j["rademacher_estimate"] = rademacher_estimate;
  j["rademacher_stderr"] = rademacher_stderr;
  j["variance_proxy"] = variance_proxy;
  j["range_bound"] = range_bound;
  j["bound_value"] = bound_value;
  return j.dump(2);
}

int empirical_covering(const std::vector<ShallowNet>& class_sample, const SampleBatch& batch,
                       double epsilon) {
  if (class_sample.empty()) throw std::invalid_argument("empirical_covering: empty sample");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("empirical_covering: epsilon >= 0 required");
  const int s = static_cast<int>(class_sample.size());
  const Eigen::Index n = batch.size();
  Eigen::MatrixXd values(s, n);
  for (int c = 0; c < s; ++c)
    for (Eigen::Index i = 0; i < n; ++i)
      values(c, i) = class_sample[c].value(batch.points.row(i));

  auto dist = [&](int i, int j) {
    return std::sqrt((values.row(i) - values.row(j)).squaredNorm() / static_cast<double>(n));
  };

  std::vector<double> nearest(s);
  for (int i = 0; i < s; ++i) nearest[i] = dist(i, 0);
  int count = 1;
  for (;;) {
    int far = 0;
    for (int i = 1; i < s; ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (nearest[far] <= epsilon) break;
    ++count;
    for (int i = 0; i < s; ++i) nearest[i] = std::min(nearest[i], dist(i, far));
  }
  return count;
}

namespace {

void run_cells_parallel(int total, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 1) {
    for (int i = 0; i < total; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  const int count = std::min(jobs, total);
  workers.reserve(count);
  for (int w = 0; w < count; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= total) return;
        work(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace

RateReport rate_sweep(LossKind kind, const PdeProblem& problem,
                      const std::vector<Eigen::Index>& n_grid, int repeats,
                      const TrainConfig& base_config, std::uint64_t master_seed, int jobs) {
  if (n_grid.size() < 2) throw std::invalid_argument("rate_sweep: need >= 2 sample sizes");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("rate_sweep: n_grid must be strictly increasing");
  if (repeats < 3) throw std::invalid_argument("rate_sweep: repeats >= 3 required");

  // width, budget, and seed of the template are overwritten per cell
  const double budget = problem.exact->declared_barron2();
  const int n_count = static_cast<int>(n_grid.size());
  const int total = n_count * repeats;
  RateReport report;
  report.n_grid = n_grid;
  report.cells.resize(total);
  report.reference_exponent =
      -(3.0 * problem.dim + 2.0) / (2.0 * (3.0 * problem.dim + 1.0));

  const Hypercube cube(problem.dim);
  run_cells_parallel(total, jobs, [&](int cell) {
    const int ni = cell / repeats;
    const int rep = cell % repeats;
    const Eigen::Index n = n_grid[ni];
    // Stream ids are derived from the cell coordinates, so cells are
    // independent and the report does not depend on the worker count.
    Rng cell_rng(master_seed, static_cast<std::uint64_t>(cell) + 1);
    const std::uint64_t batch_seed = cell_rng.next_u64();
    const std::uint64_t init_seed = cell_rng.next_u64();

    TrainConfig config = base_config;
    config.width = width_rule(n, problem.dim);
    config.budget = budget;
    config.seed = init_seed;

    const SampleBatch batch = sample_interior(cube, n, batch_seed);
    SampleBatch boundary;
    const SampleBatch* boundary_ptr = nullptr;
    if (kind == LossKind::pinn) {
      boundary = sample_boundary(cube, n, cell_rng.next_u64());
      boundary_ptr = &boundary;
    }
    const TrainReport trained = train_erm(kind, problem, batch, boundary_ptr, config);

    const QuadratureGrid grid = interior_grid_for(problem, &trained.final_net, 12, 16);
    QuadratureGrid bgrid;
    const QuadratureGrid* bgrid_ptr = nullptr;
    if (kind == LossKind::pinn) {
      bgrid = tensor_quadrature(cube, 12, Region::boundary, 16);
      bgrid_ptr = &bgrid;
    }
    RateCell& out = report.cells[cell];
    out.n = n;
    out.repeat = rep;
    out.seed = batch_seed;
    out.width = config.width;
    out.excess = energy_excess(trained.final_net, problem, grid, bgrid_ptr, kind);
    out.h1 = h1_error(trained.final_net, problem, grid);
  });

  std::vector<double> log_n(n_count), log_mean(n_count);
  report.mean_excess.resize(n_count);
  report.std_excess.resize(n_count);
  for (int ni = 0; ni < n_count; ++ni) {
    std::vector<double> vals(repeats);
    for (int rep = 0; rep < repeats; ++rep) vals[rep] = report.cells[ni * repeats + rep].excess;
    report.mean_excess[ni] = mean(vals);
    report.std_excess[ni] = sample_std(vals);
    log_n[ni] = std::log(static_cast<double>(n_grid[ni]));
    log_mean[ni] = std::log(std::max(report.mean_excess[ni], 1e-300));
  }
  report.fit = fit_line(log_n, log_mean);
  return report;
}

std::string RateReport::to_json() const {
  nlohmann::json j;
  j["n_grid"] = n_grid;
  j["mean_excess"] = mean_excess;
  j["std_excess"] = std_excess;
  j["fitted_slope"] = fit.slope;
  j["slope_stderr"] = fit.slope_stderr;
  j["p_slope_negative"] = fit.p_slope_negative;
  j["reference_exponent"] = reference_exponent;
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& c : cells) {
    cells_json.push_back({{"n", c.n},
                          {"repeat", c.repeat},
                          {"seed", c.seed},
                          {"width", c.width},
                          {"excess", c.excess},
                          {"h1_error", c.h1}});
  }
  j["cells"] = std::move(cells_json);
  return j.dump(2);
}

std::string RateReport::cells_csv() const {
  std::ostringstream out;
  out << "n,repeat,seed,width,excess,h1_error\n";
  char buf[160];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%llu,%d,%.17g,%.17g\n",
                  static_cast<long long>(c.n), c.repeat,
                  static_cast<unsigned long long>(c.seed), c.width, c.excess, c.h1);
    out << buf;
  }
  return out.str();
}

GapSlopeReport mc_gap_slope(const Field& u, const PdeProblem& problem, LossKind kind,
                            const std::vector<Eigen::Index>& n_grid, int repeats,
                            const QuadratureGrid& grid, std::uint64_t seed) {
  if (n_grid.size() < 3) throw std::invalid_argument("mc_gap_slope: need >= 3 sample sizes");
  if (repeats < 2) throw std::invalid_argument("mc_gap_slope: repeats >= 2 required");
  if (kind == LossKind::pinn)
    throw std::invalid_argument("mc_gap_slope: DRM kinds only");

  GapSlopeReport report;
  report.n_grid = n_grid;
  report.population_value = population_loss(kind, u, problem, grid);

  const Hypercube cube(problem.dim);
  Rng rng(seed);
  std::vector<double> log_n, log_gap;
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    std::vector<double> gaps(repeats);
    for (int rep = 0; rep < repeats; ++rep) {
      const SampleBatch batch = sample_interior(cube, n_grid[ni], rng.next_u64());
      const double emp = empirical_loss(kind, u, batch, nullptr, problem);
      gaps[rep] = std::fabs(emp - report.population_value);
    }
    report.mean_abs_gap.push_back(mean(gaps));
    log_n.push_back(std::log(static_cast<double>(n_grid[ni])));
    log_gap.push_back(std::log(std::max(report.mean_abs_gap.back(), 1e-300)));
  }
  report.fit = fit_line(log_n, log_gap);
  return report;
}

}  // namespace ritznet
