#include "ritznet/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "ritznet/analysis.hpp"
#include "ritznet/constructor.hpp"
#include "ritznet/rng.hpp"

namespace ritznet::cli {

namespace {

void validate_keys(const nlohmann::json& config, const std::set<std::string>& allowed,
                   const char* command) {
  if (!config.is_object()) throw ConfigError(std::string(command) + ": config must be an object");
  for (const auto& [key, _] : config.items()) {
    if (!allowed.count(key))
      throw ConfigError(std::string(command) + ": unknown config key '" + key + "'");
  }
}

template <typename T>
T get_or(const nlohmann::json& config, const std::string& key, T fallback) {
  if (!config.contains(key)) return fallback;
  try {
    return config.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

std::ofstream open_output(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Curve1D make_curve(const std::string& name) {
  if (name == "cos(z)") {
    return Curve1D([](double z) { return std::cos(z); }, [](double z) { return -std::sin(z); },
                   [](double z) { return -std::cos(z); }, 1.0);
  }
  if (name == "sin(2z)/4") {
    return Curve1D([](double z) { return std::sin(2.0 * z) / 4.0; },
                   [](double z) { return std::cos(2.0 * z) / 2.0; },
                   [](double z) { return -std::sin(2.0 * z); }, 1.0);
  }
  if (name == "z^3/6") {
    return Curve1D([](double z) { return z * z * z / 6.0; }, [](double z) { return z * z / 2.0; },
                   [](double z) { return z; }, 1.0);
  }
  throw ConfigError("approx-check: unknown curve '" + name + "'");
}

LossKind parse_loss(const std::string& name, const PdeProblem& problem) {
  if (name == "auto" || name.empty()) return default_loss_for(problem);
  if (name == "drm_poisson") return LossKind::drm_poisson;
  if (name == "drm_schrodinger") return LossKind::drm_schrodinger;
  if (name == "pinn") return LossKind::pinn;
  throw ConfigError("unknown loss kind '" + name + "'");
}

TrainConfig train_config_from(const nlohmann::json& config, const PdeProblem& problem,
                              LossKind kind, Eigen::Index n, std::uint64_t init_seed) {
  TrainConfig tc;
  tc.steps = get_or(config, "steps", 2000);
  const std::string opt = get_or<std::string>(config, "optimizer", "adam");
  if (opt == "adam") {
    tc.optimizer = Optimizer::adam;
  } else if (opt == "plain_gd") {
    tc.optimizer = Optimizer::plain_gd;
  } else {
    throw ConfigError("unknown optimizer '" + opt + "'");
  }
  tc.step_size = get_or(config, "step_size", 1e-2);
  const std::string sched = get_or<std::string>(config, "schedule", "cosine");
  if (sched == "cosine") {
    tc.schedule = StepSchedule::cosine;
  } else if (sched == "constant") {
    tc.schedule = StepSchedule::constant;
  } else {
    throw ConfigError("unknown schedule '" + sched + "'");
  }
  tc.project_every = get_or(config, "project_every", 1);
  tc.order = get_or(config, "order", kind == LossKind::pinn ? 2 : 1);
  tc.kink_smoothing = get_or(config, "kink_smoothing", 0.05);
  tc.restarts = get_or(config, "restarts", 1);
  tc.seed = init_seed;

  if (config.contains("width") && config.at("width").is_number()) {
    tc.width = config.at("width").get<int>();
  } else {
    const std::string mode = get_or<std::string>(config, "width", "auto");
    if (mode != "auto") throw ConfigError("width must be an integer or \"auto\"");
    tc.width = width_rule(n, problem.dim);
  }
  if (config.contains("budget") && config.at("budget").is_number()) {
    tc.budget = config.at("budget").get<double>();
  } else {
    const std::string mode = get_or<std::string>(config, "budget", "auto");
    if (mode != "auto") throw ConfigError("budget must be a number or \"auto\"");
    // Declared Barron bookkeeping bound of the exact solution. The
    // constructive 5x class also contains the solution but inflates the
    // initialization scale and trains measurably worse at desk scale.
    tc.budget = problem.exact->declared_barron2();
  }
  return tc;
}

/// Random feasible net whose unit directions are all +-e_j: its kinks are
/// axis-aligned, so kink-split tensor quadrature integrates the energy
/// integrands exactly. In d = 1 every feasible net has this form.
ShallowNet random_axis_net(int width, int dim, double budget, int order, Rng& rng) {
  Eigen::VectorXd gamma(width), biases(width);
  Eigen::MatrixXd dirs = Eigen::MatrixXd::Zero(width, dim);
  for (int i = 0; i < width; ++i) {
    dirs(i, static_cast<int>(rng.below(dim))) = rng.sign();
    biases[i] = rng.uniform(-1.0, 1.0);
    gamma[i] = rng.uniform(-budget / width, budget / width);
  }
  return ShallowNet(order, budget, std::move(gamma), std::move(dirs), std::move(biases));
}

/// Continuous piecewise-linear function on [0,1] with values in [0,1].
ScalarFn random_piecewise_linear(int segments, Rng& rng) {
  std::vector<double> values(segments + 1);
  for (auto& v : values) v = rng.uniform01();
  return [values, segments](const Eigen::VectorXd& x) {
    const double z = std::clamp(x[0], 0.0, 1.0);
    const double pos = z * segments;
    const int cell = std::min(static_cast<int>(pos), segments - 1);
    const double frac = pos - cell;
    return values[cell] * (1.0 - frac) + values[cell + 1] * frac;
  };
}

struct SuiteResult {
  std::string name;
  bool pass = true;
  nlohmann::json details = nlohmann::json::array();
  std::string csv;       // optional flat export
  std::string csv_name;  // file name when csv is nonempty
};

SuiteResult run_sandwich_suite(int nets, std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "sandwich";
  struct Case {
    PdeProblem problem;
    bool identity;  // V == 1: excess equals squared H1 distance
  };
  std::vector<Case> cases;
  cases.push_back({make_poisson(Eigen::VectorXi::Constant(1, 1)), false});
  {
    Eigen::VectorXi k(2);
    k << 1, 0;
    cases.push_back({make_poisson(k), false});
  }
  cases.push_back({make_schrodinger(Eigen::VectorXi::Constant(1, 1), 1.0), true});
  {
    Eigen::VectorXi k(2);
    k << 1, 1;
    cases.push_back({make_schrodinger(k, 1.0), true});
  }
  cases.push_back({make_schrodinger_sine(Eigen::VectorXi::Constant(1, 2)), false});

  Rng rng(seed);
  for (const auto& c : cases) {
    double worst_lower = 0.0, worst_identity = 0.0;
    bool pass = true;
    for (int trial = 0; trial < nets; ++trial) {
      const int width = 8 + static_cast<int>(rng.below(17));
      const double budget = rng.uniform(0.5, 4.0);
      const ShallowNet net = random_axis_net(width, c.problem.dim, budget, 1, rng);
      const QuadratureGrid grid = interior_grid_for(c.problem, &net, 12, 8);
      const SandwichReport rep = sandwich_check(net, c.problem, grid);
      const double tol = 1e-8 * (1.0 + rep.h1_sq);
      if (c.identity) {
        const double gap = std::fabs(rep.excess - rep.h1_sq);
        worst_identity = std::max(worst_identity, gap / (1.0 + rep.h1_sq));
        if (gap > tol) pass = false;
      }
      if (rep.slack_lower < -tol || rep.slack_upper < -tol) pass = false;
      worst_lower = std::min(worst_lower, rep.slack_lower);
    }
    suite.details.push_back({{"problem", c.problem.id},
                             {"nets", nets},
                             {"worst_lower_slack", worst_lower},
                             {"worst_identity_gap", worst_identity},
                             {"pass", pass}});
    suite.pass = suite.pass && pass;
  }
  return suite;
}

double fd_gradient_error(LossKind kind, const ShallowNet& net, const SampleBatch& interior,
                         const SampleBatch* boundary, const PdeProblem& problem, double step) {
  const ParamCotangent analytic = loss_gradient(kind, net, interior, boundary, problem);

  auto loss_at = [&](const ShallowNet& candidate) {
    return empirical_loss(kind, candidate, interior, boundary, problem);
  };
  ParamCotangent fd = ParamCotangent::zero(net.width(), net.dim());
  for (int i = 0; i < net.width(); ++i) {
    {
      ShallowNet plus = net, minus = net;
      plus.mutable_gamma()[i] += step;
      minus.mutable_gamma()[i] -= step;
      fd.d_gamma[i] = (loss_at(plus) - loss_at(minus)) / (2.0 * step);
    }
    {
      ShallowNet plus = net, minus = net;
      plus.mutable_biases()[i] += step;
      minus.mutable_biases()[i] -= step;
      fd.d_biases[i] = (loss_at(plus) - loss_at(minus)) / (2.0 * step);
    }
    for (int j = 0; j < net.dim(); ++j) {
      ShallowNet plus = net, minus = net;
      plus.mutable_directions()(i, j) += step;
      minus.mutable_directions()(i, j) -= step;
      fd.d_directions(i, j) = (loss_at(plus) - loss_at(minus)) / (2.0 * step);
    }
  }
  const double num = std::sqrt((analytic.d_gamma - fd.d_gamma).squaredNorm() +
                               (analytic.d_directions - fd.d_directions).squaredNorm() +
                               (analytic.d_biases - fd.d_biases).squaredNorm());
  const double den = std::sqrt(fd.d_gamma.squaredNorm() + fd.d_directions.squaredNorm() +
                               fd.d_biases.squaredNorm());
  return num / std::max(den, 1e-12);
}

SuiteResult run_gradient_suite(int pairs, std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "gradients";
  struct Case {
    LossKind kind;
    PdeProblem problem;
    int order;
  };
  std::vector<Case> cases;
  {
    Eigen::VectorXi k2(2);
    k2 << 1, 0;
    cases.push_back({LossKind::drm_poisson, make_poisson(k2), 1});
    cases.push_back({LossKind::drm_poisson, make_poisson(k2), 2});
    cases.push_back({LossKind::drm_schrodinger, make_schrodinger(k2, 1.5), 1});
    cases.push_back({LossKind::drm_schrodinger, make_schrodinger_sine(k2), 2});
    Eigen::VectorXi k1(2);
    k1 << 1, 1;
    cases.push_back({LossKind::pinn, make_elliptic(EllipticKind::variable_coeff, k1), 2});
  }

  Rng rng(seed);
  const Hypercube cube2(2);
  constexpr double kStep = 1e-5;
  for (const auto& c : cases) {
    // Order-1 losses are checked away from kink surfaces, where the
    // subgradient convention and finite differences agree; order-2 losses
    // keep a small margin so the FD stencil stays on one side of the jump in
    // the second derivative.
    const double clearance = c.order == 1 ? 1e-3 : 10 * kStep;
    double worst = 0.0;
    int used = 0;
    for (int attempt = 0; attempt < 50 * pairs && used < pairs; ++attempt) {
      ShallowNet net = init_network(6, 2, 2.0, c.order, rng.next_u64());
      SampleBatch interior = sample_interior(cube2, 24, rng.next_u64());
      SampleBatch boundary = sample_boundary(cube2, 16, rng.next_u64());
      bool clear = true;
      for (Eigen::Index i = 0; clear && i < interior.size(); ++i)
        clear = net.kink_distance(interior.points.row(i)) >= clearance;
      for (Eigen::Index i = 0; clear && i < boundary.size(); ++i)
        clear = net.kink_distance(boundary.points.row(i)) >= clearance;
      if (!clear) continue;
      ++used;
      const SampleBatch* bptr = c.kind == LossKind::pinn ? &boundary : nullptr;
      worst = std::max(worst, fd_gradient_error(c.kind, net, interior, bptr, c.problem, kStep));
    }
    const bool pass = worst <= 1e-4 && used == pairs;
    suite.details.push_back({{"kind", static_cast<int>(c.kind)},
                             {"order", c.order},
                             {"pairs_used", used},
                             {"worst_relative_error", worst},
                             {"pass", pass}});
    suite.pass = suite.pass && pass;
  }
  return suite;
}

SuiteResult run_rademacher_suite(std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "rademacher";
  Rng rng(seed);
  const Hypercube cube(1);
  const SampleBatch batch = sample_interior(cube, 10, rng.next_u64());

  const ShallowNet f = init_network(6, 1, 1.5, 1, rng.next_u64());
  ShallowNet neg = f;
  neg.mutable_gamma() *= -1.0;
  const ShallowNet g = init_network(4, 1, 1.0, 1, rng.next_u64());
  const std::vector<const Field*> fields{&f, &neg, &g};

  const Eigen::MatrixXd values = field_values_matrix(fields, batch);
  const double exact = rademacher_exact_enumeration({values});
  const RademacherEstimate mc = empirical_rademacher({values}, 4000, rng.next_u64());
  const double gap = std::fabs(mc.estimate - exact);
  const bool pass = gap <= 3.0 * mc.std_error;
  suite.details.push_back({{"exact", exact},
                           {"estimate", mc.estimate},
                           {"stderr", mc.std_error},
                           {"gap", gap},
                           {"pass", pass}});
  suite.pass = pass;
  return suite;
}

SuiteResult run_concentration_suite(int trials, std::uint64_t seed) {
  SuiteResult suite;
  suite.name = "concentration";
  Rng rng(seed);
  MultiTaskClass cls;
  cls.task_dims = {1, 1};
  cls.range_bound = 1.0;
  for (int c = 0; c < 8; ++c)
    cls.members.push_back({random_piecewise_linear(4, rng), random_piecewise_linear(4, rng)});

  double previous_rate = 1.0;
  suite.csv = ConcentrationAudit::csv_header();
  suite.csv_name = "verify_concentration.csv";
  for (double x : {1.0, 2.0, 3.0}) {
    const ConcentrationAudit audit =
        concentration_audit(cls, 200, x, trials, rng.next_u64(), 200);
    const bool pass =
        audit.violation_rate <= std::exp(-x) && audit.violation_rate <= previous_rate;
    previous_rate = audit.violation_rate;
    suite.csv += audit.csv_row();
    suite.details.push_back({{"x", x},
                             {"violation_rate", audit.violation_rate},
                             {"target_rate", std::exp(-x)},
                             {"bound_value", audit.bound_value},
                             {"pass", pass}});
    suite.pass = suite.pass && pass;
  }
  return suite;
}

}  // namespace

nlohmann::json parse_config_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries the line/column diagnostic.
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_override(nlohmann::json& config, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key=value, got '" + key_value + "'");
  const std::string path = key_value.substr(0, eq);
  const std::string raw = key_value.substr(eq + 1);

  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;  // plain string
  }

  nlohmann::json* node = &config;
  std::stringstream keys(path);
  std::string key, next;
  std::getline(keys, key, '.');
  while (std::getline(keys, next, '.')) {
    node = &(*node)[key];
    key = next;
  }
  (*node)[key] = std::move(value);
}

int run_approx_check(nlohmann::json config, const std::string& out_dir) {
  validate_keys(config, {"curves", "m_values", "nodes", "seed", "jobs"}, "approx-check");
  const std::vector<std::string> default_curves{"cos(z)", "sin(2z)/4", "z^3/6"};
  const auto curves = get_or(config, "curves", default_curves);
  const auto m_values = get_or(config, "m_values", std::vector<int>{4, 8, 16, 32, 64});
  const int nodes = get_or(config, "nodes", 2048);
  if (curves.empty() || m_values.empty())
    throw ConfigError("approx-check: empty corpus");

  std::ostringstream csv;
  csv << "curve,m,bound,measured,pass\n";
  bool all_pass = true;
  for (const auto& name : curves) {
    const Curve1D curve = make_curve(name);
    for (int m : m_values) {
      const ShallowNet net = relu_interpolant(curve, m);
      const double bound = relu_interpolant_h1_bound(curve.sup_bound, m);
      const double measured = h1_error_1d(net, curve, nodes);
      const bool pass = measured <= bound;
      all_pass = all_pass && pass;
      csv << name << ',' << m << ',' << fmt17(bound) << ',' << fmt17(measured) << ','
          << (pass ? 1 : 0) << '\n';
    }
  }
  open_output(out_dir, "approx_check.csv") << csv.str();
  return all_pass ? kExitSuccess : kExitFailure;
}

int run_train(nlohmann::json config, const std::string& out_dir) {
  validate_keys(config,
                {"problem", "loss", "n", "n_boundary", "width", "budget", "order", "steps",
                 "optimizer", "step_size", "schedule", "project_every", "kink_smoothing",
                 "restarts", "seed", "jobs"},
                "train");
  if (!config.contains("problem")) throw ConfigError("train: missing 'problem'");
  PdeProblem problem;
  try {
    problem = parse_problem(config.at("problem").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const LossKind kind = parse_loss(get_or<std::string>(config, "loss", "auto"), problem);
  const Eigen::Index n = get_or<Eigen::Index>(config, "n", 1024);
  const Eigen::Index n_boundary = get_or<Eigen::Index>(config, "n_boundary", n);
  const std::uint64_t seed = get_or<std::uint64_t>(config, "seed", 0);

  Rng rng(seed);
  const std::uint64_t batch_seed = rng.next_u64();
  const std::uint64_t init_seed = rng.next_u64();
  const TrainConfig tc = train_config_from(config, problem, kind, n, init_seed);

  const Hypercube cube(problem.dim);
  const SampleBatch interior = sample_interior(cube, n, batch_seed);
  SampleBatch boundary;
  const SampleBatch* bptr = nullptr;
  if (kind == LossKind::pinn) {
    boundary = sample_boundary(cube, n_boundary, rng.next_u64());
    bptr = &boundary;
  }

  const TrainReport report = train_erm(kind, problem, interior, bptr, tc);

  const QuadratureGrid grid = interior_grid_for(problem, &report.final_net, 12, 16);
  const QuadratureGrid star_grid = interior_grid_for(problem, nullptr, 12, 16);
  const double h1 = h1_error(report.final_net, problem, grid);
  const double h1_star = h1_distance(*problem.exact,
                                     CallableField([](const Eigen::VectorXd&) { return 0.0; },
                                                   [&problem](const Eigen::VectorXd&) {
                                                     return Eigen::VectorXd::Zero(problem.dim);
                                                   }),
                                     star_grid);

  nlohmann::json out = nlohmann::json::parse(report.to_json());
  out["problem"] = problem.id;
  out["h1_error"] = h1;
  out["h1_norm_exact"] = h1_star;
  out["relative_h1_error"] = h1_star > 0 ? h1 / h1_star : h1;
  open_output(out_dir, "train_report.json") << out.dump(2) << '\n';
  open_output(out_dir, "train_trace.csv") << report.trace_csv();
  return kExitSuccess;
}

int run_rate_sweep(nlohmann::json config, const std::string& out_dir) {
  validate_keys(config,
                {"problem", "loss", "n_grid", "repeats", "steps", "optimizer", "step_size",
                 "schedule", "project_every", "kink_smoothing", "restarts", "seed", "jobs"},
                "rate-sweep");
  if (!config.contains("problem")) throw ConfigError("rate-sweep: missing 'problem'");
  PdeProblem problem;
  try {
    problem = parse_problem(config.at("problem").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const LossKind kind = parse_loss(get_or<std::string>(config, "loss", "auto"), problem);
  const auto n_values = get_or(config, "n_grid", std::vector<long long>{256, 1024, 4096});
  std::vector<Eigen::Index> n_grid(n_values.begin(), n_values.end());
  const int repeats = get_or(config, "repeats", 5);
  const std::uint64_t seed = get_or<std::uint64_t>(config, "seed", 0);
  const int jobs = get_or(config, "jobs", 0);

  TrainConfig base = train_config_from(config, problem, kind, n_grid.front(), 0);
  const int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());

  RateReport report;
  try {
    report = rate_sweep(kind, problem, n_grid, repeats, base, seed, std::max(1, workers));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json out = nlohmann::json::parse(report.to_json());
  out["problem"] = problem.id;
  open_output(out_dir, "rate_report.json") << out.dump(2) << '\n';
  open_output(out_dir, "rate_cells.csv") << report.cells_csv();
  return kExitSuccess;
}

int run_verify(nlohmann::json config, const std::string& out_dir) {
  validate_keys(config, {"suites", "nets", "pairs", "trials", "seed", "jobs"}, "verify");
  const std::vector<std::string> default_suites{"sandwich", "gradients", "rademacher",
                                                "concentration"};
  const auto suites = get_or(config, "suites", default_suites);
  const int nets = get_or(config, "nets", 50);
  const int pairs = get_or(config, "pairs", 50);
  const int trials = get_or(config, "trials", 2000);
  const std::uint64_t seed = get_or<std::uint64_t>(config, "seed", 0);

  Rng rng(seed);
  std::vector<SuiteResult> results;
  for (const auto& name : suites) {
    if (name == "sandwich") {
      results.push_back(run_sandwich_suite(nets, rng.next_u64()));
    } else if (name == "gradients") {
      results.push_back(run_gradient_suite(pairs, rng.next_u64()));
    } else if (name == "rademacher") {
      results.push_back(run_rademacher_suite(rng.next_u64()));
    } else if (name == "concentration") {
      results.push_back(run_concentration_suite(trials, rng.next_u64()));
    } else {
      throw ConfigError("verify: unknown suite '" + name + "'");
    }
  }

  bool all_pass = true;
  nlohmann::json out;
  out["suites"] = nlohmann::json::array();
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    out["suites"].push_back({{"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    if (!r.csv.empty()) open_output(out_dir, r.csv_name) << r.csv;
  }
  out["pass"] = all_pass;
  open_output(out_dir, "verify_report.json") << out.dump(2) << '\n';
  return all_pass ? kExitSuccess : kExitFailure;
}

}  // namespace ritznet::cli
