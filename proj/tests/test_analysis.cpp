#include <doctest.h>

#include <cmath>
#include <vector>

#include "ritznet/analysis.hpp"
#include "ritznet/rng.hpp"

using namespace ritznet;

namespace {

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

CallableField shifted(const std::shared_ptr<const CosineSolution>& base, double c) {
  return CallableField([base, c](const Eigen::VectorXd& x) { return base->value(x) + c; },
                       [base](const Eigen::VectorXd& x) { return base->gradient(x); },
                       [base](const Eigen::VectorXd& x) { return base->hessian(x); });
}

}  // namespace

TEST_CASE("h1 error: zero at the solution, |c| for constant shifts") {
  const PdeProblem p = make_poisson(Eigen::VectorXi::Constant(2, 1));
  const QuadratureGrid grid = tensor_quadrature(Hypercube(2), 12);
  CHECK(h1_error(*p.exact, p, grid) == doctest::Approx(0.0));
  CHECK(h1_error(shifted(p.exact, 0.37), p, grid) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("h1 error agrees with an independent doubled-resolution quadrature") {
  const PdeProblem p = make_poisson(Eigen::VectorXi::Constant(1, 2));
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ShallowNet net = random_axis_net(10, 1, 2.0, 1, rng);
    const QuadratureGrid coarse = interior_grid_for(p, &net, 10, 8);
    const QuadratureGrid fine = interior_grid_for(p, &net, 20, 16);
    CHECK(h1_error(net, p, coarse) == doctest::Approx(h1_error(net, p, fine)).epsilon(1e-8));
  }
}

TEST_CASE("h1 distance is symmetric and satisfies the triangle inequality") {
  const QuadratureGrid grid = tensor_quadrature(Hypercube(2), 12);
  Eigen::VectorXi ka(2), kb(2), kc(2);
  ka << 1, 0;
  kb << 1, 1;
  kc << 2, 1;
  const CosineSolution a(ka, 1.0), b(kb, 0.7), c(kc, 0.4);
  const double ab = h1_distance(a, b, grid);
  const double ba = h1_distance(b, a, grid);
  const double bc = h1_distance(b, c, grid);
  const double ac = h1_distance(a, c, grid);
  CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
  CHECK(ac <= ab + bc + 1e-10);
}

TEST_CASE("h2 error: quadratic difference has a closed-form norm") {
  // u - u* = x^2 in one dimension: integral of x^4 + 4x^2 + 4 = 1/5+4/3+4.
  const PdeProblem p = make_poisson(Eigen::VectorXi::Constant(1, 1));
  const auto base = p.exact;
  const CallableField u(
      [base](const Eigen::VectorXd& x) { return base->value(x) + x[0] * x[0]; },
      [base](const Eigen::VectorXd& x) {
        Eigen::VectorXd g = base->gradient(x);
        g[0] += 2.0 * x[0];
        return g;
      },
      [base](const Eigen::VectorXd& x) {
        Eigen::MatrixXd h = base->hessian(x);
        h(0, 0) += 2.0;
        return h;
      });
  const QuadratureGrid grid = tensor_quadrature(Hypercube(1), 12);
  CHECK(h2_error(u, p, grid) ==
        doctest::Approx(std::sqrt(1.0 / 5 + 4.0 / 3 + 4.0)).epsilon(1e-12));
  CHECK(h2_error(*p.exact, p, grid) == doctest::Approx(0.0));
  CHECK(h2_error(shifted(p.exact, -0.5), p, grid) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sandwich checks hold for random feasible nets in every family") {
  Rng rng(5);
  Eigen::VectorXi k2(2);
  k2 << 1, 1;
  const std::vector<PdeProblem> problems{
      make_poisson(Eigen::VectorXi::Constant(1, 1)), make_poisson(k2),
      make_schrodinger(Eigen::VectorXi::Constant(1, 1), 1.0), make_schrodinger(k2, 1.0),
      make_schrodinger_sine(Eigen::VectorXi::Constant(1, 2))};
  for (const auto& p : problems) {
    CAPTURE(p.id);
    for (int trial = 0; trial < 50; ++trial) {
      const ShallowNet net = random_axis_net(10, p.dim, 2.5, 1, rng);
      const QuadratureGrid grid = interior_grid_for(p, &net, 12, 8);
      const SandwichReport rep = sandwich_check(net, p, grid);
      const double tol = 1e-8 * (1.0 + rep.h1_sq);
      CHECK(rep.holds(tol));
      if (p.family == ProblemFamily::schrodinger && p.v_min == 1.0 && p.v_max == 1.0) {
        CHECK(std::fabs(rep.excess - rep.h1_sq) <= tol);
      }
    }
  }
  // exact solution: all slacks vanish
  const PdeProblem p = make_schrodinger(Eigen::VectorXi::Constant(1, 1), 1.0);
  const QuadratureGrid grid = tensor_quadrature(Hypercube(1), 12);
  const SandwichReport rep = sandwich_check(*p.exact, p, grid);
  CHECK(std::fabs(rep.excess) < 1e-12);
  CHECK(std::fabs(rep.h1_sq) < 1e-12);
}

TEST_CASE("empirical Rademacher: singleton, sign-reflected pair, scaling") {
  Rng rng(7);
  const Hypercube cube(1);
  const SampleBatch batch = sample_interior(cube, 10, rng.next_u64());
  const ShallowNet f = init_network(5, 1, 1.5, 1, rng.next_u64());
  ShallowNet neg = f;
  neg.mutable_gamma() *= -1.0;

  // singleton class: the sup is linear in the signs, so the mean is zero
  const Eigen::MatrixXd single = field_values_matrix({&f}, batch);
  const RademacherEstimate est_single = empirical_rademacher({single}, 2000, 11);
  CHECK(std::fabs(est_single.estimate) <= 3.0 * est_single.std_error + 1e-12);

  // {f, -f}: estimate matches exhaustive enumeration over 2^10 patterns
  const Eigen::MatrixXd pair = field_values_matrix({&f, &neg}, batch);
  const double exact = rademacher_exact_enumeration({pair});
  const RademacherEstimate est_pair = empirical_rademacher({pair}, 4000, 13);
  CHECK(std::fabs(est_pair.estimate - exact) <= 3.0 * est_pair.std_error);
  CHECK(exact >= 0.0);

  // positive homogeneity with paired draws: same seed, scaled values
  const double lambda = 2.75;
  const RademacherEstimate est_scaled = empirical_rademacher({lambda * pair}, 4000, 13);
  CHECK(est_scaled.estimate == doctest::Approx(lambda * est_pair.estimate).epsilon(1e-12));
}

TEST_CASE("multi-task Rademacher reduces to averaged single tasks for shared signs") {
  // two tasks, exact enumeration with small n
  Rng rng(17);
  const Hypercube cube(1);
  const SampleBatch b1 = sample_interior(cube, 4, rng.next_u64());
  const SampleBatch b2 = sample_interior(cube, 5, rng.next_u64());
  const ShallowNet f = init_network(4, 1, 1.0, 1, rng.next_u64());
  const ShallowNet g = init_network(4, 1, 1.0, 1, rng.next_u64());
  const Eigen::MatrixXd v1 = field_values_matrix({&f, &g}, b1);
  const Eigen::MatrixXd v2 = field_values_matrix({&f, &g}, b2);
  const double exact = rademacher_exact_enumeration({v1, v2});
  const RademacherEstimate est = empirical_rademacher({v1, v2}, 6000, rng.next_u64());
  CHECK(std::fabs(est.estimate - exact) <= 3.0 * est.std_error);
}

TEST_CASE("empirical covering: degenerate radii and growth in width") {
  Rng rng(19);
  const Hypercube cube(2);
  const SampleBatch batch = sample_interior(cube, 128, rng.next_u64());

  std::vector<ShallowNet> sample;
  for (int i = 0; i < 64; ++i) sample.push_back(init_network(4, 2, 1.0, 1, rng.next_u64()));

  // radius at least the diameter: one ball suffices
  CHECK(empirical_covering(sample, batch, 1e9) == 1);
  // radius zero: all (distinct) nets are their own centers
  CHECK(empirical_covering(sample, batch, 0.0) == 64);

  // Log covering grows with width at fixed radius. The sample shares one
  // atom dictionary per width and varies coefficients on the l1 sphere:
  // the coefficient entropy is the part of the class that grows with m
  // (i.i.d. parameter draws dilute each unit by B/m and concentrate instead).
  auto covering_at = [&](int m, std::uint64_t seed) {
    Rng local(seed);
    Eigen::MatrixXd dirs(m, 2);
    Eigen::VectorXd biases(m);
    for (int i = 0; i < m; ++i) {
      double total = 0.0;
      for (int j = 0; j < 2; ++j) {
        dirs(i, j) = local.exponential();
        total += dirs(i, j);
      }
      for (int j = 0; j < 2; ++j) dirs(i, j) = local.sign() * dirs(i, j) / total;
      biases[i] = local.uniform(-1.0, 1.0);
    }
    std::vector<ShallowNet> nets;
    for (int c = 0; c < 256; ++c) {
      Eigen::VectorXd gamma(m);
      double total = 0.0;
      for (int i = 0; i < m; ++i) {
        gamma[i] = local.exponential();
        total += gamma[i];
      }
      for (int i = 0; i < m; ++i) gamma[i] = local.sign() * gamma[i] / total;
      nets.emplace_back(1, 1.0, gamma, dirs, biases);
    }
    return empirical_covering(nets, batch, 0.05);
  };
  const int c2 = covering_at(2, 100);
  const int c8 = covering_at(8, 300);
  CHECK(c8 > c2);
  CHECK(c2 >= 2);
}

TEST_CASE("concentration audit: constant class never violates, x is monotone") {
  MultiTaskClass constants;
  constants.task_dims = {1, 1};
  constants.range_bound = 1.0;
  for (int c = 0; c < 4; ++c) {
    const double v = 0.2 * c;
    constants.members.push_back(
        {[v](const Eigen::VectorXd&) { return v; }, [v](const Eigen::VectorXd&) { return v; }});
  }
  const ConcentrationAudit audit = concentration_audit(constants, 50, 1.0, 200, 7, 100);
  CHECK(audit.violation_rate == 0.0);
  CHECK(audit.variance_proxy == doctest::Approx(0.0));

  Rng rng(23);
  MultiTaskClass cls;
  cls.task_dims = {1, 1};
  cls.range_bound = 1.0;
  for (int c = 0; c < 8; ++c) {
    auto make = [&rng]() {
      std::vector<double> vals(5);
      for (auto& v : vals) v = rng.uniform01();
      return ScalarFn([vals](const Eigen::VectorXd& x) {
        const double z = std::clamp(x[0], 0.0, 1.0) * 4.0;
        const int cell = std::min(static_cast<int>(z), 3);
        const double frac = z - cell;
        return vals[cell] * (1 - frac) + vals[cell + 1] * frac;
      });
    };
    cls.members.push_back({make(), make()});
  }
  double prev = 1.0;
  for (double x : {1.0, 2.0}) {
    const ConcentrationAudit a = concentration_audit(cls, 100, x, 400, 29, 120);
    CHECK(a.violation_rate <= std::exp(-x));
    CHECK(a.violation_rate <= prev);
    prev = a.violation_rate;
  }

  MultiTaskClass out_of_range = constants;
  out_of_range.range_bound = 0.1;
  CHECK_THROWS_AS(concentration_audit(out_of_range, 50, 1.0, 10, 1, 100),
                  std::invalid_argument);
}

TEST_CASE("rate sweep: deterministic, populated, with the d=1 reference exponent") {
  const PdeProblem p = make_poisson(Eigen::VectorXi::Constant(1, 1));
  TrainConfig base;
  base.steps = 120;
  base.step_size = 2e-2;
  const std::vector<Eigen::Index> n_grid{64, 128, 256};
  const RateReport a = rate_sweep(LossKind::drm_poisson, p, n_grid, 3, base, 42, 2);
  const RateReport b = rate_sweep(LossKind::drm_poisson, p, n_grid, 3, base, 42, 1);
  CHECK(a.reference_exponent == doctest::Approx(-5.0 / 8.0));
  CHECK(a.cells.size() == 9);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].excess == b.cells[i].excess);  // worker count must not matter
    CHECK(a.cells[i].excess >= -1e-9);
  }
  CHECK(a.mean_excess.size() == 3);
  CHECK(a.cells_csv().rfind("n,repeat,seed,width,excess,h1_error\n", 0) == 0);

  CHECK_THROWS_AS(rate_sweep(LossKind::drm_poisson, p, {64}, 3, base, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(rate_sweep(LossKind::drm_poisson, p, {64, 32}, 3, base, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo gap: zero-variance fields have zero gap, noise decays") {
  // synthetic problem with f = 0 and zero exact solution data paths unused
  PdeProblem synthetic = make_schrodinger(Eigen::VectorXi::Constant(1, 1), 1.0);
  synthetic.f = [](const Eigen::VectorXd&) { return 0.0; };
  Rng rng(31);
  ShallowNet zero_net = init_network(4, 1, 1.0, 1, rng.next_u64());
  zero_net.mutable_gamma().setZero();
  const QuadratureGrid grid = tensor_quadrature(Hypercube(1), 12);
  // every empirical realization is exactly zero, as is the population loss
  const GapSlopeReport zero_rep =
      mc_gap_slope(zero_net, synthetic, LossKind::drm_schrodinger, {16, 32, 64}, 5, grid, 3);
  for (double g : zero_rep.mean_abs_gap) CHECK(g == 0.0);
  CHECK(zero_rep.population_value == 0.0);

  // a fixed generic field: gap shrinks with n
  const PdeProblem p = make_schrodinger(Eigen::VectorXi::Constant(1, 1), 1.0);
  const ShallowNet u = init_network(8, 1, 2.0, 1, rng.next_u64());
  const QuadratureGrid ugrid = interior_grid_for(p, &u, 12, 8);
  const GapSlopeReport rep = mc_gap_slope(u, p, LossKind::drm_schrodinger,
                                          {64, 256, 1024, 4096}, 60, ugrid, 17);
  CHECK(rep.fit.slope < 0.0);
  CHECK(rep.mean_abs_gap.front() > rep.mean_abs_gap.back());

  // at n = 2^16 the mean gap is below 1e-2 of the population scale
  const double population = population_loss(LossKind::drm_schrodinger, u, p, ugrid);
  std::vector<double> gaps(5);
  for (int r = 0; r < 5; ++r) {
    const SampleBatch big = sample_interior(Hypercube(1), 1 << 16, 900 + r);
    gaps[r] = std::fabs(empirical_loss(LossKind::drm_schrodinger, u, big, nullptr, p) -
                        population);
  }
  CHECK(mean(gaps) < 1e-2 * std::fabs(population));
}
