#include <doctest.h>

#include <cmath>
#include <vector>

#include "ritznet/constructor.hpp"
#include "ritznet/domain.hpp"
#include "ritznet/rng.hpp"

using namespace ritznet;

namespace {

Curve1D cos_curve() {
  return Curve1D([](double z) { return std::cos(z); }, [](double z) { return -std::sin(z); },
                 [](double z) { return -std::cos(z); }, 1.0);
}

Curve1D sin2_curve() {
  return Curve1D([](double z) { return std::sin(2.0 * z) / 4.0; },
                 [](double z) { return std::cos(2.0 * z) / 2.0; },
                 [](double z) { return -std::sin(2.0 * z); }, 1.0);
}

Curve1D cubic_curve() {
  return Curve1D([](double z) { return z * z * z / 6.0; }, [](double z) { return z * z / 2.0; },
                 [](double z) { return z; }, 1.0);
}

double eval1(const ShallowNet& net, double z) {
  Eigen::VectorXd x(1);
  x[0] = z;
  return net.value(x);
}

}  // namespace

TEST_CASE("Curve1D rejects an understated sup bound") {
  CHECK_THROWS_AS(Curve1D([](double z) { return 2.0 * z; }, [](double) { return 2.0; },
                          [](double) { return 0.0; }, 1.0),
                  std::invalid_argument);
}

TEST_CASE("interpolant reproduces linear curves exactly") {
  const Curve1D line([](double z) { return 0.5 * z - 0.2; }, [](double) { return 0.5; },
                     [](double) { return 0.0; }, 1.0);
  const ShallowNet net = relu_interpolant(line, 8);
  for (double z = -1.0; z <= 1.0 + 1e-12; z += 0.125 / 2) {
    CHECK(eval1(net, z) == doctest::Approx(0.5 * z - 0.2).epsilon(1e-13));
  }
  CHECK(h1_error_1d(net, line, 512) < 1e-13);
}

TEST_CASE("interpolant equals the curve at mesh nodes") {
  const Curve1D square([](double z) { return z * z; }, [](double z) { return 2.0 * z; },
                       [](double) { return 2.0; }, 2.0);
  const int m = 4;
  const ShallowNet net = relu_interpolant(square, m);
  for (int i = 0; i <= m; ++i) {
    const double z = -1.0 + 2.0 * i / m;
    CHECK(eval1(net, z) == doctest::Approx(z * z).epsilon(1e-12));
  }
  // cos as well, denser mesh
  const ShallowNet cnet = relu_interpolant(cos_curve(), 10);
  for (int i = 0; i <= 10; ++i) {
    const double z = -1.0 + 0.2 * i;
    CHECK(eval1(cnet, z) == doctest::Approx(std::cos(z)).epsilon(1e-12));
  }
}

TEST_CASE("certified error bound holds for cos with m = 10") {
  const ShallowNet net = relu_interpolant(cos_curve(), 10);
  const double bound = relu_interpolant_h1_bound(1.0, 10);
  CHECK(bound == doctest::Approx(4.0 * std::sqrt(2.0) / 10.0).epsilon(1e-15));
  CHECK(bound == doctest::Approx(0.5656854249492381).epsilon(1e-12));
  const double measured = h1_error_1d(net, cos_curve(), 2048);
  CHECK(measured <= bound);
  CHECK(measured > 0.0);
}

TEST_CASE("unit count and coefficient budgets") {
  for (int m : {1, 2, 4, 8, 16, 64}) {
    const ShallowNet net = relu_interpolant(cos_curve(), m);
    CHECK(net.width() <= 2 * m + 3);
    CHECK(net.width() <= 6 * m - 1);
    CHECK(net.gamma().lpNorm<1>() <= 5.0 + 1e-12);
    CHECK(net.feasible(1e-12));
    // every unit except the single slope unit respects |a_i| <= 2B/m
    int oversized = 0;
    for (int i = 0; i < net.width(); ++i)
      if (std::fabs(net.gamma()[i]) > 2.0 / m + 1e-12) ++oversized;
    CHECK(oversized <= 1);
    CHECK(net.gamma().cwiseAbs().maxCoeff() <= 1.0 + 1e-12);  // <= B
  }
}

TEST_CASE("full corpus: measured error within certificate, halving per doubling") {
  const std::vector<std::pair<const char*, Curve1D>> corpus{
      {"cos", cos_curve()}, {"sin2", sin2_curve()}, {"cubic", cubic_curve()}};
  for (const auto& [name, curve] : corpus) {
    CAPTURE(name);
    std::vector<double> errors;
    for (int m : {4, 8, 16, 32, 64}) {
      const ShallowNet net = relu_interpolant(curve, m);
      const double measured = h1_error_1d(net, curve, 2048);
      CHECK(measured <= relu_interpolant_h1_bound(curve.sup_bound, m));
      errors.push_back(measured);
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
      const double ratio = errors[i - 1] / errors[i];
      CHECK(ratio >= 1.6);
      CHECK(ratio <= 2.4);
    }
  }
}

TEST_CASE("h1_error_1d: zero against zero, and the large-m certificate") {
  const Curve1D zero([](double) { return 0.0; }, [](double) { return 0.0; },
                     [](double) { return 0.0; }, 0.0);
  const ShallowNet znet = relu_interpolant(zero, 4);
  CHECK(h1_error_1d(znet, zero, 512) == doctest::Approx(0.0));

  const ShallowNet big = relu_interpolant(cos_curve(), 512);
  CHECK(h1_error_1d(big, cos_curve(), 8192) <= relu_interpolant_h1_bound(1.0, 512));
}

TEST_CASE("lift_along: exactness, directions, budget") {
  Rng rng(7);
  const ShallowNet net1d = relu_interpolant(cos_curve(), 6);

  Eigen::VectorXd omega(3);
  omega << 2.0, -1.0, 0.5;
  const ShallowNet lifted = lift_along(net1d, omega);
  const Eigen::VectorXd unit = omega / omega.lpNorm<1>();
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = rng.uniform01();
    Eigen::VectorXd z(1);
    z[0] = unit.dot(x);
    CHECK(lifted.value(x) == doctest::Approx(net1d.value(z)).epsilon(1e-14));
  }
  for (int i = 0; i < lifted.width(); ++i)
    CHECK(lifted.directions().row(i).lpNorm<1>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lifted.gamma().lpNorm<1>() == doctest::Approx(net1d.gamma().lpNorm<1>()));

  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(3);
  e2[1] = 1.0;
  const ShallowNet along_e2 = lift_along(net1d, e2);
  for (int i = 0; i < along_e2.width(); ++i) {
    CHECK(std::fabs(along_e2.directions()(i, 1)) == doctest::Approx(1.0));
    CHECK(along_e2.directions()(i, 0) == 0.0);
  }

  CHECK_THROWS_AS(lift_along(net1d, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("cosine-sum approximant: single axis term satisfies the lifted certificate") {
  BarronCosine term;
  term.frequency = Eigen::VectorXd::Zero(2);
  term.frequency[0] = M_PI;
  term.phase = 0.0;
  term.amplitude = 1.0;
  const int m = 64;
  const ShallowNet net = cosine_sum_relu_approximant({term}, m, 2);

  // sup bound of the 1-D profile cos(pi z) is pi^2.
  const double bound = relu_interpolant_h1_bound(M_PI * M_PI, m);

  const QuadratureGrid grid = tensor_quadrature(Hypercube(2), 12, Region::interior, 16);
  double err_sq = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd x = grid.nodes.row(i);
    const double dv = std::cos(M_PI * x[0]) - net.value(x);
    Eigen::VectorXd grad_exact = Eigen::VectorXd::Zero(2);
    grad_exact[0] = -M_PI * std::sin(M_PI * x[0]);
    const double dg = (grad_exact - net.gradient(x)).squaredNorm();
    err_sq += grid.weights[i] * (dv * dv + dg);
  }
  CHECK(std::sqrt(err_sq) <= bound);
}

TEST_CASE("cosine-sum approximant: empty list and error halving") {
  const ShallowNet zero = cosine_sum_relu_approximant({}, 8, 2);
  CHECK(zero.width() == 0);
  Eigen::VectorXd x(2);
  x << 0.4, 0.9;
  CHECK(zero.value(x) == 0.0);

  BarronCosine term;
  term.frequency = Eigen::VectorXd::Zero(1);
  term.frequency[0] = 2.0;
  term.amplitude = 0.7;
  term.phase = 0.4;
  auto exact = [&](double z) { return 0.7 * std::cos(2.0 * z + 0.4); };
  auto measure = [&](int m) {
    const ShallowNet net = cosine_sum_relu_approximant({term}, m, 1);
    const QuadratureGrid grid = tensor_quadrature(Hypercube(1), 10, Region::interior, 64);
    double err_sq = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const Eigen::VectorXd p = grid.nodes.row(i);
      const double dv = exact(p[0]) - net.value(p);
      const double dg = -1.4 * std::sin(2.0 * p[0] + 0.4) - net.gradient(p)[0];
      err_sq += grid.weights[i] * (dv * dv + dg * dg);
    }
    return std::sqrt(err_sq);
  };
  const double e16 = measure(16), e32 = measure(32);
  CHECK(e16 / e32 >= 1.6);
  CHECK(e16 / e32 <= 2.4);
}

TEST_CASE("ReLU^2 monomial identities") {
  const ShallowNet square = relu2_monomial(Relu2Monomial::square);
  CHECK(eval1(square, 0.3) == doctest::Approx(0.09).epsilon(1e-15));
  const ShallowNet linear = relu2_monomial(Relu2Monomial::linear);
  CHECK(eval1(linear, -0.7) == doctest::Approx(-0.7).epsilon(1e-14));
  const ShallowNet one = relu2_monomial(Relu2Monomial::one);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double z = rng.uniform(-1.0, 1.0);
    CHECK(std::fabs(eval1(one, z) - 1.0) < 1e-14);
    CHECK(std::fabs(eval1(square, z) - z * z) < 1e-14);
    CHECK(std::fabs(eval1(linear, z) - z) < 1e-14);
  }
  CHECK(square.order() == 2);
  CHECK(square.feasible());
  CHECK(linear.feasible());
  CHECK(one.feasible());
}

TEST_CASE("Taylor remainder net: zero integrand and the cubic oracle") {
  const ShallowNet zero = relu2_integral_remainder([](double) { return 0.0; }, 16);
  CHECK(zero.gamma().norm() == 0.0);

  // phi = 1: h(z) = z^3/3; at z = 0.6 the value is 0.072.
  const ShallowNet cubic = relu2_integral_remainder([](double) { return 1.0; }, 64);
  CHECK(std::fabs(eval1(cubic, 0.6) - 0.072) < 2e-3);
}

TEST_CASE("Taylor remainder matches direct quadrature of the integral") {
  // Oracle: dense midpoint quadrature of integral_0^z phi(s)(z-s)^2 ds.
  auto phi = [](double s) { return std::cos(3.0 * s) + 0.5 * s; };
  auto direct = [&](double z) {
    const int q = 40000;
    double acc = 0.0;
    for (int i = 0; i < q; ++i) {
      const double s = z * (i + 0.5) / q;
      acc += phi(s) * (z - s) * (z - s);
    }
    return acc * z / q;
  };
  const ShallowNet net = relu2_integral_remainder(phi, 256);
  for (int i = 0; i < 20; ++i) {
    const double z = -1.0 + 2.0 * (i + 0.5) / 20.0;
    CHECK(std::fabs(eval1(net, z) - direct(z)) < 2e-3);
  }
}

TEST_CASE("Taylor remainder sup error decays like 1/S") {
  auto phi = [](double s) { return std::sin(2.0 * s) + 1.0; };
  auto sup_error = [&](int S) {
    const ShallowNet net = relu2_integral_remainder(phi, S);
    const ShallowNet ref = relu2_integral_remainder(phi, 10 * S);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double z = -1.0 + 2.0 * i / 400.0;
      worst = std::max(worst, std::fabs(eval1(net, z) - eval1(ref, z)));
    }
    return worst;
  };
  const double e16 = sup_error(16);
  const double e64 = sup_error(64);
  CHECK(e64 < e16);
  // O(1/S): quadrupling S should cut the error by roughly 4; allow slack.
  CHECK(e16 / e64 > 2.0);
}
