#include <doctest.h>

#include <cmath>
#include <vector>

#include "ritznet/domain.hpp"
#include "ritznet/stats.hpp"

using namespace ritznet;

TEST_CASE("interior sampler: range, determinism, law of large numbers") {
  const Hypercube cube(2);
  const SampleBatch batch = sample_interior(cube, 4, 1);
  CHECK(batch.size() == 4);
  for (Eigen::Index i = 0; i < batch.size(); ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(batch.points(i, j) > 0.0);
      CHECK(batch.points(i, j) < 1.0);
    }

  const SampleBatch again = sample_interior(cube, 4, 1);
  CHECK(batch.points == again.points);

  // Sample mean of U(0,1): tolerance from 3 sigma = 3 (12 n)^{-1/2}, rounded
  // up to 0.01 in the contract.
  const SampleBatch big = sample_interior(Hypercube(1), 100000, 7);
  CHECK(std::fabs(big.points.col(0).mean() - 0.5) < 0.01);
}

TEST_CASE("different seeds give different batches") {
  const Hypercube cube(3);
  const SampleBatch a = sample_interior(cube, 8, 1);
  const SampleBatch b = sample_interior(cube, 8, 2);
  CHECK(a.points != b.points);
}

TEST_CASE("boundary sampler geometry") {
  // d = 1: the boundary is the two endpoints.
  const SampleBatch line = sample_boundary(Hypercube(1), 100, 3);
  for (Eigen::Index i = 0; i < line.size(); ++i)
    CHECK((line.points(i, 0) == 0.0 || line.points(i, 0) == 1.0));

  // d = 2: fraction on the face x1 = 0 is 1/4 within binomial 3 sigma.
  const SampleBatch square = sample_boundary(Hypercube(2), 10000, 5);
  int on_face = 0;
  for (Eigen::Index i = 0; i < square.size(); ++i)
    if (square.points(i, 0) == 0.0) ++on_face;
  CHECK(std::fabs(on_face / 10000.0 - 0.25) < 0.02);

  // d = 3: every point has a coordinate pinned to a face.
  const SampleBatch box = sample_boundary(Hypercube(3), 500, 11);
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    bool pinned = false;
    for (int j = 0; j < 3; ++j)
      pinned = pinned || box.points(i, j) == 0.0 || box.points(i, j) == 1.0;
    CHECK(pinned);
  }
}

TEST_CASE("boundary sampler per-face counts pass a chi-squared test") {
  const int d = 3;
  const SampleBatch batch = sample_boundary(Hypercube(d), 10000, 17);
  std::vector<std::size_t> counts(2 * d, 0);
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    for (int j = 0; j < d; ++j) {
      if (batch.points(i, j) == 0.0) {
        ++counts[2 * j];
        break;
      }
      if (batch.points(i, j) == 1.0) {
        ++counts[2 * j + 1];
        break;
      }
    }
  }
  std::size_t total = 0;
  for (auto c : counts) total += c;
  CHECK(total == 10000);
  CHECK(chi2_uniform_pvalue(counts) > 0.001);
}

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  double mass = 0.0, m8 = 0.0;
  for (int i = 0; i < 5; ++i) {
    mass += w[i];
    m8 += w[i] * std::pow(x[i], 8);
  }
  CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
  // integral of x^8 over [-1,1] = 2/9, exact for 5-point rule (degree 9).
  CHECK(m8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("tensor quadrature: constants, monomials, cosines") {
  const Hypercube cube1(1);
  const QuadratureGrid g1 = tensor_quadrature(cube1, 10);
  CHECK(g1.integrate([](const Eigen::VectorXd&) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g1.integrate([](const Eigen::VectorXd& x) { return x[0]; }) ==
        doctest::Approx(0.5).epsilon(1e-14));

  const Hypercube cube2(2);
  const QuadratureGrid g2 = tensor_quadrature(cube2, 20);
  CHECK(std::fabs(g2.integrate([](const Eigen::VectorXd& x) { return std::cos(M_PI * x[0]); })) <
        1e-12);
}

TEST_CASE("interior quadrature reproduces cosine product masses") {
  // integral of prod cos^2(pi k_i x_i) = 2^{-#nonzero} for integer waves.
  for (int d = 1; d <= 3; ++d) {
    const Hypercube cube(d);
    const QuadratureGrid grid = tensor_quadrature(cube, 12);
    std::vector<std::vector<int>> waves;
    if (d == 1) waves = {{1}, {2}, {3}};
    if (d == 2) waves = {{1, 0}, {2, 3}, {3, 3}};
    if (d == 3) waves = {{1, 2, 3}, {0, 3, 1}, {3, 3, 3}};
    for (const auto& k : waves) {
      int nonzero = 0;
      for (int ki : k)
        if (ki != 0) ++nonzero;
      const double val = grid.integrate([&](const Eigen::VectorXd& x) {
        double p = 1.0;
        for (int j = 0; j < d; ++j) p *= std::cos(M_PI * k[j] * x[j]);
        return p * p;
      });
      CHECK(val == doctest::Approx(std::pow(0.5, nonzero)).epsilon(1e-10));
    }
  }
}

TEST_CASE("boundary quadrature has total mass 2d") {
  for (int d = 1; d <= 3; ++d) {
    const QuadratureGrid grid = tensor_quadrature(Hypercube(d), 6, Region::boundary, 4);
    CHECK(grid.weights.sum() == doctest::Approx(2.0 * d).epsilon(1e-13));
    CHECK(grid.weights.minCoeff() > 0.0);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      bool pinned = false;
      for (int j = 0; j < d; ++j)
        pinned = pinned || grid.nodes(i, j) == 0.0 || grid.nodes(i, j) == 1.0;
      CHECK(pinned);
    }
  }
}

TEST_CASE("quadrature with breaks integrates kinked integrands exactly") {
  const Hypercube cube(1);
  const double kink = 0.3;
  const QuadratureGrid grid = tensor_quadrature_with_breaks(cube, 8, {{kink}});
  const double val =
      grid.integrate([&](const Eigen::VectorXd& x) { return std::max(x[0] - kink, 0.0); });
  CHECK(val == doctest::Approx(0.5 * 0.7 * 0.7).epsilon(1e-14));
}

TEST_CASE("point budget cap rejects oversized grids") {
  CHECK_THROWS_AS(tensor_quadrature(Hypercube(3), 64, Region::interior, 8, 1000),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_interior(Hypercube(1), 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Hypercube(0), std::invalid_argument);
}
