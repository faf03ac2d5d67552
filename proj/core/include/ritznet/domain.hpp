#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ritznet {

/// The unit hypercube (0,1)^d. Interior measure is 1, boundary measure 2d.
struct Hypercube {
  int dim = 1;

  explicit Hypercube(int d);
  double interior_measure() const { return 1.0; }
  double boundary_measure() const { return 2.0 * dim; }
};

enum class Region { interior, boundary };

/// A batch of i.i.d. points with seed provenance. Regenerating with the same
/// (cube, n, seed) reproduces the batch bit-exactly.
struct SampleBatch {
  Eigen::MatrixXd points;  // n x d, one point per row
  std::uint64_t seed = 0;
  Region region = Region::interior;

  Eigen::Index size() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
};

/// Deterministic tensor-product nodes/weights used as the population-integral
/// oracle. Interior weights sum to 1, boundary weights to 2d.
struct QuadratureGrid {
  Eigen::MatrixXd nodes;    // q x d
  Eigen::VectorXd weights;  // q
  Region region = Region::interior;

  Eigen::Index size() const { return nodes.rows(); }
  int dim() const { return static_cast<int>(nodes.cols()); }

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes.rows(); ++i)
      acc += weights[i] * f(Eigen::VectorXd(nodes.row(i)));
    return acc;
  }
};

/// n points uniform on (0,1)^d.
SampleBatch sample_interior(const Hypercube& cube, Eigen::Index n, std::uint64_t seed);

/// n points uniform on the boundary: face picked with probability 1/(2d),
/// in-face coordinates uniform.
SampleBatch sample_boundary(const Hypercube& cube, Eigen::Index n, std::uint64_t seed);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

/// Composite Gauss-Legendre rule on [a,b] whose panel boundaries include the
/// supplied breakpoints (values outside (a,b) are ignored). `nodes_per_panel`
/// points per panel; each base panel is additionally split by the breaks.
void composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel,
                              const std::vector<double>& breaks,
                              std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor-product composite Gauss-Legendre grid. `nodes_per_axis` is the
/// Gauss-Legendre order within each panel, so per-axis polynomials of degree
/// <= 2*nodes_per_axis-1 are integrated exactly. Throws std::invalid_argument
/// when the total point budget would exceed `max_points`.
QuadratureGrid tensor_quadrature(const Hypercube& cube, int nodes_per_axis,
                                 Region region = Region::interior, int panels_per_axis = 8,
                                 std::size_t max_points = 1u << 24);

/// Same rule, with extra per-axis panel boundaries. Splitting panels at the
/// kink coordinates of piecewise-smooth integrands restores spectral accuracy.
QuadratureGrid tensor_quadrature_with_breaks(const Hypercube& cube, int nodes_per_axis,
                                             const std::vector<std::vector<double>>& axis_breaks,
                                             Region region = Region::interior,
                                             int panels_per_axis = 8,
                                             std::size_t max_points = 1u << 24);

}  // namespace ritznet
