#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ritznet/shallow_net.hpp"

namespace ritznet {

/// A C^2 curve on [-1,1] with its first two derivatives and a certified sup
/// bound B >= max(|g|, |g'|, |g''|). The bound is checked on a 1001-point
/// grid at construction.
struct Curve1D {
  std::function<double(double)> value;
  std::function<double(double)> deriv1;
  std::function<double(double)> deriv2;
  double sup_bound = 0.0;

  Curve1D(std::function<double(double)> g, std::function<double(double)> g1,
          std::function<double(double)> g2, double bound);
};

/// One cosine ridge term x -> amplitude * cos(frequency . x + phase).
struct BarronCosine {
  Eigen::VectorXd frequency;
  double phase = 0.0;
  double amplitude = 1.0;

  /// Weighted-Fourier mass of this term: amplitude * (1 + |frequency|_1)^s.
  double barron_norm(int s) const;
};

/// H1([-1,1]) error certificate for the nodal interpolant built from a curve
/// with sup bound B on an m-cell mesh: 4*sqrt(2)*B/m.
double relu_interpolant_h1_bound(double sup_bound, int mesh_cells);

/// Two-layer ReLU network equal to the nodal piecewise-linear interpolant of
/// g on the uniform m-cell mesh of [-1,1], pointwise on [-1,1]. The constant
/// part is spread over ceil(m/4) copies of the exact 4-unit representation,
/// giving at most 2m+3 units; the coefficient l1 norm is at most 5B and every
/// unit except the single slope unit obeys |a_i| <= 2B/m (the slope unit
/// carries |g'| <= B).
ShallowNet relu_interpolant(const Curve1D& g, int mesh_cells);

/// Measured H1([-1,1]) distance between a 1-D network and a curve, computed
/// by panelwise Gauss-Legendre quadrature split at the network's kink points.
/// `nodes` is the total node budget (>= 256).
double h1_error_1d(const ShallowNet& net, const Curve1D& g, int nodes = 2048);

/// Substitute z = (direction/|direction|_1) . x into every unit of a 1-D
/// network. The lifted network satisfies lifted(x) = net1d(unit_dir . x)
/// exactly and keeps |omega_i|_1 = 1 and the coefficient budget.
ShallowNet lift_along(const ShallowNet& net1d, const Eigen::VectorXd& direction);

/// Constructive ReLU approximant of a finite cosine sum: each term is reduced
/// to its 1-D profile, interpolated on an m-cell mesh, lifted along its
/// frequency, and summed. An empty term list yields the zero network.
ShallowNet cosine_sum_relu_approximant(const std::vector<BarronCosine>& terms, int m_per_term,
                                       int dim);

enum class Relu2Monomial { one, linear, square };

/// Exact ReLU^2 representations on [-1,1]:
///   z^2 = s2(z) + s2(-z)
///   z   = ((z+1)^2 - (z-1)^2) / 4
///   1   = ((z+1)^2 + (z-1)^2) / 2 - z^2
ShallowNet relu2_monomial(Relu2Monomial kind);

/// Midpoint-rule discretization of the Taylor remainder
///   h(z) = integral_0^z phi(s) (z-s)^2 ds
///        = integral_0^1 phi(s) s2(z-s) ds - integral_0^1 phi(-s) s2(-z-s) ds
/// as a 2S-unit ReLU^2 network on [-1,1]. Sup-norm error decays like O(1/S).
ShallowNet relu2_integral_remainder(const std::function<double(double)>& phi, int grid_points);

}  // namespace ritznet
