#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ritznet/constructor.hpp"
#include "ritznet/shallow_net.hpp"

namespace ritznet {

/// Separable cosine product u(x) = amplitude * prod_i cos(pi k_i x_i). Every
/// face of the unit hypercube sees zero normal derivative, and the mean over
/// the cube vanishes whenever k != 0.
class CosineSolution final : public Field {
 public:
  CosineSolution(Eigen::VectorXi wave, double amplitude = 1.0);

  const Eigen::VectorXi& wave() const { return wave_; }
  double amplitude() const { return amplitude_; }
  int dim() const { return static_cast<int>(wave_.size()); }
  int nonzero_modes() const;

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override;

  /// pi^2 * sum k_i^2, the eigenvalue of -Laplace on this mode.
  double laplace_eigenvalue() const;

  /// Expansion of the cosine product into 2^(r-1) pure cosine ridges of equal
  /// amplitude (r = number of nonzero modes).
  std::vector<BarronCosine> cosine_expansion() const;

  /// Budget bound used for network sizing:
  /// amplitude * (1 + pi |k|_1)^2 * 2^(r-1). Always at least the summed
  /// weighted-Fourier mass of cosine_expansion().
  double declared_barron2() const;

 private:
  Eigen::VectorXi wave_;
  double amplitude_;
};

enum class ProblemFamily { poisson, schrodinger, elliptic_dirichlet };

/// A manufactured PDE problem on (0,1)^d: the exact solution, the derived
/// right-hand side, and the declared constants the estimates need. Immutable
/// descriptor, safe for concurrent use.
struct PdeProblem {
  ProblemFamily family = ProblemFamily::poisson;
  int dim = 1;
  std::string id;

  std::shared_ptr<const CosineSolution> exact;
  std::function<double(const Eigen::VectorXd&)> f;

  // Schrodinger data.
  std::function<double(const Eigen::VectorXd&)> potential;
  double v_min = 0.0;
  double v_max = 0.0;

  // Elliptic (Dirichlet) data; a is diagonal in the catalog but stored as a
  // full matrix callable.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> diffusion;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  std::function<double(const Eigen::VectorXd&)> reaction;
  std::function<double(const Eigen::VectorXd&)> boundary_value;
  double coeff_bound = 1.0;  // M: sup bound on the coefficient functions
};

/// Poisson with Neumann data: -Laplace u = f, f = pi^2 |k|^2 u*. Requires
/// k != 0 (otherwise the solution is not unique in the zero-mean space).
PdeProblem make_poisson(const Eigen::VectorXi& wave, double amplitude = 1.0);

/// Static Schrodinger with constant potential v0 > 0: -Laplace u + v0 u = f.
PdeProblem make_schrodinger(const Eigen::VectorXi& wave, double v0, double amplitude = 1.0);

/// Static Schrodinger with V(x) = 2 + sin(pi x_1), so V_min = 1, V_max = 3.
PdeProblem make_schrodinger_sine(const Eigen::VectorXi& wave, double amplitude = 1.0);

enum class EllipticKind { laplace_like, variable_coeff };

/// Linear second order elliptic problem with Dirichlet data g = u*|boundary.
/// laplace_like: a = I, b = 0, c = 0. variable_coeff: a_11 = 1 + sin(pi x_1)/2,
/// other a_ii = 1, b_i = 1/2, c = 1.
PdeProblem make_elliptic(EllipticKind kind, const Eigen::VectorXi& wave, double amplitude = 1.0);

/// Interior PDE residual (L u - f)(x) for the problem's operator: Poisson
/// -Laplace u - f, Schrodinger -Laplace u + V u - f, elliptic
/// -sum a_ij d_ij u + sum b_i d_i u + c u - f.
double pde_residual(const PdeProblem& problem, const Field& u, const Eigen::VectorXd& x);

struct EllipticCoefficients {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  double c = 0.0;
};

/// Coefficients of the second order operator seen as -sum a_ij d_ij + b.grad
/// + c for any family: Poisson (I, 0, 0), Schrodinger (I, 0, V(x)), elliptic
/// as stored.
EllipticCoefficients elliptic_coefficients(const PdeProblem& problem, const Eigen::VectorXd& x);

struct ExactFields {
  Eigen::VectorXd values;
  Eigen::MatrixXd gradients;              // n x d
  std::vector<Eigen::MatrixXd> hessians;  // n of d x d
};

/// Closed-form u*, grad u*, Hess u* at the given points (rows).
ExactFields exact_fields(const PdeProblem& problem, const Eigen::MatrixXd& points);

/// Parse a catalog id such as "poisson:d=2,k=1,0",
/// "schrodinger:k=1,v0=1.5", "schrodinger:k=2,potential=sine",
/// "elliptic:d=2,k=1,0,coeff=variable".
PdeProblem parse_problem(const std::string& id);

}  // namespace ritznet
