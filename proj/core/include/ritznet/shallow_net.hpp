#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ritznet {

/// Scalar field on the hypercube exposing value, spatial gradient, and
/// spatial Hessian. Losses and error metrics accept any Field, so exact
/// solutions and constructed approximants score through the same code paths
/// as networks.
class Field {
 public:
  virtual ~Field() = default;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const = 0;
};

/// Field defined by callables; hessian optional (throws when absent).
class CallableField final : public Field {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using HessFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  CallableField(ValueFn v, GradFn g, HessFn h = nullptr)
      : value_(std::move(v)), grad_(std::move(g)), hess_(std::move(h)) {}

  double value(const Eigen::VectorXd& x) const override { return value_(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override { return grad_(x); }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override;

 private:
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
};

/// Parameter-space cotangent of a ShallowNet (the adjoint of one evaluation).
struct ParamCotangent {
  Eigen::VectorXd d_gamma;       // m
  Eigen::MatrixXd d_directions;  // m x d
  Eigen::VectorXd d_biases;      // m

  static ParamCotangent zero(int width, int dim);
  ParamCotangent& operator+=(const ParamCotangent& other);
  ParamCotangent& operator*=(double s);
};

struct HessianEval {
  Eigen::MatrixXd matrix;
  /// Set when the network has order 1: the Hessian is zero almost everywhere
  /// and the returned matrix is identically zero.
  bool order_one_flat = false;
};

struct ProjectReport {
  int zero_rows_reset = 0;
};

/// Constrained two-layer network: sum_i gamma_i sigma_k(omega_i . x + t_i)
/// with |omega_i|_1 = 1, t_i in [-1,1] and the outer coefficients inside the
/// l1 ball of radius `budget`. Order k = 1 uses ReLU, k = 2 uses squared
/// ReLU. Values are immutable for evaluation purposes and safe to share
/// across concurrent readers; training mutates a private copy.
class ShallowNet final : public Field {
 public:
  ShallowNet() = default;
  ShallowNet(int order, double budget, Eigen::VectorXd gamma, Eigen::MatrixXd directions,
             Eigen::VectorXd biases);

  int order() const { return order_; }
  int width() const { return static_cast<int>(gamma_.size()); }
  int dim() const { return static_cast<int>(directions_.cols()); }
  double budget() const { return budget_; }

  const Eigen::VectorXd& gamma() const { return gamma_; }
  const Eigen::MatrixXd& directions() const { return directions_; }
  const Eigen::VectorXd& biases() const { return biases_; }
  Eigen::VectorXd& mutable_gamma() { return gamma_; }
  Eigen::MatrixXd& mutable_directions() { return directions_; }
  Eigen::VectorXd& mutable_biases() { return biases_; }
  void set_budget(double b) { budget_ = b; }

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override;
  HessianEval hessian_checked(const Eigen::VectorXd& x) const;

  /// Chain-rule accumulation of d/d(gamma, omega, t) of
  ///   cot_value * value + cot_gradient . gradient + <cot_hessian, hessian>.
  /// Indicators are treated as locally constant (their derivative is 0), so
  /// the result is the a.e. gradient away from kink surfaces. A Hessian
  /// cotangent requires order 2.
  ParamCotangent backprop(const Eigen::VectorXd& x, double cot_value,
                          const Eigen::VectorXd& cot_gradient,
                          const Eigen::MatrixXd* cot_hessian = nullptr) const;

  /// Distance from x to the nearest kink surface omega_i . x + t_i = 0,
  /// measured as min_i |omega_i . x + t_i|.
  double kink_distance(const Eigen::VectorXd& x) const;

  /// Per-axis kink coordinates when every unit direction is axis-aligned
  /// (+-e_j); nullopt otherwise. In one dimension this always succeeds.
  /// Used to split quadrature panels so piecewise-smooth integrands are
  /// integrated exactly.
  std::optional<std::vector<std::vector<double>>> axis_kink_coordinates() const;

  /// True when all class constraints hold to the stated tolerances:
  /// |omega_i|_1 = 1 within 1e-12, t_i in [-1, 1], sum |gamma_i| <= B + 1e-12.
  /// The closed bias interval admits the limit units used by the exact
  /// constructions; projection maps biases back into [-1, 1).
  bool feasible(double tol = 1e-12) const;

  std::string to_json() const;
  static ShallowNet from_json(const std::string& text);

 private:
  int order_ = 1;
  double budget_ = 0.0;
  Eigen::VectorXd gamma_;
  Eigen::MatrixXd directions_;
  Eigen::VectorXd biases_;
};

/// Exact Euclidean projection onto the class constraints: direction rows are
/// l1-renormalized with their sign pattern preserved (zero rows reset to e_1
/// and counted in the report), biases clamped into [-1, 1 - 1e-9], and gamma
/// soft-threshold projected onto the l1 ball of radius B.
ShallowNet project(const ShallowNet& net, ProjectReport* report = nullptr);

/// Exact projection of v onto the l1 ball of radius `radius` (sort-based
/// soft threshold).
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

/// Feasible-at-birth initialization: rows uniform on the l1 sphere
/// (symmetrized Dirichlet(1,...,1)), biases uniform on [-1,1), outer
/// coefficients uniform on [-B/m, B/m].
ShallowNet init_network(int width, int dim, double budget, int order, std::uint64_t seed);

}  // namespace ritznet
