#include "ritznet/shallow_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ritznet/rng.hpp"

namespace ritznet {

namespace {
inline double relu(double z) { return z > 0.0 ? z : 0.0; }
inline double step(double z) { return z >= 0.0 ? 1.0 : 0.0; }
}  // namespace

Eigen::MatrixXd CallableField::hessian(const Eigen::VectorXd& x) const {
  if (!hess_) throw std::logic_error("CallableField: no hessian callable provided");
  return hess_(x);
}

ParamCotangent ParamCotangent::zero(int width, int dim) {
  ParamCotangent c;
  c.d_gamma = Eigen::VectorXd::Zero(width);
  c.d_directions = Eigen::MatrixXd::Zero(width, dim);
  c.d_biases = Eigen::VectorXd::Zero(width);
  return c;
}

ParamCotangent& ParamCotangent::operator+=(const ParamCotangent& other) {
  d_gamma += other.d_gamma;
  d_directions += other.d_directions;
  d_biases += other.d_biases;
  return *this;
}

ParamCotangent& ParamCotangent::operator*=(double s) {
  d_gamma *= s;
  d_directions *= s;
  d_biases *= s;
  return *this;
}

ShallowNet::ShallowNet(int order, double budget, Eigen::VectorXd gamma,
                       Eigen::MatrixXd directions, Eigen::VectorXd biases)
    : order_(order),
      budget_(budget),
      gamma_(std::move(gamma)),
      directions_(std::move(directions)),
      biases_(std::move(biases)) {
  if (order_ != 1 && order_ != 2)
    throw std::invalid_argument("ShallowNet: order must be 1 or 2");
  if (budget_ < 0.0) throw std::invalid_argument("ShallowNet: budget must be nonnegative");
  if (gamma_.size() != directions_.rows() || gamma_.size() != biases_.size())
    throw std::invalid_argument("ShallowNet: parameter shapes disagree");
}

double ShallowNet::value(const Eigen::VectorXd& x) const {
  if (x.size() != directions_.cols())
    throw std::invalid_argument("ShallowNet::value: dimension mismatch");
  const Eigen::VectorXd z = directions_ * x + biases_;
  double acc = 0.0;
  if (order_ == 1) {
    for (int i = 0; i < width(); ++i) acc += gamma_[i] * relu(z[i]);
  } else {
    for (int i = 0; i < width(); ++i) {
      const double r = relu(z[i]);
      acc += gamma_[i] * r * r;
    }
  }
  return acc;
}

Eigen::VectorXd ShallowNet::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != directions_.cols())
    throw std::invalid_argument("ShallowNet::gradient: dimension mismatch");
  const Eigen::VectorXd z = directions_ * x + biases_;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (int i = 0; i < width(); ++i) {
    const double slope =
        order_ == 1 ? gamma_[i] * step(z[i]) : 2.0 * gamma_[i] * relu(z[i]);
    if (slope != 0.0) g += slope * directions_.row(i).transpose();
  }
  return g;
}

Eigen::MatrixXd ShallowNet::hessian(const Eigen::VectorXd& x) const {
  return hessian_checked(x).matrix;
}

HessianEval ShallowNet::hessian_checked(const Eigen::VectorXd& x) const {
  if (x.size() != directions_.cols())
    throw std::invalid_argument("ShallowNet::hessian: dimension mismatch");
  HessianEval out;
  out.matrix = Eigen::MatrixXd::Zero(dim(), dim());
  if (order_ == 1) {
    // ReLU networks are piecewise linear: the Hessian vanishes a.e.
    out.order_one_flat = true;
    return out;
  }
  const Eigen::VectorXd z = directions_ * x + biases_;
  for (int i = 0; i < width(); ++i) {
    if (z[i] >= 0.0 && gamma_[i] != 0.0) {
      out.matrix.noalias() +=
          2.0 * gamma_[i] * directions_.row(i).transpose() * directions_.row(i);
    }
  }
  return out;
}

ParamCotangent ShallowNet::backprop(const Eigen::VectorXd& x, double cot_value,
                                    const Eigen::VectorXd& cot_gradient,
                                    const Eigen::MatrixXd* cot_hessian) const {
  if (x.size() != directions_.cols())
    throw std::invalid_argument("ShallowNet::backprop: dimension mismatch");
  if (cot_gradient.size() != 0 && cot_gradient.size() != dim())
    throw std::invalid_argument("ShallowNet::backprop: gradient cotangent shape");
  if (cot_hessian) {
    if (order_ != 2)
      throw std::invalid_argument("ShallowNet::backprop: hessian cotangent needs order 2");
    if (cot_hessian->rows() != dim() || cot_hessian->cols() != dim())
      throw std::invalid_argument("ShallowNet::backprop: hessian cotangent shape");
  }
  const bool has_grad = cot_gradient.size() != 0;
  const Eigen::VectorXd z = directions_ * x + biases_;
  ParamCotangent out = ParamCotangent::zero(width(), dim());

  for (int i = 0; i < width(); ++i) {
    const double zi = z[i];
    const double active = step(zi);
    if (order_ == 1) {
      const double gdot = has_grad ? cot_gradient.dot(directions_.row(i)) : 0.0;
      out.d_gamma[i] = cot_value * relu(zi) + active * gdot;
      const double dz = gamma_[i] * cot_value * active;
      out.d_biases[i] = dz;
      out.d_directions.row(i) = dz * x.transpose();
      if (has_grad && active != 0.0)
        out.d_directions.row(i) += gamma_[i] * active * cot_gradient.transpose();
    } else {
      const double r = relu(zi);
      const double gdot = has_grad ? cot_gradient.dot(directions_.row(i)) : 0.0;
      double quad = 0.0;
      if (cot_hessian && active != 0.0)
        quad = directions_.row(i) * (*cot_hessian) * directions_.row(i).transpose();
      out.d_gamma[i] = cot_value * r * r + 2.0 * r * gdot + 2.0 * active * quad;
      const double dz = gamma_[i] * (2.0 * cot_value * r + 2.0 * active * gdot);
      out.d_biases[i] = dz;
      out.d_directions.row(i) = dz * x.transpose();
      if (has_grad && r != 0.0)
        out.d_directions.row(i) += 2.0 * gamma_[i] * r * cot_gradient.transpose();
      if (cot_hessian && active != 0.0)
        out.d_directions.row(i) += 2.0 * gamma_[i] * active *
                                   (directions_.row(i) * (*cot_hessian + cot_hessian->transpose()));
    }
  }
  return out;
}

double ShallowNet::kink_distance(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd z = directions_ * x + biases_;
  return z.cwiseAbs().minCoeff();
}

std::optional<std::vector<std::vector<double>>> ShallowNet::axis_kink_coordinates() const {
  std::vector<std::vector<double>> breaks(dim());
  for (int i = 0; i < width(); ++i) {
    if (gamma_[i] == 0.0) continue;
    int axis = -1;
    for (int j = 0; j < dim(); ++j) {
      const double w = directions_(i, j);
      if (std::fabs(w) < 1e-12) continue;
      if (axis >= 0 || std::fabs(std::fabs(w) - 1.0) > 1e-12) return std::nullopt;
      axis = j;
    }
    if (axis < 0) continue;  // zero row, constant unit
    const double kink = -biases_[i] / directions_(i, axis);
    if (kink > 0.0 && kink < 1.0) breaks[axis].push_back(kink);
  }
  for (auto& b : breaks) std::sort(b.begin(), b.end());
  return breaks;
}

bool ShallowNet::feasible(double tol) const {
  for (int i = 0; i < width(); ++i) {
    if (std::fabs(directions_.row(i).lpNorm<1>() - 1.0) > tol) return false;
    if (biases_[i] < -1.0 - tol || biases_[i] > 1.0 + tol) return false;
  }
  return gamma_.lpNorm<1>() <= budget_ + tol;
}

std::string ShallowNet::to_json() const {
  nlohmann::json j;
  j["order"] = order_;
  j["width"] = width();
  j["budget"] = budget_;
  j["gamma"] = std::vector<double>(gamma_.data(), gamma_.data() + gamma_.size());
  nlohmann::json omega = nlohmann::json::array();
  for (int i = 0; i < width(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < dim(); ++k) row.push_back(directions_(i, k));
    omega.push_back(std::move(row));
  }
  j["omega"] = std::move(omega);
  j["t"] = std::vector<double>(biases_.data(), biases_.data() + biases_.size());
  return j.dump();
}

ShallowNet ShallowNet::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int order = j.at("order").get<int>();
  const int width = j.at("width").get<int>();
  const double budget = j.at("budget").get<double>();
  const auto gamma_v = j.at("gamma").get<std::vector<double>>();
  const auto t_v = j.at("t").get<std::vector<double>>();
  const auto& omega_j = j.at("omega");
  if (static_cast<int>(gamma_v.size()) != width || static_cast<int>(t_v.size()) != width ||
      static_cast<int>(omega_j.size()) != width)
    throw std::invalid_argument("ShallowNet::from_json: width disagrees with arrays");
  const int dim = width > 0 ? static_cast<int>(omega_j.at(0).size()) : 1;
  Eigen::VectorXd gamma(width), biases(width);
  Eigen::MatrixXd dirs(width, dim);
  for (int i = 0; i < width; ++i) {
    gamma[i] = gamma_v[i];
    biases[i] = t_v[i];
    const auto row = omega_j.at(i).get<std::vector<double>>();
    if (static_cast<int>(row.size()) != dim)
      throw std::invalid_argument("ShallowNet::from_json: ragged omega rows");
    for (int k = 0; k < dim; ++k) dirs(i, k) = row[k];
  }
  return ShallowNet(order, budget, std::move(gamma), std::move(dirs), std::move(biases));
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (radius < 0.0) throw std::invalid_argument("project_l1_ball: negative radius");
  if (v.lpNorm<1>() <= radius) return v;
  std::vector<double> u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u[i] = std::fabs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::fabs(v[i]) - theta, 0.0);
    out[i] = std::copysign(mag, v[i]);
  }
  return out;
}

ShallowNet project(const ShallowNet& net, ProjectReport* report) {
  Eigen::MatrixXd dirs = net.directions();
  int resets = 0;
  for (int i = 0; i < net.width(); ++i) {
    const double norm = dirs.row(i).lpNorm<1>();
    if (norm <= 0.0) {
      dirs.row(i).setZero();
      dirs(i, 0) = 1.0;
      ++resets;
    } else {
      dirs.row(i) /= norm;
    }
  }
  constexpr double kBiasEps = 1e-9;
  Eigen::VectorXd biases = net.biases().cwiseMax(-1.0).cwiseMin(1.0 - kBiasEps);
  Eigen::VectorXd gamma = project_l1_ball(net.gamma(), net.budget());
  if (report) report->zero_rows_reset = resets;
  return ShallowNet(net.order(), net.budget(), std::move(gamma), std::move(dirs),
                    std::move(biases));
}

ShallowNet init_network(int width, int dim, double budget, int order, std::uint64_t seed) {
  if (width < 1 || dim < 1) throw std::invalid_argument("init_network: positive width and dim");
  Rng rng(seed);
  Eigen::MatrixXd dirs(width, dim);
  Eigen::VectorXd biases(width), gamma(width);
  for (int i = 0; i < width; ++i) {
    // Dirichlet(1,...,1) magnitudes with symmetric signs: uniform on the l1 sphere.
    double total = 0.0;
    for (int j = 0; j < dim; ++j) {
      dirs(i, j) = rng.exponential();
      total += dirs(i, j);
    }
    for (int j = 0; j < dim; ++j) dirs(i, j) = rng.sign() * dirs(i, j) / total;
    biases[i] = rng.uniform(-1.0, 1.0);
    gamma[i] = rng.uniform(-budget / width, budget / width);
  }
  return ShallowNet(order, budget, std::move(gamma), std::move(dirs), std::move(biases));
}

}  // namespace ritznet
