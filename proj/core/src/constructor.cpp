#include "ritznet/constructor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ritznet/domain.hpp"

namespace ritznet {

Curve1D::Curve1D(std::function<double(double)> g, std::function<double(double)> g1,
                 std::function<double(double)> g2, double bound)
    : value(std::move(g)), deriv1(std::move(g1)), deriv2(std::move(g2)), sup_bound(bound) {
  if (!(sup_bound >= 0.0)) throw std::invalid_argument("Curve1D: sup_bound must be >= 0");
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double z = -1.0 + 2.0 * i / 1000.0;
    worst = std::max({worst, std::fabs(value(z)), std::fabs(deriv1(z)), std::fabs(deriv2(z))});
  }
  if (worst > sup_bound * (1.0 + 1e-12) + 1e-300)
    throw std::invalid_argument("Curve1D: sup_bound smaller than sampled derivatives");
}

double BarronCosine::barron_norm(int s) const {
  return amplitude * std::pow(1.0 + frequency.lpNorm<1>(), s);
}

double relu_interpolant_h1_bound(double sup_bound, int mesh_cells) {
  return 4.0 * std::sqrt(2.0) * sup_bound / mesh_cells;
}

ShallowNet relu_interpolant(const Curve1D& g, int mesh_cells) {
  const int m = mesh_cells;
  if (m < 1) throw std::invalid_argument("relu_interpolant: mesh_cells >= 1 required");
  const double h = 2.0 / m;
  auto node = [&](int i) { return -1.0 + h * i; };

  struct Unit {
    double a, w, t;
  };
  std::vector<Unit> units;

  // Constant g(z0), spread over ceil(m/4) copies of the exact 4-unit
  // representation 1 = (s(z+1)+s(-z-1)+s(-z+1)+s(z-1))/2 so each coefficient
  // stays within 2B/m.
  const double g0 = g.value(node(0));
  const int copies = (m + 3) / 4;
  const double cc = g0 / (2.0 * copies);
  for (int c = 0; c < copies; ++c) {
    units.push_back({cc, 1.0, 1.0});
    units.push_back({cc, -1.0, -1.0});
    units.push_back({cc, -1.0, 1.0});
    units.push_back({cc, 1.0, -1.0});
  }
  // Slope unit (g(z1)-g(z0))/h * s(z - z0).
  units.push_back({(g.value(node(1)) - g0) / h, 1.0, -node(0)});
  // Interior second-difference units.
  for (int i = 1; i <= m - 1; ++i) {
    const double a = (g.value(node(i - 1)) - 2.0 * g.value(node(i)) + g.value(node(i + 1))) / h;
    units.push_back({a, 1.0, -node(i)});
  }

  const int count = static_cast<int>(units.size());
  Eigen::VectorXd gamma(count), biases(count);
  Eigen::MatrixXd dirs(count, 1);
  for (int i = 0; i < count; ++i) {
    gamma[i] = units[i].a;
    dirs(i, 0) = units[i].w;
    biases[i] = units[i].t;
  }
  return ShallowNet(1, 5.0 * g.sup_bound, std::move(gamma), std::move(dirs), std::move(biases));
}

double h1_error_1d(const ShallowNet& net, const Curve1D& g, int nodes) {
  if (net.dim() != 1) throw std::invalid_argument("h1_error_1d: 1-D network required");
  if (nodes < 256) throw std::invalid_argument("h1_error_1d: nodes >= 256 required");

  std::vector<double> kinks;
  for (int i = 0; i < net.width(); ++i) {
    const double w = net.directions()(i, 0);
    if (w == 0.0) continue;
    const double z = -net.biases()[i] / w;
    if (z > -1.0 && z < 1.0) kinks.push_back(z);
  }
  // Enough panels that the per-panel Gauss order stays moderate; the
  // integrand is smooth within panels, so accuracy is spectral.
  const int base_panels = 16;
  const int panel_count = base_panels + static_cast<int>(kinks.size());
  const int per_panel = std::max(8, (nodes + panel_count - 1) / panel_count);

  std::vector<double> xs, ws;
  composite_gauss_legendre(-1.0, 1.0, base_panels, per_panel, kinks, xs, ws);

  double acc = 0.0;
  Eigen::VectorXd x(1);
  for (std::size_t q = 0; q < xs.size(); ++q) {
    x[0] = xs[q];
    const double dv = g.value(xs[q]) - net.value(x);
    const double dg = g.deriv1(xs[q]) - net.gradient(x)[0];
    acc += ws[q] * (dv * dv + dg * dg);
  }
  return std::sqrt(std::max(acc, 0.0));
}

ShallowNet lift_along(const ShallowNet& net1d, const Eigen::VectorXd& direction) {
  if (net1d.dim() != 1) throw std::invalid_argument("lift_along: 1-D network required");
  const double norm = direction.lpNorm<1>();
  if (norm <= 0.0) throw std::invalid_argument("lift_along: zero direction");
  const Eigen::VectorXd unit = direction / norm;
  const int m = net1d.width();
  const int d = static_cast<int>(direction.size());
  Eigen::MatrixXd dirs(m, d);
  for (int i = 0; i < m; ++i) dirs.row(i) = net1d.directions()(i, 0) * unit.transpose();
  return ShallowNet(net1d.order(), net1d.budget(), net1d.gamma(), std::move(dirs),
                    net1d.biases());
}

ShallowNet cosine_sum_relu_approximant(const std::vector<BarronCosine>& terms, int m_per_term,
                                       int dim) {
  if (m_per_term < 1)
    throw std::invalid_argument("cosine_sum_relu_approximant: m_per_term >= 1 required");
  std::vector<ShallowNet> parts;
  parts.reserve(terms.size());
  for (const auto& term : terms) {
    if (term.frequency.size() != dim)
      throw std::invalid_argument("cosine_sum_relu_approximant: term dimension mismatch");
    const double freq = term.frequency.lpNorm<1>();
    const double amp = term.amplitude;
    const double phase = term.phase;
    // 1-D profile along the unit direction: g(z) = A cos(|w|_1 z + phase).
    const double bound = std::fabs(amp) * std::pow(std::max(1.0, freq), 2);
    Curve1D profile(
        [amp, freq, phase](double z) { return amp * std::cos(freq * z + phase); },
        [amp, freq, phase](double z) { return -amp * freq * std::sin(freq * z + phase); },
        [amp, freq, phase](double z) { return -amp * freq * freq * std::cos(freq * z + phase); },
        bound);
    const ShallowNet net1d = relu_interpolant(profile, m_per_term);
    Eigen::VectorXd lift_dir = term.frequency;
    if (freq == 0.0) {
      lift_dir = Eigen::VectorXd::Zero(dim);
      lift_dir[0] = 1.0;
    }
    parts.push_back(lift_along(net1d, lift_dir));
  }

  int total = 0;
  double budget = 0.0;
  for (const auto& p : parts) {
    total += p.width();
    budget += p.budget();
  }
  Eigen::VectorXd gamma(total), biases(total);
  Eigen::MatrixXd dirs(total, dim);
  int row = 0;
  for (const auto& p : parts) {
    gamma.segment(row, p.width()) = p.gamma();
    biases.segment(row, p.width()) = p.biases();
    dirs.middleRows(row, p.width()) = p.directions();
    row += p.width();
  }
  return ShallowNet(1, budget, std::move(gamma), std::move(dirs), std::move(biases));
}

namespace {

ShallowNet make_net2(const std::vector<std::array<double, 3>>& units, double budget) {
  const int m = static_cast<int>(units.size());
  Eigen::VectorXd gamma(m), biases(m);
  Eigen::MatrixXd dirs(m, 1);
  for (int i = 0; i < m; ++i) {
    gamma[i] = units[i][0];
    dirs(i, 0) = units[i][1];
    biases[i] = units[i][2];
  }
  return ShallowNet(2, budget, std::move(gamma), std::move(dirs), std::move(biases));
}

}  // namespace

ShallowNet relu2_monomial(Relu2Monomial kind) {
  switch (kind) {
    case Relu2Monomial::square:
      return make_net2({{1.0, 1.0, 0.0}, {1.0, -1.0, 0.0}}, 2.0);
    case Relu2Monomial::linear:
      return make_net2({{0.25, 1.0, 1.0},
                        {0.25, -1.0, -1.0},
                        {-0.25, 1.0, -1.0},
                        {-0.25, -1.0, 1.0}},
                       1.0);
    case Relu2Monomial::one:
      return make_net2({{0.5, 1.0, 1.0},
                        {0.5, -1.0, -1.0},
                        {0.5, 1.0, -1.0},
                        {0.5, -1.0, 1.0},
                        {-1.0, 1.0, 0.0},
                        {-1.0, -1.0, 0.0}},
                       4.0);
  }
  throw std::logic_error("relu2_monomial: unreachable");
}

ShallowNet relu2_integral_remainder(const std::function<double(double)>& phi, int grid_points) {
  if (grid_points < 2)
    throw std::invalid_argument("relu2_integral_remainder: grid_points >= 2 required");
  const int S = grid_points;
  std::vector<std::array<double, 3>> units;
  units.reserve(2 * S);
  double budget = 0.0;
  for (int j = 0; j < S; ++j) {
    const double s = (j + 0.5) / S;
    const double a_pos = phi(s) / S;
    const double a_neg = -phi(-s) / S;
    units.push_back({a_pos, 1.0, -s});
    units.push_back({a_neg, -1.0, -s});
    budget += std::fabs(a_pos) + std::fabs(a_neg);
  }
  return make_net2(units, budget);
}

}  // namespace ritznet
