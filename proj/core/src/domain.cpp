#include "ritznet/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ritznet/rng.hpp"

namespace ritznet {

Hypercube::Hypercube(int d) : dim(d) {
  if (d < 1) throw std::invalid_argument("Hypercube: dim >= 1 required");
}

SampleBatch sample_interior(const Hypercube& cube, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_interior: n >= 1 required");
  Rng rng(seed);
  SampleBatch batch;
  batch.seed = seed;
  batch.region = Region::interior;
  batch.points.resize(n, cube.dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < cube.dim; ++j) batch.points(i, j) = rng.uniform01();
  return batch;
}

SampleBatch sample_boundary(const Hypercube& cube, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_boundary: n >= 1 required");
  Rng rng(seed);
  SampleBatch batch;
  batch.seed = seed;
  batch.region = Region::boundary;
  batch.points.resize(n, cube.dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Face index in [0, 2d): axis = face/2, side = face%2. All faces have
    // equal (d-1)-measure 1, so uniform face choice matches U(boundary).
    const auto face = rng.below(static_cast<std::uint64_t>(2 * cube.dim));
    const int axis = static_cast<int>(face / 2);
    const double side = static_cast<double>(face % 2);
    for (int j = 0; j < cube.dim; ++j)
      batch.points(i, j) = (j == axis) ? side : rng.uniform01();
  }
  return batch;
}

void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: q >= 1 required");
  nodes.assign(q, 0.0);
  weights.assign(q, 0.0);
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_q from the Tricomi initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (q == 1) p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double p = (q == 1) ? x : p1;
      const double pm1 = (q == 1) ? 1.0 : p0;
      dp = q * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[q - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[q - 1 - i] = w;
  }
}

void composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel,
                              const std::vector<double>& breaks,
                              std::vector<double>& nodes, std::vector<double>& weights) {
  if (panels < 1 || nodes_per_panel < 1)
    throw std::invalid_argument("composite_gauss_legendre: positive panel counts required");
  std::vector<double> edges;
  edges.reserve(panels + 1 + breaks.size());
  for (int p = 0; p <= panels; ++p)
    edges.push_back(a + (b - a) * static_cast<double>(p) / panels);
  for (double br : breaks)
    if (br > a && br < b) edges.push_back(br);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double u, double v) { return std::fabs(u - v) < 1e-14; }),
              edges.end());

  std::vector<double> gx, gw;
  gauss_legendre(nodes_per_panel, gx, gw);

  nodes.clear();
  weights.clear();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p], hi = edges[p + 1];
    const double mid = 0.5 * (lo + hi), halfw = 0.5 * (hi - lo);
    for (int k = 0; k < nodes_per_panel; ++k) {
      nodes.push_back(mid + halfw * gx[k]);
      weights.push_back(halfw * gw[k]);
    }
  }
}

namespace {

QuadratureGrid tensor_from_axes(const std::vector<std::vector<double>>& xs,
                                const std::vector<std::vector<double>>& ws,
                                std::size_t max_points) {
  const int d = static_cast<int>(xs.size());
  std::size_t total = 1;
  for (const auto& x : xs) {
    total *= x.size();
    if (total > max_points)
      throw std::invalid_argument("tensor_quadrature: point budget exceeds cap");
  }
  QuadratureGrid grid;
  grid.nodes.resize(static_cast<Eigen::Index>(total), d);
  grid.weights.resize(static_cast<Eigen::Index>(total));
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t r = 0; r < total; ++r) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      grid.nodes(static_cast<Eigen::Index>(r), j) = xs[j][idx[j]];
      w *= ws[j][idx[j]];
    }
    grid.weights[static_cast<Eigen::Index>(r)] = w;
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < xs[j].size()) break;
      idx[j] = 0;
    }
  }
  return grid;
}

}  // namespace

QuadratureGrid tensor_quadrature_with_breaks(const Hypercube& cube, int nodes_per_axis,
                                             const std::vector<std::vector<double>>& axis_breaks,
                                             Region region, int panels_per_axis,
                                             std::size_t max_points) {
  if (nodes_per_axis < 1)
    throw std::invalid_argument("tensor_quadrature: nodes_per_axis >= 1 required");
  const int d = cube.dim;
  static const std::vector<double> no_breaks;
  auto breaks_for = [&](int axis) -> const std::vector<double>& {
    return axis < static_cast<int>(axis_breaks.size()) ? axis_breaks[axis] : no_breaks;
  };

  if (region == Region::interior) {
    std::vector<std::vector<double>> xs(d), ws(d);
    for (int j = 0; j < d; ++j)
      composite_gauss_legendre(0.0, 1.0, panels_per_axis, nodes_per_axis, breaks_for(j), xs[j],
                               ws[j]);
    QuadratureGrid grid = tensor_from_axes(xs, ws, max_points);
    grid.region = Region::interior;
    return grid;
  }

  // Boundary: one (d-1)-dimensional grid per face, weights scaled so the
  // total mass is |boundary| = 2d. In d = 1 the boundary is the two points.
  QuadratureGrid grid;
  grid.region = Region::boundary;
  if (d == 1) {
    grid.nodes.resize(2, 1);
    grid.nodes(0, 0) = 0.0;
    grid.nodes(1, 0) = 1.0;
    grid.weights.resize(2);
    grid.weights << 1.0, 1.0;
    return grid;
  }

  std::vector<Eigen::MatrixXd> face_nodes;
  std::vector<Eigen::VectorXd> face_weights;
  std::size_t total = 0;
  for (int axis = 0; axis < d; ++axis) {
    std::vector<std::vector<double>> xs, ws;
    for (int j = 0; j < d; ++j) {
      if (j == axis) continue;
      std::vector<double> x1, w1;
      composite_gauss_legendre(0.0, 1.0, panels_per_axis, nodes_per_axis, breaks_for(j), x1, w1);
      xs.push_back(std::move(x1));
      ws.push_back(std::move(w1));
    }
    const QuadratureGrid face = tensor_from_axes(xs, ws, max_points);
    for (int side = 0; side < 2; ++side) {
      Eigen::MatrixXd pts(face.size(), d);
      int col = 0;
      for (int j = 0; j < d; ++j) {
        if (j == axis) {
          pts.col(j).setConstant(static_cast<double>(side));
        } else {
          pts.col(j) = face.nodes.col(col++);
        }
      }
      face_nodes.push_back(std::move(pts));
      face_weights.push_back(face.weights);
      total += static_cast<std::size_t>(face.size());
      if (total > max_points)
        throw std::invalid_argument("tensor_quadrature: point budget exceeds cap");
    }
  }
  grid.nodes.resize(static_cast<Eigen::Index>(total), d);
  grid.weights.resize(static_cast<Eigen::Index>(total));
  Eigen::Index row = 0;
  for (std::size_t fidx = 0; fidx < face_nodes.size(); ++fidx) {
    const Eigen::Index fn = face_nodes[fidx].rows();
    grid.nodes.middleRows(row, fn) = face_nodes[fidx];
    grid.weights.segment(row, fn) = face_weights[fidx];
    row += fn;
  }
  return grid;
}

QuadratureGrid tensor_quadrature(const Hypercube& cube, int nodes_per_axis, Region region,
                                 int panels_per_axis, std::size_t max_points) {
  return tensor_quadrature_with_breaks(cube, nodes_per_axis, {}, region, panels_per_axis,
                                       max_points);
}

}  // namespace ritznet
