#include "ritznet/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ritznet/stats.hpp"

namespace ritznet {

LossKind default_loss_for(const PdeProblem& problem) {
  switch (problem.family) {
    case ProblemFamily::poisson:
      return LossKind::drm_poisson;
    case ProblemFamily::schrodinger:
      return LossKind::drm_schrodinger;
    case ProblemFamily::elliptic_dirichlet:
      return LossKind::pinn;
  }
  throw std::logic_error("default_loss_for: unreachable");
}

namespace {

void require_nonempty(const SampleBatch& batch, const char* who) {
  if (batch.size() < 1) throw std::invalid_argument(std::string(who) + ": empty batch");
}

}  // namespace

double drm_poisson_empirical(const Field& u, const SampleBatch& batch, const ScalarFn& f) {
  require_nonempty(batch, "drm_poisson_empirical");
  const Eigen::Index n = batch.size();
  std::vector<double> terms(n), values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = batch.points.row(i);
    const double v = u.value(x);
    values[i] = v;
    terms[i] = u.gradient(x).squaredNorm() - 2.0 * f(x) * v;
  }
  const double mean_term = pairwise_sum(terms) / n;
  const double mean_u = pairwise_sum(values) / n;
  return mean_term + mean_u * mean_u;
}

double drm_poisson_population(const Field& u, const PdeProblem& problem,
                              const QuadratureGrid& grid) {
  const Eigen::Index q = grid.size();
  std::vector<double> terms(q), values(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const Eigen::VectorXd x = grid.nodes.row(i);
    const double v = u.value(x);
    values[i] = grid.weights[i] * v;
    terms[i] = grid.weights[i] * (u.gradient(x).squaredNorm() - 2.0 * problem.f(x) * v);
  }
  const double mean_u = pairwise_sum(values);
  return pairwise_sum(terms) + mean_u * mean_u;
}

double drm_schrodinger_empirical(const Field& u, const SampleBatch& batch, const ScalarFn& f,
                                 const ScalarFn& V) {
  require_nonempty(batch, "drm_schrodinger_empirical");
  const Eigen::Index n = batch.size();
  std::vector<double> terms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = batch.points.row(i);
    const double v = u.value(x);
    terms[i] = u.gradient(x).squaredNorm() + V(x) * v * v - 2.0 * f(x) * v;
  }
  return pairwise_sum(terms) / n;
}

double drm_schrodinger_population(const Field& u, const PdeProblem& problem,
                                  const QuadratureGrid& grid) {
  const Eigen::Index q = grid.size();
  std::vector<double> terms(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const Eigen::VectorXd x = grid.nodes.row(i);
    const double v = u.value(x);
    terms[i] = grid.weights[i] *
               (u.gradient(x).squaredNorm() + problem.potential(x) * v * v -
                2.0 * problem.f(x) * v);
  }
  return pairwise_sum(terms);
}

namespace {

// The PINN residual needs second derivatives; a ReLU network's Hessian is
// zero a.e. and would silently drop the operator term.
void require_order_two(const Field& u, const char* who) {
  if (const auto* net = dynamic_cast<const ShallowNet*>(&u); net && net->order() != 2)
    throw std::invalid_argument(std::string(who) + ": order-2 network required");
}

}  // namespace

double pinn_empirical(const Field& u, const PinnBatch& batch, const PdeProblem& problem) {
  require_nonempty(batch.interior, "pinn_empirical(interior)");
  require_nonempty(batch.boundary, "pinn_empirical(boundary)");
  require_order_two(u, "pinn_empirical");
  const Eigen::Index n1 = batch.interior.size();
  const Eigen::Index n2 = batch.boundary.size();
  const double interior_measure = 1.0;
  const double boundary_measure = 2.0 * problem.dim;

  std::vector<double> interior_terms(n1);
  for (Eigen::Index i = 0; i < n1; ++i) {
    const double r = pde_residual(problem, u, batch.interior.points.row(i));
    interior_terms[i] = r * r;
  }
  std::vector<double> boundary_terms(n2);
  for (Eigen::Index i = 0; i < n2; ++i) {
    const Eigen::VectorXd y = batch.boundary.points.row(i);
    const double mismatch = u.value(y) - problem.boundary_value(y);
    boundary_terms[i] = mismatch * mismatch;
  }
  return interior_measure / n1 * pairwise_sum(interior_terms) +
         boundary_measure / n2 * pairwise_sum(boundary_terms);
}

double pinn_population(const Field& u, const PdeProblem& problem,
                       const QuadratureGrid& interior_grid, const QuadratureGrid& boundary_grid) {
  require_order_two(u, "pinn_population");
  std::vector<double> terms(interior_grid.size());
  for (Eigen::Index i = 0; i < interior_grid.size(); ++i) {
    const double r = pde_residual(problem, u, interior_grid.nodes.row(i));
    terms[i] = interior_grid.weights[i] * r * r;
  }
  std::vector<double> bterms(boundary_grid.size());
  for (Eigen::Index i = 0; i < boundary_grid.size(); ++i) {
    const Eigen::VectorXd y = boundary_grid.nodes.row(i);
    const double mismatch = u.value(y) - problem.boundary_value(y);
    bterms[i] = boundary_grid.weights[i] * mismatch * mismatch;
  }
  return pairwise_sum(terms) + pairwise_sum(bterms);
}

double empirical_loss(LossKind kind, const Field& u, const SampleBatch& interior,
                      const SampleBatch* boundary, const PdeProblem& problem) {
  switch (kind) {
    case LossKind::drm_poisson:
      return drm_poisson_empirical(u, interior, problem.f);
    case LossKind::drm_schrodinger:
      if (!problem.potential)
        throw std::invalid_argument("empirical_loss: problem has no potential");
      return drm_schrodinger_empirical(u, interior, problem.f, problem.potential);
    case LossKind::pinn: {
      if (!boundary) throw std::invalid_argument("empirical_loss: pinn needs a boundary batch");
      return pinn_empirical(u, PinnBatch{interior, *boundary}, problem);
    }
  }
  throw std::logic_error("empirical_loss: unreachable");
}

double population_loss(LossKind kind, const Field& u, const PdeProblem& problem,
                       const QuadratureGrid& interior_grid,
                       const QuadratureGrid* boundary_grid) {
  switch (kind) {
    case LossKind::drm_poisson:
      return drm_poisson_population(u, problem, interior_grid);
    case LossKind::drm_schrodinger:
      return drm_schrodinger_population(u, problem, interior_grid);
    case LossKind::pinn:
      if (!boundary_grid)
        throw std::invalid_argument("population_loss: pinn needs a boundary grid");
      return pinn_population(u, problem, interior_grid, *boundary_grid);
  }
  throw std::logic_error("population_loss: unreachable");
}

ParamCotangent loss_gradient(LossKind kind, const ShallowNet& net, const SampleBatch& interior,
                             const SampleBatch* boundary, const PdeProblem& problem) {
  require_nonempty(interior, "loss_gradient");
  const Eigen::Index n = interior.size();
  ParamCotangent acc = ParamCotangent::zero(net.width(), net.dim());

  switch (kind) {
    case LossKind::drm_poisson: {
      // First pass for the coupled square term 2 (P_n u) (1/n) sum du/dp.
      std::vector<double> values(n);
      for (Eigen::Index i = 0; i < n; ++i) values[i] = net.value(interior.points.row(i));
      const double mean_u = pairwise_sum(values) / n;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd x = interior.points.row(i);
        const double cot_value = (-2.0 * problem.f(x) + 2.0 * mean_u) / n;
        const Eigen::VectorXd cot_grad = 2.0 / n * net.gradient(x);
        acc += net.backprop(x, cot_value, cot_grad);
      }
      return acc;
    }
    case LossKind::drm_schrodinger: {
      if (!problem.potential)
        throw std::invalid_argument("loss_gradient: problem has no potential");
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd x = interior.points.row(i);
        const double cot_value =
            (2.0 * problem.potential(x) * net.value(x) - 2.0 * problem.f(x)) / n;
        const Eigen::VectorXd cot_grad = 2.0 / n * net.gradient(x);
        acc += net.backprop(x, cot_value, cot_grad);
      }
      return acc;
    }
    case LossKind::pinn: {
      if (!boundary) throw std::invalid_argument("loss_gradient: pinn needs a boundary batch");
      require_nonempty(*boundary, "loss_gradient(boundary)");
      if (net.order() != 2)
        throw std::invalid_argument("loss_gradient: pinn requires an order-2 network");
      const Eigen::Index n2 = boundary->size();
      const double wi = 1.0 / n;               // |O| = 1
      const double wb = 2.0 * problem.dim / n2;  // |dO| = 2d
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd x = interior.points.row(i);
        const double r = pde_residual(problem, net, x);
        const double scale = 2.0 * r * wi;
        const EllipticCoefficients coeff = elliptic_coefficients(problem, x);
        const double cot_value = scale * coeff.c;
        const Eigen::VectorXd cot_grad = scale * coeff.b;
        const Eigen::MatrixXd cot_hess = -scale * coeff.a;
        acc += net.backprop(x, cot_value, cot_grad, &cot_hess);
      }
      for (Eigen::Index i = 0; i < n2; ++i) {
        const Eigen::VectorXd y = boundary->points.row(i);
        const double mismatch = net.value(y) - problem.boundary_value(y);
        acc += net.backprop(y, 2.0 * mismatch * wb, Eigen::VectorXd());
      }
      return acc;
    }
  }
  throw std::logic_error("loss_gradient: unreachable");
}

double energy_excess(const Field& u, const PdeProblem& problem, const QuadratureGrid& grid,
                     const QuadratureGrid* boundary_grid, std::optional<LossKind> kind) {
  const LossKind k = kind.value_or(default_loss_for(problem));
  const double at_u = population_loss(k, u, problem, grid, boundary_grid);
  const double at_star = population_loss(k, *problem.exact, problem, grid, boundary_grid);
  return at_u - at_star;
}

}  // namespace ritznet
