#pragma once

#include <functional>
#include <optional>

#include "ritznet/domain.hpp"
#include "ritznet/problems.hpp"
#include "ritznet/shallow_net.hpp"

namespace ritznet {

enum class LossKind { drm_poisson, drm_schrodinger, pinn };

LossKind default_loss_for(const PdeProblem& problem);

/// Interior + boundary samples for the PINN loss. n() = min(N1, N2).
struct PinnBatch {
  SampleBatch interior;
  SampleBatch boundary;

  Eigen::Index n() const { return std::min(interior.size(), boundary.size()); }
};

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

/// (1/n) sum(|grad u|^2 - 2 f u) + ((1/n) sum u)^2. Per-sample terms are
/// reduced by fixed-order pairwise summation, so the value is bit-stable.
double drm_poisson_empirical(const Field& u, const SampleBatch& batch, const ScalarFn& f);

/// integral |grad u|^2 + (integral u)^2 - 2 integral f u, via quadrature.
double drm_poisson_population(const Field& u, const PdeProblem& problem,
                              const QuadratureGrid& grid);

/// (1/n) sum(|grad u|^2 + V |u|^2 - 2 f u).
double drm_schrodinger_empirical(const Field& u, const SampleBatch& batch, const ScalarFn& f,
                                 const ScalarFn& V);

double drm_schrodinger_population(const Field& u, const PdeProblem& problem,
                                  const QuadratureGrid& grid);

/// (|O|/N1) sum residual^2 + (|dO|/N2) sum (u - g)^2 with residual
/// -sum a_ij d_ij u + sum b_i d_i u + c u - f. Requires a field with second
/// derivatives (order-2 networks).
double pinn_empirical(const Field& u, const PinnBatch& batch, const PdeProblem& problem);

double pinn_population(const Field& u, const PdeProblem& problem,
                       const QuadratureGrid& interior_grid, const QuadratureGrid& boundary_grid);

/// Empirical loss dispatcher; `boundary` is required for the pinn kind.
double empirical_loss(LossKind kind, const Field& u, const SampleBatch& interior,
                      const SampleBatch* boundary, const PdeProblem& problem);

/// Population loss dispatcher; `boundary_grid` is required for the pinn kind.
double population_loss(LossKind kind, const Field& u, const PdeProblem& problem,
                       const QuadratureGrid& interior_grid,
                       const QuadratureGrid* boundary_grid = nullptr);

/// Exact parameter gradient of the empirical loss under the subgradient
/// convention (indicators treated as locally constant). The Poisson square
/// term ((1/n) sum u)^2 couples all samples; its gradient is accumulated as
/// 2 (P_n u) * (1/n) sum du/dparams, so per-sample contributions are not
/// independent for that kind.
ParamCotangent loss_gradient(LossKind kind, const ShallowNet& net, const SampleBatch& interior,
                             const SampleBatch* boundary, const PdeProblem& problem);

/// Population loss at u minus population loss at the exact solution. For the
/// pinn kind the boundary grid must be supplied.
double energy_excess(const Field& u, const PdeProblem& problem, const QuadratureGrid& grid,
                     const QuadratureGrid* boundary_grid = nullptr,
                     std::optional<LossKind> kind = std::nullopt);

}  // namespace ritznet
