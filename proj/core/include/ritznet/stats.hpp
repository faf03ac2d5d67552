#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ritznet {

/// Deterministic pairwise summation. The reduction tree depends only on the
/// element order, so results are bit-stable no matter how the terms were
/// produced.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

/// Sample standard deviation (n-1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int dof = 0;              // n - 2
  double t_statistic = 0.0; // slope / slope_stderr
  /// One-sided p-values for the slope sign.
  double p_slope_negative = 1.0;
  double p_slope_positive = 1.0;
};

/// Ordinary least squares y = a + b x with the usual normal-theory standard
/// error on b. Requires at least 3 points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

/// CDF of Student's t with `dof` degrees of freedom.
double student_t_cdf(double t, int dof);

/// Upper tail of the chi-squared distribution with `dof` degrees of freedom.
double chi2_sf(double x, int dof);

/// Pearson chi-squared goodness-of-fit p-value for observed counts against
/// equal expected frequencies.
double chi2_uniform_pvalue(std::span<const std::size_t> counts);

}  // namespace ritznet
