#include <doctest.h>

#include <cmath>
#include <vector>

#include "ritznet/stats.hpp"

using namespace ritznet;

TEST_CASE("pairwise_sum matches plain summation and is order-deterministic") {
  std::vector<double> v;
  double plain = 0.0;
  for (int i = 0; i < 1000; ++i) {
    v.push_back(std::sin(i) * 1e-3);
    plain += v.back();
  }
  CHECK(pairwise_sum(v) == doctest::Approx(plain).epsilon(1e-12));
  CHECK(pairwise_sum(v) == pairwise_sum(v));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("fit_line recovers an exact line with zero residual") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double xi : x) y.push_back(3.0 - 2.0 * xi);
  const LinearFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.p_slope_negative == 0.0);
}

TEST_CASE("fit_line standard error against a hand-computed case") {
  // y = x with one bumped point; RSS and s_b computed by hand.
  std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  std::vector<double> y{0.0, 1.0, 2.0, 4.0};
  const LinearFit fit = fit_line(x, y);
  // slope = Sxy/Sxx = 6.5/5, intercept = 1.75 - 1.3*1.5.
  CHECK(fit.slope == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-0.2).epsilon(1e-12));
  // residuals: 0.2, -0.1, -0.4, 0.3 -> RSS = 0.3; s_b^2 = (0.3/2)/5.
  CHECK(fit.slope_stderr == doctest::Approx(std::sqrt(0.15 / 5.0)).epsilon(1e-12));
}

TEST_CASE("student t CDF matches known quantiles") {
  // t_{1} is Cauchy: CDF(1) = 3/4.
  CHECK(student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
  // one-sided 5% quantile of t_1 = 6.3137515...
  CHECK(student_t_cdf(6.313751514675043, 1) == doctest::Approx(0.95).epsilon(1e-9));
  // t_5 at 2.015048 is 0.95 (standard table value).
  CHECK(student_t_cdf(2.0150483726673513, 5) == doctest::Approx(0.95).epsilon(1e-7));
  CHECK(student_t_cdf(0.0, 7) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("chi-squared survival function against table values") {
  // P(chi2_3 > 7.814727903) = 0.05.
  CHECK(chi2_sf(7.814727903251179, 3) == doctest::Approx(0.05).epsilon(1e-8));
  CHECK(chi2_sf(0.0, 4) == 1.0);
  // chi2_2 upper tail is exp(-x/2).
  CHECK(chi2_sf(5.0, 2) == doctest::Approx(std::exp(-2.5)).epsilon(1e-10));
}

TEST_CASE("chi2 uniformity p-value flags grossly non-uniform counts") {
  std::vector<std::size_t> uniform{250, 251, 249, 250};
  CHECK(chi2_uniform_pvalue(uniform) > 0.9);
  std::vector<std::size_t> skewed{900, 40, 30, 30};
  CHECK(chi2_uniform_pvalue(skewed) < 1e-6);
}
