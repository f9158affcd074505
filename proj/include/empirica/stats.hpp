#pragma once

#include <functional>
#include <span>
#include <vector>

namespace empirica {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

/// One-sample KS against a continuous cdf. Asymptotic p-value with the
/// Stephens small-sample correction (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Two-sample KS; ties across samples are handled by stepping over equal
/// values together. Same correction with the effective size nm/(n+m).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Pearson chi-square of integer counts against pmf on {0, 1, ...}. Adjacent
/// cells are pooled from the right until every expected count is at least
/// `min_expected`; the last cell collects the upper tail.
ChiSquareResult chi_square_counts(std::span<const long> observations,
                                  const std::function<double(long)>& pmf,
                                  double min_expected = 5.0);

/// Total variation between Binomial(n, p) and Poisson(mean), exact up to
/// the Poisson tail beyond n (added in closed form).
double tv_binomial_poisson(unsigned n, double p, double mean);

double mean(std::span<const double> v);
/// Unbiased sample variance.
double variance(std::span<const double> v);
double correlation(std::span<const double> a, std::span<const double> b);

/// Monte Carlo standard error of the sample variance, sqrt((m4 - s^4)/M),
/// from central moments.
double variance_se(std::span<const double> v);

}  // namespace empirica
