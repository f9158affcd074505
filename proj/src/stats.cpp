#include "empirica/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "empirica/error.hpp"
#include "empirica/parallel.hpp"

namespace empirica {

namespace {

double corrected_p(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  // Below ~0.2 the alternating series converges slowly and Q is 1 to
  // double precision.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) fail(ErrorCode::kEmptySample, "KS test of an empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, corrected_p(d, n)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::kEmptySample, "KS test of an empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return {d, corrected_p(d, n * m / (n + m))};
}

ChiSquareResult chi_square_counts(std::span<const long> observations,
                                  const std::function<double(long)>& pmf, double min_expected) {
  if (observations.empty()) fail(ErrorCode::kEmptySample, "chi-square of an empty sample");
  const double total = static_cast<double>(observations.size());
  long top = *std::max_element(observations.begin(), observations.end());
  if (*std::min_element(observations.begin(), observations.end()) < 0)
    fail(ErrorCode::kInvalidArgument, "chi-square counts must be nonnegative");

  // Cells 0..top, the last one later widened to the whole upper tail.
  std::vector<double> observed(static_cast<std::size_t>(top) + 1, 0.0);
  for (long v : observations) observed[static_cast<std::size_t>(v)] += 1.0;
  std::vector<double> expected(observed.size());
  double covered = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    expected[k] = total * pmf(static_cast<long>(k));
    covered += expected[k];
  }
  expected.back() += std::max(0.0, total - covered);

  while (expected.size() > 1 && expected.back() < min_expected) {
    const double e = expected.back(), o = observed.back();
    expected.pop_back();
    observed.pop_back();
    expected.back() += e;
    observed.back() += o;
  }
  // Pool sparse cells on the left into their right neighbour.
  std::vector<double> eo, oo;
  double carry_e = 0.0, carry_o = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    carry_e += expected[k];
    carry_o += observed[k];
    if (carry_e >= min_expected || k + 1 == expected.size()) {
      eo.push_back(carry_e);
      oo.push_back(carry_o);
      carry_e = carry_o = 0.0;
    }
  }
  if (eo.size() > 1 && eo.back() < min_expected) {
    eo[eo.size() - 2] += eo.back();
    oo[oo.size() - 2] += oo.back();
    eo.pop_back();
    oo.pop_back();
  }

  ChiSquareResult r;
  r.bins = eo.size();
  for (std::size_t k = 0; k < eo.size(); ++k) r.statistic += (oo[k] - eo[k]) * (oo[k] - eo[k]) / eo[k];
  r.dof = static_cast<double>(eo.size()) - 1.0;
  r.p_value = r.dof > 0.0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic) : 1.0;
  return r;
}

double tv_binomial_poisson(unsigned n, double p, double mean) {
  const boost::math::binomial_distribution<double> bin(n, p);
  const boost::math::poisson_distribution<double> poi(mean);
  double sum = 0.0;
  for (unsigned k = 0; k <= n; ++k)
    sum += std::abs(boost::math::pdf(bin, k) - boost::math::pdf(poi, k));
  sum += boost::math::cdf(boost::math::complement(poi, static_cast<double>(n)));
  return 0.5 * sum;
}

double mean(std::span<const double> v) {
  if (v.empty()) fail(ErrorCode::kEmptySample, "mean of an empty sample");
  return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) fail(ErrorCode::kEmptySample, "variance needs two values");
  const double mu = mean(v);
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mu) * (v[i] - mu);
  return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

double variance_se(std::span<const double> v) {
  const double mu = mean(v);
  std::vector<double> sq(v.size()), quad(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = (v[i] - mu) * (v[i] - mu);
    sq[i] = d;
    quad[i] = d * d;
  }
  const double m = static_cast<double>(v.size());
  const double m2 = pairwise_sum(sq) / m;
  const double m4 = pairwise_sum(quad) / m;
  return std::sqrt(std::max(0.0, m4 - m2 * m2) / m);
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    fail(ErrorCode::kInvalidArgument, "correlation needs two equal-length samples");
  const double ma = mean(a), mb = mean(b);
  std::vector<double> xy(a.size()), xx(a.size()), yy(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    xy[i] = (a[i] - ma) * (b[i] - mb);
    xx[i] = (a[i] - ma) * (a[i] - ma);
    yy[i] = (b[i] - mb) * (b[i] - mb);
  }
  const double denom = std::sqrt(pairwise_sum(xx) * pairwise_sum(yy));
  return denom > 0.0 ? pairwise_sum(xy) / denom : 0.0;
}

}  // namespace empirica
