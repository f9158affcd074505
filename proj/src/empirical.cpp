#include "empirica/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "empirica/error.hpp"

namespace empirica {

EmpiricalCdf::EmpiricalCdf(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) fail(ErrorCode::kEmptySample, "empirical cdf of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t EmpiricalCdf::count_le(double t) const {
  return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), t) -
                                  sorted_.begin());
}

std::size_t EmpiricalCdf::count_lt(double t) const {
  return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), t) -
                                  sorted_.begin());
}

double EmpiricalCdf::eval(double t) const {
  return static_cast<double>(count_le(t)) / static_cast<double>(n());
}

double EmpiricalCdf::left_limit(double t) const {
  return static_cast<double>(count_lt(t)) / static_cast<double>(n());
}

CadlagStep EmpiricalCdf::path() const {
  const double inv_n = 1.0 / static_cast<double>(n());
  std::vector<double> times, sizes;
  for (std::size_t i = 0; i < sorted_.size();) {
    std::size_t j = i;
    while (j < sorted_.size() && sorted_[j] == sorted_[i]) ++j;
    times.push_back(sorted_[i]);
    sizes.push_back(static_cast<double>(j - i) * inv_n);
    i = j;
  }
  return CadlagStep(0.0, std::move(times), std::move(sizes));
}

AlphaProcess::AlphaProcess(EmpiricalCdf ecdf, CdfPtr cdf)
    : ecdf_(std::move(ecdf)),
      cdf_(std::move(cdf)),
      root_n_(std::sqrt(static_cast<double>(ecdf_.n()))) {
  if (!cdf_) fail(ErrorCode::kInvalidArgument, "alpha process needs a distribution");
}

double AlphaProcess::eval(double t) const {
  return root_n_ * (ecdf_.eval(t) - cdf_->eval(t));
}

BetaProcess::BetaProcess(std::vector<double> sample, double tau, std::size_t n)
    : sample_(std::move(sample)), tau_(tau), n_(n) {
  if (n_ != sample_.size() || n_ == 0)
    fail(ErrorCode::kInvalidArgument, "beta process: n must equal the (nonzero) sample size");
  const double scale = static_cast<double>(n_);
  std::vector<std::pair<double, double>> jumps;
  jumps.reserve(sample_.size());
  double below = 0.0;
  for (double x : sample_) {
    if (x == tau_) continue;
    if (x < tau_) below += 1.0;
    jumps.emplace_back(scale * (x - tau_), 1.0);
  }
  path_ = CadlagStep::from_jumps(-below, std::move(jumps));
}

double BetaProcess::eval(double t) const {
  const double edge = tau_ + t / static_cast<double>(n_);
  std::size_t count = 0;
  if (t >= 0.0) {
    for (double x : sample_) count += (x > tau_ && x <= edge) ? 1 : 0;
    return static_cast<double>(count);
  }
  for (double x : sample_) count += (x > edge && x < tau_) ? 1 : 0;
  return -static_cast<double>(count);
}

AlphaProcess make_alpha(std::vector<double> sample, CdfPtr cdf) {
  return AlphaProcess(EmpiricalCdf(std::move(sample)), std::move(cdf));
}

BetaProcess make_beta(std::vector<double> sample, double tau, std::size_t n) {
  return BetaProcess(std::move(sample), tau, n);
}

void check_increasing(std::span<const double> times) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      fail(ErrorCode::kInvalidArgument, "fidi time points must be strictly increasing");
}

}  // namespace empirica
