#include "empirica/limits.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/distributions/poisson.hpp>

#include "empirica/error.hpp"

namespace empirica {

std::vector<double> bridge_covariance(const Cdf& f, std::span<const double> times) {
  const std::size_t k = times.size();
  std::vector<double> cov(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double v = f.eval(times[i]) * (1.0 - f.eval(times[j]));
      cov[i * k + j] = v;
      cov[j * k + i] = v;
    }
  }
  return cov;
}

BridgeSampler::BridgeSampler(const Cdf& f, std::vector<double> times) : times_(std::move(times)) {
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      fail(ErrorCode::kInvalidArgument, "bridge times must be strictly increasing");

  std::vector<double> levels;
  slot_.assign(times_.size(), -1);
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double u = f.eval(times_[i]);
    if (u <= 0.0 || u >= 1.0) continue;
    if (levels.empty() || levels.back() != u) levels.push_back(u);
    slot_[i] = static_cast<int>(levels.size() - 1);
  }
  dim_ = levels.size();
  if (dim_ == 0) return;

  Eigen::MatrixXd cov(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) cov(i, j) = cov(j, i) = levels[i] * (1.0 - levels[j]);

  Eigen::MatrixXd lower;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    lower = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success)
      fail(ErrorCode::kFactorizationFailure, "eigen-decomposition of bridge covariance failed");
    Eigen::VectorXd values = eig.eigenvalues();
    const double floor = -1e-12 * cov.trace();
    if (values.minCoeff() < floor)
      fail(ErrorCode::kFactorizationFailure, "bridge covariance is indefinite beyond tolerance");
    values = values.cwiseMax(0.0);
    lower = eig.eigenvectors() * values.cwiseSqrt().asDiagonal();
    repaired_ = true;
  }
  factor_.resize(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) factor_[i * dim_ + j] = lower(i, j);
}

std::vector<double> BridgeSampler::draw(Stream& stream) const {
  std::vector<double> z(dim_);
  for (auto& v : z) v = stream.normal();
  std::vector<double> level(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += factor_[i * dim_ + j] * z[j];
    level[i] = s;
  }
  std::vector<double> out(times_.size(), 0.0);
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (slot_[i] >= 0) out[i] = level[static_cast<std::size_t>(slot_[i])];
  return out;
}

std::vector<double> sample_bridge_fidi(const Cdf& f, std::span<const double> times,
                                       Stream& stream) {
  return BridgeSampler(f, {times.begin(), times.end()}).draw(stream);
}

TwoSidedPoissonPath::TwoSidedPoissonPath(C1Derivatives rates, double horizon,
                                         std::vector<double> left_arrivals,
                                         std::vector<double> right_arrivals)
    : rates_(rates), horizon_(horizon), left_(std::move(left_arrivals)),
      right_(std::move(right_arrivals)) {
  if (!(horizon_ > 0.0)) fail(ErrorCode::kInvalidArgument, "horizon must be positive");
  if (rates_.rho1 < 0.0 || rates_.rho2 < 0.0)
    fail(ErrorCode::kInvalidArgument, "Poisson rates must be nonnegative");
  auto trim = [&](std::vector<double>& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] > 0.0) || (i > 0 && !(a[i] > a[i - 1])))
        fail(ErrorCode::kInvalidArgument, "arrival distances must be positive and increasing");
    }
    a.erase(std::upper_bound(a.begin(), a.end(), horizon_), a.end());
  };
  trim(left_);
  trim(right_);

  std::vector<double> times;
  times.reserve(left_.size() + right_.size());
  for (auto it = left_.rbegin(); it != left_.rend(); ++it) times.push_back(-*it);
  times.insert(times.end(), right_.begin(), right_.end());
  path_ = CadlagStep(-static_cast<double>(left_.size()), std::move(times),
                     std::vector<double>(left_.size() + right_.size(), 1.0));
}

double TwoSidedPoissonPath::eval(double t) const { return path_.eval(t); }

CadlagStep TwoSidedPoissonPath::right_path() const {
  return CadlagStep(0.0, right_, std::vector<double>(right_.size(), 1.0));
}

std::vector<double> poisson_arrivals(double rate, double horizon, Stream& stream) {
  std::vector<double> out;
  if (!(rate > 0.0)) return out;
  double t = 0.0;
  for (;;) {
    t += stream.exponential(rate);
    if (t > horizon) break;
    out.push_back(t);
  }
  return out;
}

TwoSidedPoissonPath sample_n0_path(const C1Derivatives& d, double horizon, Stream& stream) {
  if (!(horizon > 0.0)) fail(ErrorCode::kInvalidArgument, "horizon must be positive");
  Stream left = stream.substream("poisson-left");
  Stream right = stream.substream("poisson-right");
  auto a = poisson_arrivals(d.rho1, horizon, left);
  auto b = poisson_arrivals(d.rho2, horizon, right);
  return TwoSidedPoissonPath(d, horizon, std::move(a), std::move(b));
}

N0Marginal::N0Marginal(const C1Derivatives& d, double t)
    : rate_(t >= 0.0 ? d.rho2 * t : d.rho1 * -t), sign_(t >= 0.0 ? 1 : -1) {
  if (!(rate_ >= 0.0) || !std::isfinite(rate_))
    fail(ErrorCode::kInvalidArgument, "Poisson mean must be finite and nonnegative");
}

double N0Marginal::pmf(long k) const {
  const long j = sign_ * k;
  if (j < 0) return 0.0;
  if (rate_ == 0.0) return j == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<double>(rate_),
                          static_cast<double>(j));
}

N0Marginal n0_fidi_law(const C1Derivatives& d, double t) { return N0Marginal(d, t); }

}  // namespace empirica
