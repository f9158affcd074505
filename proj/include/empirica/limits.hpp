#pragma once

#include <span>
#include <vector>

#include "empirica/cadlag.hpp"
#include "empirica/dists.hpp"
#include "empirica/rng.hpp"

namespace empirica {

/// Covariance F(t_i)(1 - F(t_j)), i <= j, of B_0 o F at increasing times.
/// Row-major k x k.
std::vector<double> bridge_covariance(const Cdf& f, std::span<const double> times);

/// Square-root factor of the bridge covariance, built once and reused for
/// many draws. Coordinates with F(t) in {0, 1} are identically zero and
/// coordinates with equal F(t) share one draw, so the factored block is
/// positive definite in exact arithmetic. If the Cholesky factorization still
/// fails, negative eigenvalues above -1e-12 * trace are clipped to zero and
/// repaired() reports it; anything more negative throws
/// kFactorizationFailure.
class BridgeSampler {
 public:
  BridgeSampler(const Cdf& f, std::vector<double> times);

  /// One draw of (B_1(t_1), ..., B_1(t_k)). Consumes one standard normal per
  /// distinct interior level of F.
  std::vector<double> draw(Stream& stream) const;

  std::span<const double> times() const { return times_; }
  bool repaired() const { return repaired_; }

 private:
  std::vector<double> times_;
  std::vector<int> slot_;        // coordinate -> factored index, -1 for zero
  std::size_t dim_ = 0;
  std::vector<double> factor_;   // lower-triangular, row-major dim x dim
  bool repaired_ = false;
};

std::vector<double> sample_bridge_fidi(const Cdf& f, std::span<const double> times,
                                       Stream& stream);

/// Path of the two-sided Poisson process on [-T, T]:
///
///   N_0(t) = N_2(t)      for t >= 0,
///   N_0(t) = -N_1(-t)    for t <  0,
///
/// where N_2 is right-continuous and N_1 left-continuous. With left arrivals
/// at distances a_1 < a_2 < ..., N_0(t) = -#{a_i < -t} for t < 0, so N_0 is
/// right-continuous on the whole line and jumps +1 at every -a_i.
class TwoSidedPoissonPath {
 public:
  /// Arrivals are distances from 0, increasing, in (0, T]; larger ones are
  /// dropped.
  TwoSidedPoissonPath(C1Derivatives rates, double horizon, std::vector<double> left_arrivals,
                      std::vector<double> right_arrivals);

  /// Valid for t in [-T, T].
  double eval(double t) const;
  double left_limit(double t) const { return path_.left_limit(t); }
  /// Whole path as a step function (exact on [-T, T]).
  const CadlagStep& path() const { return path_; }
  /// N_2 alone: base 0, +1 at each right arrival.
  CadlagStep right_path() const;

  double horizon() const { return horizon_; }
  const C1Derivatives& rates() const { return rates_; }
  std::span<const double> left_arrivals() const { return left_; }
  std::span<const double> right_arrivals() const { return right_; }

 private:
  C1Derivatives rates_;
  double horizon_;
  std::vector<double> left_;
  std::vector<double> right_;
  CadlagStep path_;
};

/// Arrival distances in (0, T] of a homogeneous Poisson process of `rate`
/// built from exponential spacings. Rate 0 gives no arrivals.
std::vector<double> poisson_arrivals(double rate, double horizon, Stream& stream);

/// Left side from substream "poisson-left" (rate rho1), right side from
/// "poisson-right" (rate rho2).
TwoSidedPoissonPath sample_n0_path(const C1Derivatives& d, double horizon, Stream& stream);

/// Marginal law of N_0(t): Poisson(rho2 t) on {0, 1, ...} for t >= 0,
/// Poisson(rho1 |t|) mirrored onto {0, -1, ...} for t < 0.
class N0Marginal {
 public:
  N0Marginal(const C1Derivatives& d, double t);

  double pmf(long k) const;
  double mean() const { return sign_ * rate_; }
  double poisson_mean() const { return rate_; }
  int sign() const { return sign_; }

 private:
  double rate_;
  int sign_;
};

N0Marginal n0_fidi_law(const C1Derivatives& d, double t);

}  // namespace empirica
