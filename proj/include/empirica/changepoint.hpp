#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "empirica/config.hpp"
#include "empirica/dists.hpp"
#include "empirica/limits.hpp"
#include "empirica/report.hpp"
#include "empirica/rng.hpp"

namespace empirica {

/// Polygonal cdf through (0,0), (tau,gamma), (1,1); tau != gamma.
class ChangePointModel {
 public:
  ChangePointModel(double tau, double gamma);

  double tau() const { return tau_; }
  double gamma() const { return gamma_; }
  double rho1() const { return gamma_ / tau_; }
  double rho2() const { return (1.0 - gamma_) / (1.0 - tau_); }
  C1Derivatives rates() const { return {rho1(), rho2(), tau_}; }
  /// sign(gamma - tau).
  int drift_sign() const { return gamma_ > tau_ ? 1 : -1; }
  /// 50 / min(|1 - rho1|, |1 - rho2|, 1).
  double default_horizon() const;
  CdfPtr cdf() const { return cdf_; }

 private:
  double tau_;
  double gamma_;
  CdfPtr cdf_;
};

/// Ties among argmax candidates closer than this count as equal.
inline constexpr double kArgmaxTieTolerance = 1e-12;

struct EstimatePair {
  double tau_hat = 0.0;
  double gamma_hat = 0.0;
  std::size_t n = 0;
  double achieved = 0.0;      // sup over [0,1] of |F_n(t) - t|
  bool from_left_limit = false;  // sup approached from the left at tau_hat
  std::size_t ties = 0;       // candidates within the tie tolerance
};

/// tau_hat = argmax over t in [0,1] of |F_n(t) - t|; gamma_hat = F_n(tau_hat).
/// Candidates are the right value and the left limit at every order
/// statistic; a left-limit supremum resolves to the order statistic itself.
/// Ties go to the smallest t. Throws kEmptySample on an empty sample and
/// kInvalidArgument for values outside [0,1].
EstimatePair estimate(std::span<const double> sample);

struct LimitPairSample {
  double a = 0.0;
  double b = 0.0;
  bool horizon_hit = false;
};

/// A = argmax of sign(gamma - tau)(N_0(t) - t) over [-T, T] on a sampled
/// path (Poisson part from substream "argmax"), B ~ N(0, gamma(1-gamma))
/// from substream "gaussian". horizon_hit is set when the argmax sits on
/// +-T; A is then meaningless. horizon 0 selects the default.
LimitPairSample simulate_limit_pair(const ChangePointModel& model, double horizon, Stream& stream);

/// Argmax of s (N_0(t) - t) over [-T, T] for a given path.
struct ArgmaxResult {
  double location = 0.0;
  double value = 0.0;
  bool horizon_hit = false;
};
ArgmaxResult drifted_argmax(const TwoSidedPoissonPath& path, int sign);

/// For each n: M replications of (n(tau_hat - tau), sqrt(n)(gamma_hat - gamma));
/// KS of the second against N(0, gamma(1-gamma)), two-sample KS of the first
/// against M simulated A, correlation of the pair. Throws kEmptyRun for M = 0.
ExperimentReport run_convergence_1d(const ChangePointModel& model,
                                    std::span<const std::size_t> n_schedule,
                                    std::size_t replications, std::uint64_t seed,
                                    unsigned threads, const ExperimentConfig& cfg);

/// run_convergence_1d driven by a config.
ExperimentReport run_changepoint(const ExperimentConfig& cfg, unsigned threads);

}  // namespace empirica
