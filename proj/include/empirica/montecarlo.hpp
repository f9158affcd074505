#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "empirica/charfn.hpp"
#include "empirica/config.hpp"
#include "empirica/dists.hpp"
#include "empirica/empirical.hpp"
#include "empirica/report.hpp"

namespace empirica {

/// Replicated (alpha_n(t_i), beta_n(t_i)) from one sample per replication.
/// Counting is done directly on the unsorted sample.
struct ProcessFidi {
  Fidi alpha;
  Fidi beta;
};

ProcessFidi sample_process_fidi(CdfPtr f, double tau, std::size_t n,
                                std::span<const double> times, std::size_t replications,
                                std::uint64_t seed, const std::string& experiment,
                                unsigned threads);

/// Replicated (B_1(t_i), N_0(t_i)) with the bridge and Poisson parts on
/// separate substreams of each replication's stream.
ProcessFidi sample_limit_fidi(const Cdf& f, const C1Derivatives& d,
                              std::span<const double> times, std::size_t replications,
                              std::uint64_t seed, const std::string& experiment,
                              unsigned threads);

/// Closed-form rates where the Cdf provides them, numeric otherwise.
C1Derivatives rates_at(const Cdf& f, double tau);

/// Best exact finite-n cf: the closed form where it applies, the
/// single-observation table otherwise (t < 0 or the uncovered case).
CharFn reference_psi_n(CdfPtr f, double tau, double t, std::size_t n);

/// sup over the grid of |psi(x, y) - psi(x, 0) psi(0, y)|.
double factorization_gap(const CharFn& psi, std::span<const double> x, std::span<const double> y);

/// Monte Carlo cf of (alpha_n(t), beta_n(t)) against the exact finite-n cf
/// and the limit cf, for every n and t of the config. With two or more
/// times the projection (sum alpha_n(t_i), sum beta_n(t_i)) is compared to
/// the same projection of a simulated limit sample.
ExperimentReport run_fidi_convergence(const ExperimentConfig& cfg, unsigned threads);

/// Exact factorization gap of psi_n per n (no Monte Carlo), plus the
/// empirical gap of the multi-point projection.
ExperimentReport run_independence(const ExperimentConfig& cfg, unsigned threads);

/// beta_n(t) against n [F_n(tau + t/n) - F_n(tau)] (t >= 0) and
/// n [F_n(tau + t/n) - F_n(tau-)] (t < 0), and against the step path.
ExperimentReport run_linkage_check(const ExperimentConfig& cfg, unsigned threads);

/// P(w_hat_m(X, delta) >= epsilon) over the delta grid for beta_n paths and
/// N_0 paths; the N_0 row is also estimated by a second sampler and a
/// separate cut search.
ExperimentReport run_modulus_diagnostics(const ExperimentConfig& cfg, unsigned threads);

/// Decides w_hat_m(f, delta) <= k for a path with unit jumps by exhaustive
/// search over cut placements. Independent of modulus_w_hat.
bool unit_path_separable(std::span<const double> jumps, int m, double delta, int k);

}  // namespace empirica
