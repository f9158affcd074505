#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "empirica/dists.hpp"

namespace empirica {

struct Tolerance {
  double se_band = 4.0;       // Monte Carlo bands are se_band * SE
  double exact = 1e-10;       // slack for exact identities
  double final_gap = 1e-2;    // exact |psi_n - psi| at the largest n
  double jitter = 1e-3;       // allowed upward step in a decreasing sequence
  double independence_final = 2.5e-3;  // frozen: exact gap at n = 2^14 is 2.0038e-3
};

struct ModulusSettings {
  int m = 1;
  std::vector<double> deltas{0.02, 0.05, 0.1, 0.2, 0.4};
  double epsilon = 1.5;
};

struct ChangePointSettings {
  double tau = 0.25;
  double gamma = 0.5;
  double horizon = 0.0;  // 0: 50 / min(|1 - rho1|, |1 - rho2|, 1)
};

/// Everything an experiment needs. Every field has a default per experiment;
/// a config file overrides any subset. Unknown keys are errors.
struct ExperimentConfig {
  std::string experiment;
  nlohmann::json distribution;
  double tau = 0.0;
  std::vector<double> times;
  std::vector<std::size_t> n_schedule;
  std::size_t replications = 0;
  nlohmann::json grid;  // {"lo","hi","points"} or {"x":[...],"y":[...]}
  std::uint64_t seed = 1;
  Tolerance tolerance;
  ModulusSettings modulus;
  ChangePointSettings changepoint;

  CdfPtr cdf() const;
  /// Flattened (x, y) evaluation points.
  void grid_points(std::vector<double>& x, std::vector<double>& y) const;
};

/// Known experiments: fidi, independence, linkage, modulus, changepoint.
ExperimentConfig default_config(std::string_view experiment);

/// Defaults for `experiment` overlaid with the JSON document `text`. Throws
/// kConfig with the parser's line and column on malformed input, and on
/// unknown keys or invalid values.
ExperimentConfig parse_config(std::string_view experiment, std::string_view text);

/// For the changepoint experiment the distribution and tau follow the
/// changepoint section; call after changing it.
void normalize(ExperimentConfig& cfg);

/// Throws kConfig unless the config satisfies its invariants.
void validate(const ExperimentConfig& cfg);

/// Fully expanded config with sorted keys.
nlohmann::json canonical_json(const ExperimentConfig& cfg);
/// FNV-1a 64 of the canonical dump.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string hex64(std::uint64_t v);

}  // namespace empirica
