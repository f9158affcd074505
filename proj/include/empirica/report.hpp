#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "empirica/config.hpp"

namespace empirica {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// One CSV line: gap of a cf estimate at (x, y) for process size n at time t.
struct MetricRow {
  std::size_t n = 0;
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double re_gap = 0.0;
  double im_gap = 0.0;
  double se = 0.0;  // 0 for exact rows
};

/// A pass/fail assertion with the number it was decided on.
struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config;       // canonical config
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::json per_n = nlohmann::json::array();  // one object per n
  std::vector<Check> checks;
  std::vector<MetricRow> rows;
  nlohmann::json extra = nlohmann::json::object();

  bool passed() const;
  void check(std::string name, bool ok, double value, double threshold, std::string detail = {});

  /// Deterministic: no timestamps or timings. The manifest section carries
  /// hash, version and seed.
  nlohmann::json to_json() const;
  /// Header n,t,x,y,re_gap,im_gap,se; shortest round-trip decimal form.
  std::string metrics_csv() const;
};

ExperimentReport make_report(const ExperimentConfig& cfg);

/// Shortest representation that reads back to the same double, locale-free.
std::string format_double(double v);

}  // namespace empirica
