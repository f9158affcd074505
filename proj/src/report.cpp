#include "empirica/report.hpp"

#include <charconv>
#include <cmath>

namespace empirica {

bool ExperimentReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void ExperimentReport::check(std::string name, bool ok, double value, double threshold,
                             std::string detail) {
  checks.push_back({std::move(name), ok, value, threshold, std::move(detail)});
}

namespace {

// JSON has no inf/nan; keep them readable instead of null.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", number(c.value)},
                           {"threshold", number(c.threshold)},
                           {"detail", c.detail}});
  return {{"experiment", experiment},
          {"manifest", {{"config_hash", config_hash}, {"version", kLibraryVersion}, {"seed", seed}}},
          {"config", config},
          {"per_n", per_n},
          {"checks", checks_json},
          {"extra", extra},
          {"passed", passed()}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ExperimentReport::metrics_csv() const {
  std::string out = "n,t,x,y,re_gap,im_gap,se\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    for (double v : {r.t, r.x, r.y, r.re_gap, r.im_gap, r.se}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

ExperimentReport make_report(const ExperimentConfig& cfg) {
  ExperimentReport r;
  r.experiment = cfg.experiment;
  r.config = canonical_json(cfg);
  r.config_hash = hex64(config_hash(cfg));
  r.seed = cfg.seed;
  return r;
}

}  // namespace empirica
