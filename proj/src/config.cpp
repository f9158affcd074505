#include "empirica/config.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "empirica/charfn.hpp"
#include "empirica/error.hpp"
#include "empirica/rng.hpp"

namespace empirica {

namespace {

using nlohmann::json;

std::vector<std::size_t> powers_of_two(int lo, int hi) {
  std::vector<std::size_t> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorCode::kConfig, where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(ErrorCode::kConfig, where + ": unknown key '" + key + "'");
}

template <class T>
T get_as(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kConfig, where + ": '" + key + "' has the wrong type");
  }
}

}  // namespace

CdfPtr ExperimentConfig::cdf() const { return make_cdf(distribution); }

void ExperimentConfig::grid_points(std::vector<double>& x, std::vector<double>& y) const {
  if (grid.contains("x")) {
    x = grid.at("x").get<std::vector<double>>();
    y = grid.at("y").get<std::vector<double>>();
    return;
  }
  square_grid(grid.at("lo").get<double>(), grid.at("hi").get<double>(),
              grid.at("points").get<std::size_t>(), x, y);
}

ExperimentConfig default_config(std::string_view experiment) {
  ExperimentConfig c;
  c.experiment = std::string(experiment);
  c.distribution = {{"name", "uniform01"}};
  c.grid = {{"lo", -3.0}, {"hi", 3.0}, {"points", 9}};
  if (experiment == "fidi") {
    c.tau = 0.0;
    c.times = {0.5};
    c.n_schedule = powers_of_two(1, 10);
    c.replications = 10000;
  } else if (experiment == "independence") {
    c.tau = 0.0;
    c.times = {0.5};
    c.n_schedule = powers_of_two(1, 14);
    c.replications = 2000;
  } else if (experiment == "linkage") {
    c.distribution = {{"name", "atom_mix"}, {"base", {{"name", "uniform01"}}},
                      {"atom", 0.5}, {"mass", 0.2}};
    c.tau = 0.5;
    c.times = {-2.0, -0.5, 0.0, 0.5, 2.0};
    c.n_schedule = {10, 100, 1000};
    c.replications = 10000;
  } else if (experiment == "modulus") {
    c.tau = 0.5;
    c.times = {};
    c.n_schedule = {100, 1000};
    c.replications = 2000;
  } else if (experiment == "changepoint") {
    c.distribution = {{"name", "polygonal"}, {"tau", 0.25}, {"gamma", 0.5}};
    c.tau = 0.25;
    c.times = {};
    c.n_schedule = {10000};
    c.replications = 2000;
    c.seed = 7;
  } else {
    fail(ErrorCode::kConfig, "unknown experiment '" + std::string(experiment) + "'");
  }
  return c;
}

ExperimentConfig parse_config(std::string_view experiment, std::string_view text) {
  ExperimentConfig c = default_config(experiment);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  only_keys(doc, {"experiment", "distribution", "tau", "times", "n_schedule", "replications",
                  "grid", "seed", "tolerance", "modulus", "changepoint"},
            "config");
  const std::string where = "config";
  if (doc.contains("experiment") && get_as<std::string>(doc, "experiment", where) != experiment)
    fail(ErrorCode::kConfig, "config: experiment '" + doc.at("experiment").get<std::string>() +
                                 "' does not match subcommand '" + std::string(experiment) + "'");
  if (doc.contains("distribution")) {
    c.distribution = doc.at("distribution");
    make_cdf(c.distribution);
  }
  if (doc.contains("tau")) c.tau = get_as<double>(doc, "tau", where);
  if (doc.contains("times")) c.times = get_as<std::vector<double>>(doc, "times", where);
  if (doc.contains("n_schedule"))
    c.n_schedule = get_as<std::vector<std::size_t>>(doc, "n_schedule", where);
  if (doc.contains("replications"))
    c.replications = get_as<std::size_t>(doc, "replications", where);
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed", where);
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    if (g.is_object() && g.contains("x")) {
      only_keys(g, {"x", "y"}, "grid");
      get_as<std::vector<double>>(g, "x", "grid");
      get_as<std::vector<double>>(g, "y", "grid");
    } else {
      only_keys(g, {"lo", "hi", "points"}, "grid");
      get_as<double>(g, "lo", "grid");
      get_as<double>(g, "hi", "grid");
      get_as<std::size_t>(g, "points", "grid");
    }
    c.grid = g;
  }
  if (doc.contains("tolerance")) {
    const json& t = doc.at("tolerance");
    only_keys(t, {"se_band", "exact", "final_gap", "jitter", "independence_final"}, "tolerance");
    if (t.contains("se_band")) c.tolerance.se_band = get_as<double>(t, "se_band", "tolerance");
    if (t.contains("exact")) c.tolerance.exact = get_as<double>(t, "exact", "tolerance");
    if (t.contains("final_gap")) c.tolerance.final_gap = get_as<double>(t, "final_gap", "tolerance");
    if (t.contains("jitter")) c.tolerance.jitter = get_as<double>(t, "jitter", "tolerance");
    if (t.contains("independence_final"))
      c.tolerance.independence_final = get_as<double>(t, "independence_final", "tolerance");
  }
  if (doc.contains("modulus")) {
    const json& m = doc.at("modulus");
    only_keys(m, {"m", "deltas", "epsilon"}, "modulus");
    if (m.contains("m")) c.modulus.m = get_as<int>(m, "m", "modulus");
    if (m.contains("deltas")) c.modulus.deltas = get_as<std::vector<double>>(m, "deltas", "modulus");
    if (m.contains("epsilon")) c.modulus.epsilon = get_as<double>(m, "epsilon", "modulus");
  }
  if (doc.contains("changepoint")) {
    const json& m = doc.at("changepoint");
    only_keys(m, {"tau", "gamma", "horizon"}, "changepoint");
    if (m.contains("tau")) c.changepoint.tau = get_as<double>(m, "tau", "changepoint");
    if (m.contains("gamma")) c.changepoint.gamma = get_as<double>(m, "gamma", "changepoint");
    if (m.contains("horizon")) c.changepoint.horizon = get_as<double>(m, "horizon", "changepoint");
  }
  normalize(c);
  validate(c);
  return c;
}

void normalize(ExperimentConfig& c) {
  if (c.experiment != "changepoint") return;
  c.distribution = {{"name", "polygonal"}, {"tau", c.changepoint.tau}, {"gamma", c.changepoint.gamma}};
  c.tau = c.changepoint.tau;
}

void validate(const ExperimentConfig& c) {
  auto bad = [](const std::string& what) { fail(ErrorCode::kConfig, "config: " + what); };
  if (c.replications < 100) bad("replications must be at least 100");
  if (c.n_schedule.empty()) bad("n_schedule must not be empty");
  for (std::size_t i = 0; i < c.n_schedule.size(); ++i) {
    if (c.n_schedule[i] == 0) bad("n_schedule entries must be positive");
    if (i > 0 && c.n_schedule[i] <= c.n_schedule[i - 1]) bad("n_schedule must be increasing");
  }
  for (std::size_t i = 1; i < c.times.size(); ++i)
    if (!(c.times[i] > c.times[i - 1])) bad("times must be strictly increasing");
  std::vector<double> x, y;
  c.grid_points(x, y);
  if (x.empty() || x.size() != y.size()) bad("grid must be finite, nonempty, with matching x and y");
  if (c.tolerance.se_band < 0.0 || c.tolerance.exact < 0.0 || c.tolerance.final_gap < 0.0 ||
      c.tolerance.jitter < 0.0 || c.tolerance.independence_final < 0.0)
    bad("tolerances must be nonnegative");
  if (c.modulus.m < 1) bad("modulus.m must be at least 1");
  for (double d : c.modulus.deltas)
    if (!(d > 0.0 && d < 2.0 * c.modulus.m)) bad("modulus.deltas must lie in (0, 2m)");
  const auto& cp = c.changepoint;
  if (!(cp.tau > 0.0 && cp.tau < 1.0 && cp.gamma > 0.0 && cp.gamma < 1.0) || cp.tau == cp.gamma)
    bad("changepoint needs tau, gamma in (0, 1) with tau != gamma");
  if (cp.horizon < 0.0) bad("changepoint.horizon must be nonnegative");
}

nlohmann::json canonical_json(const ExperimentConfig& c) {
  return {
      {"experiment", c.experiment},
      {"distribution", c.distribution},
      {"tau", c.tau},
      {"times", c.times},
      {"n_schedule", c.n_schedule},
      {"replications", c.replications},
      {"grid", c.grid},
      {"seed", c.seed},
      {"tolerance",
       {{"se_band", c.tolerance.se_band},
        {"exact", c.tolerance.exact},
        {"final_gap", c.tolerance.final_gap},
        {"jitter", c.tolerance.jitter},
        {"independence_final", c.tolerance.independence_final}}},
      {"modulus", {{"m", c.modulus.m}, {"deltas", c.modulus.deltas}, {"epsilon", c.modulus.epsilon}}},
      {"changepoint",
       {{"tau", c.changepoint.tau},
        {"gamma", c.changepoint.gamma},
        {"horizon", c.changepoint.horizon}}},
  };
}

std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a64(canonical_json(c).dump()); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace empirica
