// Command-line front end. Talks to the library only through empirica.h.
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "empirica/empirica.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAssertion = 3;

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
  std::string out = "empirica_out";
};

struct ChangePointFlags {
  double tau = 0.0, gamma = 0.0;
  std::size_t n = 0, reps = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int status_exit(int status) {
  std::cerr << "error: " << empirica_status_name(status) << ": " << empirica_last_error() << "\n";
  return status == EMPIRICA_CONFIG ? kExitConfig : kExitError;
}

int run_experiment(const std::string& kind, const CommonOptions& opt, const std::string& config_text) {
  const char* env_out = std::getenv("EMPIRICA_OUT");
  const fs::path out_dir = (env_out && *env_out) ? fs::path(env_out) : fs::path(opt.out);

  empirica_run_options run_opts{};
  run_opts.override_seed = opt.seed_given ? 1 : 0;
  run_opts.seed = opt.seed;
  run_opts.threads = opt.threads;

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  empirica_result* result = nullptr;
  const int status = empirica_run(kind.c_str(), config_text.c_str(), &run_opts, &result);
  if (status != EMPIRICA_OK) return status_exit(status);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string report_text = empirica_result_report(result);
  const std::string metrics_text = empirica_result_metrics_csv(result);
  const bool passed = empirica_result_passed(result) != 0;
  empirica_result_destroy(result);

  fs::create_directories(out_dir);
  const fs::path report_path = out_dir / "report.json";
  const fs::path metrics_path = out_dir / "metrics.csv";
  const fs::path manifest_path = out_dir / "manifest.json";
  write_file(report_path, report_text);
  write_file(metrics_path, metrics_text);

  const json report = json::parse(report_text);
  const json manifest = {{"experiment", kind},
                         {"config_hash", report["manifest"]["config_hash"]},
                         {"version", empirica_version()},
                         {"seed", report["manifest"]["seed"]},
                         {"started", started},
                         {"finished", utc_now()},
                         {"runtime_seconds", seconds},
                         {"outputs", {{"report", report_path.string()}, {"metrics", metrics_path.string()}}},
                         {"passed", passed}};
  write_file(manifest_path, manifest.dump(2) + "\n");

  for (const auto& c : report["checks"])
    std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
              << "  value=" << c["value"].dump() << " threshold=" << c["threshold"].dump() << "\n";
  if (kind == "changepoint" && !report["per_n"].empty()) {
    const auto& last = report["per_n"].back();
    std::cout << "ks_gamma_p=" << last["ks_gamma_p"].dump() << " ks_tau_p=" << last["ks_tau_p"].dump()
              << "\n";
  }
  std::cout << "wrote " << out_dir.string() << "\n";
  return passed ? kExitOk : kExitAssertion;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&opt](const std::uint64_t& s) { opt.seed = s; opt.seed_given = true; },
      "Master seed (overrides the config)");
  cmd->add_option("--threads", opt.threads, "Worker threads, 0 = all cores; results do not depend on it");
  cmd->add_option("--out", opt.out, "Output directory (EMPIRICA_OUT overrides)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical and rescaled empirical processes: simulation and checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(empirica_version()));

  CommonOptions opt;
  ChangePointFlags cp;
  std::string step_a, step_b;
  int m_max = 3;

  const char* experiments[][2] = {
      {"fidi", "Finite-dimensional convergence of (alpha_n, beta_n)"},
      {"independence", "Exact factorization gap of the finite-n characteristic function"},
      {"linkage", "Deterministic link between beta_n and the empirical cdf"},
      {"modulus", "Skorokhod modulus diagnostics for beta_n and N_0 paths"},
      {"changepoint", "Change-point estimators against their limit pair"}};
  for (const auto& e : experiments) {
    CLI::App* cmd = app.add_subcommand(e[0], e[1]);
    add_common(cmd, opt);
    if (std::string(e[0]) == "changepoint") {
      cmd->add_option("--tau", cp.tau, "Kink location in (0,1)");
      cmd->add_option("--gamma", cp.gamma, "Cdf value at the kink, in (0,1)");
      cmd->add_option("--n", cp.n, "Sample size");
      cmd->add_option("--reps", cp.reps, "Replications");
    }
  }
  CLI::App* dist = app.add_subcommand("skorokhod-dist", "J1 distance between two step functions");
  dist->add_option("a", step_a, "JSON step function {\"base\":b,\"jumps\":[[t,s],...]}")
      ->required()->check(CLI::ExistingFile);
  dist->add_option("b", step_b, "Second step function")->required()->check(CLI::ExistingFile);
  dist->add_option("--m-max", m_max, "Number of local terms")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (dist->parsed()) {
      empirica_step* f = nullptr;
      empirica_step* g = nullptr;
      int status = empirica_step_from_json(read_file(step_a).c_str(), &f);
      if (status == EMPIRICA_OK) status = empirica_step_from_json(read_file(step_b).c_str(), &g);
      double d = 0.0;
      if (status == EMPIRICA_OK) status = empirica_j1_distance(f, g, m_max, &d);
      empirica_step_destroy(f);
      empirica_step_destroy(g);
      if (status != EMPIRICA_OK) {
        status_exit(status);
        return status == EMPIRICA_INVALID_ARGUMENT ? kExitConfig : kExitError;
      }
      std::cout << shortest(d) << "\n";
      return kExitOk;
    }

    const std::string kind = app.get_subcommands().front()->get_name();
    std::string config_text = opt.config.empty() ? "" : read_file(opt.config);
    if (kind == "changepoint" && (cp.tau != 0.0 || cp.gamma != 0.0 || cp.n != 0 || cp.reps != 0)) {
      json doc = json::object();
      if (!config_text.empty()) {
        try {
          doc = json::parse(config_text);
        } catch (const json::parse_error& e) {
          std::cerr << "error: CONFIG: config: " << e.what() << "\n";
          return kExitConfig;
        }
      }
      if (cp.tau != 0.0) doc["changepoint"]["tau"] = cp.tau;
      if (cp.gamma != 0.0) doc["changepoint"]["gamma"] = cp.gamma;
      if (cp.n != 0) doc["n_schedule"] = {cp.n};
      if (cp.reps != 0) doc["replications"] = cp.reps;
      config_text = doc.dump();
    }
    return run_experiment(kind, opt, config_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
