#include "empirica/empirica.h"

#include <exception>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "empirica/cadlag.hpp"
#include "empirica/changepoint.hpp"
#include "empirica/charfn.hpp"
#include "empirica/config.hpp"
#include "empirica/dists.hpp"
#include "empirica/error.hpp"
#include "empirica/montecarlo.hpp"
#include "empirica/report.hpp"

struct empirica_step {
  empirica::CadlagStep value;
};

struct empirica_cdf {
  empirica::CdfPtr value;
};

struct empirica_result {
  std::string report;
  std::string metrics;
  bool passed = false;
};

namespace {

thread_local std::string last_error;

template <class Body>
int guarded(Body&& body) {
  try {
    last_error.clear();
    body();
    return EMPIRICA_OK;
  } catch (const empirica::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return EMPIRICA_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return EMPIRICA_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return EMPIRICA_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) empirica::fail(empirica::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

empirica::CadlagStep step_from_json(const nlohmann::json& doc) {
  using empirica::ErrorCode;
  if (!doc.is_object()) empirica::fail(ErrorCode::kInvalidArgument, "step function: expected an object");
  for (const auto& [key, value] : doc.items())
    if (key != "base" && key != "jumps")
      empirica::fail(ErrorCode::kInvalidArgument, "step function: unknown key '" + key + "'");
  const double base = doc.value("base", 0.0);
  std::vector<std::pair<double, double>> jumps;
  if (doc.contains("jumps"))
    for (const auto& j : doc.at("jumps")) {
      if (!j.is_array() || j.size() != 2)
        empirica::fail(ErrorCode::kInvalidArgument, "step function: jumps are [time, size] pairs");
      jumps.emplace_back(j[0].get<double>(), j[1].get<double>());
    }
  return empirica::CadlagStep::from_jumps(base, std::move(jumps));
}

void write_complex(empirica::Complex z, double* re, double* im) {
  need(re, "re");
  need(im, "im");
  *re = z.real();
  *im = z.imag();
}

}  // namespace

extern "C" {

const char* empirica_version(void) { return empirica::kLibraryVersion; }

const char* empirica_last_error(void) { return last_error.c_str(); }

const char* empirica_status_name(int status) {
  if (status == EMPIRICA_OK) return "OK";
  if (status == EMPIRICA_INTERNAL) return "INTERNAL";
  if (status >= EMPIRICA_INVALID_ARGUMENT && status <= EMPIRICA_IO)
    return empirica::to_string(static_cast<empirica::ErrorCode>(status));
  return "UNKNOWN";
}

int empirica_step_create(double base, const double* times, const double* sizes, size_t count,
                         empirica_step** out) {
  return guarded([&] {
    need(out, "out");
    if (count > 0) {
      need(times, "times");
      need(sizes, "sizes");
    }
    std::vector<double> t(times, times + count), s(sizes, sizes + count);
    *out = new empirica_step{empirica::CadlagStep(base, std::move(t), std::move(s))};
  });
}

int empirica_step_from_json(const char* json, empirica_step** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      empirica::fail(empirica::ErrorCode::kInvalidArgument, std::string("step function: ") + e.what());
    }
    *out = new empirica_step{step_from_json(doc)};
  });
}

void empirica_step_destroy(empirica_step* f) { delete f; }

int empirica_step_eval(const empirica_step* f, double t, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = f->value.eval(t);
  });
}

int empirica_step_left_limit(const empirica_step* f, double t, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = f->value.left_limit(t);
  });
}

int empirica_step_oscillation(const empirica_step* f, double lo, double hi, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = empirica::oscillation(f->value, {lo, hi});
  });
}

int empirica_step_w_hat(const empirica_step* f, int m, double delta, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = empirica::modulus_w_hat(f->value, m, delta);
  });
}

int empirica_step_classify(const empirica_step* f, int* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    switch (empirica::classify_counting(f->value)) {
      case empirica::CountingClass::kUnitJumps: *out = EMPIRICA_UNIT_JUMPS; break;
      case empirica::CountingClass::kIntegerJumps: *out = EMPIRICA_INTEGER_JUMPS; break;
      case empirica::CountingClass::kNeither: *out = EMPIRICA_NEITHER; break;
    }
  });
}

int empirica_j1_local(const empirica_step* f, const empirica_step* g, int m, double* out) {
  return guarded([&] {
    need(f, "f");
    need(g, "g");
    need(out, "out");
    *out = empirica::j1_local_distance(f->value, g->value, m);
  });
}

int empirica_j1_distance(const empirica_step* f, const empirica_step* g, int m_max, double* out) {
  return guarded([&] {
    need(f, "f");
    need(g, "g");
    need(out, "out");
    *out = empirica::j1_distance(f->value, g->value, m_max);
  });
}

int empirica_cdf_create(const char* spec_json, empirica_cdf** out) {
  return guarded([&] {
    need(spec_json, "spec_json");
    need(out, "out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::exception& e) {
      empirica::fail(empirica::ErrorCode::kConfig, std::string("distribution: ") + e.what());
    }
    *out = new empirica_cdf{empirica::make_cdf(doc)};
  });
}

void empirica_cdf_destroy(empirica_cdf* f) { delete f; }

int empirica_cdf_eval(const empirica_cdf* f, double t, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = f->value->eval(t);
  });
}

int empirica_cdf_left_limit(const empirica_cdf* f, double t, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = f->value->left_limit(t);
  });
}

int empirica_cdf_quantile(const empirica_cdf* f, double u, double* out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = f->value->quantile(u);
  });
}

int empirica_cdf_derivatives(const empirica_cdf* f, double tau, int numeric, double* rho1,
                             double* rho2) {
  return guarded([&] {
    need(f, "f");
    need(rho1, "rho1");
    need(rho2, "rho2");
    const auto d = empirica::one_sided_derivatives(
        *f->value, tau,
        numeric ? empirica::DerivativeMode::kNumeric : empirica::DerivativeMode::kClosedForm);
    *rho1 = d.rho1;
    *rho2 = d.rho2;
  });
}

int empirica_psi_limit(const empirica_cdf* f, double tau, double t, double x, double y, double* re,
                       double* im) {
  return guarded([&] {
    need(f, "f");
    const auto d = empirica::rates_at(*f->value, tau);
    write_complex(empirica::psi_limit(f->value, d, t)(x, y), re, im);
  });
}

int empirica_psi_n(const empirica_cdf* f, double tau, double t, size_t n, double x, double y,
                   double* re, double* im) {
  return guarded([&] {
    need(f, "f");
    write_complex(empirica::psi_n_exact(f->value, tau, t, n)(x, y), re, im);
  });
}

int empirica_psi_n_bruteforce(const empirica_cdf* f, double tau, double t, size_t n, double x,
                              double y, double* re, double* im) {
  return guarded([&] {
    need(f, "f");
    write_complex(empirica::psi_n_bruteforce(f->value, tau, t, n)(x, y), re, im);
  });
}

int empirica_run(const char* experiment, const char* config_json,
                 const empirica_run_options* options, empirica_result** out) {
  return guarded([&] {
    need(experiment, "experiment");
    need(out, "out");
    const std::string kind = experiment;
    empirica::ExperimentConfig cfg =
        (config_json && *config_json) ? empirica::parse_config(kind, config_json)
                                      : empirica::default_config(kind);
    unsigned threads = 0;
    if (options) {
      if (options->override_seed) cfg.seed = options->seed;
      threads = options->threads;
    }
    empirica::normalize(cfg);
    empirica::validate(cfg);

    empirica::ExperimentReport report;
    if (kind == "fidi") report = empirica::run_fidi_convergence(cfg, threads);
    else if (kind == "independence") report = empirica::run_independence(cfg, threads);
    else if (kind == "linkage") report = empirica::run_linkage_check(cfg, threads);
    else if (kind == "modulus") report = empirica::run_modulus_diagnostics(cfg, threads);
    else if (kind == "changepoint") report = empirica::run_changepoint(cfg, threads);
    else empirica::fail(empirica::ErrorCode::kConfig, "unknown experiment '" + kind + "'");

    auto* result = new empirica_result;
    result->report = report.to_json().dump(2) + "\n";
    result->metrics = report.metrics_csv();
    result->passed = report.passed();
    *out = result;
  });
}

const char* empirica_result_report(const empirica_result* r) { return r ? r->report.c_str() : ""; }

const char* empirica_result_metrics_csv(const empirica_result* r) {
  return r ? r->metrics.c_str() : "";
}

int empirica_result_passed(const empirica_result* r) { return r && r->passed ? 1 : 0; }

void empirica_result_destroy(empirica_result* r) { delete r; }

}  // extern "C"
