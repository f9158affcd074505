#include "empirica/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "empirica/cadlag.hpp"
#include "empirica/error.hpp"
#include "empirica/limits.hpp"
#include "empirica/parallel.hpp"
#include "empirica/stats.hpp"

namespace empirica {

namespace {

using nlohmann::json;

std::string tag(const std::string& experiment, std::size_t n) {
  return experiment + "/n=" + std::to_string(n);
}

std::vector<double> column(const Fidi& f, std::size_t c) {
  std::vector<double> out(f.rows);
  for (std::size_t r = 0; r < f.rows; ++r) out[r] = f.at(r, c);
  return out;
}

std::vector<double> row_sums(const Fidi& f) {
  std::vector<double> out(f.rows);
  for (std::size_t r = 0; r < f.rows; ++r) {
    double s = 0.0;
    for (double v : f.row(r)) s += v;
    out[r] = s;
  }
  return out;
}

double component_gap(Complex a, Complex b) {
  return std::max(std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag()));
}

}  // namespace

ProcessFidi sample_process_fidi(CdfPtr f, double tau, std::size_t n,
                                std::span<const double> times, std::size_t replications,
                                std::uint64_t seed, const std::string& experiment,
                                unsigned threads) {
  check_increasing(times);
  if (n == 0) fail(ErrorCode::kInvalidArgument, "process size must be positive");
  const std::size_t k = times.size();
  ProcessFidi out{{{times.begin(), times.end()}, replications, std::vector<double>(replications * k)},
                  {{times.begin(), times.end()}, replications, std::vector<double>(replications * k)}};
  std::vector<double> ft(k), edge(k);
  for (std::size_t i = 0; i < k; ++i) {
    ft[i] = f->eval(times[i]);
    edge[i] = tau + times[i] / static_cast<double>(n);
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  parallel_for(replications, threads, [&](std::size_t r) {
    Stream stream = Stream::derive(seed, experiment, r);
    std::vector<std::size_t> below(k, 0), window(k, 0);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = f->quantile(stream.uniform());
      for (std::size_t i = 0; i < k; ++i) {
        below[i] += x <= times[i] ? 1 : 0;
        if (times[i] >= 0.0)
          window[i] += (x > tau && x <= edge[i]) ? 1 : 0;
        else
          window[i] += (x > edge[i] && x < tau) ? 1 : 0;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      out.alpha.values[r * k + i] =
          root_n * (static_cast<double>(below[i]) / static_cast<double>(n) - ft[i]);
      const double w = static_cast<double>(window[i]);
      out.beta.values[r * k + i] = times[i] >= 0.0 ? w : -w;
    }
  });
  return out;
}

ProcessFidi sample_limit_fidi(const Cdf& f, const C1Derivatives& d,
                              std::span<const double> times, std::size_t replications,
                              std::uint64_t seed, const std::string& experiment,
                              unsigned threads) {
  check_increasing(times);
  const std::size_t k = times.size();
  ProcessFidi out{{{times.begin(), times.end()}, replications, std::vector<double>(replications * k)},
                  {{times.begin(), times.end()}, replications, std::vector<double>(replications * k)}};
  const BridgeSampler bridge(f, {times.begin(), times.end()});
  double horizon = 1.0;
  for (double t : times) horizon = std::max(horizon, std::abs(t) + 1.0);
  parallel_for(replications, threads, [&](std::size_t r) {
    const Stream stream = Stream::derive(seed, experiment, r);
    Stream bridge_stream = stream.substream("bridge");
    Stream poisson_stream = stream.substream("poisson");
    const auto b = bridge.draw(bridge_stream);
    const auto path = sample_n0_path(d, horizon, poisson_stream);
    for (std::size_t i = 0; i < k; ++i) {
      out.alpha.values[r * k + i] = b[i];
      out.beta.values[r * k + i] = path.eval(times[i]);
    }
  });
  return out;
}

C1Derivatives rates_at(const Cdf& f, double tau) {
  if (auto d = f.closed_form_derivatives(tau)) return *d;
  return one_sided_derivatives(f, tau, DerivativeMode::kNumeric);
}

CharFn reference_psi_n(CdfPtr f, double tau, double t, std::size_t n) {
  if (t >= 0.0 && psi_case(tau, t, n) != PsiCase::kUndefined) return psi_n_exact(f, tau, t, n);
  return psi_n_table(f, tau, t, n);
}

double factorization_gap(const CharFn& psi, std::span<const double> x, std::span<const double> y) {
  double gap = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    gap = std::max(gap, std::abs(psi(x[j], y[j]) - psi(x[j], 0.0) * psi(0.0, y[j])));
  return gap;
}

ExperimentReport run_fidi_convergence(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  if (cfg.times.empty()) fail(ErrorCode::kConfig, "fidi: times must not be empty");
  ExperimentReport report = make_report(cfg);
  const CdfPtr f = cfg.cdf();
  const C1Derivatives d = rates_at(*f, cfg.tau);
  std::vector<double> gx, gy;
  cfg.grid_points(gx, gy);
  const auto& tol = cfg.tolerance;

  double worst_z = 0.0;  // empirical vs exact finite-n cf, in SE units
  std::vector<double> exact_gaps;
  double last_multi_gap = 0.0, last_multi_se = 0.0;
  for (std::size_t n : cfg.n_schedule) {
    const auto pf = sample_process_fidi(f, cfg.tau, n, cfg.times, cfg.replications, cfg.seed,
                                        tag("fidi", n), threads);
    json per_t = json::array();
    double exact_gap_n = 0.0;
    for (std::size_t i = 0; i < cfg.times.size(); ++i) {
      const double t = cfg.times[i];
      const auto a = column(pf.alpha, i), b = column(pf.beta, i);
      const auto emp = empirical_cf(a, b, gx, gy);
      const CharFn limit = psi_limit(f, d, t);
      const CharFn exact = reference_psi_n(f, cfg.tau, t, n);
      double emp_limit = 0.0, emp_exact = 0.0, exact_limit = 0.0;
      for (std::size_t j = 0; j < gx.size(); ++j) {
        const Complex lim = limit(gx[j], gy[j]);
        const Complex ex = exact(gx[j], gy[j]);
        const Complex gap = emp.values[j] - lim;
        report.rows.push_back({n, t, gx[j], gy[j], gap.real(), gap.imag(), emp.se});
        emp_limit = std::max(emp_limit, component_gap(emp.values[j], lim));
        emp_exact = std::max(emp_exact, component_gap(emp.values[j], ex));
        exact_limit = std::max(exact_limit, std::abs(ex - lim));
      }
      exact_gap_n = std::max(exact_gap_n, exact_limit);
      worst_z = std::max(worst_z, emp_exact / emp.se);
      per_t.push_back({{"t", t},
                       {"empirical_vs_limit", emp_limit},
                       {"empirical_vs_exact_n", emp_exact},
                       {"exact_n_vs_limit", exact_limit},
                       {"se", emp.se}});
    }
    exact_gaps.push_back(exact_gap_n);
    json entry = {{"n", n}, {"per_t", per_t}, {"exact_gap", exact_gap_n}};
    if (cfg.times.size() >= 2) {
      const auto lf = sample_limit_fidi(*f, d, cfg.times, cfg.replications, cfg.seed,
                                        tag("fidi-limit", n), threads);
      const auto sa = row_sums(pf.alpha), sb = row_sums(pf.beta);
      const auto la = row_sums(lf.alpha), lb = row_sums(lf.beta);
      const auto e1 = empirical_cf(sa, sb, gx, gy);
      const auto e2 = empirical_cf(la, lb, gx, gy);
      double gap = 0.0;
      for (std::size_t j = 0; j < gx.size(); ++j) gap = std::max(gap, component_gap(e1.values[j], e2.values[j]));
      last_multi_gap = gap;
      last_multi_se = std::sqrt(2.0) * e1.se;
      entry["multi_point_gap"] = gap;
      entry["multi_point_se"] = last_multi_se;
    }
    report.per_n.push_back(entry);
  }

  report.check("empirical_matches_exact_n", worst_z <= tol.se_band, worst_z, tol.se_band,
               "largest component gap in SE units over all n, t and grid points");
  bool decreasing = true;
  for (std::size_t i = 1; i < exact_gaps.size(); ++i)
    decreasing = decreasing && exact_gaps[i] <= exact_gaps[i - 1] + tol.jitter;
  report.check("exact_gap_decreasing", decreasing, exact_gaps.back(), tol.jitter,
               "sup |psi_n - psi| along the n schedule, steps up by at most jitter");
  report.check("exact_gap_final", exact_gaps.back() <= tol.final_gap, exact_gaps.back(),
               tol.final_gap, "sup |psi_n - psi| at the largest n");
  if (cfg.times.size() >= 2) {
    const double bound = tol.se_band * last_multi_se + exact_gaps.back();
    report.check("multi_point_final", last_multi_gap <= bound, last_multi_gap, bound,
                 "projected multi-point cf against simulated limit at the largest n; "
                 "band is se_band * SE plus the single-point exact gap");
  }
  report.extra["rates"] = {{"rho1", d.rho1}, {"rho2", d.rho2}};
  return report;
}

ExperimentReport run_independence(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  if (cfg.times.empty()) fail(ErrorCode::kConfig, "independence: times must not be empty");
  ExperimentReport report = make_report(cfg);
  const CdfPtr f = cfg.cdf();
  const C1Derivatives d = rates_at(*f, cfg.tau);
  std::vector<double> gx, gy;
  cfg.grid_points(gx, gy);
  const auto& tol = cfg.tolerance;

  std::vector<double> gaps;
  for (std::size_t n : cfg.n_schedule) {
    double gap_n = 0.0;
    json per_t = json::array();
    for (double t : cfg.times) {
      const CharFn psi = reference_psi_n(f, cfg.tau, t, n);
      double gap_t = 0.0;
      for (std::size_t j = 0; j < gx.size(); ++j) {
        const Complex g = psi(gx[j], gy[j]) - psi(gx[j], 0.0) * psi(0.0, gy[j]);
        report.rows.push_back({n, t, gx[j], gy[j], g.real(), g.imag(), 0.0});
        gap_t = std::max(gap_t, std::abs(g));
      }
      gap_n = std::max(gap_n, gap_t);
      per_t.push_back({{"t", t}, {"exact_gap", gap_t}});
    }
    gaps.push_back(gap_n);

    const auto pf = sample_process_fidi(f, cfg.tau, n, cfg.times, cfg.replications, cfg.seed,
                                        tag("independence", n), threads);
    const auto sa = row_sums(pf.alpha), sb = row_sums(pf.beta);
    std::vector<double> zeros(gx.size(), 0.0);
    const auto joint = empirical_cf(sa, sb, gx, gy);
    const auto mx = empirical_cf(sa, sb, gx, zeros);
    const auto my = empirical_cf(sa, sb, zeros, gy);
    double emp_gap = 0.0;
    for (std::size_t j = 0; j < gx.size(); ++j)
      emp_gap = std::max(emp_gap, std::abs(joint.values[j] - mx.values[j] * my.values[j]));
    report.per_n.push_back({{"n", n},
                            {"exact_gap", gap_n},
                            {"per_t", per_t},
                            {"empirical_multi_point_gap", emp_gap},
                            {"empirical_se", joint.se}});
  }

  report.check("small_n_dependence", gaps.front() > tol.exact, gaps.front(), tol.exact,
               "exact factorization gap at the smallest n is strictly positive");
  bool decreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i)
    decreasing = decreasing && gaps[i] <= gaps[i - 1] + tol.jitter;
  report.check("gap_decreasing", decreasing, gaps.back(), tol.jitter,
               "exact gap along the n schedule, steps up by at most jitter");
  report.check("gap_final", gaps.back() < tol.independence_final, gaps.back(),
               tol.independence_final, "exact gap at the largest n");
  const CharFn lim = psi_limit(f, d, cfg.times.front());
  report.extra["limit_factorization_gap"] = factorization_gap(lim, gx, gy);
  return report;
}

ExperimentReport run_linkage_check(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  ExperimentReport report = make_report(cfg);
  const CdfPtr f = cfg.cdf();
  std::size_t total_cases = 0, total_failures = 0, total_path = 0;
  for (std::size_t n : cfg.n_schedule) {
    std::vector<std::size_t> cases(cfg.replications, 0), failures(cfg.replications, 0),
        path_mismatch(cfg.replications, 0);
    const std::string experiment = tag("linkage", n);
    parallel_for(cfg.replications, threads, [&](std::size_t r) {
      Stream stream = Stream::derive(cfg.seed, experiment, r);
      std::vector<double> x = sample(*f, n, stream);
      const EmpiricalCdf ecdf(x);
      const BetaProcess beta(x, cfg.tau, n);
      std::vector<double> ts(cfg.times.begin(), cfg.times.end());
      const double t_pos = 4.0 * stream.uniform();
      const double t_neg = -4.0 * stream.uniform();
      ts.push_back(t_pos);
      ts.push_back(t_neg);
      // Windows ending exactly on a sample point.
      const double hit = x[static_cast<std::size_t>(stream.uniform() * static_cast<double>(n))];
      ts.push_back(static_cast<double>(n) * (hit - cfg.tau));
      for (double t : ts) {
        const double edge = cfg.tau + t / static_cast<double>(n);
        const double direct = beta.eval(t);
        const double via_ecdf =
            t >= 0.0 ? static_cast<double>(ecdf.count_le(edge)) - static_cast<double>(ecdf.count_le(cfg.tau))
                     : static_cast<double>(ecdf.count_le(edge)) - static_cast<double>(ecdf.count_lt(cfg.tau));
        ++cases[r];
        if (direct != via_ecdf) ++failures[r];
      }
      for (double t : {t_pos, t_neg})
        if (beta.path().eval(t) != beta.eval(t)) ++path_mismatch[r];
    });
    std::size_t c = 0, fl = 0, pm = 0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      c += cases[r];
      fl += failures[r];
      pm += path_mismatch[r];
    }
    total_cases += c;
    total_failures += fl;
    total_path += pm;
    report.per_n.push_back({{"n", n}, {"cases", c}, {"failures", fl}, {"path_mismatches", pm}});
  }
  report.check("linkage_exact", total_failures == 0, static_cast<double>(total_failures), 0.0,
               std::to_string(total_cases) + " cases, both signs of t");
  report.check("step_path_agrees", total_path == 0, static_cast<double>(total_path), 0.0,
               "step path against the defining indicator sum at random t");
  return report;
}

bool unit_path_separable(std::span<const double> jumps, int m, double delta, int k) {
  const double lo = -static_cast<double>(m), hi = static_cast<double>(m);
  std::vector<double> p;
  for (double t : jumps)
    if (t > lo && t < hi) p.push_back(t);
  std::sort(p.begin(), p.end());
  const std::size_t count = p.size();

  // State before gap i (between p[i-1] and p[i]): infimum of the last cut
  // (nullopt-like flag for "no cut yet") and interior jumps in the open cell.
  std::function<bool(std::size_t, bool, double, int)> search =
      [&](std::size_t i, bool has_cut, double last, int inside) -> bool {
    const double gap_lo = i == 0 ? lo : p[i - 1];
    const double gap_hi = i == count ? hi : p[i];
    auto continue_at_jump = [&](bool cut_flag, double cut, int in) -> bool {
      if (i == count) return true;
      const double q = p[i];
      if (!cut_flag || q - cut > delta)
        if (search(i + 1, true, q, 0)) return true;
      return in + 1 <= k && search(i + 1, cut_flag, cut, in + 1);
    };
    if (continue_at_jump(has_cut, last, inside)) return true;
    const double pos = has_cut ? std::max(gap_lo, last + delta) : gap_lo;
    if (pos < gap_hi) return continue_at_jump(true, pos, 0);
    return false;
  };
  return search(0, false, lo, 0);
}

ExperimentReport run_modulus_diagnostics(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  ExperimentReport report = make_report(cfg);
  const CdfPtr f = cfg.cdf();
  const C1Derivatives d = rates_at(*f, cfg.tau);
  std::vector<double> deltas = cfg.modulus.deltas;
  std::sort(deltas.begin(), deltas.end());
  const int m = cfg.modulus.m;
  const double eps = cfg.modulus.epsilon;
  const std::size_t reps = cfg.replications;
  const std::size_t nd = deltas.size();
  const auto& tol = cfg.tolerance;

  std::size_t monotone_violations = 0;
  auto table = [&](const std::string& label, std::size_t n,
                   const std::function<CadlagStep(Stream&)>& make) {
    std::vector<double> w(reps * nd);
    parallel_for(reps, threads, [&](std::size_t r) {
      Stream stream = Stream::derive(cfg.seed, label, r);
      const CadlagStep path = make(stream);
      for (std::size_t i = 0; i < nd; ++i) w[r * nd + i] = modulus_w_hat(path, m, deltas[i]);
    });
    json rows = json::array();
    std::vector<double> probs;
    for (std::size_t i = 0; i < nd; ++i) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        hits += w[r * nd + i] >= eps ? 1 : 0;
        if (i > 0 && w[r * nd + i] < w[r * nd + i - 1]) ++monotone_violations;
      }
      const double p = static_cast<double>(hits) / static_cast<double>(reps);
      probs.push_back(p);
      rows.push_back({{"delta", deltas[i]}, {"p", p},
                      {"se", std::sqrt(p * (1.0 - p) / static_cast<double>(reps))}});
    }
    report.per_n.push_back({{"process", label}, {"n", n}, {"rows", rows}});
    return probs;
  };

  for (std::size_t n : cfg.n_schedule) {
    table(tag("modulus/beta", n), n, [&](Stream& s) {
      return BetaProcess(sample(*f, n, s), cfg.tau, n).path();
    });
  }
  const auto p_n0 = table("modulus/n0", 0, [&](Stream& s) {
    return sample_n0_path(d, static_cast<double>(m), s).path();
  });

  // Second route: arrivals generated left to right from -m by spacings,
  // decided by exhaustive cut search.
  const int allowed = static_cast<int>(std::ceil(eps)) - 1;
  std::vector<unsigned char> exceed(reps * nd, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    Stream s = Stream::derive(cfg.seed, "modulus/spacings", r);
    std::vector<double> jumps;
    const double lo = -static_cast<double>(m);
    if (d.rho1 > 0.0)
      for (double t = lo + s.exponential(d.rho1); t < 0.0; t += s.exponential(d.rho1)) jumps.push_back(t);
    if (d.rho2 > 0.0)
      for (double t = s.exponential(d.rho2); t < m; t += s.exponential(d.rho2)) jumps.push_back(t);
    for (std::size_t i = 0; i < nd; ++i)
      exceed[r * nd + i] = unit_path_separable(jumps, m, deltas[i], allowed) ? 0 : 1;
  });
  json route2 = json::array();
  double worst_z = 0.0;
  bool agree = true;
  for (std::size_t i = 0; i < nd; ++i) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < reps; ++r) hits += exceed[r * nd + i];
    const double q = static_cast<double>(hits) / static_cast<double>(reps);
    const double p = p_n0[i];
    const double se = std::sqrt((p * (1.0 - p) + q * (1.0 - q)) / static_cast<double>(reps));
    const bool ok = std::abs(p - q) <= tol.se_band * se;
    agree = agree && ok;
    if (se > 0.0) worst_z = std::max(worst_z, std::abs(p - q) / se);
    route2.push_back({{"delta", deltas[i]}, {"p_dp", p}, {"p_spacings", q}, {"se", se}});
  }
  report.extra["n0_two_routes"] = route2;
  report.extra["rates"] = {{"rho1", d.rho1}, {"rho2", d.rho2}};
  report.check("monotone_in_delta", monotone_violations == 0,
               static_cast<double>(monotone_violations), 0.0,
               "w_hat non-decreasing in delta on every sampled path");
  report.check("n0_routes_agree", agree, worst_z, tol.se_band,
               "largest |difference| / SE between the two N_0 estimates");
  return report;
}

}  // namespace empirica
