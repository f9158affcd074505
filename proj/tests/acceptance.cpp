// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "empirica/cadlag.hpp"
#include "empirica/changepoint.hpp"
#include "empirica/charfn.hpp"
#include "empirica/config.hpp"
#include "empirica/empirica.h"
#include "empirica/empirical.hpp"
#include "empirica/limits.hpp"
#include "empirica/montecarlo.hpp"
#include "empirica/stats.hpp"
#include "oracles.hpp"

using namespace empirica;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.passed = false;
    out.detail += " | over time budget " + std::to_string(limit_seconds) + " s";
  }
  if (!out.passed) ++failures;
  std::printf("[%s] %2d %s: %s (%.2f s)\n", out.passed ? "PASS" : "FAIL", id, title,
              out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CdfPtr uniform() { return std::make_shared<Uniform01>(); }

double grid_gap(const CharFn& a, const CharFn& b) {
  double gap = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const double x = -3.0 + 0.75 * i, y = -3.0 + 0.75 * j;
      gap = std::max(gap, std::abs(a(x, y) - b(x, y)));
    }
  return gap;
}

// Criteria 5 and 11 may be rerun once; the second seed is fixed here, before
// any result is seen.
constexpr std::uint64_t kPrimarySeed = 7;
constexpr std::uint64_t kRerunSeed = 8;

Outcome exact_cf_oracle() {
  const std::vector<CdfPtr> cdfs{uniform(), std::make_shared<PolygonalF>(0.25, 0.5),
                                 std::make_shared<AtomMix>(uniform(), 0.25, 0.2)};
  double worst = 0.0;
  int cells = 0;
  for (const auto& f : cdfs)
    for (double tau : {0.0, 0.25, 0.6})
      for (double t : {0.1, 0.5})
        for (std::size_t n = 2; n <= 12; ++n) {
          if (psi_case(tau, t, n) == PsiCase::kUndefined) continue;
          worst = std::max(worst, grid_gap(psi_n_exact(f, tau, t, n), psi_n_bruteforce(f, tau, t, n)));
          ++cells;
        }
  return {worst <= 1e-10, std::to_string(cells) + " cells, sup gap " + fmt("%.3g <= 1e-10", worst)};
}

Outcome cf_convergence() {
  const auto limit = psi_limit(uniform(), {0.0, 1.0, 0.0}, 0.5);
  std::vector<double> gaps;
  for (int k = 4; k <= 14; ++k)
    gaps.push_back(grid_gap(psi_n_exact(uniform(), 0.0, 0.5, std::size_t{1} << k), limit));
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] < gaps[i - 1];
  return {monotone && gaps.back() < 1e-2,
          fmt("gap 2^4 %.4g, gap 2^14 %.4g < 1e-2", gaps.front(), gaps.back()) +
              (monotone ? ", strictly decreasing" : ", NOT monotone")};
}

Outcome independence_gap() {
  const auto cfg = default_config("independence");
  std::vector<double> x, y;
  cfg.grid_points(x, y);
  const double t = cfg.times.front();
  std::vector<double> gaps;
  for (int k = 1; k <= 14; ++k)
    gaps.push_back(factorization_gap(reference_psi_n(cfg.cdf(), cfg.tau, t, std::size_t{1} << k), x, y));
  const Tolerance tol;
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] <= gaps[i - 1] + tol.jitter;
  const bool ok = gaps.front() > 0.0 && gaps.back() < tol.independence_final && monotone;
  return {ok, fmt("gap n=2 %.5g > 0, gap n=2^14 %.5g", gaps.front(), gaps.back()) +
                  fmt(" < frozen %.3g, monotone within %.0e", tol.independence_final, tol.jitter) +
                  (monotone ? "" : " VIOLATED")};
}

Outcome variance_identity() {
  const std::vector<double> times{0.25, 0.5, 0.9};
  double worst_z = 0.0;
  for (std::size_t n : {10u, 1000u}) {
    const auto fidi = sample_process_fidi(uniform(), 0.0, n, times, 100000, kPrimarySeed,
                                          "acceptance/variance", 0);
    for (std::size_t c = 0; c < times.size(); ++c) {
      std::vector<double> col(fidi.alpha.rows);
      for (std::size_t r = 0; r < col.size(); ++r) col[r] = fidi.alpha.at(r, c);
      const double target = times[c] * (1.0 - times[c]);
      worst_z = std::max(worst_z, std::abs(variance(col) - target) / variance_se(col));
    }
  }
  return {worst_z <= 4.0, fmt("worst |var - F(1-F)| / SE = %.3g <= 4", worst_z)};
}

Outcome beta_marginal() {
  const double tv = tv_binomial_poisson(1000, 1e-3, 1.0);
  auto gof = [](std::uint64_t seed) {
    const std::vector<double> at{1.0};
    const auto fidi = sample_process_fidi(uniform(), 0.0, 1000, at, 100000, seed,
                                          "acceptance/beta-marginal", 0);
    std::vector<long> counts(fidi.beta.rows);
    for (std::size_t r = 0; r < counts.size(); ++r) counts[r] = std::lround(fidi.beta.at(r, 0));
    const boost::math::binomial_distribution<double> law(1000, 1e-3);
    return chi_square_counts(counts, [&](long k) {
             return k < 0 || k > 1000 ? 0.0 : boost::math::pdf(law, static_cast<double>(k));
           }).p_value;
  };
  double p = gof(kPrimarySeed);
  std::string note = fmt("seed %.0f p = %.4g", double(kPrimarySeed), p);
  if (!(p > 0.01)) {
    p = gof(kRerunSeed);
    note += fmt("; rerun seed %.0f p = %.4g", double(kRerunSeed), p);
  }
  return {tv < 2e-3 && p > 0.01, fmt("TV(Bin(1000,1e-3), Poi(1)) = %.4g < 2e-3; chi-square ", tv) + note};
}

Outcome linkage() {
  std::mt19937_64 gen(kPrimarySeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const CdfPtr atom = std::make_shared<AtomMix>(uniform(), 0.5, 0.2);
  const double tau = 0.5;
  std::size_t cases = 0, mismatches = 0, negative = 0, atom_hits = 0;
  for (std::uint64_t r = 0; r < 100000; ++r) {
    Stream s = Stream::derive(kPrimarySeed, "acceptance/linkage", r);
    const CdfPtr f = r % 2 == 0 ? uniform() : atom;
    const std::size_t n = 1 + static_cast<std::size_t>(unit(gen) * 60);
    const auto xs = sample(*f, n, s);
    double t = (unit(gen) - 0.5) * 8.0;
    // Every tenth case places t/n exactly on a sample point's offset.
    if (r % 10 == 0) t = static_cast<double>(n) * (xs[0] - tau);
    const auto beta = make_beta(xs, tau, n);
    const EmpiricalCdf ecdf(xs);
    const double edge = tau + t / static_cast<double>(n);
    // n [F_n(edge) - F_n(tau)], and n [F_n(edge) - F_n(tau-)] for t < 0.
    double other;
    if (t >= 0.0) {
      other = static_cast<double>(ecdf.count_le(edge)) - static_cast<double>(ecdf.count_le(tau));
    } else {
      other = static_cast<double>(ecdf.count_le(edge)) - static_cast<double>(ecdf.count_lt(tau));
      ++negative;
    }
    for (double x : xs) atom_hits += x == tau ? 1 : 0;
    if (beta.eval(t) != other) ++mismatches;
    // The step path puts jumps at n (X - tau), which can round differently
    // from the window edge when t is built from a sample point.
    if (r % 10 != 0 && beta.path().eval(t) != other) ++mismatches;
    ++cases;
  }
  return {mismatches == 0 && atom_hits > 0 && negative > 0,
          std::to_string(mismatches) + " mismatches in " + std::to_string(cases) + " cases (" +
              std::to_string(negative) + " with t < 0, " + std::to_string(atom_hits) +
              " sample points on the atom at tau)"};
}

Outcome moment_bound() {
  std::mt19937_64 gen(kPrimarySeed + 100);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  double worst = -1e9;
  for (std::size_t n : {10u, 100u}) {
    for (int k = 0; k < 50; ++k) {
      std::vector<double> tri{unit(gen), unit(gen), unit(gen)};
      std::sort(tri.begin(), tri.end());
      const auto fidi = sample_process_fidi(uniform(), 0.0, n, tri, 100000, kPrimarySeed + k,
                                            "acceptance/moment/" + std::to_string(n), 0);
      std::vector<double> prod(fidi.alpha.rows);
      for (std::size_t r = 0; r < prod.size(); ++r) {
        const double a = fidi.alpha.at(r, 1) - fidi.alpha.at(r, 0);
        const double b = fidi.alpha.at(r, 2) - fidi.alpha.at(r, 1);
        prod[r] = a * a * b * b;
      }
      const double se = std::sqrt(variance(prod) / static_cast<double>(prod.size()));
      const double bound = 6.0 * (tri[2] - tri[0]) * (tri[2] - tri[0]);
      const double excess = mean(prod) - bound - 4.0 * se;
      worst = std::max(worst, excess / std::max(bound, 1e-12));
      if (excess > 0.0) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " of 100 triples above 6(F(t)-F(r))^2 + 4 SE" +
                               fmt("; largest (mean - bound - 4SE)/bound = %.3g", worst)};
}

Outcome counting_classes() {
  // Odd replications draw from a cdf with an atom just right of tau, so
  // tied points produce jumps larger than one.
  const CdfPtr atom = std::make_shared<AtomMix>(uniform(), 0.52, 0.3);
  const CdfPtr plain = uniform();
  std::size_t unit_paths = 0, integer_paths = 0, bad = 0;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    Stream s = Stream::derive(kPrimarySeed, "acceptance/beta-paths", r);
    const auto beta = make_beta(sample(r % 2 ? *atom : *plain, 50, s), 0.5, 50);
    std::vector<std::pair<double, double>> right;
    const auto p = beta.path();
    for (std::size_t i = 0; i < p.jump_count(); ++i)
      if (p.jump_times()[i] > 0.0) right.emplace_back(p.jump_times()[i], p.jump_sizes()[i]);
    switch (classify_counting(CadlagStep::from_jumps(0.0, right))) {
      case CountingClass::kUnitJumps: ++unit_paths; break;
      case CountingClass::kIntegerJumps: ++integer_paths; break;
      case CountingClass::kNeither: ++bad; break;
    }
  }
  std::size_t poisson_bad = 0;
  const C1Derivatives d{2.0, 2.0 / 3.0, 0.25};
  for (std::uint64_t r = 0; r < 10000; ++r) {
    Stream s = Stream::derive(kPrimarySeed, "acceptance/n0-paths", r);
    const auto path = sample_n0_path(d, 30.0, s);
    if (classify_counting(path.right_path()) != CountingClass::kUnitJumps) ++poisson_bad;
  }
  return {bad == 0 && poisson_bad == 0,
          "beta_n: " + std::to_string(unit_paths) + " UNIT, " + std::to_string(integer_paths) +
              " INTEGER, " + std::to_string(bad) + " NEITHER; N_0 right paths not UNIT: " +
              std::to_string(poisson_bad) + " of 10000"};
}

Outcome modulus_oracle() {
  std::mt19937_64 gen(kPrimarySeed + 200);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int mismatches = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const CadlagStep f = oracle::random_step(gen, 4, 1.1);
    const double delta = 0.02 + 0.6 * unit(gen);
    const double lib = modulus_w_hat(f, 1, delta);
    const double brute = oracle::lattice_w_hat(f, 1, delta, 1e-3, 1e-6);
    if (lib != brute) {
      ++mismatches;
      worst = std::max(worst, std::abs(lib - brute));
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " of 200 differ from the lattice search" +
                               (mismatches ? fmt(" (largest %.3g)", worst) : std::string())};
}

Outcome j1_sanity() {
  double worst = 0.0;
  for (int k = 2; k <= 64; ++k) {
    const CadlagStep a(0.0, {1.0 / k}, {1.0}), b(0.0, {0.0}, {1.0});
    worst = std::max(worst, std::abs(j1_local_distance(a, b, 1) - 1.0 / k));
  }
  std::mt19937_64 gen(kPrimarySeed + 300);
  int asym = 0, triangle = 0;
  for (int k = 0; k < 500; ++k) {
    const CadlagStep f = oracle::random_step(gen, 4, 1.3);
    const CadlagStep g = oracle::random_step(gen, 4, 1.3);
    const CadlagStep h = oracle::random_step(gen, 4, 1.3);
    const double fg = j1_local_distance(f, g, 1);
    if (std::abs(fg - j1_local_distance(g, f, 1)) > 1e-9) ++asym;
    if (fg > j1_local_distance(f, h, 1) + j1_local_distance(h, g, 1) + 1e-9) ++triangle;
  }
  return {worst <= 1e-9 && asym == 0 && triangle == 0,
          fmt("max |d - 1/k| = %.3g; ", worst) + std::to_string(asym) + " asymmetric, " +
              std::to_string(triangle) + " triangle violations in 500 triples"};
}

Outcome changepoint() {
  auto run = [](std::uint64_t seed, std::string& line) {
    auto cfg = default_config("changepoint");
    cfg.seed = seed;
    cfg.n_schedule = {10000};
    cfg.replications = 2000;
    const auto rep = run_changepoint(cfg, 0);
    bool ok = true;
    line += fmt("seed %.0f:", double(seed));
    for (const auto& c : rep.checks) {
      if (c.name == "b_variance") continue;  // not part of this criterion
      ok = ok && c.passed;
      line += " " + c.name + fmt(" %.4g", c.value) + (c.passed ? "" : "(fail)");
    }
    return ok;
  };
  std::string line;
  bool ok = run(kPrimarySeed, line);
  if (!ok) {
    line += "; rerun ";
    ok = run(kRerunSeed, line);
  }
  return {ok, line};
}

Outcome reproducibility() {
  int differing = 0;
  std::string names;
  for (const char* kind : {"fidi", "independence", "linkage", "modulus", "changepoint"}) {
    std::string reports[2], metrics[2];
    const unsigned threads[2] = {1, 4};
    for (int i = 0; i < 2; ++i) {
      empirica_run_options opts{0, 0, threads[i]};
      empirica_result* res = nullptr;
      if (empirica_run(kind, nullptr, &opts, &res) != EMPIRICA_OK)
        return {false, std::string(kind) + ": " + empirica_last_error()};
      reports[i] = empirica_result_report(res);
      metrics[i] = empirica_result_metrics_csv(res);
      empirica_result_destroy(res);
    }
    if (reports[0] != reports[1] || metrics[0] != metrics[1]) {
      ++differing;
      names += std::string(" ") + kind;
    }
  }
  return {differing == 0, differing == 0 ? "report.json and metrics.csv byte-identical at 1 and 4 threads "
                                           "for all five experiments"
                                         : "differ:" + names};
}

}  // namespace

int main() {
  report(1, "exact cf equals brute force", 10, exact_cf_oracle);
  report(2, "exact cf converges to the limit cf", 5, cf_convergence);
  report(3, "exact independence gap", 0, independence_gap);
  report(4, "variance of alpha_n equals F(1-F)", 30, variance_identity);
  report(5, "marginal law of beta_n(1)", 0, beta_marginal);
  report(6, "beta_n equals rescaled empirical cdf increments", 0, linkage);
  report(7, "fourth-moment bound on alpha_n increments", 0, moment_bound);
  report(8, "counting-process classes of sampled paths", 0, counting_classes);
  report(9, "modulus equals lattice search", 0, modulus_oracle);
  report(10, "J1 distance anchors and metric axioms", 0, j1_sanity);
  report(11, "change-point estimator limit law", 300, changepoint);
  report(12, "reproducibility across thread counts", 0, reproducibility);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
