#include "empirica/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "empirica/error.hpp"
#include "empirica/parallel.hpp"
#include "empirica/stats.hpp"

namespace empirica {

ChangePointModel::ChangePointModel(double tau, double gamma)
    : tau_(tau), gamma_(gamma), cdf_(std::make_shared<PolygonalF>(tau, gamma)) {
  if (tau == gamma) fail(ErrorCode::kInvalidArgument, "change-point model needs tau != gamma");
}

double ChangePointModel::default_horizon() const {
  return 50.0 / std::min({std::abs(1.0 - rho1()), std::abs(1.0 - rho2()), 1.0});
}

EstimatePair estimate(std::span<const double> sample) {
  if (sample.empty()) fail(ErrorCode::kEmptySample, "estimate of an empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  if (x.front() < 0.0 || x.back() > 1.0)
    fail(ErrorCode::kInvalidArgument, "change-point sample must lie in [0, 1]");
  const std::size_t n = x.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  struct Candidate {
    double t;
    double value;
    bool left;
    std::size_t index;  // count of sample points <= t
  };
  // Increasing t; at equal t the left limit comes first.
  std::vector<Candidate> cands;
  cands.reserve(2 * n + 1);
  if (x.front() > 0.0) cands.push_back({0.0, 0.0, false, 0});
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && x[j] == x[i]) ++j;
    const double t = x[i];
    cands.push_back({t, std::abs(static_cast<double>(i) * inv_n - t), true, j});
    cands.push_back({t, std::abs(static_cast<double>(j) * inv_n - t), false, j});
    i = j;
  }

  double best = 0.0;
  for (const auto& c : cands) best = std::max(best, c.value);
  EstimatePair out;
  out.n = n;
  out.achieved = best;
  bool found = false;
  for (const auto& c : cands) {
    if (c.value < best - kArgmaxTieTolerance) continue;
    ++out.ties;
    if (found) continue;
    out.tau_hat = c.t;
    out.gamma_hat = static_cast<double>(c.index) * inv_n;
    out.from_left_limit = c.left;
    found = true;
  }
  return out;
}

ArgmaxResult drifted_argmax(const TwoSidedPoissonPath& path, int sign) {
  const double T = path.horizon();
  const CadlagStep& p = path.path();
  const auto times = p.jump_times();
  ArgmaxResult best{0.0, -std::numeric_limits<double>::infinity(), false};
  auto offer = [&](double t, double value) {
    if (value > best.value + kArgmaxTieTolerance ||
        (std::abs(value - best.value) <= kArgmaxTieTolerance && t < best.location)) {
      best.location = t;
      best.value = value;
    }
  };
  if (sign > 0) {
    // N_0(t) - t decreases between jumps: maxima at -T and at jump times.
    offer(-T, p.eval(-T) + T);
    for (std::size_t k = 0; k < times.size(); ++k)
      if (times[k] > -T && times[k] <= T) offer(times[k], p.level(k + 1) - times[k]);
  } else {
    // t - N_0(t) increases between jumps: suprema as left limits at jump
    // times (resolved to the jump) and at T.
    for (std::size_t k = 0; k < times.size(); ++k)
      if (times[k] > -T && times[k] <= T) offer(times[k], times[k] - p.level(k));
    offer(T, T - p.eval(T));
  }
  best.horizon_hit = best.location <= -T || best.location >= T;
  return best;
}

LimitPairSample simulate_limit_pair(const ChangePointModel& model, double horizon, Stream& stream) {
  const double T = horizon > 0.0 ? horizon : model.default_horizon();
  Stream poisson = stream.substream("argmax");
  Stream gaussian = stream.substream("gaussian");
  const auto path = sample_n0_path(model.rates(), T, poisson);
  const auto arg = drifted_argmax(path, model.drift_sign());
  const double g = model.gamma();
  return {arg.location, std::sqrt(g * (1.0 - g)) * gaussian.normal(), arg.horizon_hit};
}

ExperimentReport run_convergence_1d(const ChangePointModel& model,
                                    std::span<const std::size_t> n_schedule,
                                    std::size_t replications, std::uint64_t seed,
                                    unsigned threads, const ExperimentConfig& cfg) {
  if (replications == 0) fail(ErrorCode::kEmptyRun, "change-point run with zero replications");
  ExperimentReport report = make_report(cfg);
  const double g = model.gamma();
  const double sd = std::sqrt(g * (1.0 - g));
  const double horizon = cfg.changepoint.horizon > 0.0 ? cfg.changepoint.horizon
                                                       : model.default_horizon();
  const double se_band = cfg.tolerance.se_band;

  // Limit sample, shared by every n.
  std::vector<LimitPairSample> limit(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    Stream s = Stream::derive(seed, "changepoint/limit", r);
    limit[r] = simulate_limit_pair(model, horizon, s);
  });
  std::vector<double> a_draws, b_draws;
  std::size_t hits = 0;
  for (const auto& l : limit) {
    b_draws.push_back(l.b);
    if (l.horizon_hit) ++hits;
    else a_draws.push_back(l.a);
  }
  const double hit_rate = static_cast<double>(hits) / static_cast<double>(replications);
  if (a_draws.empty()) fail(ErrorCode::kHorizonHit, "every limit draw hit the horizon");
  const double b_var = variance(b_draws);
  const double b_var_se = variance_se(b_draws);
  report.extra["limit"] = {{"horizon", horizon},
                           {"horizon_hits", hits},
                           {"horizon_hit_rate", hit_rate},
                           {"b_variance", b_var},
                           {"b_variance_se", b_var_se},
                           {"rho1", model.rho1()},
                           {"rho2", model.rho2()}};

  const boost::math::normal_distribution<double> normal(0.0, sd);
  double last_p_gamma = 0.0, last_p_tau = 0.0, last_corr = 0.0;
  for (std::size_t n : n_schedule) {
    std::vector<double> u(replications), v(replications);
    parallel_for(replications, threads, [&](std::size_t r) {
      Stream s = Stream::derive(seed, "changepoint/n=" + std::to_string(n), r);
      const auto est = estimate(sample(*model.cdf(), n, s));
      u[r] = static_cast<double>(n) * (est.tau_hat - model.tau());
      v[r] = std::sqrt(static_cast<double>(n)) * (est.gamma_hat - g);
    });
    const auto ks_gamma = ks_one_sample(v, [&](double z) { return boost::math::cdf(normal, z); });
    const auto ks_tau = ks_two_sample(u, a_draws);
    const double corr = correlation(u, v);
    last_p_gamma = ks_gamma.p_value;
    last_p_tau = ks_tau.p_value;
    last_corr = corr;
    report.per_n.push_back({{"n", n},
                            {"ks_gamma_statistic", ks_gamma.statistic},
                            {"ks_gamma_p", ks_gamma.p_value},
                            {"ks_tau_statistic", ks_tau.statistic},
                            {"ks_tau_p", ks_tau.p_value},
                            {"correlation", corr}});
  }
  const double corr_bound = 4.0 / std::sqrt(static_cast<double>(replications));
  report.check("ks_gamma", last_p_gamma > 0.01, last_p_gamma, 0.01,
               "KS of sqrt(n)(gamma_hat - gamma) against N(0, gamma(1-gamma)) at the largest n");
  report.check("ks_tau", last_p_tau > 0.01, last_p_tau, 0.01,
               "two-sample KS of n(tau_hat - tau) against simulated A at the largest n");
  report.check("horizon_hits", hit_rate < 0.01, hit_rate, 0.01, "share of limit draws on +-T");
  report.check("correlation", std::abs(last_corr) < corr_bound, std::abs(last_corr), corr_bound,
               "|corr(n(tau_hat - tau), sqrt(n)(gamma_hat - gamma))| at the largest n");
  report.check("b_variance", std::abs(b_var - g * (1.0 - g)) <= se_band * b_var_se,
               std::abs(b_var - g * (1.0 - g)), se_band * b_var_se,
               "sample variance of B against gamma(1-gamma)");
  return report;
}

ExperimentReport run_changepoint(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  const ChangePointModel model(cfg.changepoint.tau, cfg.changepoint.gamma);
  return run_convergence_1d(model, cfg.n_schedule, cfg.replications, cfg.seed, threads, cfg);
}

}  // namespace empirica
