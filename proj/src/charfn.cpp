#include "empirica/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "empirica/error.hpp"
#include "empirica/parallel.hpp"

namespace empirica {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// e^{i theta} - 1 without cancellation near theta = 0.
Complex expi_minus_one(double theta) {
  const double s = std::sin(0.5 * theta);
  return {-2.0 * s * s, std::sin(theta)};
}

// log(1 + delta), principal branch.
Complex log_one_plus(Complex delta) {
  const double re = delta.real(), im = delta.imag();
  const double modulus_log = 0.5 * std::log1p(2.0 * re + re * re + im * im);
  return {modulus_log, std::atan2(im, 1.0 + re)};
}

// phase_factor * (1 + delta)^n with the cross-check against repeated squaring.
Complex checked_power(Complex delta, std::size_t n, double phase) {
  const Complex log_value = static_cast<double>(n) * log_one_plus(delta) + Complex(0.0, phase);
  const Complex value = std::exp(log_value);
  const Complex squared = power_by_squaring(1.0 + delta, n) * std::polar(1.0, phase);
  const double tol = 1e-10 + 16.0 * static_cast<double>(n) * kEps;
  if (!(std::abs(value - squared) <= tol))
    fail(ErrorCode::kNumericHealth, "cf power: log-space and squaring routes differ by " +
                                        std::to_string(std::abs(value - squared)));
  return value;
}

void check_n(std::size_t n) {
  if (n == 0) fail(ErrorCode::kInvalidArgument, "cf needs n >= 1");
}

struct Window {
  double lo;
  double hi;
  bool right;  // (lo, hi] for t >= 0, (lo, hi) for t < 0
};

Window window_for(double tau, double t, std::size_t n) {
  const double edge = tau + t / static_cast<double>(n);
  return t >= 0.0 ? Window{tau, edge, true} : Window{edge, tau, false};
}

bool in_window(const Window& w, double r) {
  return w.right ? (r > w.lo && r <= w.hi) : (r > w.lo && r < w.hi);
}

}  // namespace

Complex power_from_offset(Complex delta, std::size_t n) {
  return std::exp(static_cast<double>(n) * log_one_plus(delta));
}

Complex power_by_squaring(Complex base, std::size_t n) {
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1u) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

CharFn psi_limit(CdfPtr f, const C1Derivatives& d, double t) {
  const double ft = f->eval(t);
  const double variance = ft * (1.0 - ft);
  const double rate = t >= 0.0 ? d.rho2 * t : d.rho1 * -t;
  const double sign = t >= 0.0 ? 1.0 : -1.0;
  CharFn out;
  out.fn = [variance, rate, sign](double x, double y) {
    return std::exp(Complex(-0.5 * variance * x * x, 0.0) + rate * expi_minus_one(sign * y));
  };
  out.meta = {{"kind", "exact_limit"}, {"t", t}, {"rho1", d.rho1}, {"rho2", d.rho2},
              {"tau", d.tau}, {"F", f->describe()}};
  return out;
}

PsiCase psi_case(double tau, double t, std::size_t n) {
  if (t <= tau) return PsiCase::kWindowRight;
  if (tau + t / static_cast<double>(n) < t) return PsiCase::kWindowInside;
  return PsiCase::kUndefined;
}

CharFn psi_n_exact(CdfPtr f, double tau, double t, std::size_t n) {
  check_n(n);
  if (t < 0.0) fail(ErrorCode::kInvalidArgument, "closed-form cf needs t >= 0");
  const PsiCase which = psi_case(tau, t, n);
  if (which == PsiCase::kUndefined)
    fail(ErrorCode::kCaseUndefined, "closed-form cf undefined: t > tau but tau + t/n >= t");
  const double ft = f->eval(t);
  const double p = f->eval(tau + t / static_cast<double>(n)) - f->eval(tau);
  const double root_n = std::sqrt(static_cast<double>(n));
  const bool inside = which == PsiCase::kWindowInside;
  CharFn out;
  out.fn = [=](double x, double y) {
    const double u = x / root_n;
    const Complex window_factor = inside ? std::polar(1.0, u) : Complex(1.0);
    const Complex delta = ft * expi_minus_one(u) + p * expi_minus_one(y) * window_factor;
    return checked_power(delta, n, -x * root_n * ft);
  };
  out.meta = {{"kind", "exact_n"}, {"n", n}, {"t", t}, {"tau", tau}, {"F", f->describe()}};
  return out;
}

std::array<double, 4> single_observation_table(const Cdf& f, double tau, double t,
                                               std::size_t n) {
  check_n(n);
  const Window w = window_for(tau, t, n);
  const double ft = f.eval(t);
  double window_mass = 0.0;
  double both = 0.0;
  if (w.right) {
    window_mass = f.eval(w.hi) - f.eval(w.lo);
    const double top = std::min(w.hi, t);
    both = top > w.lo ? f.eval(top) - f.eval(w.lo) : 0.0;
  } else {
    window_mass = f.left_limit(w.hi) - f.eval(w.lo);
    if (t >= w.hi) both = window_mass;
    else if (t > w.lo) both = f.eval(t) - f.eval(w.lo);
  }
  const double only_a = ft - both;
  const double only_b = window_mass - both;
  return {1.0 - only_a - only_b - both, only_b, only_a, both};
}

CharFn psi_n_table(CdfPtr f, double tau, double t, std::size_t n) {
  const auto q = single_observation_table(*f, tau, t, n);
  const double ft = f->eval(t);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double sign = t >= 0.0 ? 1.0 : -1.0;
  CharFn out;
  out.fn = [=](double x, double y) {
    // Shift the alpha centering into a phase so the base stays near 1.
    Complex delta = 0.0;
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b)
        delta += q[2 * a + b] * expi_minus_one(x * a / root_n + sign * y * b);
    return checked_power(delta, n, -x * root_n * ft);
  };
  out.meta = {{"kind", "exact_n"}, {"route", "table"}, {"n", n}, {"t", t}, {"tau", tau},
              {"F", f->describe()}};
  return out;
}

CharFn psi_n_bruteforce(CdfPtr f, double tau, double t, std::size_t n) {
  check_n(n);
  if (n > 12) fail(ErrorCode::kInvalidArgument, "brute-force cf is limited to n <= 12");
  const Window w = window_for(tau, t, n);

  std::vector<double> cuts{t, w.lo, w.hi};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::array<double, 4> mass{};
  auto add = [&](double probability, double representative) {
    const int a = representative <= t ? 1 : 0;
    const int b = in_window(w, representative) ? 1 : 0;
    mass[static_cast<std::size_t>(2 * a + b)] += probability;
  };
  add(f->left_limit(cuts.front()), cuts.front() - 1.0);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    add(f->eval(cuts[i]) - f->left_limit(cuts[i]), cuts[i]);
    if (i + 1 < cuts.size())
      add(f->left_limit(cuts[i + 1]) - f->eval(cuts[i]), 0.5 * (cuts[i] + cuts[i + 1]));
  }
  add(1.0 - f->eval(cuts.back()), cuts.back() + 1.0);

  const double ft = f->eval(t);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double sign = t >= 0.0 ? 1.0 : -1.0;
  std::vector<double> log_fact(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));

  CharFn out;
  out.fn = [=](double x, double y) {
    Complex sum = 0.0;
    for (std::size_t n00 = 0; n00 <= n; ++n00)
      for (std::size_t n01 = 0; n00 + n01 <= n; ++n01)
        for (std::size_t n10 = 0; n00 + n01 + n10 <= n; ++n10) {
          const std::size_t n11 = n - n00 - n01 - n10;
          const std::size_t counts[4] = {n00, n01, n10, n11};
          double prob = std::exp(log_fact[n] - log_fact[n00] - log_fact[n01] - log_fact[n10] -
                                 log_fact[n11]);
          for (int c = 0; c < 4; ++c) prob *= std::pow(mass[c], static_cast<double>(counts[c]));
          if (prob == 0.0) continue;
          const double below_t = static_cast<double>(n10 + n11);
          const double in_win = static_cast<double>(n01 + n11);
          const double alpha = (below_t - static_cast<double>(n) * ft) / root_n;
          const double beta = sign * in_win;
          sum += prob * std::polar(1.0, x * alpha + y * beta);
        }
    return sum;
  };
  out.meta = {{"kind", "exact_n"}, {"route", "bruteforce"}, {"n", n}, {"t", t}, {"tau", tau},
              {"F", f->describe()}};
  return out;
}

EmpiricalCf empirical_cf(std::span<const double> a, std::span<const double> b,
                         std::span<const double> x, std::span<const double> y) {
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "cf pairs differ in length");
  if (x.size() != y.size()) fail(ErrorCode::kInvalidArgument, "grid coordinates differ in length");
  if (a.size() < 2) fail(ErrorCode::kEmptyRun, "empirical cf needs at least two replications");
  EmpiricalCf out;
  out.x.assign(x.begin(), x.end());
  out.y.assign(y.begin(), y.end());
  out.replications = a.size();
  out.se = 1.0 / std::sqrt(static_cast<double>(a.size()));
  const double inv_m = 1.0 / static_cast<double>(a.size());
  std::vector<double> re(a.size()), im(a.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t r = 0; r < a.size(); ++r) {
      const double phase = x[j] * a[r] + y[j] * b[r];
      re[r] = std::cos(phase);
      im[r] = std::sin(phase);
    }
    out.values.emplace_back(pairwise_sum(re) * inv_m, pairwise_sum(im) * inv_m);
  }
  return out;
}

void square_grid(double lo, double hi, std::size_t points, std::vector<double>& x,
                 std::vector<double>& y) {
  x.clear();
  y.clear();
  if (points == 0) return;
  auto at = [&](std::size_t i) {
    return points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  };
  for (std::size_t i = 0; i < points; ++i)
    for (std::size_t j = 0; j < points; ++j) {
      x.push_back(at(i));
      y.push_back(at(j));
    }
}

}  // namespace empirica
