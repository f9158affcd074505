#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "empirica/charfn.hpp"
#include "empirica/error.hpp"

using namespace empirica;
using std::numbers::pi;

namespace {

CdfPtr uniform() { return std::make_shared<Uniform01>(); }

std::vector<CdfPtr> matrix_cdfs() {
  return {uniform(), std::make_shared<PolygonalF>(0.25, 0.5),
          std::make_shared<AtomMix>(uniform(), 0.25, 0.2)};
}

// Outcome probabilities of one observation, from interval masses.
std::array<double, 4> cell_probabilities(const Cdf& f, double tau, double t, std::size_t n) {
  const double e = tau + t / static_cast<double>(n);
  double window = 0.0, both = 0.0;
  if (t >= 0.0) {
    window = f.eval(e) - f.eval(tau);                  // (tau, e]
    const double top = std::min(e, t);
    both = top > tau ? f.eval(top) - f.eval(tau) : 0.0;  // (tau, min(e, t)]
  } else {
    window = f.left_limit(tau) - f.eval(e);            // (e, tau)
    if (t >= tau) both = window;
    else if (t > e) both = f.eval(t) - f.eval(e);       // (e, t]
  }
  const double below = f.eval(t);
  return {1.0 - below - window + both, window - both, below - both, both};
}

// Sum over all 4^n outcome sequences.
Complex enumerate_cf(const Cdf& f, double tau, double t, std::size_t n, double x, double y) {
  const auto p = cell_probabilities(f, tau, t, n);
  const double root = std::sqrt(static_cast<double>(n));
  const double sign = t >= 0.0 ? 1.0 : -1.0;
  Complex total = 0.0;
  std::function<void(std::size_t, double, int, int)> walk = [&](std::size_t depth, double prob,
                                                                int a, int b) {
    if (prob == 0.0) return;
    if (depth == n) {
      const double alpha = root * (a / static_cast<double>(n) - f.eval(t));
      total += prob * std::exp(Complex(0.0, x * alpha + y * sign * b));
      return;
    }
    for (int c = 0; c < 4; ++c) walk(depth + 1, prob * p[c], a + (c >> 1), b + (c & 1));
  };
  walk(0, 1.0, 0, 0);
  return total;
}

double grid_gap(const CharFn& a, const CharFn& b) {
  double gap = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const double x = -3.0 + 0.75 * i, y = -3.0 + 0.75 * j;
      gap = std::max(gap, std::abs(a(x, y) - b(x, y)));
    }
  return gap;
}

}  // namespace

TEST_CASE("limit cf examples") {
  const C1Derivatives d{0.0, 1.0, 0.0};
  const auto psi = psi_limit(uniform(), d, 0.5);
  CHECK(psi(0, 0) == Complex(1.0, 0.0));
  CHECK(std::abs(psi(1, 0) - std::exp(-0.125)) < 1e-15);
  CHECK(std::abs(psi(0, pi) - std::exp(-1.0)) < 1e-15);
}

TEST_CASE("closed-form cf examples") {
  const auto two = psi_n_exact(uniform(), 0.0, 0.5, 2);
  CHECK(std::abs(two(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(two(0, pi) - 0.25) < 1e-15);
  const auto three = psi_n_exact(uniform(), 0.6, 0.5, 3);
  for (double y : {-2.0, 0.3, 1.7}) {
    const Complex expected = std::pow(1.0 + (1.0 / 6.0) * (std::exp(Complex(0, y)) - 1.0), 3);
    CHECK(std::abs(three(0, y) - expected) < 1e-14);
  }
}

TEST_CASE("closed-form cf cases and errors") {
  CHECK(psi_case(0.0, 0.5, 2) == PsiCase::kWindowInside);
  CHECK(psi_case(0.6, 0.5, 3) == PsiCase::kWindowRight);
  CHECK(psi_case(0.25, 0.5, 1) == PsiCase::kUndefined);
  auto code_of = [](auto&& call) {
    try {
      call();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code_of([] { psi_n_exact(uniform(), 0.25, 0.5, 1); }) == ErrorCode::kCaseUndefined);
  CHECK(code_of([] { psi_n_exact(uniform(), 0.25, -0.5, 4); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { psi_n_bruteforce(uniform(), 0.25, 0.5, 13); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("brute force for t < 0") {
  const auto psi = psi_n_bruteforce(uniform(), 0.5, -1.0, 4);
  CHECK(std::abs(psi(0, 0) - 1.0) < 1e-15);
  for (double y : {-2.5, 0.4, 1.0, 3.0}) {
    const Complex expected = std::pow(1.0 + 0.25 * (std::exp(Complex(0, -y)) - 1.0), 4);
    CHECK(std::abs(psi(0, y) - expected) < 1e-13);
  }
}

TEST_CASE("brute force and table agree with sequence enumeration") {
  for (const auto& f : matrix_cdfs())
    for (double tau : {0.0, 0.25, 0.6})
      for (double t : {-1.5, -0.1, 0.1, 0.5, 2.0})
        for (std::size_t n : {1u, 2u, 3u, 5u}) {
          const auto brute = psi_n_bruteforce(f, tau, t, n);
          const auto table = psi_n_table(f, tau, t, n);
          const auto cells = single_observation_table(*f, tau, t, n);
          const auto expected = cell_probabilities(*f, tau, t, n);
          for (int c = 0; c < 4; ++c) CHECK(std::abs(cells[c] - expected[c]) < 1e-15);
          for (double x : {-2.0, 0.7})
            for (double y : {-1.1, 2.9}) {
              const Complex want = enumerate_cf(*f, tau, t, n, x, y);
              CHECK(std::abs(brute(x, y) - want) < 1e-12);
              CHECK(std::abs(table(x, y) - want) < 1e-12);
            }
        }
}

TEST_CASE("closed form equals brute force on the test matrix") {
  for (const auto& f : matrix_cdfs())
    for (double tau : {0.0, 0.25, 0.6})
      for (double t : {0.1, 0.5})
        for (std::size_t n = 2; n <= 12; ++n) {
          if (psi_case(tau, t, n) == PsiCase::kUndefined) continue;
          CHECK(grid_gap(psi_n_exact(f, tau, t, n), psi_n_bruteforce(f, tau, t, n)) <= 1e-10);
        }
}

TEST_CASE("exact cfs are conjugate symmetric and bounded") {
  const C1Derivatives d{2.0, 2.0 / 3.0, 0.25};
  auto poly = std::make_shared<PolygonalF>(0.25, 0.5);
  const std::vector<CharFn> fns{psi_n_exact(poly, 0.25, 0.1, 7), psi_n_table(poly, 0.25, -0.7, 50),
                                psi_n_bruteforce(poly, 0.25, -0.3, 9), psi_limit(poly, d, 0.4),
                                psi_limit(poly, d, -0.4)};
  for (const auto& psi : fns)
    for (double x = -3; x <= 3; x += 0.5)
      for (double y = -3; y <= 3; y += 0.5) {
        CHECK(std::abs(psi(-x, -y) - std::conj(psi(x, y))) < 1e-14);
        CHECK(std::abs(psi(x, y)) <= 1.0 + 1e-14);
      }
}

TEST_CASE("limit cf factorizes") {
  const C1Derivatives d{2.0, 2.0 / 3.0, 0.25};
  auto poly = std::make_shared<PolygonalF>(0.25, 0.5);
  for (double t : {-0.8, 0.3}) {
    const auto psi = psi_limit(poly, d, t);
    for (double x = -3; x <= 3; x += 0.75)
      for (double y = -3; y <= 3; y += 0.75)
        CHECK(std::abs(psi(x, y) - psi(x, 0) * psi(0, y)) < 1e-15);
  }
}

TEST_CASE("negative-time limit cf is the large-n limit of the table route") {
  // The e^{-iy} form is trusted only after this comparison.
  auto poly = std::make_shared<PolygonalF>(0.25, 0.5);
  const C1Derivatives d{2.0, 2.0 / 3.0, 0.25};
  for (double t : {-0.2, -1.0}) {
    const auto limit = psi_limit(poly, d, t);
    double prev = 1.0;
    for (std::size_t n : {100u, 10000u, 1000000u}) {
      const double gap = grid_gap(psi_n_table(poly, 0.25, t, n), limit);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 2e-3);
    // The mirrored form must be visibly wrong at the same n.
    const CharFn mirrored{[&](double x, double y) { return limit(x, -y); }, {}};
    CHECK(grid_gap(psi_n_table(poly, 0.25, t, 1000000), mirrored) > 0.1);
  }
}

TEST_CASE("convergence of the exact cf along powers of two") {
  const auto limit = psi_limit(uniform(), {0.0, 1.0, 0.0}, 0.5);
  double prev = 2.0;
  for (int k = 4; k <= 14; ++k) {
    const double gap = grid_gap(psi_n_exact(uniform(), 0.0, 0.5, std::size_t{1} << k), limit);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("power routes agree") {
  for (std::size_t n : {1u, 2u, 17u, 1000u, 1000000u}) {
    const Complex delta(-3e-4, 2e-4);
    const Complex a = power_from_offset(delta, n);
    const Complex b = power_by_squaring(1.0 + delta, n);
    CHECK(std::abs(a - b) < 1e-10 + 16 * n * 2.2e-16);
  }
  CHECK(power_from_offset(Complex(0, 0), 5) == Complex(1, 0));
}

TEST_CASE("empirical cf") {
  const std::vector<double> zeros(10, 0.0), x{0.0, 1.0, -2.0}, y{0.0, 3.0, 0.5};
  const auto cf = empirical_cf(zeros, zeros, x, y);
  for (const auto& v : cf.values) CHECK(v == Complex(1, 0));
  CHECK(cf.se == doctest::Approx(1 / std::sqrt(10.0)));
  const std::vector<double> origin{0.0};
  const std::vector<double> a{0.3, -1.0, 2.0}, b{1, 0, 2};
  CHECK(empirical_cf(a, b, origin, origin).values[0] == Complex(1, 0));
  // Two replications: the average of two unit phasors.
  const std::vector<double> a2{0.0, 1.0}, b2{0.0, 0.0}, one{1.0}, zero{0.0};
  const auto half = empirical_cf(a2, b2, one, zero).values[0];
  CHECK(std::abs(half - 0.5 * (1.0 + std::exp(Complex(0, 1)))) < 1e-15);
  CHECK_THROWS_AS(empirical_cf(std::vector<double>{1.0}, std::vector<double>{1.0}, origin, origin), Error);
}

TEST_CASE("square grid") {
  std::vector<double> x, y;
  square_grid(-3, 3, 9, x, y);
  CHECK(x.size() == 81);
  CHECK(x.front() == -3.0);
  CHECK(y.back() == 3.0);
}
