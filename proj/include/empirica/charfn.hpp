#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "empirica/dists.hpp"

namespace empirica {

using Complex = std::complex<double>;

/// A characteristic function of (alpha_n(t), beta_n(t)) or of its limit,
/// evaluable at (x, y), with a description of what it is.
struct CharFn {
  std::function<Complex(double, double)> fn;
  nlohmann::json meta;

  Complex operator()(double x, double y) const { return fn(x, y); }
};

/// Limit cf of (B_1(t), N_0(t)):
///   t >= 0: exp(-F(t)(1-F(t)) x^2 / 2 + rho2 t (e^{iy} - 1))
///   t <  0: exp(-F(t)(1-F(t)) x^2 / 2 + rho1 |t| (e^{-iy} - 1))
CharFn psi_limit(CdfPtr f, const C1Derivatives& d, double t);

/// Which closed form applies to (tau, t, n), t >= 0.
enum class PsiCase { kWindowInside, kWindowRight, kUndefined };
PsiCase psi_case(double tau, double t, std::size_t n);

/// Closed form for t >= 0:
///   exp(-ix sqrt(n) F(t)) [1 + F(t)(e^{ix/sqrt n} - 1) + p (e^{iy} - 1) c]^n
/// with p = F(tau + t/n) - F(tau), c = e^{ix/sqrt n} if t > tau (and the
/// window (tau, tau + t/n] lies below t), c = 1 if t <= tau. Throws
/// kCaseUndefined when t > tau but tau + t/n >= t, kInvalidArgument for t < 0.
///
/// The n-th power is taken in log space from the base's offset from 1; every
/// evaluation is cross-checked against repeated squaring and throws
/// kNumericHealth if the two differ by more than 1e-10 + 16 n eps.
CharFn psi_n_exact(CdfPtr f, double tau, double t, std::size_t n);

/// Same law for any sign of t and any atoms, from the single-observation
/// table of (1{X <= t}, 1{X in window}) raised to the n-th power.
CharFn psi_n_table(CdfPtr f, double tau, double t, std::size_t n);

/// Reference for small n (<= 12): splits the line at t and the window ends
/// into open gaps and points, sums each piece's mass into the four outcome
/// classes, then sums exp(i x alpha + i y beta) against the multinomial law of
/// the class counts. No powers, no closed form.
CharFn psi_n_bruteforce(CdfPtr f, double tau, double t, std::size_t n);

/// Probability of each outcome (a, b) in {0,1}^2 for one observation, indexed
/// 2a + b, where a = 1{X <= t} and b = 1{X in window}.
std::array<double, 4> single_observation_table(const Cdf& f, double tau, double t, std::size_t n);

/// base^n via exp(n log base), with log base computed from delta = base - 1.
Complex power_from_offset(Complex delta, std::size_t n);
/// base^n by repeated squaring.
Complex power_by_squaring(Complex base, std::size_t n);

/// Sample cf of pairs (a_r, b_r) at grid points (x_j, y_j). Each component
/// carries the bound SE = 1/sqrt(M). Reductions are pairwise, so the result
/// depends only on the data order.
struct EmpiricalCf {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<Complex> values;
  std::size_t replications = 0;
  double se = 0.0;
};

EmpiricalCf empirical_cf(std::span<const double> a, std::span<const double> b,
                         std::span<const double> x, std::span<const double> y);

/// Square grid {lo + i h}^2 with `points` per side.
void square_grid(double lo, double hi, std::size_t points, std::vector<double>& x,
                 std::vector<double>& y);

}  // namespace empirica
