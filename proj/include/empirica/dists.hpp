#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "empirica/rng.hpp"

namespace empirica {

/// One-sided derivatives of F at tau. The left one is taken
/// against F(tau-), so an atom at tau is allowed.
struct C1Derivatives {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double tau = 0.0;
};

/// Distribution function on R: non-decreasing, right-continuous, 0 at -inf
/// and 1 at +inf. Implementations are immutable.
class Cdf {
 public:
  virtual ~Cdf() = default;

  virtual double eval(double t) const = 0;
  virtual double left_limit(double t) const = 0;
  /// Left-continuous generalized inverse inf{t : F(t) >= u}, u in (0, 1).
  virtual double quantile(double u) const = 0;
  /// Exact one-sided derivatives where the implementation knows them.
  virtual std::optional<C1Derivatives> closed_form_derivatives(double tau) const = 0;

  /// Canonical description, e.g. {"name":"polygonal","tau":0.25,"gamma":0.5}.
  virtual nlohmann::json describe() const = 0;
};

using CdfPtr = std::shared_ptr<const Cdf>;

class Uniform01 final : public Cdf {
 public:
  double eval(double t) const override;
  double left_limit(double t) const override { return eval(t); }
  double quantile(double u) const override;
  std::optional<C1Derivatives> closed_form_derivatives(double tau) const override;
  nlohmann::json describe() const override;
};

/// Phi(t) = erfc(-t / sqrt 2) / 2; quantile through the inverse
/// complementary error function. Both are accurate to a few ulp in the
/// bulk; the upper tail saturates at 1 for t > ~8.3.
class StandardNormal final : public Cdf {
 public:
  double eval(double t) const override;
  double left_limit(double t) const override { return eval(t); }
  double quantile(double u) const override;
  std::optional<C1Derivatives> closed_form_derivatives(double tau) const override;
  nlohmann::json describe() const override;
};

/// Polygonal cdf on [0, 1] through (0, 0), (tau, gamma), (1, 1).
class PolygonalF final : public Cdf {
 public:
  PolygonalF(double tau, double gamma);

  double eval(double t) const override;
  double left_limit(double t) const override { return eval(t); }
  double quantile(double u) const override;
  std::optional<C1Derivatives> closed_form_derivatives(double tau) const override;
  nlohmann::json describe() const override;

  double tau() const { return tau_; }
  double gamma() const { return gamma_; }

 private:
  double tau_;
  double gamma_;
};

/// (1 - mass) * base + mass * point mass at `atom`. The base must be
/// continuous.
class AtomMix final : public Cdf {
 public:
  AtomMix(CdfPtr base, double atom, double mass);

  double eval(double t) const override;
  double left_limit(double t) const override;
  double quantile(double u) const override;
  std::optional<C1Derivatives> closed_form_derivatives(double tau) const override;
  nlohmann::json describe() const override;

  double atom() const { return atom_; }
  double mass() const { return mass_; }

 private:
  CdfPtr base_;
  double atom_;
  double mass_;
};

/// Builds a Cdf from its description. Throws kConfig on unknown names,
/// unknown keys or bad parameters.
CdfPtr make_cdf(const nlohmann::json& spec);

enum class DerivativeMode { kClosedForm, kNumeric };

struct NumericDerivativeOptions {
  int k_min = 4;   // first step h = 2^-k_min
  int k_max = 30;
  double rel_tol = 1e-6;  // over the last three Richardson iterates
};

/// One-sided rates of F at tau. Numeric mode takes difference quotients along
/// h_k = 2^-k with one Richardson step and stops once three consecutive
/// extrapolants agree to rel_tol; otherwise throws kNonConverged. Closed-form
/// mode throws kInvalidArgument if the Cdf has no closed form at tau.
C1Derivatives one_sided_derivatives(const Cdf& f, double tau, DerivativeMode mode,
                                    const NumericDerivativeOptions& opts = {});

using PathFn = std::function<double(double)>;

/// Q_F(x) = x o F.
PathFn quantile_transform(PathFn x, CdfPtr f);

/// X_k = F^{-1}(U_k) with U_k drawn from `stream`.
std::vector<double> sample(const Cdf& f, std::size_t n, Stream& stream);
/// Inversion applied to caller-supplied uniforms.
std::vector<double> sample_from_uniforms(const Cdf& f, std::span<const double> u);

}  // namespace empirica
