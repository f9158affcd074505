#include "empirica/dists.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "empirica/error.hpp"

namespace empirica {

namespace {

using nlohmann::json;

void check_unit_open(double u) {
  if (!(u > 0.0 && u < 1.0)) fail(ErrorCode::kInvalidArgument, "quantile level must lie in (0, 1)");
}

// Derivatives of a piecewise-linear F with slope `slope(x)` away from kinks.
C1Derivatives kink_derivatives(double tau, double left_slope, double right_slope) {
  return {left_slope, right_slope, tau};
}

double number(const json& spec, const char* key) {
  if (!spec.contains(key) || !spec.at(key).is_number())
    fail(ErrorCode::kConfig, std::string("distribution: missing numeric '") + key + "'");
  return spec.at(key).get<double>();
}

void only_keys(const json& spec, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : spec.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end())
      fail(ErrorCode::kConfig, "distribution: unknown key '" + key + "'");
  }
}

}  // namespace

// Uniform01

double Uniform01::eval(double t) const { return std::clamp(t, 0.0, 1.0); }

double Uniform01::quantile(double u) const {
  check_unit_open(u);
  return u;
}

std::optional<C1Derivatives> Uniform01::closed_form_derivatives(double tau) const {
  if (tau < 0.0 || tau > 1.0) return kink_derivatives(tau, 0.0, 0.0);
  return kink_derivatives(tau, tau > 0.0 ? 1.0 : 0.0, tau < 1.0 ? 1.0 : 0.0);
}

json Uniform01::describe() const { return {{"name", "uniform01"}}; }

// StandardNormal

double StandardNormal::eval(double t) const {
  return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

double StandardNormal::quantile(double u) const {
  check_unit_open(u);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

std::optional<C1Derivatives> StandardNormal::closed_form_derivatives(double tau) const {
  const double density = std::exp(-0.5 * tau * tau) / std::sqrt(2.0 * std::numbers::pi);
  return C1Derivatives{density, density, tau};
}

json StandardNormal::describe() const { return {{"name", "normal"}}; }

// PolygonalF

PolygonalF::PolygonalF(double tau, double gamma) : tau_(tau), gamma_(gamma) {
  if (!(tau > 0.0 && tau < 1.0) || !(gamma > 0.0 && gamma < 1.0))
    fail(ErrorCode::kInvalidArgument, "polygonal cdf needs tau, gamma in (0, 1)");
}

double PolygonalF::eval(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t <= tau_) return gamma_ * (t / tau_);
  return gamma_ + (1.0 - gamma_) * (t - tau_) / (1.0 - tau_);
}

double PolygonalF::quantile(double u) const {
  check_unit_open(u);
  if (u <= gamma_) return tau_ * (u / gamma_);
  return tau_ + (1.0 - tau_) * (u - gamma_) / (1.0 - gamma_);
}

std::optional<C1Derivatives> PolygonalF::closed_form_derivatives(double x) const {
  const double s1 = gamma_ / tau_;
  const double s2 = (1.0 - gamma_) / (1.0 - tau_);
  auto slope_left_of = [&](double t) { return t <= 0.0 ? 0.0 : t <= tau_ ? s1 : t <= 1.0 ? s2 : 0.0; };
  auto slope_right_of = [&](double t) { return t < 0.0 ? 0.0 : t < tau_ ? s1 : t < 1.0 ? s2 : 0.0; };
  return kink_derivatives(x, slope_left_of(x), slope_right_of(x));
}

json PolygonalF::describe() const {
  return {{"name", "polygonal"}, {"tau", tau_}, {"gamma", gamma_}};
}

// AtomMix

AtomMix::AtomMix(CdfPtr base, double atom, double mass)
    : base_(std::move(base)), atom_(atom), mass_(mass) {
  if (!base_) fail(ErrorCode::kInvalidArgument, "atom mix needs a base distribution");
  if (!(mass > 0.0 && mass < 1.0)) fail(ErrorCode::kInvalidArgument, "atom mass must lie in (0, 1)");
  if (!std::isfinite(atom)) fail(ErrorCode::kInvalidArgument, "atom location must be finite");
}

double AtomMix::eval(double t) const {
  return (1.0 - mass_) * base_->eval(t) + (t >= atom_ ? mass_ : 0.0);
}

double AtomMix::left_limit(double t) const {
  return (1.0 - mass_) * base_->left_limit(t) + (t > atom_ ? mass_ : 0.0);
}

double AtomMix::quantile(double u) const {
  check_unit_open(u);
  const double below = (1.0 - mass_) * base_->eval(atom_);
  if (u <= below) return base_->quantile(u / (1.0 - mass_));
  if (u <= below + mass_) return atom_;
  return base_->quantile((u - mass_) / (1.0 - mass_));
}

std::optional<C1Derivatives> AtomMix::closed_form_derivatives(double tau) const {
  auto d = base_->closed_form_derivatives(tau);
  if (!d) return std::nullopt;
  d->rho1 *= 1.0 - mass_;
  d->rho2 *= 1.0 - mass_;
  return d;
}

json AtomMix::describe() const {
  return {{"name", "atom_mix"}, {"base", base_->describe()}, {"atom", atom_}, {"mass", mass_}};
}

CdfPtr make_cdf(const json& spec) {
  if (!spec.is_object() || !spec.contains("name") || !spec.at("name").is_string())
    fail(ErrorCode::kConfig, "distribution: expected an object with a string 'name'");
  const std::string name = spec.at("name").get<std::string>();
  try {
    if (name == "uniform01") {
      only_keys(spec, {"name"});
      return std::make_shared<Uniform01>();
    }
    if (name == "normal") {
      only_keys(spec, {"name"});
      return std::make_shared<StandardNormal>();
    }
    if (name == "polygonal") {
      only_keys(spec, {"name", "tau", "gamma"});
      return std::make_shared<PolygonalF>(number(spec, "tau"), number(spec, "gamma"));
    }
    if (name == "atom_mix") {
      only_keys(spec, {"name", "base", "atom", "mass"});
      CdfPtr base = spec.contains("base") ? make_cdf(spec.at("base"))
                                          : std::make_shared<Uniform01>();
      return std::make_shared<AtomMix>(std::move(base), number(spec, "atom"), number(spec, "mass"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    fail(ErrorCode::kConfig, std::string("distribution '") + name + "': " + e.what());
  }
  fail(ErrorCode::kConfig, "distribution: unknown name '" + name + "'");
}

C1Derivatives one_sided_derivatives(const Cdf& f, double tau, DerivativeMode mode,
                                    const NumericDerivativeOptions& opts) {
  if (mode == DerivativeMode::kClosedForm) {
    auto d = f.closed_form_derivatives(tau);
    if (!d) fail(ErrorCode::kInvalidArgument, "no closed-form derivatives for this distribution");
    return *d;
  }

  const double f_tau = f.eval(tau);
  const double f_tau_minus = f.left_limit(tau);
  auto limit = [&](auto quotient, const char* side) {
    std::vector<double> rich;
    double h = std::ldexp(1.0, -opts.k_min);
    double prev = quotient(h);
    for (int k = opts.k_min + 1; k <= opts.k_max; ++k) {
      h *= 0.5;
      const double cur = quotient(h);
      rich.push_back(2.0 * cur - prev);
      prev = cur;
      const std::size_t n = rich.size();
      if (n >= 3) {
        const double a = rich[n - 1], b = rich[n - 2], c = rich[n - 3];
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
        const double tol = opts.rel_tol * scale;
        if (std::abs(a - b) <= tol && std::abs(b - c) <= tol) return a;
      }
    }
    fail(ErrorCode::kNonConverged,
         std::string(side) + " difference quotients did not settle at tau = " + std::to_string(tau));
  };
  const double rho1 = limit([&](double h) { return (f_tau_minus - f.eval(tau - h)) / h; }, "left");
  const double rho2 = limit([&](double h) { return (f.eval(tau + h) - f_tau) / h; }, "right");
  return {rho1, rho2, tau};
}

PathFn quantile_transform(PathFn x, CdfPtr f) {
  return [x = std::move(x), f = std::move(f)](double t) { return x(f->eval(t)); };
}

std::vector<double> sample(const Cdf& f, std::size_t n, Stream& stream) {
  std::vector<double> out(n);
  for (auto& v : out) v = f.quantile(stream.uniform());
  return out;
}

std::vector<double> sample_from_uniforms(const Cdf& f, std::span<const double> u) {
  std::vector<double> out;
  out.reserve(u.size());
  for (double v : u) out.push_back(f.quantile(v));
  return out;
}

}  // namespace empirica
