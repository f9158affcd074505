#pragma once

#include <span>
#include <utility>
#include <vector>

namespace empirica {

/// Right-continuous step function on the real line with finitely many jumps.
///
///   f(t)  = base + sum{ size_i : time_i <= t }
///   f(t-) = base + sum{ size_i : time_i <  t }
///
/// Jump times are strictly increasing and every jump size is nonzero. A step
/// function without jumps is a constant.
class CadlagStep {
 public:
  CadlagStep() = default;
  explicit CadlagStep(double base) : base_(base) {}

  /// Throws kInvalidArgument unless times are strictly increasing, finite,
  /// and all sizes are nonzero.
  CadlagStep(double base, std::vector<double> jump_times,
             std::vector<double> jump_sizes);

  /// Builds from unsorted (time, size) pairs: sorts, merges equal times and
  /// drops jumps that cancel to zero.
  static CadlagStep from_jumps(double base,
                               std::vector<std::pair<double, double>> jumps);

  double eval(double t) const;
  double left_limit(double t) const;

  double base() const { return base_; }
  std::span<const double> jump_times() const { return times_; }
  std::span<const double> jump_sizes() const { return sizes_; }
  std::size_t jump_count() const { return times_.size(); }

  /// Value after the first `k` jumps, k in [0, jump_count()].
  double level(std::size_t k) const { return k == 0 ? base_ : levels_[k - 1]; }

  /// Restriction keeping only jumps with time in [lo, hi]; the base absorbs
  /// the jumps before lo so the values on [lo, hi] are unchanged.
  CadlagStep restricted(double lo, double hi) const;

 private:
  double base_ = 0.0;
  std::vector<double> times_;
  std::vector<double> sizes_;
  std::vector<double> levels_;
};

/// Half-open interval [lo, hi).
struct Interval {
  double lo;
  double hi;
};

/// sup - inf of f over [lo, hi). Exact by jump enumeration.
double oscillation(const CadlagStep& f, Interval interval);

/// Grid -m = s_0 < ... < s_k = m on [-m, m].
struct Grid {
  std::vector<double> points;
  int m = 1;
  double delta = 0.0;

  /// Every interior cell [s_{i-1}, s_i), i = 2..k-1, is wider than delta.
  bool is_sparse() const;
};

/// max_i w(f, [s_{i-1}, s_i)) for a concrete grid.
double grid_modulus(const CadlagStep& f, const Grid& grid);

/// Infimum over delta-sparse grids on [-m, m] of the largest cell oscillation.
/// Exact: the objective only depends on which jumps fall strictly inside a
/// cell, so cuts are either at jump times or somewhere in the open gap between
/// two jumps; a feasibility DP tracks the leftmost admissible position of the
/// last cut and a bisection over the finite set of possible cell
/// oscillations recovers the infimum.
double modulus_w_hat(const CadlagStep& f, int m, double delta);

/// Local Skorokhod J1 distance of the restrictions of f and g to [-m, m]:
///
///   d_m(f, g) = inf_lambda max( sup_t |lambda(t) - t|,
///                               sup_{t in [-m,m]} |f(lambda(t)) - g(t)| )
///
/// over increasing homeomorphisms lambda of [-m, m] fixing both endpoints.
/// This is a metric (symmetric, triangle inequality).
///
/// For step functions lambda only moves f's jumps inside (-m, m), each by at
/// most the time budget, without reordering. The result is the smallest
/// candidate value c (time budgets from jump/jump and jump/endpoint
/// coincidences, value gaps from level differences) for which a sweep DP
/// over (f-jumps placed, g-jumps passed) finds a placement with time budget
/// c and value gap c. Window comparisons carry an absolute slack of
/// kJ1TimeSlack to absorb rounding in the candidate budgets.
double j1_local_distance(const CadlagStep& f, const CadlagStep& g, int m);

inline constexpr double kJ1TimeSlack = 1e-12;

/// sum_{m=1}^{m_max} 2^{-m} min(1, d_m(f, g)).
double j1_distance(const CadlagStep& f, const CadlagStep& g, int m_max);

/// sup_{t in [-m, m]} |f(t) - g(t)|, exact.
double sup_distance(const CadlagStep& f, const CadlagStep& g, int m);

enum class CountingClass { kUnitJumps, kIntegerJumps, kNeither };

const char* to_string(CountingClass c) noexcept;

/// kUnitJumps: integer-valued with all jumps +1. kIntegerJumps: integer-valued
/// with positive integer jumps. kNeither otherwise.
CountingClass classify_counting(const CadlagStep& f);

/// Piecewise-linear time change through anchor pairs (u_j, v_j), identity
/// outside the anchor range. Anchors must be strictly increasing in both
/// coordinates.
class TimeChange {
 public:
  TimeChange() = default;
  explicit TimeChange(std::vector<std::pair<double, double>> anchors);

  double operator()(double t) const;
  double inverse(double s) const;
  /// sup_t |lambda(t) - t|, attained at an anchor.
  double max_displacement() const;

 private:
  std::vector<std::pair<double, double>> anchors_;
};

/// f composed with lambda, as a step function: each jump at u moves to
/// lambda^{-1}(u).
CadlagStep compose(const CadlagStep& f, const TimeChange& lambda);

}  // namespace empirica
