#include "empirica/cadlag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "empirica/error.hpp"

namespace empirica {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integer(double v) { return std::isfinite(v) && v == std::nearbyint(v); }

// max - min over a prefix-sum array on inclusive index ranges, O(1) per query.
class RangeSpread {
 public:
  explicit RangeSpread(const std::vector<double>& values) {
    const std::size_t n = values.size();
    max_.push_back(values);
    min_.push_back(values);
    for (std::size_t width = 1; 2 * width <= n; width *= 2) {
      const auto& pmax = max_.back();
      const auto& pmin = min_.back();
      std::vector<double> nmax(n - 2 * width + 1), nmin(n - 2 * width + 1);
      for (std::size_t i = 0; i < nmax.size(); ++i) {
        nmax[i] = std::max(pmax[i], pmax[i + width]);
        nmin[i] = std::min(pmin[i], pmin[i + width]);
      }
      max_.push_back(std::move(nmax));
      min_.push_back(std::move(nmin));
    }
  }

  double spread(std::size_t lo, std::size_t hi) const {
    const std::size_t len = hi - lo + 1;
    std::size_t level = 0;
    while ((std::size_t{2} << level) <= len) ++level;
    const std::size_t w = std::size_t{1} << level;
    const double mx = std::max(max_[level][lo], max_[level][hi + 1 - w]);
    const double mn = std::min(min_[level][lo], min_[level][hi + 1 - w]);
    return mx - mn;
  }

 private:
  std::vector<std::vector<double>> max_;
  std::vector<std::vector<double>> min_;
};

// Values of f on [-m, m] as (level at -m, jumps in (-m, m]).
struct WindowPath {
  std::vector<double> times;
  std::vector<double> levels;  // levels[k] = value after k window jumps
};

WindowPath window_path(const CadlagStep& f, double m) {
  WindowPath w;
  w.levels.push_back(f.eval(-m));
  const auto times = f.jump_times();
  const auto first = std::upper_bound(times.begin(), times.end(), -m);
  const auto last = std::upper_bound(times.begin(), times.end(), m);
  for (auto it = first; it != last; ++it) {
    const auto k = static_cast<std::size_t>(it - times.begin());
    w.times.push_back(*it);
    w.levels.push_back(f.level(k + 1));
  }
  return w;
}

}  // namespace

CadlagStep::CadlagStep(double base, std::vector<double> jump_times,
                       std::vector<double> jump_sizes)
    : base_(base), times_(std::move(jump_times)), sizes_(std::move(jump_sizes)) {
  if (times_.size() != sizes_.size())
    fail(ErrorCode::kInvalidArgument, "jump_times and jump_sizes differ in length");
  if (!std::isfinite(base_)) fail(ErrorCode::kInvalidArgument, "base value must be finite");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(sizes_[i]))
      fail(ErrorCode::kInvalidArgument, "jump data must be finite");
    if (sizes_[i] == 0.0) fail(ErrorCode::kInvalidArgument, "jump sizes must be nonzero");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      fail(ErrorCode::kInvalidArgument, "jump times must be strictly increasing");
  }
  levels_.resize(times_.size());
  double v = base_;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    v += sizes_[i];
    levels_[i] = v;
  }
}

CadlagStep CadlagStep::from_jumps(double base,
                                  std::vector<std::pair<double, double>> jumps) {
  std::map<double, double> merged;
  for (const auto& [t, s] : jumps) merged[t] += s;
  std::vector<double> times, sizes;
  for (const auto& [t, s] : merged) {
    if (s == 0.0) continue;
    times.push_back(t);
    sizes.push_back(s);
  }
  return CadlagStep(base, std::move(times), std::move(sizes));
}

double CadlagStep::eval(double t) const {
  const auto k = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
  return level(static_cast<std::size_t>(k));
}

double CadlagStep::left_limit(double t) const {
  const auto k = std::lower_bound(times_.begin(), times_.end(), t) - times_.begin();
  return level(static_cast<std::size_t>(k));
}

CadlagStep CadlagStep::restricted(double lo, double hi) const {
  const auto first = std::lower_bound(times_.begin(), times_.end(), lo);
  const auto last = std::upper_bound(times_.begin(), times_.end(), hi);
  const auto k0 = static_cast<std::size_t>(first - times_.begin());
  const auto k1 = static_cast<std::size_t>(last - times_.begin());
  return CadlagStep(level(k0), {times_.begin() + k0, times_.begin() + k1},
                    {sizes_.begin() + k0, sizes_.begin() + k1});
}

double oscillation(const CadlagStep& f, Interval iv) {
  if (!(iv.lo < iv.hi)) return 0.0;
  const auto times = f.jump_times();
  const auto first = std::upper_bound(times.begin(), times.end(), iv.lo);
  const auto last = std::lower_bound(times.begin(), times.end(), iv.hi);
  double lo = f.eval(iv.lo);
  double hi = lo;
  for (auto it = first; it < last; ++it) {
    const double v = f.level(static_cast<std::size_t>(it - times.begin()) + 1);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

bool Grid::is_sparse() const {
  if (points.size() < 2) return false;
  if (points.front() != -m || points.back() != m) return false;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i] > points[i - 1])) return false;
  for (std::size_t i = 2; i + 1 < points.size(); ++i)
    if (!(points[i] - points[i - 1] > delta)) return false;
  return true;
}

double grid_modulus(const CadlagStep& f, const Grid& grid) {
  double w = 0.0;
  for (std::size_t i = 1; i < grid.points.size(); ++i)
    w = std::max(w, oscillation(f, {grid.points[i - 1], grid.points[i]}));
  return w;
}

double modulus_w_hat(const CadlagStep& f, int m, double delta) {
  if (m <= 0) fail(ErrorCode::kInvalidArgument, "m must be positive");
  if (!(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "delta must be positive");
  const double lo_end = -m, hi_end = m;

  // Jumps strictly inside (-m, m); jumps at -m or m never sit inside a cell.
  std::vector<double> pos, prefix{0.0};
  {
    const auto times = f.jump_times();
    const auto sizes = f.jump_sizes();
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] > lo_end && times[i] < hi_end) {
        pos.push_back(times[i]);
        prefix.push_back(prefix.back() + sizes[i]);
      }
    }
  }
  const std::size_t r = pos.size();
  if (r == 0) return 0.0;
  const RangeSpread spread(prefix);

  // Oscillation of a cell containing jumps s..e (1-based, inclusive).
  auto cell = [&](std::size_t s, std::size_t e) {
    return s > e ? 0.0 : spread.spread(s - 1, e);
  };

  // Cut types in left-to-right order: even c = 2g is "somewhere in the open
  // gap g" (between jump g and g+1, with jump 0 = -m and jump r+1 = m); odd
  // c = 2j-1 is "exactly at jump j".
  const std::size_t types = 2 * r + 1;
  auto left_end = [](std::size_t c) { return c % 2 == 0 ? c / 2 : (c + 1) / 2 - 1; };
  auto right_start = [](std::size_t c) { return c % 2 == 0 ? c / 2 + 1 : (c + 1) / 2 + 1; };
  auto gap_lo = [&](std::size_t g) { return g == 0 ? lo_end : pos[g - 1]; };
  auto gap_hi = [&](std::size_t g) { return g == r ? hi_end : pos[g]; };

  // Infimum position of a cut of type c placed after a cut whose infimum
  // position is prev (consecutive cuts must be more than delta apart).
  auto place = [&](std::size_t c, double prev) {
    if (c % 2 == 1) {
      const double p = pos[(c + 1) / 2 - 1];
      return p - prev > delta ? p : kInf;
    }
    const std::size_t g = c / 2;
    const double lo = std::max(gap_lo(g), prev + delta);
    return lo < gap_hi(g) ? lo : kInf;
  };

  std::vector<double> min_pos(types);
  auto feasible = [&](double theta) {
    if (cell(1, r) <= theta) return true;
    for (std::size_t c = 0; c < types; ++c) {
      double best = kInf;
      if (cell(1, left_end(c)) <= theta)
        best = c % 2 == 1 ? pos[(c + 1) / 2 - 1] : gap_lo(c / 2);
      for (std::size_t cp = c; cp-- > 0;) {
        // Cells only grow as the previous cut moves left.
        if (cell(right_start(cp), left_end(c)) > theta) break;
        if (min_pos[cp] < kInf) best = std::min(best, place(c, min_pos[cp]));
      }
      min_pos[c] = best;
      if (best < kInf && cell(right_start(c), r) <= theta) return true;
    }
    return false;
  };

  std::vector<double> candidates{0.0};
  candidates.reserve(r * (r + 1) / 2 + 1);
  for (std::size_t s = 1; s <= r; ++s)
    for (std::size_t e = s; e <= r; ++e) candidates.push_back(cell(s, e));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0, hi = candidates.size() - 1;  // candidates[hi] = cell(1, r) is feasible
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

double sup_distance(const CadlagStep& f, const CadlagStep& g, int m) {
  const WindowPath a = window_path(f, m);
  const WindowPath b = window_path(g, m);
  std::size_t i = 0, j = 0;
  double d = std::abs(a.levels[0] - b.levels[0]);
  while (i < a.times.size() || j < b.times.size()) {
    const double ta = i < a.times.size() ? a.times[i] : kInf;
    const double tb = j < b.times.size() ? b.times[j] : kInf;
    if (ta <= tb) ++i;
    if (tb <= ta) ++j;
    d = std::max(d, std::abs(a.levels[i] - b.levels[j]));
  }
  return d;
}

double j1_local_distance(const CadlagStep& f, const CadlagStep& g, int m) {
  if (m <= 0) fail(ErrorCode::kInvalidArgument, "m must be positive");
  const double hi_end = m, lo_end = -m;
  const WindowPath a = window_path(f, m);
  const WindowPath b = window_path(g, m);
  const double sup = sup_distance(f, g, m);
  if (sup == 0.0) return 0.0;

  const std::vector<double>& u = a.times;
  const std::vector<double>& w = b.times;
  const std::size_t p = u.size(), q = w.size();
  constexpr double slack = kJ1TimeSlack;

  // Closure of the placement problem: f's jumps become ordered events in
  // [-m, m]; coincident events are processed in some order and every
  // intermediate state counts, except that an f-jump placed exactly on a
  // g-jump may move diagonally. The infimum of the true problem equals the
  // minimum of this closure.
  std::vector<double> reach((p + 1) * (q + 1));
  auto feasible = [&](double eps, double theta) {
    auto ok = [&](std::size_t i, std::size_t j) {
      return std::abs(a.levels[i] - b.levels[j]) <= theta;
    };
    if (!ok(0, 0)) return false;
    std::fill(reach.begin(), reach.end(), kInf);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return reach[i * (q + 1) + j]; };
    at(0, 0) = lo_end;
    for (std::size_t i = 0; i <= p; ++i) {
      double win_lo = 0.0, win_hi = 0.0;
      if (i < p) {
        // A jump at m is pinned by lambda(m) = m.
        if (u[i] >= hi_end) {
          win_lo = win_hi = hi_end;
        } else {
          win_lo = std::max(u[i] - eps, lo_end);
          win_hi = std::min(u[i] + eps, hi_end);
        }
      }
      for (std::size_t j = 0; j <= q; ++j) {
        const double t_now = at(i, j);
        if (t_now == kInf) continue;
        if (i == p && j == q) return true;
        if (j < q && t_now <= w[j] + slack && ok(i, j + 1))
          at(i, j + 1) = std::min(at(i, j + 1), w[j]);
        if (i < p) {
          const double t = std::max(t_now, win_lo);
          const double bound = j < q ? w[j] : hi_end;
          if (t <= win_hi + slack && t <= bound + slack && ok(i + 1, j))
            at(i + 1, j) = std::min(at(i + 1, j), t);
        }
        if (i < p && j < q && t_now <= w[j] + slack && win_lo - slack <= w[j] &&
            w[j] <= win_hi + slack && ok(i + 1, j + 1))
          at(i + 1, j + 1) = std::min(at(i + 1, j + 1), w[j]);
      }
    }
    return false;
  };

  std::vector<double> candidates{0.0, sup};
  auto add = [&](double c) {
    if (c >= 0.0 && c < sup) candidates.push_back(c);
  };
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) add(std::abs(u[i] - w[j]));
    add(u[i] - lo_end);
    add(hi_end - u[i]);
    for (std::size_t k = i + 1; k < p; ++k) add((u[k] - u[i]) / 2.0);
  }
  for (double fa : a.levels)
    for (double gb : b.levels) add(std::abs(fa - gb));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0, hi = candidates.size() - 1;  // candidates[hi] = sup, identity works
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(candidates[mid], candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

double j1_distance(const CadlagStep& f, const CadlagStep& g, int m_max) {
  if (m_max < 1) fail(ErrorCode::kInvalidArgument, "m_max must be >= 1");
  double d = 0.0;
  double weight = 0.5;
  for (int m = 1; m <= m_max; ++m, weight *= 0.5)
    d += weight * std::min(1.0, j1_local_distance(f, g, m));
  return d;
}

const char* to_string(CountingClass c) noexcept {
  switch (c) {
    case CountingClass::kUnitJumps: return "UNIT_JUMPS";
    case CountingClass::kIntegerJumps: return "INTEGER_JUMPS";
    case CountingClass::kNeither: return "NEITHER";
  }
  return "?";
}

CountingClass classify_counting(const CadlagStep& f) {
  if (!is_integer(f.base())) return CountingClass::kNeither;
  bool unit = true;
  for (double s : f.jump_sizes()) {
    if (!(s > 0.0) || !is_integer(s)) return CountingClass::kNeither;
    if (s != 1.0) unit = false;
  }
  return unit ? CountingClass::kUnitJumps : CountingClass::kIntegerJumps;
}

TimeChange::TimeChange(std::vector<std::pair<double, double>> anchors)
    : anchors_(std::move(anchors)) {
  for (std::size_t i = 1; i < anchors_.size(); ++i) {
    if (!(anchors_[i].first > anchors_[i - 1].first) ||
        !(anchors_[i].second > anchors_[i - 1].second))
      fail(ErrorCode::kInvalidArgument, "time change anchors must be strictly increasing");
  }
}

namespace {

// Piecewise-linear interpolation through (x, y) pairs, slope one outside.
template <class X, class Y>
double interpolate(const std::vector<std::pair<double, double>>& pts, double t, X x, Y y) {
  if (pts.empty()) return t;
  if (t <= x(pts.front())) return y(pts.front()) + (t - x(pts.front()));
  if (t >= x(pts.back())) return y(pts.back()) + (t - x(pts.back()));
  const auto it = std::upper_bound(pts.begin(), pts.end(), t,
                                   [&](double v, const auto& pt) { return v < x(pt); });
  const auto& r = *it;
  const auto& l = *(it - 1);
  const double s = (t - x(l)) / (x(r) - x(l));
  return y(l) + s * (y(r) - y(l));
}

}  // namespace

double TimeChange::operator()(double t) const {
  return interpolate(
      anchors_, t, [](const auto& p) { return p.first; }, [](const auto& p) { return p.second; });
}

double TimeChange::inverse(double s) const {
  return interpolate(
      anchors_, s, [](const auto& p) { return p.second; }, [](const auto& p) { return p.first; });
}

double TimeChange::max_displacement() const {
  double d = 0.0;
  for (const auto& [x, y] : anchors_) d = std::max(d, std::abs(y - x));
  return d;
}

CadlagStep compose(const CadlagStep& f, const TimeChange& lambda) {
  std::vector<double> times;
  times.reserve(f.jump_count());
  for (double t : f.jump_times()) times.push_back(lambda.inverse(t));
  return CadlagStep(f.base(), std::move(times),
                    {f.jump_sizes().begin(), f.jump_sizes().end()});
}

}  // namespace empirica
