#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "empirica/cadlag.hpp"
#include "empirica/dists.hpp"
#include "empirica/parallel.hpp"
#include "empirica/rng.hpp"

namespace empirica {

/// Empirical distribution function of a sample, F_n(t) = #{X_k <= t} / n.
class EmpiricalCdf {
 public:
  /// Throws kEmptySample on an empty sample.
  explicit EmpiricalCdf(std::vector<double> sample);

  std::size_t n() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }

  /// n F_n(t) and n F_n(t-), exact integers.
  std::size_t count_le(double t) const;
  std::size_t count_lt(double t) const;

  double eval(double t) const;
  double left_limit(double t) const;

  /// Base 0, jump (multiplicity / n) at each distinct order statistic.
  CadlagStep path() const;

 private:
  std::vector<double> sorted_;
};

/// alpha_n(t) = sqrt(n) (F_n(t) - F(t)). Pointwise only: F need not be a
/// step function.
class AlphaProcess {
 public:
  AlphaProcess(EmpiricalCdf ecdf, CdfPtr cdf);

  double eval(double t) const;
  std::size_t n() const { return ecdf_.n(); }
  const EmpiricalCdf& ecdf() const { return ecdf_; }
  const Cdf& cdf() const { return *cdf_; }

 private:
  EmpiricalCdf ecdf_;
  CdfPtr cdf_;
  double root_n_;
};

/// Rescaled empirical distribution function at tau:
///
///   beta_n(t) =  #{k : X_k in (tau, tau + t/n]}   for t >= 0,
///   beta_n(t) = -#{k : X_k in (tau + t/n, tau)}   for t <  0.
///
/// Sample points equal to tau belong to neither branch.
class BetaProcess {
 public:
  BetaProcess(std::vector<double> sample, double tau, std::size_t n);

  /// Direct indicator sum over the sample, as in the definition.
  double eval(double t) const;
  /// The same function as a step function: a +1 jump at n (X_k - tau) for
  /// every X_k != tau, base -#{X_k < tau}; equal points merge.
  const CadlagStep& path() const { return path_; }

  double tau() const { return tau_; }
  std::size_t n() const { return n_; }

 private:
  std::vector<double> sample_;
  double tau_;
  std::size_t n_;
  CadlagStep path_;
};

AlphaProcess make_alpha(std::vector<double> sample, CdfPtr cdf);
/// Throws kInvalidArgument if n != sample.size().
BetaProcess make_beta(std::vector<double> sample, double tau, std::size_t n);

/// Replicated finite-dimensional sample: row r holds one replication's
/// process values at `times`.
struct Fidi {
  std::vector<double> times;
  std::size_t rows = 0;
  std::vector<double> values;  // row-major, rows x times.size()

  double at(std::size_t row, std::size_t col) const { return values[row * times.size() + col]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * times.size(), times.size()};
  }
};

/// Values of one process at `times` (must be increasing).
template <class Process>
std::vector<double> extract_fidi(const Process& process, std::span<const double> times) {
  std::vector<double> row;
  row.reserve(times.size());
  for (double t : times) row.push_back(process.eval(t));
  return row;
}

void check_increasing(std::span<const double> times);

/// `replications` rows; row r is extract_fidi(make(stream_r), times) with
/// stream_r = Stream::derive(seed, experiment, r). Bit-identical for any
/// thread count.
template <class MakeProcess>
Fidi replicate_fidi(std::span<const double> times, std::size_t replications,
                    std::uint64_t seed, std::string_view experiment, unsigned threads,
                    MakeProcess&& make) {
  check_increasing(times);
  Fidi out{{times.begin(), times.end()}, replications,
           std::vector<double>(replications * times.size())};
  parallel_for(replications, threads, [&](std::size_t r) {
    Stream stream = Stream::derive(seed, experiment, r);
    const auto process = make(stream);
    for (std::size_t c = 0; c < times.size(); ++c)
      out.values[r * times.size() + c] = process.eval(times[c]);
  });
  return out;
}

}  // namespace empirica
