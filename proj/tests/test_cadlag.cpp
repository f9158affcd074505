#include <cmath>
#include <random>

#include "doctest.h"
#include "empirica/cadlag.hpp"
#include "empirica/error.hpp"
#include "oracles.hpp"

using namespace empirica;

namespace {
CadlagStep indicator(double at, double size = 1.0) { return CadlagStep(0.0, {at}, {size}); }
}  // namespace

TEST_CASE("eval is right-continuous") {
  const CadlagStep f = indicator(0.0);
  CHECK(f.eval(0.0) == 1.0);
  CHECK(f.eval(-0.5) == 0.0);
  CHECK(f.left_limit(0.0) == 0.0);
  const CadlagStep g(0.0, {0.3, 0.7}, {1.0, 1.0});
  CHECK(g.eval(0.5) == 1.0);
  CHECK(g.eval(0.7) == 2.0);
}

TEST_CASE("construction rejects bad jumps") {
  CHECK_THROWS_AS(CadlagStep(0.0, {0.5, 0.2}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(CadlagStep(0.0, {0.5}, {0.0}), Error);
  CHECK_THROWS_AS(CadlagStep(0.0, {NAN}, {1.0}), Error);
  CHECK_THROWS_AS(CadlagStep(0.0, {0.5}, {1.0, 2.0}), Error);
}

TEST_CASE("from_jumps merges and drops cancelled jumps") {
  const auto f = CadlagStep::from_jumps(1.0, {{0.5, 1.0}, {0.2, 2.0}, {0.5, 1.0}, {0.8, 1.0}, {0.8, -1.0}});
  REQUIRE(f.jump_count() == 2);
  CHECK(f.jump_times()[0] == 0.2);
  CHECK(f.jump_sizes()[1] == 2.0);
  CHECK(f.eval(1.0) == 5.0);
  const CadlagStep constant(3.0);
  CHECK(constant.jump_count() == 0);
  CHECK(constant.eval(-100) == 3.0);
}

TEST_CASE("restricted keeps values on the window") {
  const CadlagStep f(0.0, {-2.0, 0.0, 2.0}, {1.0, 2.0, 4.0});
  const CadlagStep r = f.restricted(-1.0, 1.0);
  CHECK(r.jump_count() == 1);
  for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) CHECK(r.eval(t) == f.eval(t));
}

TEST_CASE("oscillation examples") {
  CHECK(oscillation(CadlagStep(2.0), {-1, 1}) == 0.0);
  CHECK(oscillation(indicator(0.0), {-1, 1}) == 1.0);
  const CadlagStep f(0.0, {0.2, 0.4}, {1.0, -2.0});
  CHECK(oscillation(f, {0, 1}) == 2.0);
  // A jump at the right end of a half-open interval is not seen.
  CHECK(oscillation(indicator(1.0), {0, 1}) == 0.0);
}

TEST_CASE("modulus examples") {
  CHECK(modulus_w_hat(CadlagStep(1.0), 1, 0.3) == 0.0);
  CHECK(modulus_w_hat(indicator(0.5), 1, 0.3) == 0.0);
  CHECK(modulus_w_hat(CadlagStep(0.0, {0.5, 0.55}, {1.0, 1.0}), 1, 0.1) == 1.0);
}

TEST_CASE("grid sparseness and grid modulus") {
  Grid g{{-1.0, 0.5, 1.0}, 1, 0.3};
  CHECK(g.is_sparse());
  CHECK(grid_modulus(indicator(0.5), g) == 0.0);
  Grid narrow{{-1.0, 0.0, 0.1, 0.2, 1.0}, 1, 0.3};
  CHECK_FALSE(narrow.is_sparse());
}

TEST_CASE("modulus is monotone in delta and bounded by the oscillation") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 300; ++rep) {
    const CadlagStep f = oracle::random_step(gen, 6, 1.2);
    const double osc = oscillation(f, {-1, 1});
    double prev = 0.0;
    for (double delta : {0.01, 0.05, 0.1, 0.2, 0.4, 0.8, 1.5}) {
      const double w = modulus_w_hat(f, 1, delta);
      CHECK(w >= prev);
      CHECK(w <= osc);
      prev = w;
    }
  }
}

TEST_CASE("well separated unit jumps have zero modulus") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double delta = 0.02 + 0.05 * u(gen);
    std::vector<double> times;
    double t = -1.0 + 4 * delta * u(gen);
    while (t < 1.0) {
      times.push_back(t);
      t += 4 * delta * (1.0 + 0.5 * u(gen)) + 1e-9;
    }
    const CadlagStep f(0.0, times, std::vector<double>(times.size(), 1.0));
    CHECK(modulus_w_hat(f, 1, delta) == 0.0);
  }
}

TEST_CASE("modulus agrees with the lattice search") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const CadlagStep f = oracle::random_step(gen, 4, 1.1);
    const double delta = 0.05 + 0.5 * u(gen);
    CHECK(modulus_w_hat(f, 1, delta) == oracle::lattice_w_hat(f, 1, delta, 1e-3, 1e-6));
  }
}

TEST_CASE("J1 examples") {
  const CadlagStep a = indicator(0.25), b = indicator(0.0);
  CHECK(j1_local_distance(a, a, 1) == 0.0);
  CHECK(j1_local_distance(a, b, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(j1_local_distance(b, indicator(0.0, 2.0), 1) == doctest::Approx(1.0));
  CHECK(j1_distance(a, b, 1) == doctest::Approx(0.125));
  CHECK(j1_distance(a, a, 3) == 0.0);
  // Value gap at least 1 on all of [-1, inf).
  const CadlagStep c(0.0, {-1.5}, {3.0});
  CHECK(j1_distance(CadlagStep(0.0), c, 3) == doctest::Approx(7.0 / 8.0));
}

TEST_CASE("J1 convergent sequence 1[1/k, inf)") {
  for (int k = 2; k <= 64; ++k)
    CHECK(std::abs(j1_local_distance(indicator(1.0 / k), indicator(0.0), 1) - 1.0 / k) < 1e-9);
}

TEST_CASE("J1 is bounded by the sup distance and is a metric") {
  std::mt19937_64 gen(14);
  for (int rep = 0; rep < 300; ++rep) {
    const CadlagStep f = oracle::random_step(gen, 4, 1.3);
    const CadlagStep g = oracle::random_step(gen, 4, 1.3);
    const CadlagStep h = oracle::random_step(gen, 4, 1.3);
    const double fg = j1_local_distance(f, g, 1);
    CHECK(j1_local_distance(f, f, 1) == 0.0);
    CHECK(fg <= sup_distance(f, g, 1) + 1e-12);
    CHECK(std::abs(fg - j1_local_distance(g, f, 1)) < 1e-9);
    CHECK(fg <= j1_local_distance(f, h, 1) + j1_local_distance(h, g, 1) + 1e-9);
  }
}

TEST_CASE("composing with a time change moves jumps") {
  const CadlagStep f(0.0, {0.5}, {1.0});
  const TimeChange lambda({{-1.0, -1.0}, {0.25, 0.5}, {1.0, 1.0}});
  CHECK(lambda(0.25) == doctest::Approx(0.5));
  CHECK(lambda.inverse(0.5) == doctest::Approx(0.25));
  CHECK(lambda.max_displacement() == doctest::Approx(0.25));
  const CadlagStep g = compose(f, lambda);
  CHECK(g.jump_times()[0] == doctest::Approx(0.25));
  CHECK(j1_local_distance(f, g, 1) <= lambda.max_displacement() + 1e-12);
}

TEST_CASE("counting classes") {
  CHECK(classify_counting(CadlagStep(0.0, {0.1, 0.4}, {1.0, 1.0})) == CountingClass::kUnitJumps);
  CHECK(classify_counting(CadlagStep(0.0, {0.1}, {2.0})) == CountingClass::kIntegerJumps);
  CHECK(classify_counting(CadlagStep(0.0, {0.1}, {-1.0})) == CountingClass::kNeither);
  CHECK(classify_counting(CadlagStep(0.5, {0.1}, {1.0})) == CountingClass::kNeither);
  CHECK(std::string(to_string(CountingClass::kUnitJumps)) == "UNIT_JUMPS");
}
