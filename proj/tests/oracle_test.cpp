#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "gibbs/errors.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/quadrature.hpp"
#include "gibbs/stats.hpp"

using namespace gibbs;
using namespace gibbs::oracle;

namespace {

// Plain Monte Carlo of the hard-rod partition function with a piecewise-constant
// activity: Z = sum_k (1/k!) integral prod lambda(x_i) 1{no overlap} dx. Sampling
// x_i uniform on the support hull keeps it independent of the library code.
McEstimate naive_rod_partition(const std::vector<ActivityInterval>& ivs, double sigma, std::size_t kmax,
                               std::size_t n, std::uint64_t seed) {
  const double lo = ivs.front().lo;
  const double hi = ivs.back().hi;
  const double len = hi - lo;
  auto lambda_at = [&](double x) {
    for (const auto& iv : ivs)
      if (x >= iv.lo && x <= iv.hi) return iv.activity;
    return 0.0;
  };
  Rng rng(seed);
  double value = 1.0;
  double var = 0.0;
  double fact = 1.0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    fact *= static_cast<double>(k);
    stats::RunningMean acc;
    std::vector<double> xs(k);
    for (std::size_t s = 0; s < n; ++s) {
      double w = 1.0;
      for (auto& x : xs) {
        x = lo + len * rng.uniform();
        w *= lambda_at(x) * len;
      }
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 1; i < k && w > 0.0; ++i)
        if (xs[i] - xs[i - 1] < sigma) w = 0.0;
      acc.add(w);
    }
    value += acc.mean() / fact;
    var += std::pow(acc.stderr_of_mean() / fact, 2);
  }
  return {value, std::sqrt(var)};
}

}  // namespace

TEST_CASE("tonks_partition examples") {
  CHECK(tonks_partition({1.0, 0.3, 1.0}) == doctest::Approx(2.2556708333).epsilon(1e-10));
  CHECK(tonks_partition({1.0, 0.3, 0.5}) == doctest::Approx(1.56258359375).epsilon(1e-10));
  CHECK(tonks_partition({1.0, 0.3, 0.0}) == 1.0);
  CHECK(tonks_partition({0.25, 0.3, 2.0}) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(tonks_max_count({1.0, 0.3, 1.0}) == 4);
  CHECK_THROWS_AS(tonks_partition({1.0, 0.3, -1.0}), ParameterError);
  CHECK_THROWS_AS(tonks_partition({0.0, 0.3, 1.0}), ParameterError);
  // Large systems stay finite in log space.
  const double big = log_tonks_partition({1000.0, 0.3, 5.0});
  CHECK(std::isfinite(big));
  CHECK(big > 0.0);
}

TEST_CASE("tonks_partition matches Monte Carlo of its integral definition") {
  for (const double lambda : {0.5, 1.0, 3.0}) {
    const auto mc = naive_rod_partition({{0.0, 1.0, lambda}}, 0.3, 4, 200000, 17);
    CHECK(std::abs(mc.value - tonks_partition({1.0, 0.3, lambda})) < 4.0 * mc.stderr + 1e-12);
  }
}

TEST_CASE("tonks partition bounds and monotonicity") {
  for (double l = 0.1; l < 5.0; l += 0.37) {
    for (double lambda = 0.1; lambda < 4.0; lambda += 0.61) {
      const TonksModel m{l, 0.3, lambda};
      const double z = tonks_partition(m);
      CHECK(z >= 1.0);
      CHECK(std::log(z) <= lambda * l + 1e-12);
      CHECK(tonks_partition({l, 0.3, lambda + 0.1}) > z);
      CHECK(tonks_partition({l + 0.1, 0.3, lambda}) > z);
    }
  }
}

TEST_CASE("tonks_card_pmf") {
  const TonksModel m{1.0, 0.3, 1.0};
  const double expected[] = {0.44332709597, 0.44332709597, 0.10861513851, 0.00472882236, 1.847e-6};
  for (std::size_t k = 0; k < 5; ++k) CHECK(tonks_card_pmf(m, k) == doctest::Approx(expected[k]).epsilon(1e-3));
  CHECK(tonks_card_pmf(m, 0) == doctest::Approx(0.443327096).epsilon(1e-8));
  CHECK(tonks_card_pmf(m, 5) == 0.0);
  CHECK(tonks_card_pmf(m, 50) == 0.0);
  CHECK(tonks_card_pmf({1.0, 0.3, 0.0}, 0) == 1.0);
  CHECK(tonks_mean_count(m) == doctest::Approx(0.6747512288).epsilon(1e-9));
  for (double l = 0.2; l < 6.0; l += 0.9) {
    const auto pmf = tonks_card_pmf_all({l, 0.3, 2.0});
    CHECK(std::abs(stats::stable_sum(pmf) - 1.0) < 1e-12);
  }
}

TEST_CASE("one_point_density") {
  const TonksModel m{1.0, 0.3, 1.0};
  CHECK(one_point_density(m, 0.5) == doctest::Approx(0.6383910182).epsilon(1e-9));
  CHECK(one_point_density(m, 0.1) == doctest::Approx(0.7292730729).epsilon(1e-9));
  CHECK(one_point_density({1.0, 0.3, 0.0}, 0.5) == 0.0);
  CHECK_THROWS_AS(one_point_density(m, 1.5), ParameterError);
  CHECK_THROWS_AS(one_point_density(m, -0.1), ParameterError);
  for (double l : {0.7, 1.0, 2.3}) {
    const TonksModel mm{l, 0.3, 1.7};
    const double integral = adaptive_simpson([&](double x) { return one_point_density(mm, x); }, 0.0, l, 1e-12);
    CHECK(std::abs(integral - tonks_mean_count(mm)) < 1e-8);
  }
  // Symmetric about the midpoint.
  for (double x = 0.0; x <= 1.0; x += 0.05) CHECK(one_point_density(m, x) == doctest::Approx(one_point_density(m, 1.0 - x)));
}

TEST_CASE("sample_tonks draws from the Tonks law") {
  const TonksModel m{1.0, 0.3, 1.0};
  const auto pmf = tonks_card_pmf_all(m);
  std::vector<double> counts(pmf.size(), 0.0);
  Rng rng(4);
  stats::RunningMean left;
  for (int i = 0; i < 50000; ++i) {
    const auto eta = sample_tonks(m, rng);
    counts.at(eta.size()) += 1.0;
    CHECK(is_valid_configuration(eta, Domain::interval(1.0), PairPotential::hard_sphere(0.15)));
    for (const auto& p : eta.particles()) left.add(p.position[0] < 0.2 ? 1.0 : 0.0);
  }
  CHECK(stats::chi_squared_gof(counts, pmf).p_value > 1e-3);
  const double target =
      adaptive_simpson([&](double x) { return one_point_density(m, x); }, 0.0, 0.2, 1e-12) / tonks_mean_count(m);
  CHECK(std::abs(left.mean() - target) < 4.0 * left.stderr_of_mean());
}

TEST_CASE("restricted_partition examples") {
  SUBCASE("single interval equals the Tonks gas") {
    const IntervalActivity act({{0.0, 1.0, 1.0}}, 0.3);
    CHECK(restricted_partition(act, default_kmax(act)) == doctest::Approx(2.2556708333).epsilon(1e-10));
    CHECK(restricted_partition_quadrature(act, default_kmax(act)) == doctest::Approx(2.2556708333).epsilon(1e-8));
  }
  SUBCASE("well separated intervals factorize") {
    const IntervalActivity act({{0.0, 0.2, 1.0}, {0.8, 1.0, 1.0}}, 0.3);
    CHECK(act.separated());
    CHECK(restricted_partition(act, default_kmax(act)) == doctest::Approx(1.44).epsilon(1e-12));
    CHECK(restricted_partition_quadrature(act, default_kmax(act)) == doctest::Approx(1.44).epsilon(1e-8));
  }
  SUBCASE("intervals closer than sigma interact") {
    const std::vector<ActivityInterval> ivs{{0.0, 0.5, 1.5}, {0.6, 1.2, 0.7}};
    const IntervalActivity act(ivs, 0.3);
    CHECK(!act.separated());
    const double z = restricted_partition(act, default_kmax(act));
    const auto mc = naive_rod_partition(ivs, 0.3, 5, 200000, 9);
    CHECK(std::abs(z - mc.value) < 4.0 * mc.stderr);
    // Interaction lowers Z below the product of the isolated pieces.
    const double product = tonks_partition({0.5, 0.3, 1.5}) * tonks_partition({0.6, 0.3, 0.7});
    CHECK(z < product);
  }
  SUBCASE("truncation below the support raises") {
    const IntervalActivity act({{0.0, 10.0, 5.0}}, 0.3);
    CHECK_THROWS_AS(restricted_partition_quadrature(act, 3), TruncationError);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(IntervalActivity({{0.5, 0.2, 1.0}}, 0.3), ParameterError);
    CHECK_THROWS_AS(IntervalActivity({{0.0, 0.5, 1.0}, {0.4, 0.9, 1.0}}, 0.3), ParameterError);
    CHECK_THROWS_AS(IntervalActivity({{0.0, 0.5, -1.0}}, 0.3), ParameterError);
  }
}

TEST_CASE("restricted_partition factorized and quadrature paths agree") {
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<ActivityInterval> ivs;
    double x = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double len = 0.1 + 0.4 * rng.uniform();
      ivs.push_back({x, x + len, 0.2 + 2.0 * rng.uniform()});
      x += len + 0.3 + 0.5 * rng.uniform();
    }
    const IntervalActivity act(ivs, 0.3);
    REQUIRE(act.separated());
    const auto kmax = default_kmax(act);
    CHECK(restricted_partition(act, kmax) == doctest::Approx(restricted_partition_quadrature(act, kmax)).epsilon(1e-8));
  }
}

TEST_CASE("mc_partition") {
  SUBCASE("ideal gas gives e^{lambda |Lambda|}") {
    const auto est = mc_partition(Domain::interval(1.0), PairPotential::none(0.3), 1.0, 30, 2000, 5);
    CHECK(std::abs(est.value - std::exp(1.0)) < 3.0 * est.stderr + 1e-12);
  }
  SUBCASE("1D hard rods agree with Tonks") {
    const auto est = mc_partition(Domain::interval(1.0), PairPotential::hard_sphere(0.15), 1.0, 4, 200000, 6);
    CHECK(std::abs(est.value - 2.2556708333) < 4.0 * est.stderr);
  }
  SUBCASE("2D hard disks: independent replications agree") {
    const Domain box({1.0, 1.0});
    const auto phi = PairPotential::hard_sphere(0.1);
    const auto a = mc_partition(box, phi, 2.0, 25, 20000, 1);
    const auto b = mc_partition(box, phi, 2.0, 25, 20000, 2);
    CHECK(std::abs(a.value - b.value) < 4.0 * std::hypot(a.stderr, b.stderr));
    CHECK(a.value < std::exp(2.0));
  }
  SUBCASE("truncation error when the tail is not negligible") {
    CHECK_THROWS_AS(mc_partition(Domain({1.0, 1.0}), PairPotential::hard_sphere(0.1), 2.0, 6, 100, 1), TruncationError);
    CHECK_NOTHROW(mc_partition(Domain({1.0, 1.0}), PairPotential::hard_sphere(0.1), 2.0, 6, 100, 1, 1e-2));
  }
  SUBCASE("poisson tail") {
    CHECK(poisson_tail_mass(1.0, 0) == doctest::Approx(std::exp(1.0) - 1.0));
    CHECK(poisson_tail_mass(0.0, 3) == 0.0);
  }
}
