#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "gibbs/errors.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/random.hpp"
#include "gibbs/stats.hpp"
#include "gibbs/validation.hpp"

using namespace gibbs;
using namespace gibbs::validation;

namespace {

// Batch of exact Tonks draws; independent of the dynamics.
SampleBatch tonks_batch(double lambda, double radius, std::size_t n, std::uint64_t seed) {
  SampleBatch b{Domain::interval(1.0), PairPotential::hard_sphere(radius), lambda, 0.0, seed, {}, {}};
  const oracle::TonksModel m{1.0, 2.0 * radius, lambda};
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) b.configurations.push_back(oracle::sample_tonks(m, rng));
  return b;
}

// Batch of Poisson(lambda) uniform points, the phi = 0 Gibbs measure.
SampleBatch poisson_batch(double lambda, std::size_t n, std::uint64_t seed) {
  SampleBatch b{Domain::interval(1.0), PairPotential::none(0.3), lambda, 0.0, seed, {}, {}};
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Point> pts;
    double t = rng.exponential(lambda);
    while (t < 1.0) {
      pts.push_back(Point{rng.uniform()});
      t += rng.exponential(lambda);
    }
    b.configurations.push_back(Configuration::from_points(pts));
  }
  return b;
}

GlauberParams spread_rods(double lambda, double s) {
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(Point{0.3 + 0.6 * i});
  return GlauberParams{Domain::interval(6.0), PairPotential::hard_sphere(0.15), ActivityField(lambda), s,
                       Configuration::from_points(pts), 21};
}

}  // namespace

TEST_CASE("z_report and json") {
  const auto r = z_report("x", 1.0, 0.5, 0.1);
  CHECK(r.z == doctest::Approx(5.0));
  CHECK(!r.pass);
  CHECK(z_report("x", 1.0, 0.7, 0.1).pass);
  CHECK(z_report("x", 1.0, 1.0, 0.0).pass);
  CHECK(!z_report("x", 1.0, 1.1, 0.0).pass);
  const auto j = to_json(r);
  for (const char* key : {"test", "estimate", "target", "stderr", "z", "pass"}) CHECK(j.contains(key));
  CHECK(j["pass"] == false);
  auto inf = z_report("y", std::numeric_limits<double>::infinity(), 1.0, 1.0);
  CHECK_NOTHROW(to_json(inf).dump());
}

TEST_CASE("gnz_residual") {
  SUBCASE("zero activity: both sides vanish") {
    SampleBatch b{Domain::interval(1.0), PairPotential::hard_sphere(0.15), 0.0, 0.0, 0, {}, {}};
    b.configurations.assign(100, Configuration{});
    const auto r = gnz_residual(b, [](const Configuration&, const Point&) { return 1.0; }, 10, 1);
    CHECK(r.estimate == 0.0);
    CHECK(r.pass);
  }
  SUBCASE("Mecke case with F = 1") {
    const auto b = poisson_batch(1.0, 20000, 3);
    const auto r = gnz_residual(b, [](const Configuration&, const Point&) { return 1.0; }, 8, 4);
    CHECK(r.pass);
  }
  SUBCASE("Tonks with F = 1[|eta| = 2]") {
    const auto b = tonks_batch(1.0, 0.15, 100000, 5);
    const auto r = gnz_residual(
        b, [](const Configuration& eta, const Point&) { return eta.size() == 2 ? 1.0 : 0.0; }, 8, 6);
    CHECK(r.pass);
    CHECK(std::abs(r.z) <= 4.0);
  }
  SUBCASE("F = 1 reproduces the intensity") {
    const auto b = tonks_batch(1.0, 0.15, 50000, 7);
    CHECK(gnz_residual(b, [](const Configuration&, const Point&) { return 1.0; }, 8, 8).pass);
  }
  SUBCASE("non-finite F is rejected") {
    const auto b = tonks_batch(1.0, 0.15, 100, 7);
    CHECK_THROWS_AS(gnz_residual(b, [](const Configuration&, const Point&) { return std::numeric_limits<double>::infinity(); }, 2, 1),
                    ParameterError);
  }
}

TEST_CASE("cardinality_ratio_check") {
  const auto b = tonks_batch(1.0, 0.15, 100000, 11);
  const auto r2 = cardinality_ratio_check(b, 2);
  CHECK(r2.pass);
  CHECK(r2.estimate == doctest::Approx(0.44332709597 / 0.10861513851).epsilon(0.05));
  CHECK(r2.target == doctest::Approx(2.0));
  const auto r1 = cardinality_ratio_check(b, 1);
  CHECK(r1.pass);
  CHECK(r1.estimate == doctest::Approx(1.0).epsilon(0.03));
  // Lower activity gives a larger P(1)/P(2).
  const auto half = cardinality_ratio_check(tonks_batch(0.5, 0.15, 100000, 12), 2);
  CHECK(half.estimate > r2.estimate);
  CHECK(half.pass);
  const auto empty = cardinality_ratio_check(tonks_batch(1.0, 0.15, 100, 13), 4);
  CHECK(empty.status == "inconclusive");
}

TEST_CASE("survivor_check") {
  SUBCASE("s = 0: everything survives") {
    const auto r = survivor_check(spread_rods(1.0, 0.0), 200);
    CHECK(r.pass);
    CHECK(r.estimate == 10.0);
  }
  SUBCASE("binomial law with and without births") {
    for (const double lambda : {1.0, 0.0}) {
      const auto r = survivor_check(spread_rods(lambda, std::log(10.0)), 20000);
      CHECK(r.pass);
      CHECK(r.target == doctest::Approx(1.0));
      CHECK(std::abs(r.estimate - 1.0) < 0.05);
    }
  }
}

TEST_CASE("domination_check") {
  CHECK(domination_check(poisson_batch(1.0, 20000, 14)).pass);
  const auto r = domination_check(tonks_batch(1.0, 0.15, 20000, 15));
  CHECK(r.pass);
  CHECK(r.estimate == doctest::Approx(0.6747512288).epsilon(0.03));
  // Shrinking the rods pushes E|eta| up toward lambda |Lambda|.
  double prev = 0.0;
  for (const double radius : {0.15, 0.05, 0.01}) {
    const double exact = oracle::tonks_mean_count({1.0, 2.0 * radius, 1.0});
    CHECK(exact > prev);
    CHECK(exact < 1.0);
    prev = exact;
    CHECK(domination_check(tonks_batch(1.0, radius, 20000, 16)).pass);
  }
}

TEST_CASE("influence_estimate") {
  const auto one = [](const Point&) { return 1.0; };
  SUBCASE("ideal gas: Psi f(x) = f(x)") {
    GlauberParams p{Domain::interval(1.0), PairPotential::none(0.3), ActivityField(1.0), 20.0, {}, 3};
    const auto est = influence_estimate(Point{0.5}, one, p, 20000);
    CHECK(std::abs(est.value - 1.0) < 4.0 * est.stderr);
  }
  SUBCASE("Tonks at x = 0.5") {
    GlauberParams p{Domain::interval(1.0), PairPotential::hard_sphere(0.15), ActivityField(1.0), 25.0, {}, 4};
    const auto est = influence_estimate(Point{0.5}, one, p, 40000);
    CHECK(std::abs(est.value - 0.6585821045) < 4.0 * est.stderr);
  }
  SUBCASE("multiple x against the one-point-density oracle") {
    // Pinned mean = 1 + E|free rods given a pin at x| = 1 + zeta(x) / lambda-free count.
    GlauberParams p{Domain::interval(1.0), PairPotential::hard_sphere(0.15), ActivityField(1.0), 25.0, {}, 5};
    const oracle::TonksModel m{1.0, 0.3, 1.0};
    for (const double x : {0.1, 0.35}) {
      const double left = std::max(0.0, x - 0.3), right = std::max(0.0, 1.0 - x - 0.3);
      const double pinned = 1.0 + (left > 0 ? oracle::tonks_mean_count({left, 0.3, 1.0}) : 0.0) +
                            (right > 0 ? oracle::tonks_mean_count({right, 0.3, 1.0}) : 0.0);
      const auto est = influence_estimate(Point{x}, one, p, 20000);
      CHECK(std::abs(est.value - (pinned - oracle::tonks_mean_count(m))) < 4.0 * est.stderr);
    }
  }
  SUBCASE("tiny activity: Psi f(x) -> f(x)") {
    GlauberParams p{Domain::interval(1.0), PairPotential::hard_sphere(0.15), ActivityField(1e-4), 10.0, {}, 6};
    const auto est = influence_estimate(Point{0.5}, [](const Point& y) { return y[0]; }, p, 2000);
    CHECK(est.value == doctest::Approx(0.5).epsilon(1e-2));
  }
}

TEST_CASE("relaxation_time") {
  SUBCASE("constant observable is degenerate") {
    std::vector<double> zeros(1000, 0.0);
    CHECK(relaxation_time(zeros, 0.1, 50).status == RelaxationEstimate::Status::kDegenerate);
  }
  SUBCASE("AR(1) series with a known time constant") {
    const double tau = 1.5, dt = 0.1, a = std::exp(-dt / tau);
    Rng rng(8);
    std::vector<double> xs(200000);
    double x = 0.0;
    for (auto& v : xs) {
      // Box-Muller normal innovation.
      const double g = std::sqrt(-2.0 * std::log(rng.uniform_open_zero())) * std::cos(2.0 * std::numbers::pi * rng.uniform());
      x = a * x + std::sqrt(1.0 - a * a) * g;
      v = x;
    }
    const auto est = relaxation_time(xs, dt, 60);
    REQUIRE(est.status == RelaxationEstimate::Status::kOk);
    CHECK(std::abs(est.tau - tau) < 4.0 * est.stderr + 0.05);
    CHECK(est.acf.front() == doctest::Approx(1.0));
  }
  SUBCASE("non-decaying series") {
    std::vector<double> ramp(5000);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    CHECK(relaxation_time(ramp, 0.1, 50).status == RelaxationEstimate::Status::kNonDecaying);
  }
}

TEST_CASE("tonks_oracle_checks") {
  for (const auto& r : tonks_oracle_checks({1.0, 0.3, 1.0})) CHECK_MESSAGE(r.pass, r.test);
  for (const auto& r : tonks_oracle_checks({3.0, 0.3, 2.0})) CHECK_MESSAGE(r.pass, r.test);
}
