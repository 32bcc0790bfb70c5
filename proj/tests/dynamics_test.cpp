#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "gibbs/errors.hpp"
#include "gibbs/glauber.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/planning.hpp"
#include "gibbs/stats.hpp"

using namespace gibbs;

namespace {

GlauberParams rods(double length, double radius, double lambda, double horizon, std::uint64_t seed) {
  GlauberParams p{Domain::interval(length), PairPotential::hard_sphere(radius), ActivityField(lambda), horizon, {},
                  seed};
  return p;
}

std::vector<double> cardinality_counts(const std::vector<RunResult>& runs, std::size_t bins) {
  std::vector<double> counts(bins, 0.0);
  for (const auto& r : runs) counts.at(r.configuration.size()) += 1.0;
  return counts;
}

}  // namespace

TEST_CASE("glauber_step examples") {
  SUBCASE("zero activity: the first event kills the single particle after an Exp(1) wait") {
    const Domain dom = Domain::interval(1.0);
    const auto phi = PairPotential::hard_sphere(0.15);
    const ActivityField act(0.0);
    stats::RunningMean wait;
    for (std::uint64_t s = 0; s < 20000; ++s) {
      GlauberChain chain(dom, phi, act, Configuration::from_points(std::vector<Point>{Point{0.5}}), Rng(s));
      const StepEvent ev = chain.step();
      REQUIRE(ev.outcome == StepEvent::Outcome::kDeath);
      CHECK(chain.configuration().empty());
      wait.add(ev.time);
    }
    CHECK(std::abs(wait.mean() - 1.0) < 4.0 * wait.stderr_of_mean());
  }
  SUBCASE("a proposal overlapping a hard sphere is always rejected") {
    // Domain shorter than 2r: every birth overlaps the present particle.
    const Domain dom = Domain::interval(0.2);
    const auto phi = PairPotential::hard_sphere(0.15);
    const ActivityField act(50.0);
    std::size_t rejected = 0;
    for (std::uint64_t s = 0; s < 2000; ++s) {
      GlauberChain chain(dom, phi, act, Configuration::from_points(std::vector<Point>{Point{0.1}}), Rng(s));
      const StepEvent ev = chain.step();
      if (ev.outcome == StepEvent::Outcome::kRejectedBirth) {
        ++rejected;
        CHECK(chain.configuration().size() == 1);
      } else {
        CHECK(ev.outcome == StepEvent::Outcome::kDeath);
      }
    }
    CHECK(rejected > 1800);
  }
  SUBCASE("empty start with lambda |Lambda| = 1 waits Exp(1) for a birth") {
    const Domain dom = Domain::interval(1.0);
    const auto phi = PairPotential::hard_sphere(0.15);
    const ActivityField act(1.0);
    stats::RunningMean wait;
    for (std::uint64_t s = 0; s < 100000; ++s) {
      GlauberChain chain(dom, phi, act, Configuration{}, Rng(7, s));
      const StepEvent ev = chain.step();
      REQUIRE(ev.outcome == StepEvent::Outcome::kBirth);
      wait.add(ev.time);
    }
    CHECK(std::abs(wait.mean() - 1.0) < 0.01);
  }
  SUBCASE("horizon stops the clock without changing the state") {
    const Domain dom = Domain::interval(1.0);
    const auto phi = PairPotential::hard_sphere(0.15);
    const ActivityField act(1.0);
    GlauberChain chain(dom, phi, act, Configuration{}, Rng(1));
    const StepEvent ev = chain.step(1e-300);
    CHECK(ev.outcome == StepEvent::Outcome::kHorizon);
    CHECK(chain.clock() == 1e-300);
    CHECK(chain.configuration().empty());
  }
  SUBCASE("absorbed chain jumps to the horizon") {
    const Domain dom = Domain::interval(1.0);
    const auto phi = PairPotential::hard_sphere(0.15);
    const ActivityField act(0.0);
    GlauberChain chain(dom, phi, act, Configuration{}, Rng(1));
    const StepEvent ev = chain.step(5.0);
    CHECK(ev.outcome == StepEvent::Outcome::kAbsorbed);
    CHECK(chain.clock() == 5.0);
  }
}

TEST_CASE("glauber_run examples") {
  SUBCASE("zero activity from the empty set stays empty") {
    auto p = rods(1.0, 0.15, 0.0, 10.0, 3);
    const auto r = run(p);
    CHECK(r.configuration.empty());
    CHECK(r.stats.n_events == 0);
  }
  SUBCASE("zero horizon returns the initial configuration") {
    auto p = rods(1.0, 0.15, 1.0, 0.0, 3);
    p.initial = Configuration::from_points(std::vector<Point>{Point{0.2}, Point{0.7}});
    CHECK(run(p).configuration == p.initial);
  }
  SUBCASE("invalid inputs") {
    auto p = rods(1.0, 0.15, 1.0, -1.0, 3);
    CHECK_THROWS_AS(run(p), ParameterError);
    p.horizon = 1.0;
    p.initial = Configuration::from_points(std::vector<Point>{Point{0.2}, Point{0.3}});
    CHECK_THROWS_AS(run(p), ParameterError);
    CHECK_THROWS_AS(run(rods(1.0, 0.15, -1.0, 1.0, 3)), ParameterError);
  }
  SUBCASE("same seed, same output") {
    const auto p = rods(3.0, 0.15, 2.0, 20.0, 99);
    const auto a = run(p, true);
    const auto b = run(p, true);
    CHECK(a.configuration == b.configuration);
    CHECK(a.trace->events.size() == b.trace->events.size());
  }
}

TEST_CASE("trace invariants") {
  const auto p = rods(4.0, 0.2, 1.5, 30.0, 5);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto r = run_chain(p, i, true);
    const auto& trace = *r.trace;
    std::set<std::uint64_t> alive;
    for (const auto& q : trace.initial.particles()) alive.insert(to_underlying(q.id));
    std::set<std::uint64_t> ever = alive;
    double last = 0.0;
    Configuration eta = trace.initial;
    for (const auto& ev : trace.events) {
      CHECK(ev.time >= last);
      CHECK(ev.time <= p.horizon);
      last = ev.time;
      if (ev.kind == EventKind::kDeath) {
        CHECK(alive.erase(to_underlying(ev.id)) == 1);
        eta.remove_at(*eta.find(ev.id));
      } else if (ev.kind == EventKind::kBirth) {
        CHECK(ever.insert(to_underlying(ev.id)).second);  // ids never reused
        alive.insert(to_underlying(ev.id));
        eta.add({ev.id, ev.position});
        CHECK(std::isfinite(eta.energy(p.potential).value()));
      }
    }
    CHECK(alive.size() == r.configuration.size());
    CHECK(r.stats.n_births + r.stats.n_deaths <= r.stats.n_events);
  }
}

TEST_CASE("plan_time examples") {
  CHECK(plan_time(0.01, 0, 0.5, 1.0) == doctest::Approx(10.210340372).epsilon(1e-9));
  CHECK(plan_time(0.01, 10, 0.5, 1.0) == doctest::Approx(17.811242832).epsilon(1e-9));
  CHECK_THROWS_AS(plan_time(0.0, 0, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(plan_time(1.0, 0, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(plan_time(0.1, 0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(plan_time(0.1, 0, 1.5, 1.0), ParameterError);
  CHECK_THROWS_AS(plan_time(0.1, 0, 0.5, -1.0), ParameterError);
  // Monotone: decreasing in epsilon and gamma, increasing in |S| and lambda_total.
  double prev = 0.0;
  for (double eps = 0.9; eps > 1e-6; eps /= 3.0) {
    const double t = plan_time(eps, 3, 0.7, 2.0);
    CHECK(t > prev);
    prev = t;
  }
  CHECK(plan_time(0.1, 0, 0.2, 1.0) > plan_time(0.1, 0, 0.4, 1.0));
  CHECK(plan_time(0.1, 5, 0.2, 1.0) > plan_time(0.1, 4, 0.2, 1.0));
  CHECK(plan_time(0.1, 5, 0.2, 3.0) > plan_time(0.1, 5, 0.2, 1.0));
}

TEST_CASE("default_gamma") {
  const auto g = default_gamma(1, 0.1);
  CHECK(g.log_gamma == doctest::Approx(-220.1556935).epsilon(1e-9));
  CHECK(g.log_gamma / std::log(10.0) == doctest::Approx(-95.612).epsilon(1e-4));
  CHECK(g.gamma > 0.0);
  CHECK(g.gamma < 1e-90);
  for (std::size_t d = 1; d < 4; ++d) CHECK(default_gamma(d + 1, 0.1).log_gamma < default_gamma(d, 0.1).log_gamma);
  CHECK(default_gamma(2, 0.5).log_gamma < default_gamma(2, 0.9).log_gamma);
  CHECK_THROWS_AS(default_gamma(1, 0.0), ParameterError);
  CHECK_THROWS_AS(default_gamma(1, 1.0), ParameterError);
  CHECK_THROWS_AS(default_gamma(0, 0.5), ParameterError);
}

TEST_CASE("run_many is independent of the worker count") {
  const auto p = rods(5.0, 0.15, 2.0, 8.0, 1234);
  const auto one = run_many(p, 64, 1);
  const auto eight = run_many(p, 64, 8);
  REQUIRE(one.size() == 64);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(one[i].configuration == eight[i].configuration);
    CHECK(one[i].stats.n_events == eight[i].stats.n_events);
  }
  CHECK(run_many(p, 1, 1)[0].configuration == run(p).configuration);
  CHECK(run_chain(p, 17).configuration == one[17].configuration);
  // Distinct chains draw distinct streams.
  CHECK(!(one[0].configuration == one[1].configuration && one[1].configuration == one[2].configuration));
}

TEST_CASE("attempted births follow Poisson(lambda |Lambda| T)") {
  // Hard spheres on a domain too short for two rods: births get rejected often,
  // but attempts are unaffected by the state.
  const auto p = rods(1.0, 0.15, 1.0, 10.0, 42);
  const auto runs = run_many(p, 10000);
  std::vector<double> counts(60, 0.0);
  std::vector<double> probs(60, 0.0);
  for (const auto& r : runs) counts.at(r.stats.n_attempted_births) += 1.0;
  for (std::size_t k = 0; k < probs.size(); ++k) probs[k] = stats::poisson_pmf(10.0, k);
  const auto gof = stats::chi_squared_gof(counts, probs);
  CHECK(gof.p_value > 1e-3);
}

TEST_CASE("the Tonks law is stationary") {
  const oracle::TonksModel m{1.0, 0.3, 1.0};
  const auto p_exact = oracle::tonks_card_pmf_all(m);
  Rng start_rng(55);
  const auto base = rods(1.0, 0.15, 1.0, 3.0, 56);
  std::vector<double> counts(p_exact.size(), 0.0);
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = base;
    p.initial = oracle::sample_tonks(m, start_rng);
    counts.at(run_chain(p, i).configuration.size()) += 1.0;
  }
  const auto gof = stats::chi_squared_gof(counts, p_exact);
  CHECK(gof.p_value > 1e-3);
}

TEST_CASE("long runs from the empty set approach the Tonks law") {
  const oracle::TonksModel m{1.0, 0.3, 1.0};
  const auto p_exact = oracle::tonks_card_pmf_all(m);
  const auto runs = run_many(rods(1.0, 0.15, 1.0, 30.0, 77), 20000);
  const auto counts = cardinality_counts(runs, p_exact.size());
  const double n = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < 4; ++k) {
    const double se = std::sqrt(p_exact[k] * (1.0 - p_exact[k]) / n);
    CHECK(std::abs(counts[k] / n - p_exact[k]) < 4.0 * se);
  }
  CHECK(counts[4] <= 5.0);
}

TEST_CASE("survivors of the initial set die independently at rate 1") {
  // With lambda = 0 each initial particle survives to time s with probability e^{-s}.
  auto p = rods(10.0, 0.15, 0.0, std::log(2.0), 8);
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(Point{0.5 + i});
  p.initial = Configuration::from_points(pts);
  const auto runs = run_many(p, 20000);
  stats::RunningMean survivors;
  for (const auto& r : runs) survivors.add(static_cast<double>(r.configuration.size()));
  CHECK(std::abs(survivors.mean() - 5.0) < 4.0 * survivors.stderr_of_mean());
}

TEST_CASE("pinned activity field thins births near pins") {
  const Domain dom = Domain::interval(1.0);
  const auto phi = PairPotential::hard_sphere(0.15);
  ActivityField act(2.0);
  act.with_tilt(std::log(2.0));
  act.with_pins(dom, phi, Configuration::from_points(std::vector<Point>{Point{0.5}}, 1000));
  CHECK(act.peak() == doctest::Approx(1.0));
  CHECK(act.at(Point{0.5}) == 0.0);
  CHECK(act.at(Point{0.79}) == 0.0);
  CHECK(act.at(Point{0.81}) == doctest::Approx(1.0));
  CHECK(!act.is_constant());
  GlauberParams p{dom, phi, act, 20.0, {}, 3};
  for (const auto& r : run_many(p, 500)) {
    for (const auto& q : r.configuration.particles()) CHECK(std::abs(q.position[0] - 0.5) >= 0.3);
  }
}
