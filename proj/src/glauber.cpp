#include "gibbs/glauber.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "gibbs/errors.hpp"

namespace gibbs {

void GlauberParams::validate() const {
  if (!(horizon >= 0.0)) throw ParameterError("horizon T must be >= 0");
  if (activity.base() > 0.0 && !std::isfinite(activity.peak() * domain.volume())) {
    throw ParameterError("total birth rate is not finite");
  }
  validate_configuration(initial, domain, potential);
}

std::vector<double> EventTrace::cardinality_series(double dt) const {
  if (!(dt > 0.0)) throw ParameterError("grid spacing dt must be positive");
  std::vector<double> out;
  const auto n_points = static_cast<std::size_t>(std::floor(horizon / dt)) + 1;
  out.reserve(n_points);
  double count = static_cast<double>(initial.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = static_cast<double>(i) * dt;
    while (next < events.size() && events[next].time <= t) {
      if (events[next].kind == EventKind::kBirth) count += 1.0;
      if (events[next].kind == EventKind::kDeath) count -= 1.0;
      ++next;
    }
    out.push_back(count);
  }
  return out;
}

std::vector<double> EventTrace::attempted_birth_times() const {
  std::vector<double> out;
  for (const auto& e : events) {
    if (e.kind != EventKind::kDeath) out.push_back(e.time);
  }
  return out;
}

GlauberChain::GlauberChain(const Domain& domain, const PairPotential& phi, const ActivityField& activity,
                           Configuration initial, Rng rng)
    : domain_(domain),
      phi_(phi),
      activity_(activity),
      birth_rate_(activity.peak() * domain.volume()),
      eta_(std::move(initial)),
      grid_(SpatialGrid::build(domain, phi, eta_)),
      rng_(rng),
      next_id_(eta_.next_free_id()) {}

StepEvent GlauberChain::step(double horizon) {
  using Outcome = StepEvent::Outcome;
  const double n = static_cast<double>(eta_.size());
  const double rate = n + birth_rate_;
  if (rate == 0.0) {
    clock_ = std::max(clock_, horizon);
    return {Outcome::kAbsorbed, clock_};
  }
  const double h = rng_.exponential(rate);
  if (clock_ + h > horizon) {
    clock_ = horizon;
    return {Outcome::kHorizon, clock_};
  }
  clock_ += h;
  ++stats_.n_events;

  if (rng_.uniform() * rate < n) {
    const auto i = static_cast<std::size_t>(rng_.index(eta_.size()));
    Particle dead = eta_.remove_at(i);
    grid_.remove(dead.id, dead.position);
    ++stats_.n_deaths;
    return {Outcome::kDeath, clock_, dead.id, dead.position};
  }

  ++stats_.n_attempted_births;
  const Point y = uniform_point(domain_, rng_);
  double accept = activity_.is_constant() ? 1.0 : activity_.relative_weight(y);
  if (accept > 0.0) accept *= birth_acceptance(delta_energy(grid_, y, phi_));
  if (accept > 0.0 && (accept >= 1.0 || rng_.uniform() < accept)) {
    const ParticleId id{next_id_++};
    eta_.add({id, y});
    grid_.insert(id, y);
    ++stats_.n_births;
    return {Outcome::kBirth, clock_, id, y};
  }
  return {Outcome::kRejectedBirth, clock_, ParticleId{}, y};
}

void GlauberChain::run_until(double horizon, EventTrace* trace) {
  using Outcome = StepEvent::Outcome;
  while (clock_ < horizon) {
    const StepEvent ev = step(horizon);
    if (trace == nullptr) continue;
    switch (ev.outcome) {
      case Outcome::kBirth:
        trace->events.push_back({ev.time, EventKind::kBirth, ev.id, ev.position});
        break;
      case Outcome::kDeath:
        trace->events.push_back({ev.time, EventKind::kDeath, ev.id, ev.position});
        break;
      case Outcome::kRejectedBirth:
        trace->events.push_back({ev.time, EventKind::kRejectedBirth, ev.id, ev.position});
        break;
      case Outcome::kHorizon:
      case Outcome::kAbsorbed:
        break;
    }
  }
}

RunResult run_chain(const GlauberParams& params, std::uint64_t chain_index, bool collect_trace) {
  GlauberChain chain(params.domain, params.potential, params.activity, params.initial,
                     Rng(params.seed, chain_index));
  RunResult result;
  if (collect_trace) {
    result.trace.emplace();
    result.trace->initial = params.initial;
    result.trace->horizon = params.horizon;
  }
  chain.run_until(params.horizon, result.trace ? &*result.trace : nullptr);
  result.configuration = chain.configuration();
  result.stats = chain.stats();
  return result;
}

RunResult run(const GlauberParams& params, bool collect_trace) {
  params.validate();
  return run_chain(params, 0, collect_trace);
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("GIBBSGLAUBER_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = default_worker_count();
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<RunResult> run_many(const GlauberParams& params, std::size_t n_chains, std::size_t workers,
                                bool collect_trace) {
  if (n_chains == 0) throw ParameterError("n_chains must be >= 1");
  params.validate();
  std::vector<RunResult> results(n_chains);
  parallel_for(n_chains, workers, [&](std::size_t i) { results[i] = run_chain(params, i, collect_trace); });
  return results;
}

}  // namespace gibbs
