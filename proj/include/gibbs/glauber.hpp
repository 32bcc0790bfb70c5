#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "gibbs/activity.hpp"
#include "gibbs/configuration.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"
#include "gibbs/random.hpp"
#include "gibbs/spatial_grid.hpp"

namespace gibbs {

/// Inputs of one continuum Glauber simulation.
struct GlauberParams {
  Domain domain;
  PairPotential potential;
  ActivityField activity;
  /// Continuous-time horizon T >= 0.
  double horizon = 0.0;
  Configuration initial{};
  std::uint64_t seed = 0;

  /// Throws ParameterError on negative horizon or an invalid initial configuration.
  void validate() const;
};

enum class EventKind { kBirth, kDeath, kRejectedBirth };

struct TraceEvent {
  double time;
  EventKind kind;
  ParticleId id;  // unused for rejected births
  Point position;
};

/// Time-ordered record of one chain, together with its starting point.
struct EventTrace {
  Configuration initial;
  double horizon = 0.0;
  std::vector<TraceEvent> events;

  /// |eta_t| sampled at t = 0, dt, 2 dt, ... <= horizon.
  std::vector<double> cardinality_series(double dt) const;
  /// Times of all attempted births (accepted or rejected).
  std::vector<double> attempted_birth_times() const;
};

struct RunStats {
  std::uint64_t n_events = 0;
  std::uint64_t n_attempted_births = 0;
  std::uint64_t n_births = 0;
  std::uint64_t n_deaths = 0;

  RunStats& operator+=(const RunStats& o) noexcept {
    n_events += o.n_events;
    n_attempted_births += o.n_attempted_births;
    n_births += o.n_births;
    n_deaths += o.n_deaths;
    return *this;
  }
};

struct RunResult {
  Configuration configuration;
  RunStats stats;
  std::optional<EventTrace> trace;
};

/// Result of one `GlauberChain::step`.
struct StepEvent {
  enum class Outcome { kBirth, kDeath, kRejectedBirth, kHorizon, kAbsorbed };
  Outcome outcome;
  double time;
  ParticleId id{};
  Point position{};
};

/// Continuum Glauber birth-death chain.
///
/// Each step samples h ~ Exp(|eta| + lambda |Lambda|), stops at the horizon if
/// t + h exceeds it, and otherwise kills a uniformly chosen particle with
/// probability |eta| / (|eta| + lambda |Lambda|) or proposes a uniform point y,
/// accepted with probability (lambda(y) / peak) * e^{-dH}. With a constant
/// activity the thinning factor is 1.
///
/// The chain references the domain, potential and activity it was built from;
/// they must outlive it.
class GlauberChain {
 public:
  GlauberChain(const Domain& domain, const PairPotential& phi, const ActivityField& activity, Configuration initial,
               Rng rng);

  StepEvent step(double horizon = std::numeric_limits<double>::infinity());
  /// Steps until the clock reaches `horizon`; appends events to `trace` when given.
  void run_until(double horizon, EventTrace* trace = nullptr);

  double clock() const noexcept { return clock_; }
  const Configuration& configuration() const noexcept { return eta_; }
  const SpatialGrid& grid() const noexcept { return grid_; }
  const RunStats& stats() const noexcept { return stats_; }
  Rng& rng() noexcept { return rng_; }

 private:
  const Domain& domain_;
  const PairPotential& phi_;
  const ActivityField& activity_;
  double birth_rate_;  // peak activity times |Lambda|
  double clock_ = 0.0;
  Configuration eta_;
  SpatialGrid grid_;
  Rng rng_;
  std::uint64_t next_id_;
  RunStats stats_;
};

/// Chain 0 of `params` (substream (seed, 0)).
RunResult run(const GlauberParams& params, bool collect_trace = false);

/// Chain `chain_index` of `params`, using substream (seed, chain_index).
RunResult run_chain(const GlauberParams& params, std::uint64_t chain_index, bool collect_trace = false);

/// Runs chains 0..n_chains-1 on `workers` threads (0 = default_worker_count()).
/// Output order and content do not depend on the worker count.
std::vector<RunResult> run_many(const GlauberParams& params, std::size_t n_chains, std::size_t workers = 0,
                                bool collect_trace = false);

/// GIBBSGLAUBER_THREADS if set and positive, else the hardware concurrency.
std::size_t default_worker_count();

/// Runs body(i) for i in [0, n) on `workers` threads with dynamic scheduling.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace gibbs
