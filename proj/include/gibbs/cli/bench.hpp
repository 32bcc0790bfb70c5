#pragma once

#include <cstddef>
#include <cstdint>

#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"

namespace gibbs::cli {

struct Throughput {
  std::uint64_t events = 0;
  double seconds = 0.0;
  double events_per_sec = 0.0;
  /// Mean |eta| over the timed steps.
  double mean_count = 0.0;
};

/// Events per second of one chain at (near) stationarity. The chain is first
/// run for `burn_in` time units from the empty set, then `events` steps are
/// timed `repeats` times; the fastest repeat is reported.
Throughput measure_throughput(const Domain& domain, const PairPotential& phi, double activity, std::uint64_t events,
                              std::size_t repeats, double burn_in, std::uint64_t seed);

}  // namespace gibbs::cli
