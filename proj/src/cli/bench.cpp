#include "gibbs/cli/bench.hpp"

#include <chrono>

#include "gibbs/errors.hpp"
#include "gibbs/glauber.hpp"

namespace gibbs::cli {

Throughput measure_throughput(const Domain& domain, const PairPotential& phi, double activity, std::uint64_t events,
                              std::size_t repeats, double burn_in, std::uint64_t seed) {
  if (!(activity > 0.0)) throw ParameterError("bench needs a positive activity");
  if (events == 0 || repeats == 0) throw ParameterError("bench needs events > 0 and repeats > 0");
  const ActivityField act(activity);
  GlauberChain chain(domain, phi, act, Configuration{}, Rng(seed));
  chain.run_until(burn_in);

  Throughput best;
  for (std::size_t r = 0; r < repeats; ++r) {
    double count_sum = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < events; ++i) {
      chain.step();
      count_sum += static_cast<double>(chain.configuration().size());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double rate = static_cast<double>(events) / secs;
    if (rate > best.events_per_sec) best = {events, secs, rate, count_sum / static_cast<double>(events)};
  }
  return best;
}

}  // namespace gibbs::cli
