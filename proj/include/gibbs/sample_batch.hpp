#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibbs/configuration.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/glauber.hpp"
#include "gibbs/potential.hpp"

namespace gibbs {

/// Independent configurations drawn with one parameter set.
struct SampleBatch {
  Domain domain;
  PairPotential potential;
  double activity = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::vector<Configuration> configurations;
  /// Per-chain counters, parallel to `configurations` when present.
  std::vector<RunStats> stats;

  /// Throws ParameterError if any configuration is invalid for `potential`.
  void validate() const;
  std::size_t size() const noexcept { return configurations.size(); }
};

/// Runs `n_chains` chains of `params` (constant activity) into a batch.
SampleBatch generate_batch(const GlauberParams& params, std::size_t n_chains, std::size_t workers = 0);

/// Reads a JSON Lines sample file (header record followed by chain records).
SampleBatch read_sample_batch(std::istream& in);
SampleBatch read_sample_batch_file(const std::string& path);

}  // namespace gibbs
