#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gibbs/configuration.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"

namespace gibbs::cli {

inline constexpr const char* kVersion = "0.1.0";

struct CanonicalSettings {
  std::size_t k = 0;
  double delta = 0.1;
  bool certified = false;
  std::size_t max_attempts = 100000;
  std::size_t n_pilot = 256;
};

struct ValidateSettings {
  std::size_t chains = 20000;
  std::size_t n_x = 8;
  std::size_t k = 2;
  double survivor_time = std::log(10.0);
  std::size_t survivor_count = 10;
  /// Pin location for the influence suite; defaults to the box centre.
  std::optional<Point> influence_x;
  double relaxation_horizon = 5000.0;
  double relaxation_dt = 0.05;
  std::size_t relaxation_lags = 200;
};

struct LocalizeSettings {
  double tau = std::log(2.0);
  std::size_t runs = 100000;
  std::vector<std::size_t> k{0, 1, 2};
  /// Final activity of the variance check; defaults to half the base activity.
  std::optional<double> lambda1;
  std::vector<std::size_t> variance_k{0, 1};
  std::optional<double> delta;
};

struct BenchSettings {
  std::vector<double> lengths{10.0, 20.0, 40.0, 80.0};
  std::uint64_t events = 1000000;
  std::size_t repeats = 3;
  double burn_in = 20.0;
};

/// Everything a subcommand needs. Built from a JSON or TOML file, then
/// overridden by command-line flags.
struct RunConfig {
  Domain domain = Domain::interval(1.0);
  PairPotential potential = PairPotential::hard_sphere(0.15);
  double activity = 1.0;
  /// Exactly one of horizon or (epsilon, gamma) is set for time-dependent runs.
  std::optional<double> horizon;
  std::optional<double> epsilon;
  std::optional<double> gamma;
  Configuration initial;
  std::size_t chains = 1000;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::string format = "jsonl";
  CanonicalSettings canonical;
  ValidateSettings validate;
  LocalizeSettings localize;
  BenchSettings bench;

  /// Throws ParameterError unless exactly one of T or (epsilon, gamma) is usable.
  void check_time_mode() const;
  /// T itself, or plan_time(epsilon, |S|, gamma, lambda |Lambda|).
  double resolved_horizon() const;
  /// Normalised JSON form; hashed for provenance.
  nlohmann::ordered_json to_json() const;
  /// 64-bit FNV-1a of to_json().dump(), as 16 hex digits.
  std::string hash() const;
};

/// Parses a JSON config document. `base_dir` resolves relative file references.
RunConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig config_from_toml(const std::string& text, const std::string& base_dir = ".");
/// Reads a config file; ".toml" selects TOML, anything else JSON.
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

/// %.17g formatting.
std::string format_double(double x);

}  // namespace gibbs::cli
