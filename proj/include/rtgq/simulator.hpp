#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtgq/analytics.hpp"

namespace rtgq {

struct SimulationConfig {
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> warmup_departures;  // unset: max(1e4, measured / 10)
  std::uint64_t measured_departures = 1'000'000;
  std::uint64_t batches = 32;

  std::uint64_t effective_warmup() const noexcept;
};

/// How orbit retrials are generated. Aggregate keeps one Exp(k theta) clock for
/// the whole orbit, resampled at every state change; PerTruck keeps k separate
/// Exp(theta) clocks. Both describe the same process.
enum class RetrialMode { Aggregate, PerTruck };

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;
};

struct SimulationResult {
  Estimate n_mean;  // time-average of orbit + busy indicator
  Estimate w_mean;  // arrival-to-completion sojourn
  double utilization = 0.0;
  std::vector<std::uint64_t> departure_orbit_histogram;
  std::uint64_t departures = 0;
  double sim_time = 0.0;  // length of the measured window
  std::uint64_t events = 0;
  bool stationary = true;  // false when rho >= 1

  /// Fixed-format single-line JSON; identical inputs give identical bytes.
  std::string to_json() const;
};

/// Sample mean and Student-t half-width at `confidence`. Throws
/// Error(InsufficientData) with fewer than two values.
Estimate estimate_with_ci(std::span<const double> batch_values, double confidence = 0.95);

inline constexpr std::uint64_t kMaxEvents = std::uint64_t{1} << 40;

/// Discrete-event run from an empty system. Throws Error(Config) when
/// batches < 10 or measured_departures is not a multiple of batches, and
/// Error(Overflow) past kMaxEvents events.
SimulationResult run(const Scenario& sc, const SimulationConfig& cfg,
                     RetrialMode mode = RetrialMode::Aggregate);

/// Normalized orbit-size law at service completions. Throws
/// Error(InsufficientData) below 1e4 departures.
std::vector<double> departure_epoch_histogram(const SimulationResult& result);

}  // namespace rtgq
