#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rtgq/analytics.hpp"
#include "rtgq/embedded_chain.hpp"
#include "rtgq/simulator.hpp"

namespace rtgq {

/// Parses a scenario document: one JSON object with exactly the fields
/// `lambda` (number), `theta` (number) and `service` (distribution text).
/// Diagnostics name the line/column for syntax errors and the field for
/// everything else.
Scenario parse_scenario(std::string_view text);

/// `state,probability` rows, one per state 0..K.
void write_pi_csv(std::ostream& out, const StationaryDistribution& pi);

struct SweepSpec {
  double rho_min = 0.05;
  double rho_max = 0.95;
  std::size_t steps = 19;
  double theta = 1.4;
  ServiceDistribution service = ServiceDistribution::exponential(1.0);
  std::optional<SimulationConfig> sim;  // seed acts as the master seed

  /// Throws Error(Validation) unless 0 < rho_min < rho_max < 1 and steps >= 2.
  void validate() const;
  double rho_at(std::size_t i) const;
};

struct SweepRow {
  double rho;
  double lambda;
  double n_mean_analytic;
  double w_mean_analytic;
  double n_mean_chain;
  std::optional<Estimate> n_sim;
  std::optional<Estimate> w_sim;
};

inline constexpr std::string_view kSweepHeader =
    "rho,lambda,n_mean_analytic,w_mean_analytic,n_mean_chain,n_mean_sim,n_ci_half,w_mean_sim,w_ci_half";

/// Evaluates every grid point (concurrently when simulating); rows come back
/// in ascending rho. Point i simulates with seed derive_seed(master, i).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Header plus one line per row; simulated columns are empty when absent.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// gnuplot script plotting N and W against rho from `csv_path`.
std::string sweep_gnuplot(std::string_view csv_path);

struct Tolerances {
  double chain_rel = 1e-6;  // |chain - analytic| <= chain_rel * (1 + analytic)
  double sim_rel = 0.02;    // |sim - analytic| / analytic
};

struct ValidationPoint {
  double rho = 0.0;
  bool stable = false;
  double n_analytic = 0.0;
  double w_analytic = 0.0;
  double n_chain = 0.0;
  std::size_t chain_truncation = 0;
  Estimate n_sim;
  Estimate w_sim;
  bool chain_pass = false;
  bool ci_pass = false;
  bool gap_pass = false;
  std::string diagnostic;  // empty unless a component failed

  bool pass() const noexcept { return chain_pass && ci_pass && gap_pass; }
};

struct ValidationReport {
  std::vector<ValidationPoint> points;

  bool pass() const noexcept;
  std::string to_json() const;
};

/// Cross-checks the closed-form mean against the embedded chain and the
/// simulator. Component failures are recorded, never thrown.
ValidationReport validate(const Scenario& sc, const SimulationConfig& cfg,
                          const Tolerances& tol = {});

/// Single-line JSON records used by the CLI.
std::string analytic_json(const AnalyticReport& r);
std::string chain_json(const TransitionMatrix& m, const StationaryDistribution& pi);

}  // namespace rtgq
