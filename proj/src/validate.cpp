#include <cmath>
#include <json.hpp>

#include "format.hpp"
#include "rtgq/cli_io.hpp"
#include "rtgq/error.hpp"

namespace rtgq {

ValidationReport validate(const Scenario& sc, const SimulationConfig& cfg, const Tolerances& tol) {
  ValidationPoint p;
  const auto stability = check_stability(sc);
  p.rho = stability.rho;
  p.stable = stability.ok;
  if (!p.stable) {
    p.diagnostic = UnstableError(p.rho).what();
    return {{p}};
  }
  p.n_analytic = mean_trucks(sc);
  p.w_analytic = mean_wait(sc);

  try {
    const auto chain = solve_auto(sc);
    p.n_chain = chain_mean(chain.distribution).mean;
    p.chain_truncation = chain.matrix.truncation();
    p.chain_pass = std::fabs(p.n_chain - p.n_analytic) <= tol.chain_rel * (1.0 + p.n_analytic);
  } catch (const Error& e) {
    p.diagnostic = std::string("chain: ") + e.what();
  }

  try {
    const auto sim = run(sc, cfg);
    p.n_sim = sim.n_mean;
    p.w_sim = sim.w_mean;
    const double gap = std::fabs(sim.n_mean.mean - p.n_analytic);
    p.ci_pass = gap <= sim.n_mean.half_width;
    p.gap_pass = gap / p.n_analytic <= tol.sim_rel;
  } catch (const Error& e) {
    if (!p.diagnostic.empty()) p.diagnostic += "; ";
    p.diagnostic += std::string("simulation: ") + e.what();
  }
  return {{p}};
}

bool ValidationReport::pass() const noexcept {
  if (points.empty()) return false;
  for (const auto& p : points) {
    if (!p.pass()) return false;
  }
  return true;
}

std::string ValidationReport::to_json() const {
  using detail::json_number;
  const auto flag = [](bool b) { return b ? "true" : "false"; };
  std::string s = std::string("{\"verdict\":\"") + (pass() ? "pass" : "fail") + "\",\"points\":[";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (i) s += ',';
    s += "{\"rho\":" + json_number(p.rho) + ",\"stable\":" + flag(p.stable) +
         ",\"n_mean_analytic\":" + json_number(p.n_analytic) +
         ",\"w_mean_analytic\":" + json_number(p.w_analytic) +
         ",\"n_mean_chain\":" + json_number(p.n_chain) +
         ",\"chain_truncation\":" + std::to_string(p.chain_truncation) +
         ",\"n_mean_sim\":" + json_number(p.n_sim.mean) +
         ",\"n_ci_half\":" + json_number(p.n_sim.half_width) +
         ",\"w_mean_sim\":" + json_number(p.w_sim.mean) +
         ",\"w_ci_half\":" + json_number(p.w_sim.half_width) + ",\"chain_pass\":" + flag(p.chain_pass) +
         ",\"ci_pass\":" + flag(p.ci_pass) + ",\"gap_pass\":" + flag(p.gap_pass) +
         ",\"diagnostic\":" + nlohmann::json(p.diagnostic).dump() + "}";
  }
  s += "]}";
  return s;
}

}  // namespace rtgq
