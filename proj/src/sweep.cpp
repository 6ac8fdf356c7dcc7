#include <future>

#include "format.hpp"
#include "rtgq/cli_io.hpp"
#include "rtgq/error.hpp"

namespace rtgq {

void SweepSpec::validate() const {
  if (!(rho_min > 0.0 && rho_min < rho_max && rho_max < 1.0)) {
    throw Error(ErrorCode::Validation, "sweep requires 0 < rho-min < rho-max < 1");
  }
  if (steps < 2) throw Error(ErrorCode::Validation, "sweep requires steps >= 2");
  if (!(theta > 0.0)) throw Error(ErrorCode::Validation, "theta must be positive");
}

double SweepSpec::rho_at(std::size_t i) const {
  if (i + 1 == steps) return rho_max;
  return rho_min + (rho_max - rho_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

namespace {

SweepRow evaluate_point(const SweepSpec& spec, std::size_t index) {
  SweepRow row{};
  row.rho = spec.rho_at(index);
  row.lambda = row.rho / moments(spec.service).beta1;
  const Scenario sc(row.lambda, spec.theta, spec.service);
  row.w_mean_analytic = mean_wait(sc);
  row.n_mean_analytic = mean_trucks(sc);
  row.n_mean_chain = chain_mean(solve_auto(sc).distribution).mean;
  if (spec.sim) {
    SimulationConfig cfg = *spec.sim;
    cfg.seed = derive_seed(spec.sim->seed, index);
    const auto result = run(sc, cfg);
    row.n_sim = result.n_mean;
    row.w_sim = result.w_mean;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  rows.reserve(spec.steps);
  if (!spec.sim) {
    for (std::size_t i = 0; i < spec.steps; ++i) rows.push_back(evaluate_point(spec, i));
    return rows;
  }
  std::vector<std::future<SweepRow>> pending;
  pending.reserve(spec.steps);
  for (std::size_t i = 0; i < spec.steps; ++i) {
    pending.push_back(std::async(std::launch::async, evaluate_point, std::cref(spec), i));
  }
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  using detail::format_double;
  std::string out(kSweepHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_double(r.rho) + ',' + format_double(r.lambda) + ',' +
           format_double(r.n_mean_analytic) + ',' + format_double(r.w_mean_analytic) + ',' +
           format_double(r.n_mean_chain) + ',';
    if (r.n_sim) {
      out += format_double(r.n_sim->mean) + ',' + format_double(r.n_sim->half_width) + ',' +
             format_double(r.w_sim->mean) + ',' + format_double(r.w_sim->half_width);
    } else {
      out += ",,,";
    }
    out += '\n';
  }
  return out;
}

std::string sweep_gnuplot(std::string_view csv_path) {
  const std::string path(csv_path);
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel 'traffic rate rho'\n"
         "set terminal pngcairo size 900,600\n"
         "set output 'trucks.png'\n"
         "set ylabel 'mean number of trucks'\n"
         "plot '" + path + "' using 1:3 with linespoints title 'analytic', \\\n"
         "     '" + path + "' using 1:6:7 with yerrorbars title 'simulated'\n"
         "set output 'waiting.png'\n"
         "set ylabel 'mean time in system'\n"
         "plot '" + path + "' using 1:4 with linespoints title 'analytic', \\\n"
         "     '" + path + "' using 1:8:9 with yerrorbars title 'simulated'\n";
}

}  // namespace rtgq
