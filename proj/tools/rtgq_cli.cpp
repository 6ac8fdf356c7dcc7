// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "rtgq/rtgq.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct TextDeleter {
  void operator()(rtgq_text* t) const { rtgq_text_destroy(t); }
};
struct ScenarioDeleter {
  void operator()(rtgq_scenario* s) const { rtgq_scenario_destroy(s); }
};
struct ChainDeleter {
  void operator()(rtgq_chain* c) const { rtgq_chain_destroy(c); }
};
struct SimulationDeleter {
  void operator()(rtgq_simulation* s) const { rtgq_simulation_destroy(s); }
};

using Text = std::unique_ptr<rtgq_text, TextDeleter>;
using ScenarioHandle = std::unique_ptr<rtgq_scenario, ScenarioDeleter>;

// Raised on any failure; carries the exit code and the one-line diagnostic.
struct Failure {
  int exit_code;
  std::string kind;
  std::string message;
};

bool is_usage_status(rtgq_status s) {
  return s == RTGQ_E_PARSE || s == RTGQ_E_VALIDATION || s == RTGQ_E_UNKNOWN_FIELD ||
         s == RTGQ_E_INVALID_ARGUMENT || s == RTGQ_E_CONFIG;
}

void check(rtgq_status s) {
  if (s == RTGQ_OK) return;
  throw Failure{is_usage_status(s) ? kExitUsage : kExitFail, rtgq_status_name(s),
                rtgq_last_error_message()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitUsage, "io", "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const rtgq_text* text) {
  std::ofstream out(path, std::ios::binary);
  out.write(rtgq_text_data(text), static_cast<std::streamsize>(rtgq_text_size(text)));
  if (!out) throw Failure{kExitFail, "io", "cannot write " + path};
}

struct ScenarioArgs {
  std::optional<double> lambda;
  std::optional<double> theta;
  std::optional<std::string> service;
  std::optional<std::string> scenario_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "arrival rate");
    cmd->add_option("--theta", theta, "retrial rate per waiting truck");
    cmd->add_option("--service", service, "service law: exp:MU | det:D | erlang:K:RATE | hyper2:P:MU1:MU2");
    cmd->add_option("--scenario", scenario_file, "scenario document (JSON) instead of the three flags");
  }

  ScenarioHandle build() const {
    rtgq_scenario* raw = nullptr;
    if (scenario_file) {
      if (lambda || theta || service) {
        throw Failure{kExitUsage, "usage", "--scenario cannot be combined with --lambda/--theta/--service"};
      }
      check(rtgq_scenario_parse(read_file(*scenario_file).c_str(), &raw));
    } else {
      if (!lambda || !theta || !service) {
        throw Failure{kExitUsage, "usage", "need --lambda, --theta and --service (or --scenario)"};
      }
      check(rtgq_scenario_create(*lambda, *theta, service->c_str(), &raw));
    }
    return ScenarioHandle(raw);
  }
};

struct SimArgs {
  std::uint64_t seed = 42;
  std::uint64_t departures = 1'000'000;
  std::optional<std::uint64_t> warmup;
  std::uint64_t batches = 32;

  void attach(CLI::App* cmd, bool required) {
    auto* s = cmd->add_option("--seed", seed, "master seed");
    auto* d = cmd->add_option("--departures", departures, "measured departures");
    if (required) {
      s->required();
      d->required();
    }
  }

  rtgq_sim_config config() const {
    rtgq_sim_config cfg;
    rtgq_sim_config_default(&cfg);
    cfg.seed = seed;
    cfg.measured_departures = departures;
    cfg.batches = batches;
    if (warmup) {
      cfg.has_warmup = 1;
      cfg.warmup_departures = *warmup;
    }
    return cfg;
  }
};

void print_line(const rtgq_text* text) { std::cout << rtgq_text_data(text) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary analysis of the M/G/1 retrial queue of trucks at a yard crane"};
  app.require_subcommand(1);

  ScenarioArgs analyze_sc;
  auto* analyze = app.add_subcommand("analyze", "closed-form rho, N, W and pi0");
  analyze_sc.attach(analyze);

  ScenarioArgs sim_sc;
  SimArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "discrete-event simulation with 95% CIs");
  sim_sc.attach(simulate);
  sim_args.attach(simulate, true);
  simulate->add_option("--warmup", sim_args.warmup, "departures discarded before measuring");
  simulate->add_option("--batches", sim_args.batches, "batch-means batches (>= 10)");

  ScenarioArgs chain_sc;
  std::string truncation = "auto";
  std::optional<std::string> dump_pi;
  auto* chain = app.add_subcommand("chain", "stationary law of the departure-epoch orbit chain");
  chain_sc.attach(chain);
  chain->add_option("--truncation", truncation, "K or auto");
  chain->add_option("--dump-pi", dump_pi, "write state,probability CSV");

  double rho_min = 0, rho_max = 0, sweep_theta = 1.4;
  std::size_t steps = 0;
  std::string sweep_service, out_csv;
  std::optional<std::string> gnuplot;
  bool sweep_simulate = false;
  SimArgs sweep_sim;
  auto* sweep = app.add_subcommand("sweep", "traffic-rate sweep to CSV");
  sweep->add_option("--rho-min", rho_min)->required();
  sweep->add_option("--rho-max", rho_max)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--theta", sweep_theta)->required();
  sweep->add_option("--service", sweep_service)->required();
  sweep->add_flag("--simulate", sweep_simulate, "add simulated columns");
  sweep_sim.attach(sweep, false);
  sweep->add_option("--out", out_csv)->required();
  sweep->add_option("--gnuplot", gnuplot, "also write a gnuplot script");

  ScenarioArgs val_sc;
  SimArgs val_sim;
  double rel_tol = 0.02;
  auto* validate = app.add_subcommand("validate", "closed form vs chain vs simulation");
  val_sc.attach(validate);
  val_sim.attach(validate, true);
  validate->add_option("--rel-tol", rel_tol, "allowed relative gap of the simulated mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "rtgq: error[usage]: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*analyze) {
      auto sc = analyze_sc.build();
      rtgq_text* raw = nullptr;
      check(rtgq_analyze_json(sc.get(), &raw));
      print_line(Text(raw).get());
    } else if (*simulate) {
      auto sc = sim_sc.build();
      const auto cfg = sim_args.config();
      rtgq_simulation* sim = nullptr;
      check(rtgq_simulate(sc.get(), &cfg, &sim));
      std::unique_ptr<rtgq_simulation, SimulationDeleter> owned(sim);
      rtgq_text* raw = nullptr;
      check(rtgq_simulation_json(sim, &raw));
      print_line(Text(raw).get());
    } else if (*chain) {
      auto sc = chain_sc.build();
      std::size_t k = 0;
      if (truncation != "auto") {
        try {
          std::size_t used = 0;
          k = std::stoul(truncation, &used);
          if (used != truncation.size() || k == 0) throw std::invalid_argument(truncation);
        } catch (const std::exception&) {
          throw Failure{kExitUsage, "usage", "--truncation must be a positive integer or 'auto'"};
        }
      }
      rtgq_chain* ch = nullptr;
      check(rtgq_chain_solve(sc.get(), k, &ch));
      std::unique_ptr<rtgq_chain, ChainDeleter> owned(ch);
      if (dump_pi) {
        rtgq_text* csv = nullptr;
        check(rtgq_chain_pi_csv(ch, &csv));
        write_file(*dump_pi, Text(csv).get());
      }
      rtgq_text* raw = nullptr;
      check(rtgq_chain_json(ch, &raw));
      print_line(Text(raw).get());
    } else if (*sweep) {
      rtgq_sweep_spec spec{};
      spec.rho_min = rho_min;
      spec.rho_max = rho_max;
      spec.steps = steps;
      spec.theta = sweep_theta;
      spec.service = sweep_service.c_str();
      spec.simulate = sweep_simulate ? 1 : 0;
      spec.sim = sweep_sim.config();
      rtgq_text* raw = nullptr;
      check(rtgq_sweep_csv(&spec, &raw));
      write_file(out_csv, Text(raw).get());
      if (gnuplot) {
        rtgq_text* script = nullptr;
        check(rtgq_sweep_gnuplot(out_csv.c_str(), &script));
        write_file(*gnuplot, Text(script).get());
      }
    } else if (*validate) {
      auto sc = val_sc.build();
      const auto cfg = val_sim.config();
      int passed = 0;
      rtgq_text* raw = nullptr;
      check(rtgq_validate(sc.get(), &cfg, rel_tol, &passed, &raw));
      print_line(Text(raw).get());
      return passed ? 0 : kExitFail;
    }
  } catch (const Failure& f) {
    std::cerr << "rtgq: error[" << f.kind << "]: " << f.message << '\n';
    return f.exit_code;
  }
  return 0;
}
