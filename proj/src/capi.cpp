#include "rtgq/rtgq.h"

#include <new>
#include <sstream>
#include <string>

#include "rtgq/cli_io.hpp"
#include "rtgq/error.hpp"

struct rtgq_scenario {
  rtgq::Scenario value;
};

struct rtgq_chain {
  rtgq::TransitionMatrix matrix;
  rtgq::StationaryDistribution distribution;
};

struct rtgq_simulation {
  rtgq::SimulationResult result;
};

struct rtgq_text {
  std::string value;
};

namespace {

thread_local std::string last_error;

rtgq_status to_status(rtgq::ErrorCode code) {
  using rtgq::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return RTGQ_E_INVALID_ARGUMENT;
    case ErrorCode::Parse: return RTGQ_E_PARSE;
    case ErrorCode::Validation: return RTGQ_E_VALIDATION;
    case ErrorCode::UnknownField: return RTGQ_E_UNKNOWN_FIELD;
    case ErrorCode::Domain: return RTGQ_E_DOMAIN;
    case ErrorCode::Unsupported: return RTGQ_E_UNSUPPORTED;
    case ErrorCode::Unstable: return RTGQ_E_UNSTABLE;
    case ErrorCode::NonConvergence: return RTGQ_E_NONCONVERGENCE;
    case ErrorCode::Budget: return RTGQ_E_BUDGET;
    case ErrorCode::Config: return RTGQ_E_CONFIG;
    case ErrorCode::InsufficientData: return RTGQ_E_INSUFFICIENT_DATA;
    case ErrorCode::Overflow: return RTGQ_E_OVERFLOW;
    case ErrorCode::Io: return RTGQ_E_IO;
  }
  return RTGQ_E_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
rtgq_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return RTGQ_OK;
  } catch (const rtgq::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RTGQ_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RTGQ_E_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw rtgq::Error(rtgq::ErrorCode::InvalidArgument, what);
}

rtgq::SimulationConfig to_config(const rtgq_sim_config& c) {
  rtgq::SimulationConfig cfg;
  cfg.seed = c.seed;
  if (c.has_warmup) cfg.warmup_departures = c.warmup_departures;
  cfg.measured_departures = c.measured_departures;
  cfg.batches = c.batches;
  return cfg;
}

rtgq_text* make_text(std::string s) { return new rtgq_text{std::move(s)}; }

}  // namespace

extern "C" {

const char* rtgq_status_name(rtgq_status status) {
  switch (status) {
    case RTGQ_OK: return "ok";
    case RTGQ_E_INVALID_ARGUMENT: return "invalid-argument";
    case RTGQ_E_PARSE: return "parse";
    case RTGQ_E_VALIDATION: return "validation";
    case RTGQ_E_UNKNOWN_FIELD: return "unknown-field";
    case RTGQ_E_DOMAIN: return "domain";
    case RTGQ_E_UNSUPPORTED: return "unsupported";
    case RTGQ_E_UNSTABLE: return "unstable";
    case RTGQ_E_NONCONVERGENCE: return "non-convergence";
    case RTGQ_E_BUDGET: return "budget";
    case RTGQ_E_CONFIG: return "config";
    case RTGQ_E_INSUFFICIENT_DATA: return "insufficient-data";
    case RTGQ_E_OVERFLOW: return "overflow";
    case RTGQ_E_IO: return "io";
    case RTGQ_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* rtgq_last_error_message(void) { return last_error.c_str(); }

const char* rtgq_text_data(const rtgq_text* text) { return text ? text->value.c_str() : ""; }
size_t rtgq_text_size(const rtgq_text* text) { return text ? text->value.size() : 0; }
void rtgq_text_destroy(rtgq_text* text) { delete text; }

rtgq_status rtgq_scenario_create(double lambda, double theta, const char* service,
                                 rtgq_scenario** out) {
  return guarded([&] {
    require(service && out, "service and out must be non-null");
    *out = new rtgq_scenario{
        rtgq::Scenario(lambda, theta, rtgq::ServiceDistribution::parse(service))};
  });
}

rtgq_status rtgq_scenario_parse(const char* document, rtgq_scenario** out) {
  return guarded([&] {
    require(document && out, "document and out must be non-null");
    *out = new rtgq_scenario{rtgq::parse_scenario(document)};
  });
}

void rtgq_scenario_destroy(rtgq_scenario* scenario) { delete scenario; }

double rtgq_scenario_lambda(const rtgq_scenario* scenario) {
  return scenario ? scenario->value.lambda() : 0.0;
}
double rtgq_scenario_theta(const rtgq_scenario* scenario) {
  return scenario ? scenario->value.theta() : 0.0;
}

rtgq_status rtgq_analyze(const rtgq_scenario* scenario, rtgq_analytic_report* out) {
  return guarded([&] {
    require(scenario && out, "scenario and out must be non-null");
    const auto r = rtgq::analyze(scenario->value);
    *out = {r.rho, r.stable ? 1 : 0, r.n_mean, r.w_mean, r.pi0, r.pk_n_mean};
  });
}

rtgq_status rtgq_analyze_json(const rtgq_scenario* scenario, rtgq_text** out) {
  return guarded([&] {
    require(scenario && out, "scenario and out must be non-null");
    *out = make_text(rtgq::analytic_json(rtgq::analyze(scenario->value)));
  });
}

rtgq_status rtgq_evaluate_pgf(const rtgq_scenario* scenario, double z, double* out) {
  return guarded([&] {
    require(scenario && out, "scenario and out must be non-null");
    *out = rtgq::evaluate_pgf(scenario->value, z);
  });
}

rtgq_status rtgq_derivative_crosscheck(const rtgq_scenario* scenario, rtgq_derivative_check* out) {
  return guarded([&] {
    require(scenario && out, "scenario and out must be non-null");
    const auto d = rtgq::derivative_crosscheck(scenario->value);
    *out = {d.numeric, d.closed_form, d.abs_gap};
  });
}

rtgq_status rtgq_chain_solve(const rtgq_scenario* scenario, size_t truncation, rtgq_chain** out) {
  return guarded([&] {
    require(scenario && out, "scenario and out must be non-null");
    if (truncation == 0) {
      auto solved = rtgq::solve_auto(scenario->value);
      *out = new rtgq_chain{std::move(solved.matrix), std::move(solved.distribution)};
    } else {
      auto matrix = rtgq::build_matrix(scenario->value, truncation);
      auto dist = rtgq::stationary(matrix);
      *out = new rtgq_chain{std::move(matrix), std::move(dist)};
    }
  });
}

void rtgq_chain_destroy(rtgq_chain* chain) { delete chain; }

rtgq_status rtgq_chain_summary_get(const rtgq_chain* chain, rtgq_chain_summary* out) {
  return guarded([&] {
    require(chain && out, "chain and out must be non-null");
    const auto mean = rtgq::chain_mean(chain->distribution);
    *out = {chain->matrix.truncation(), chain->distribution.pi.front(), mean.mean,
            chain->distribution.residual, chain->matrix.tail_mass(),
            mean.truncation_suspect ? 1 : 0};
  });
}

rtgq_status rtgq_chain_pi(const rtgq_chain* chain, const double** data, size_t* length) {
  return guarded([&] {
    require(chain && data && length, "chain, data and length must be non-null");
    *data = chain->distribution.pi.data();
    *length = chain->distribution.pi.size();
  });
}

rtgq_status rtgq_chain_json(const rtgq_chain* chain, rtgq_text** out) {
  return guarded([&] {
    require(chain && out, "chain and out must be non-null");
    *out = make_text(rtgq::chain_json(chain->matrix, chain->distribution));
  });
}

rtgq_status rtgq_chain_pi_csv(const rtgq_chain* chain, rtgq_text** out) {
  return guarded([&] {
    require(chain && out, "chain and out must be non-null");
    std::ostringstream os;
    rtgq::write_pi_csv(os, chain->distribution);
    *out = make_text(os.str());
  });
}

void rtgq_sim_config_default(rtgq_sim_config* cfg) {
  if (!cfg) return;
  const rtgq::SimulationConfig d;
  *cfg = {d.seed, 0, 0, d.measured_departures, d.batches};
}

rtgq_status rtgq_simulate(const rtgq_scenario* scenario, const rtgq_sim_config* cfg,
                          rtgq_simulation** out) {
  return guarded([&] {
    require(scenario && cfg && out, "scenario, cfg and out must be non-null");
    *out = new rtgq_simulation{rtgq::run(scenario->value, to_config(*cfg))};
  });
}

void rtgq_simulation_destroy(rtgq_simulation* sim) { delete sim; }

rtgq_status rtgq_simulation_summary_get(const rtgq_simulation* sim, rtgq_sim_summary* out) {
  return guarded([&] {
    require(sim && out, "sim and out must be non-null");
    const auto& r = sim->result;
    *out = {r.n_mean.mean, r.n_mean.half_width, r.w_mean.mean, r.w_mean.half_width,
            r.utilization, r.sim_time, r.departures, r.events, r.stationary ? 1 : 0};
  });
}

rtgq_status rtgq_simulation_histogram(const rtgq_simulation* sim, const uint64_t** counts,
                                      size_t* length) {
  return guarded([&] {
    require(sim && counts && length, "sim, counts and length must be non-null");
    *counts = sim->result.departure_orbit_histogram.data();
    *length = sim->result.departure_orbit_histogram.size();
  });
}

rtgq_status rtgq_simulation_json(const rtgq_simulation* sim, rtgq_text** out) {
  return guarded([&] {
    require(sim && out, "sim and out must be non-null");
    *out = make_text(sim->result.to_json());
  });
}

rtgq_status rtgq_sweep_csv(const rtgq_sweep_spec* spec, rtgq_text** out) {
  return guarded([&] {
    require(spec && spec->service && out, "spec, spec->service and out must be non-null");
    rtgq::SweepSpec s;
    s.rho_min = spec->rho_min;
    s.rho_max = spec->rho_max;
    s.steps = spec->steps;
    s.theta = spec->theta;
    s.service = rtgq::ServiceDistribution::parse(spec->service);
    if (spec->simulate) s.sim = to_config(spec->sim);
    *out = make_text(rtgq::sweep_csv(rtgq::run_sweep(s)));
  });
}

rtgq_status rtgq_sweep_gnuplot(const char* csv_path, rtgq_text** out) {
  return guarded([&] {
    require(csv_path && out, "csv_path and out must be non-null");
    *out = make_text(rtgq::sweep_gnuplot(csv_path));
  });
}

rtgq_status rtgq_validate(const rtgq_scenario* scenario, const rtgq_sim_config* cfg,
                          double rel_tol, int* passed, rtgq_text** report) {
  return guarded([&] {
    require(scenario && cfg && passed && report, "arguments must be non-null");
    require(rel_tol > 0.0, "rel_tol must be positive");
    rtgq::Tolerances tol;
    tol.sim_rel = rel_tol;
    const auto r = rtgq::validate(scenario->value, to_config(*cfg), tol);
    *passed = r.pass() ? 1 : 0;
    *report = make_text(r.to_json());
  });
}

}  // extern "C"
