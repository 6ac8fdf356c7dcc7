#include "rtgq/simulator.hpp"

#include <algorithm>
#include <limits>

#include "format.hpp"
#include "rtgq/error.hpp"

namespace rtgq {

std::uint64_t SimulationConfig::effective_warmup() const noexcept {
  if (warmup_departures) return *warmup_departures;
  return std::max<std::uint64_t>(10'000, measured_departures / 10);
}

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

void validate_config(const SimulationConfig& cfg) {
  if (cfg.batches < 10) throw Error(ErrorCode::Config, "batches must be at least 10");
  if (cfg.measured_departures == 0 || cfg.measured_departures % cfg.batches != 0) {
    throw Error(ErrorCode::Config, "measured_departures must be a positive multiple of batches");
  }
}

struct OrbitTruck {
  double arrival_time;
  double retrial_clock;  // PerTruck mode only
};

// Server state C(t), orbit N(t) and the pending event epochs.
struct SimState {
  double clock = 0.0;
  bool server_busy = false;
  std::vector<OrbitTruck> orbit;
  double next_arrival = kNever;
  double next_retrial = kNever;  // Aggregate mode only
  double service_end = kNever;
  double in_service_entry_time = 0.0;  // arrival time of the truck being served
};

class Accumulator {
 public:
  Accumulator(std::uint64_t batches, std::uint64_t batch_size)
      : batch_size_(batch_size), n_batches_(batches) {
    batch_n_.reserve(batches);
    batch_w_.reserve(batches);
  }

  void start(double now) {
    active_ = true;
    window_start_ = now;
    batch_start_ = now;
  }

  bool active() const noexcept { return active_; }

  void advance(double dt, std::size_t in_system, bool busy) {
    if (!active_) return;
    const double area = dt * static_cast<double>(in_system);
    area_ += area;
    batch_area_ += area;
    if (busy) busy_time_ += dt;
  }

  // Returns true once the last batch closes.
  bool departure(double now, double sojourn, std::size_t orbit_after) {
    if (orbit_after >= histogram_.size()) histogram_.resize(orbit_after + 1, 0);
    ++histogram_[orbit_after];
    sojourn_total_ += sojourn;
    batch_sojourn_ += sojourn;
    ++departures_;
    if (departures_ % batch_size_ != 0) return false;
    const double span = now - batch_start_;
    batch_n_.push_back(span > 0.0 ? batch_area_ / span : 0.0);
    batch_w_.push_back(batch_sojourn_ / static_cast<double>(batch_size_));
    batch_start_ = now;
    batch_area_ = 0.0;
    batch_sojourn_ = 0.0;
    return batch_n_.size() == n_batches_;
  }

  SimulationResult finish(double now) {
    SimulationResult r;
    r.sim_time = now - window_start_;
    r.departures = departures_;
    r.n_mean.mean = r.sim_time > 0.0 ? area_ / r.sim_time : 0.0;
    r.n_mean.half_width = estimate_with_ci(batch_n_).half_width;
    r.w_mean.mean = sojourn_total_ / static_cast<double>(departures_);
    r.w_mean.half_width = estimate_with_ci(batch_w_).half_width;
    r.utilization = r.sim_time > 0.0 ? busy_time_ / r.sim_time : 0.0;
    r.departure_orbit_histogram = std::move(histogram_);
    return r;
  }

 private:
  std::uint64_t batch_size_;
  std::uint64_t n_batches_;
  bool active_ = false;
  double window_start_ = 0.0;
  double batch_start_ = 0.0;
  double area_ = 0.0;
  double batch_area_ = 0.0;
  double busy_time_ = 0.0;
  double sojourn_total_ = 0.0;
  double batch_sojourn_ = 0.0;
  std::uint64_t departures_ = 0;
  std::vector<double> batch_n_;
  std::vector<double> batch_w_;
  std::vector<std::uint64_t> histogram_;
};

class Simulation {
 public:
  Simulation(const Scenario& sc, const SimulationConfig& cfg, RetrialMode mode)
      : sc_(sc),
        cfg_(cfg),
        mode_(mode),
        arrivals_(cfg.seed, Stream::Arrivals),
        services_(cfg.seed, Stream::Services),
        retrials_(cfg.seed, Stream::Retrials),
        ties_(cfg.seed, Stream::TieBreaks),
        stats_(cfg.batches, cfg.measured_departures / cfg.batches) {}

  SimulationResult run() {
    const std::uint64_t warmup = cfg_.effective_warmup();
    if (warmup == 0) stats_.start(0.0);
    st_.next_arrival = arrivals_.exponential(sc_.lambda());
    std::uint64_t events = 0;
    std::uint64_t completed = 0;
    while (true) {
      if (++events > kMaxEvents) throw Error(ErrorCode::Overflow, "event count exceeded 2^40");
      const double t_retrial = next_retrial_epoch();
      // Simultaneous epochs have probability zero; ordering is fixed anyway.
      if (st_.next_arrival <= st_.service_end && st_.next_arrival <= t_retrial) {
        advance_to(st_.next_arrival);
        on_arrival();
      } else if (st_.service_end <= t_retrial) {
        advance_to(st_.service_end);
        ++completed;
        const double sojourn = st_.clock - st_.in_service_entry_time;
        on_service_end();
        if (stats_.active()) {
          if (stats_.departure(st_.clock, sojourn, st_.orbit.size())) break;
        } else if (completed == warmup) {
          stats_.start(st_.clock);
        }
      } else {
        advance_to(t_retrial);
        on_retrial();
      }
    }
    auto result = stats_.finish(st_.clock);
    result.events = events;
    result.stationary = check_stability(sc_).ok;
    return result;
  }

 private:
  double next_retrial_epoch() const {
    if (mode_ == RetrialMode::Aggregate) return st_.next_retrial;
    double earliest = kNever;
    for (const auto& truck : st_.orbit) earliest = std::min(earliest, truck.retrial_clock);
    return earliest;
  }

  void advance_to(double t) {
    stats_.advance(t - st_.clock, st_.orbit.size() + (st_.server_busy ? 1 : 0), st_.server_busy);
    st_.clock = t;
  }

  void start_service(double entry_time) {
    st_.server_busy = true;
    st_.in_service_entry_time = entry_time;
    st_.service_end = st_.clock + sample(sc_.service(), services_);
    st_.next_retrial = kNever;
  }

  void on_arrival() {
    st_.next_arrival = st_.clock + arrivals_.exponential(sc_.lambda());
    if (!st_.server_busy) {
      start_service(st_.clock);
      return;
    }
    const double clock = mode_ == RetrialMode::PerTruck
                             ? st_.clock + retrials_.exponential(sc_.theta())
                             : kNever;
    st_.orbit.push_back({st_.clock, clock});
  }

  void on_service_end() {
    st_.server_busy = false;
    st_.service_end = kNever;
    if (mode_ == RetrialMode::Aggregate && !st_.orbit.empty()) {
      const double rate = static_cast<double>(st_.orbit.size()) * sc_.theta();
      st_.next_retrial = st_.clock + retrials_.exponential(rate);
    }
  }

  void on_retrial() {
    std::size_t index = 0;
    if (mode_ == RetrialMode::Aggregate) {
      // Random-order service: any orbiting truck is equally likely to get through.
      index = static_cast<std::size_t>(ties_.below(st_.orbit.size()));
    } else {
      for (std::size_t i = 1; i < st_.orbit.size(); ++i) {
        if (st_.orbit[i].retrial_clock < st_.orbit[index].retrial_clock) index = i;
      }
      if (st_.server_busy) {
        st_.orbit[index].retrial_clock = st_.clock + retrials_.exponential(sc_.theta());
        return;
      }
    }
    const double entry = st_.orbit[index].arrival_time;
    st_.orbit[index] = st_.orbit.back();
    st_.orbit.pop_back();
    start_service(entry);
  }

  const Scenario& sc_;
  SimulationConfig cfg_;
  RetrialMode mode_;
  RandomSource arrivals_;
  RandomSource services_;
  RandomSource retrials_;
  RandomSource ties_;
  SimState st_;
  Accumulator stats_;
};

}  // namespace

SimulationResult run(const Scenario& sc, const SimulationConfig& cfg, RetrialMode mode) {
  validate_config(cfg);
  return Simulation(sc, cfg, mode).run();
}

std::vector<double> departure_epoch_histogram(const SimulationResult& result) {
  if (result.departures < 10'000) {
    throw Error(ErrorCode::InsufficientData, "departure histogram needs at least 1e4 departures");
  }
  std::vector<double> out(result.departure_orbit_histogram.size());
  const double total = static_cast<double>(result.departures);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<double>(result.departure_orbit_histogram[k]) / total;
  }
  return out;
}

std::string SimulationResult::to_json() const {
  using detail::json_number;
  std::string s = "{\"n_mean\":" + json_number(n_mean.mean) +
                  ",\"n_ci_half\":" + json_number(n_mean.half_width) +
                  ",\"w_mean\":" + json_number(w_mean.mean) +
                  ",\"w_ci_half\":" + json_number(w_mean.half_width) +
                  ",\"utilization\":" + json_number(utilization) +
                  ",\"departures\":" + std::to_string(departures) +
                  ",\"sim_time\":" + json_number(sim_time) +
                  ",\"events\":" + std::to_string(events) +
                  ",\"stationary\":" + (stationary ? "true" : "false") +
                  ",\"departure_orbit_histogram\":[";
  for (std::size_t k = 0; k < departure_orbit_histogram.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(departure_orbit_histogram[k]);
  }
  s += "]}";
  return s;
}

}  // namespace rtgq
