#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "rtgq/rng.hpp"

namespace rtgq {

struct Exponential {
  double mu;
};

struct Deterministic {
  double d;
};

struct Erlang {
  int shape;
  double rate;
};

// Two-phase hyperexponential: phase 1 with probability p.
struct HyperExp2 {
  double p;
  double mu1;
  double mu2;
};

struct Moments {
  double beta1;
  double beta2;
};

/// Service-time law of the crane. Immutable once built; the factories reject
/// non-positive rates, non-positive shapes and p outside [0, 1].
class ServiceDistribution {
 public:
  using Variant = std::variant<Exponential, Deterministic, Erlang, HyperExp2>;

  static ServiceDistribution exponential(double mu);
  static ServiceDistribution deterministic(double d);
  static ServiceDistribution erlang(int shape, double rate);
  static ServiceDistribution hyperexp2(double p, double mu1, double mu2);

  /// Parses `exp:<mu>`, `det:<d>`, `erlang:<shape>:<rate>` or
  /// `hyper2:<p>:<mu1>:<mu2>`. Throws Error(Parse) on malformed text and
  /// Error(Validation) on out-of-range parameters.
  static ServiceDistribution parse(std::string_view text);

  const Variant& variant() const noexcept { return law_; }

  /// Canonical text form; parse(to_string()) reproduces the law exactly.
  std::string to_string() const;

 private:
  explicit ServiceDistribution(Variant law) : law_(law) {}
  Variant law_;
};

Moments moments(const ServiceDistribution& dist);

/// Laplace-Stieltjes transform B(s) for s >= 0.
double lst(const ServiceDistribution& dist, double s);

/// 1 - B(s), evaluated without cancellation for small s.
double lst_complement(const ServiceDistribution& dist, double s);

/// Density b(t). Throws Error(Unsupported) for Deterministic.
double pdf(const ServiceDistribution& dist, double t);

double sample(const ServiceDistribution& dist, RandomSource& rng);

}  // namespace rtgq
