#pragma once


#include "rtgq/distributions.hpp"

namespace rtgq {

/// One queue instance: Poisson arrivals at `lambda`, each orbiting truck
/// retrying at rate `theta`, crane service drawn from `service`.
class Scenario {
 public:
  /// Throws Error(Validation) naming the offending field when lambda or theta
  /// is not strictly positive and finite.
  Scenario(double lambda, double theta, ServiceDistribution service);

  double lambda() const noexcept { return lambda_; }
  double theta() const noexcept { return theta_; }
  const ServiceDistribution& service() const noexcept { return service_; }

 private:
  double lambda_;
  double theta_;
  ServiceDistribution service_;
};

struct AnalyticReport {
  double rho = 0.0;
  bool stable = false;
  // Populated only when stable.
  double n_mean = 0.0;
  double w_mean = 0.0;
  double pi0 = 0.0;
  double pk_n_mean = 0.0;
};

struct Stability {
  bool ok;
  double rho;
};

double traffic_intensity(const Scenario& sc);

/// ok iff rho < 1 strictly; rho == 1 makes the mean formulas divide by zero.
Stability check_stability(const Scenario& sc);

/// Throws UnstableError unless rho < 1.
void require_stable(const Scenario& sc);

/// Probability of exactly k Poisson arrivals during one service time.
double arrivals_per_service_pmf(const Scenario& sc, long k);

/// A(z) = B(lambda (1 - z)), z in [0, 1].
double arrivals_pgf(const Scenario& sc, double z);

/// Integrand (1 - A(u)) / (A(u) - u) of the orbit exponent. Exact limit
/// rho / (1 - rho) at u = 1, first-order series for |u - 1| < 1e-7.
double orbit_integrand(const Scenario& sc, double u);

/// (lambda / theta) * integral from 1 to z of orbit_integrand.
double orbit_exponent(const Scenario& sc, double z);

/// Stationary generating function f(z) of the orbit size at departure epochs.
double evaluate_pgf(const Scenario& sc, double z);

double mean_trucks(const Scenario& sc);
double mean_wait(const Scenario& sc);

/// Retrial-free M/G/1 mean, the theta -> infinity limit of mean_trucks.
double pk_limit_mean(const Scenario& sc);

struct DerivativeCheck {
  double numeric;
  double closed_form;
  double abs_gap;
};

/// One-sided Richardson estimate of f'(1) from backward differences with
/// steps h and h/2, compared against mean_trucks.
DerivativeCheck derivative_crosscheck(const Scenario& sc, double h = 1e-3);

/// Everything above in one record. Never throws on instability: an unstable
/// scenario yields stable = false and zeroed measures.
AnalyticReport analyze(const Scenario& sc);

}  // namespace rtgq
