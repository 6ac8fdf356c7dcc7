#include "rtgq/analytics.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "quadrature.hpp"
#include "rtgq/error.hpp"

namespace rtgq {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr double kSeriesRadius = 1e-7;
constexpr std::size_t kQuadratureMaxPanels = 4096;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_unit_interval(double z, const char* what) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw Error(ErrorCode::Domain, std::string(what) + " argument z must lie in [0, 1]");
  }
}

// log of the geometric pmf (mu/(lambda+mu)) (lambda/(lambda+mu))^k.
double log_geometric(double lambda, double mu, long k) {
  return std::log(mu / (lambda + mu)) + static_cast<double>(k) * std::log(lambda / (lambda + mu));
}

}  // namespace

Scenario::Scenario(double lambda, double theta, ServiceDistribution service)
    : lambda_(lambda), theta_(theta), service_(service) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::Validation, "lambda must be a positive finite number");
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::Validation, "theta must be a positive finite number");
  }
}

double traffic_intensity(const Scenario& sc) { return sc.lambda() * moments(sc.service()).beta1; }

Stability check_stability(const Scenario& sc) {
  const double rho = traffic_intensity(sc);
  return {rho < 1.0, rho};
}

void require_stable(const Scenario& sc) {
  const auto s = check_stability(sc);
  if (!s.ok) throw UnstableError(s.rho);
}

double arrivals_per_service_pmf(const Scenario& sc, long k) {
  if (k < 0) return 0.0;
  const double lambda = sc.lambda();
  const double kd = static_cast<double>(k);
  return std::visit(
      Overloaded{
          [&](const Exponential& e) { return std::exp(log_geometric(lambda, e.mu, k)); },
          [&](const Deterministic& d) {
            const double mean = lambda * d.d;
            return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
          },
          [&](const Erlang& e) {
            // Negative binomial: C(k+n-1, k) p^n (1-p)^k with p = mu/(lambda+mu).
            const double n = e.shape;
            return std::exp(std::lgamma(kd + n) - std::lgamma(kd + 1.0) - std::lgamma(n) +
                            n * std::log(e.rate / (lambda + e.rate)) +
                            kd * std::log(lambda / (lambda + e.rate)));
          },
          [&](const HyperExp2& h) {
            return h.p * std::exp(log_geometric(lambda, h.mu1, k)) +
                   (1.0 - h.p) * std::exp(log_geometric(lambda, h.mu2, k));
          },
      },
      sc.service().variant());
}

double arrivals_pgf(const Scenario& sc, double z) {
  require_unit_interval(z, "arrivals_pgf");
  return lst(sc.service(), sc.lambda() * (1.0 - z));
}

double orbit_integrand(const Scenario& sc, double u) {
  require_unit_interval(u, "orbit_integrand");
  const auto m = moments(sc.service());
  const double rho = sc.lambda() * m.beta1;
  const double h = 1.0 - u;
  if (h < kSeriesRadius) {
    // G(u) = rho/(1-rho) - (lambda^2 beta2 / 2) (1-u) / (1-rho)^2 + O((1-u)^2)
    const double c = 0.5 * sc.lambda() * sc.lambda() * m.beta2;
    return rho / (1.0 - rho) - c * h / ((1.0 - rho) * (1.0 - rho));
  }
  const double one_minus_a = lst_complement(sc.service(), sc.lambda() * h);
  return one_minus_a / (h - one_minus_a);
}

double orbit_exponent(const Scenario& sc, double z) {
  require_unit_interval(z, "orbit_exponent");
  require_stable(sc);
  if (z == 1.0) return 0.0;
  const auto q = detail::integrate_gk15([&sc](double u) { return orbit_integrand(sc, u); }, z, 1.0,
                                        kQuadratureTolerance, kQuadratureMaxPanels);
  if (!q.converged || !std::isfinite(q.value)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "orbit integral did not reach tolerance 1e-10 (estimated error %.3g)",
                  q.error);
    throw Error(ErrorCode::NonConvergence, buf);
  }
  const double integral = q.value;
  // The integral runs from 1 down to z.
  return -(sc.lambda() / sc.theta()) * integral;
}

double evaluate_pgf(const Scenario& sc, double z) {
  require_unit_interval(z, "evaluate_pgf");
  require_stable(sc);
  if (z == 1.0) return 1.0;
  const double rho = traffic_intensity(sc);
  const double h = 1.0 - z;
  const double s = sc.lambda() * h;
  const double a = lst(sc.service(), s);
  // A(z) - z rewritten as (1 - z) - (1 - A(z)) to keep precision near z = 1.
  const double denom = h - lst_complement(sc.service(), s);
  return (1.0 - rho) * a * h / denom * std::exp(orbit_exponent(sc, z));
}

double mean_wait(const Scenario& sc) {
  require_stable(sc);
  const auto m = moments(sc.service());
  const double lambda = sc.lambda();
  const double rho = lambda * m.beta1;
  return m.beta1 + lambda * m.beta2 / (2.0 * (1.0 - rho)) + rho / (sc.theta() * (1.0 - rho));
}

// Defined through mean_wait so that lambda * mean_wait == mean_trucks bit for bit.
double mean_trucks(const Scenario& sc) { return sc.lambda() * mean_wait(sc); }

double pk_limit_mean(const Scenario& sc) {
  require_stable(sc);
  const auto m = moments(sc.service());
  const double lambda = sc.lambda();
  const double rho = lambda * m.beta1;
  return rho + lambda * lambda * m.beta2 / (2.0 * (1.0 - rho));
}

DerivativeCheck derivative_crosscheck(const Scenario& sc, double h) {
  require_stable(sc);
  if (!(h > 0.0 && h <= 0.5)) throw Error(ErrorCode::Domain, "derivative step must lie in (0, 0.5]");
  const double f1 = evaluate_pgf(sc, 1.0);
  const double coarse = (f1 - evaluate_pgf(sc, 1.0 - h)) / h;
  const double fine = (f1 - evaluate_pgf(sc, 1.0 - 0.5 * h)) / (0.5 * h);
  const double numeric = 2.0 * fine - coarse;
  const double closed = mean_trucks(sc);
  return {numeric, closed, std::fabs(numeric - closed)};
}

AnalyticReport analyze(const Scenario& sc) {
  AnalyticReport r;
  const auto s = check_stability(sc);
  r.rho = s.rho;
  r.stable = s.ok;
  if (!s.ok) return r;
  r.w_mean = mean_wait(sc);
  r.n_mean = mean_trucks(sc);
  r.pi0 = evaluate_pgf(sc, 0.0);
  r.pk_n_mean = pk_limit_mean(sc);
  return r;
}

}  // namespace rtgq
