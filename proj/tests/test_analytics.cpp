#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <doctest.h>
#include <vector>

#include "rtgq/analytics.hpp"
#include "rtgq/error.hpp"

using namespace rtgq;

namespace {

const auto kExp = ServiceDistribution::exponential(1.0);
const auto kDet = ServiceDistribution::deterministic(1.0);
const auto kErl = ServiceDistribution::erlang(2, 2.0);
const auto kHyp = ServiceDistribution::hyperexp2(0.5, 0.5, 2.0);

// Scenario with traffic intensity rho for the given law.
Scenario at_rho(double rho, double theta, const ServiceDistribution& d) {
  return Scenario(rho / moments(d).beta1, theta, d);
}

std::vector<ServiceDistribution> laws() { return {kExp, kDet, kErl, kHyp}; }

}  // namespace

TEST_CASE("scenario validation names the field") {
  try {
    Scenario(-1.0, 1.4, kExp);
    FAIL("accepted negative lambda");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("lambda") != std::string::npos);
  }
  try {
    Scenario(0.5, 0.0, kExp);
    FAIL("accepted zero theta");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
}

TEST_CASE("traffic intensity and stability") {
  CHECK(traffic_intensity(Scenario(0.5, 1.4, kExp)) == 0.5);
  CHECK(traffic_intensity(Scenario(1.0, 1.4, kDet)) == 1.0);
  CHECK(traffic_intensity(Scenario(0.3, 1.4, kErl)) == doctest::Approx(0.3).epsilon(1e-15));

  CHECK(check_stability(Scenario(0.5, 1.4, kExp)).ok);
  auto s = check_stability(Scenario(1.2, 1.4, kExp));
  CHECK_FALSE(s.ok);
  CHECK(s.rho == doctest::Approx(1.2));
  s = check_stability(Scenario(1.0, 1.4, kExp));
  CHECK_FALSE(s.ok);
  CHECK(s.rho == 1.0);

  try {
    mean_trucks(Scenario(1.2, 1.4, kExp));
    FAIL("unstable scenario evaluated");
  } catch (const UnstableError& e) {
    CHECK(e.code() == ErrorCode::Unstable);
    CHECK(e.rho() == doctest::Approx(1.2));
  }
  CHECK_THROWS_AS(evaluate_pgf(Scenario(1.0, 1.4, kExp), 0.5), UnstableError);
  CHECK_THROWS_AS(orbit_exponent(Scenario(1.0, 1.4, kExp), 0.5), UnstableError);
  CHECK_THROWS_AS(mean_wait(Scenario(1.0, 1.4, kExp)), UnstableError);
  CHECK_THROWS_AS(pk_limit_mean(Scenario(1.0, 1.4, kExp)), UnstableError);
}

TEST_CASE("arrivals per service: closed form vs quadrature of the integrand") {
  const Scenario sc(0.5, 1.4, kExp);
  CHECK(arrivals_per_service_pmf(sc, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(arrivals_per_service_pmf(Scenario(0.5, 1.4, kDet), 1) ==
        doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));

  boost::math::quadrature::exp_sinh<double> integrator;
  for (const auto& d : {kExp, kErl, kHyp, ServiceDistribution::erlang(4, 1.3)}) {
    const Scenario s(0.7, 1.4, d);
    CAPTURE(d.to_string());
    for (long k : {0L, 1L, 2L, 5L, 12L}) {
      const double lam = s.lambda();
      const double numeric = integrator.integrate([&](double t) {
        return std::exp(k * std::log(lam * t) - lam * t - std::lgamma(k + 1.0)) * pdf(d, t);
      });
      CHECK(arrivals_per_service_pmf(s, k) == doctest::Approx(numeric).epsilon(1e-9));
    }
  }
}

TEST_CASE("deterministic service: Poisson pmf against a Monte Carlo count") {
  // Count rate-0.5 Poisson arrivals inside a unit window.
  RandomSource rng(2024);
  constexpr int n = 1'000'000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    double t = rng.exponential(0.5);
    int count = 0;
    while (t <= 1.0) {
      ++count;
      t += rng.exponential(0.5);
    }
    ones += count == 1;
  }
  const double p = arrivals_per_service_pmf(Scenario(0.5, 1.4, kDet), 1);
  CHECK(p == doctest::Approx(0.303265).epsilon(1e-6));
  CHECK(std::fabs(static_cast<double>(ones) / n - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("arrival pmf normalizes and reconstructs the generating function") {
  for (const auto& d : laws()) {
    const Scenario sc(0.6, 1.4, d);
    CAPTURE(d.to_string());
    double total = 0.0;
    long k = 0;
    for (; k < 100000; ++k) {
      const double q = arrivals_per_service_pmf(sc, k);
      total += q;
      if (1.0 - total < 1e-12 && q < 1e-14) break;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    for (double z : {0.25, 0.5, 0.75}) {
      double partial = 0.0, zk = 1.0;
      for (long i = 0; i <= k + 50; ++i, zk *= z) partial += arrivals_per_service_pmf(sc, i) * zk;
      CHECK(std::fabs(partial - arrivals_pgf(sc, z)) <= 1e-10);
    }
    CHECK(arrivals_pgf(sc, 1.0) == 1.0);
    CHECK(arrivals_pgf(sc, 0.0) == doctest::Approx(arrivals_per_service_pmf(sc, 0)).epsilon(1e-14));
  }
  CHECK(arrivals_pgf(Scenario(0.5, 1.4, kExp), 0.5) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(arrivals_pgf(Scenario(0.5, 1.4, kExp), 1.5), Error);
  CHECK_THROWS_AS(arrivals_pgf(Scenario(0.5, 1.4, kExp), -0.1), Error);
}

TEST_CASE("orbit integrand: removable point at u = 1") {
  const Scenario sc(0.5, 1.4, kExp);
  CHECK(orbit_integrand(sc, 1.0) == 1.0);
  // For exponential service with lambda = 0.5 the integrand reduces to 1/(2-u).
  for (int i = 0; i <= 100; ++i) {
    const double u = i / 100.0;
    CHECK(orbit_integrand(sc, u) == doctest::Approx(1.0 / (2.0 - u)).epsilon(1e-12));
  }
  for (double eps : {1e-4, 1e-5, 1e-6, 0.99e-7, 1.01e-7, 1e-9}) {
    CHECK(orbit_integrand(sc, 1.0 - eps) == doctest::Approx(1.0 / (1.0 + eps)).epsilon(1e-9));
  }
  // Other laws: the limit is rho/(1-rho) and both sides of the series switch agree.
  for (const auto& d : laws()) {
    const Scenario s = at_rho(0.6, 1.4, d);
    CAPTURE(d.to_string());
    CHECK(orbit_integrand(s, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
    const double inside = orbit_integrand(s, 1.0 - 0.999e-7);
    const double outside = orbit_integrand(s, 1.0 - 1.001e-7);
    CHECK(std::fabs(inside - outside) < 1e-7);
    CHECK(std::fabs(orbit_integrand(s, 1.0 - 1e-5) - 1.5) < 1e-3);
  }
}

TEST_CASE("orbit exponent") {
  const Scenario sc(0.5, 1.4, kExp);
  CHECK(orbit_exponent(sc, 1.0) == 0.0);
  CHECK(orbit_exponent(sc, 0.0) == doctest::Approx(-(0.5 / 1.4) * std::log(2.0)).epsilon(1e-11));
  CHECK(orbit_exponent(sc, 0.0) == doctest::Approx(-0.247553).epsilon(1e-6));
  for (double z : {0.1, 0.5, 0.9, 0.999}) {
    CHECK(orbit_exponent(sc, z) == doctest::Approx((0.5 / 1.4) * std::log(1.0 / (2.0 - z))).epsilon(1e-10));
  }
}

TEST_CASE("stationary generating function") {
  const Scenario sc(0.5, 1.4, kExp);
  CHECK(evaluate_pgf(sc, 1.0) == 1.0);
  const double f0 = 0.5 * std::exp(-(0.5 / 1.4) * std::log(2.0));
  CHECK(evaluate_pgf(sc, 0.0) == doctest::Approx(f0).epsilon(1e-10));
  // 0.3903546 is commonly quoted as 0.390356.
  CHECK(std::fabs(evaluate_pgf(sc, 0.0) - 0.390356) <= 1.5e-6);

  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = evaluate_pgf(sc, i / 100.0);
    CHECK(v > prev);
    prev = v;
  }
  for (const auto& d : laws()) {
    for (double rho : {0.2, 0.5, 0.8}) {
      const Scenario s = at_rho(rho, 0.9, d);
      const double v0 = evaluate_pgf(s, 0.0);
      CHECK(v0 == doctest::Approx((1.0 - rho) * std::exp(orbit_exponent(s, 0.0))).epsilon(1e-13));
      CHECK(v0 > 0.0);
      CHECK(v0 <= 1.0 - rho + 1e-15);
      CHECK(std::fabs(evaluate_pgf(s, 1.0 - 1e-9) - 1.0) < 1e-7);
    }
  }
  CHECK_THROWS_AS(evaluate_pgf(sc, 1.01), Error);
}

TEST_CASE("mean trucks and mean wait") {
  CHECK(mean_trucks(Scenario(0.5, 1.4, kExp)) == doctest::Approx(1.357143).epsilon(1e-6));
  CHECK(mean_trucks(Scenario(0.9, 1.4, kExp)) == doctest::Approx(14.785714).epsilon(1e-7));
  CHECK(mean_trucks(Scenario(0.5, 1.4, kDet)) == doctest::Approx(1.107143).epsilon(1e-6));
  CHECK(mean_wait(Scenario(0.5, 1.4, kExp)) == doctest::Approx(2.714286).epsilon(1e-6));
  CHECK(mean_wait(Scenario(0.9, 1.4, kExp)) == doctest::Approx(16.428571).epsilon(1e-7));

  RandomSource rng(11);
  const auto all = laws();
  for (int i = 0; i < 200; ++i) {
    const auto& d = all[rng.below(all.size())];
    const Scenario s = at_rho(0.01 + 0.98 * rng.uniform(), 0.05 + 5.0 * rng.uniform(), d);
    CHECK(s.lambda() * mean_wait(s) == mean_trucks(s));
    CHECK(mean_trucks(s) >= traffic_intensity(s));
    CHECK(mean_trucks(s) >= pk_limit_mean(s));
  }
}

TEST_CASE("mean trucks is monotone in lambda and theta") {
  for (const auto& d : laws()) {
    CAPTURE(d.to_string());
    double prev = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double v = mean_trucks(at_rho(0.045 * i, 1.4, d));
      CHECK(v > prev);
      prev = v;
    }
    prev = INFINITY;
    for (int i = 1; i <= 20; ++i) {
      const double v = mean_trucks(at_rho(0.5, 0.2 * i, d));
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("classic M/G/1 limit") {
  CHECK(pk_limit_mean(Scenario(0.5, 1.4, kExp)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pk_limit_mean(Scenario(0.5, 1.4, kDet)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(pk_limit_mean(Scenario(1e-9, 1.4, kHyp)) < 1e-8);
  for (const auto& d : laws()) {
    const Scenario s = at_rho(0.5, 1e6, d);
    CHECK(mean_trucks(s) == doctest::Approx(pk_limit_mean(s)).epsilon(1e-4));
  }
}

TEST_CASE("derivative cross-check at z = 1") {
  auto d = derivative_crosscheck(Scenario(0.5, 1.4, kExp));
  CHECK(d.closed_form == doctest::Approx(1.357143).epsilon(1e-6));
  CHECK(d.abs_gap < 1e-4 * d.closed_form);

  d = derivative_crosscheck(Scenario(0.3, 1.4, kErl));
  CHECK(d.abs_gap < 1e-4 * d.closed_form);

  // lambda = 0.8 with this law has rho = 1.0 exactly.
  CHECK_THROWS_AS(derivative_crosscheck(Scenario(0.8, 1.4, kHyp)), UnstableError);
  d = derivative_crosscheck(at_rho(0.8, 1.4, kHyp));
  CHECK(d.abs_gap < 1e-3 * d.closed_form);
}

TEST_CASE("analyze report") {
  auto r = analyze(Scenario(0.5, 1.4, kExp));
  CHECK(r.stable);
  CHECK(r.rho == 0.5);
  CHECK(r.n_mean == mean_trucks(Scenario(0.5, 1.4, kExp)));
  CHECK(r.pi0 > 0.0);
  CHECK(r.pi0 <= 1.0 - r.rho);
  CHECK(r.n_mean >= r.rho);
  r = analyze(Scenario(1.2, 1.4, kExp));
  CHECK_FALSE(r.stable);
  CHECK(r.rho == doctest::Approx(1.2));
}
