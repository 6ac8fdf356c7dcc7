#include <cmath>
#include <doctest.h>
#include <vector>

#include "rtgq/embedded_chain.hpp"
#include "rtgq/error.hpp"

using namespace rtgq;

namespace {

const auto kExp = ServiceDistribution::exponential(1.0);
const auto kDet = ServiceDistribution::deterministic(1.0);
const auto kErl = ServiceDistribution::erlang(2, 2.0);
const auto kHyp = ServiceDistribution::hyperexp2(0.5, 0.5, 2.0);

Scenario at_rho(double rho, double theta, const ServiceDistribution& d) {
  return Scenario(rho / moments(d).beta1, theta, d);
}

// Dense Gaussian elimination on (P^T - I) with the last equation replaced by
// sum(pi) = 1. Test-only reference for small K.
std::vector<double> dense_stationary(const TransitionMatrix& m) {
  const std::size_t n = m.states();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) a[j][k] = m(k, j) - (j == k ? 1.0 : 0.0);
  }
  for (std::size_t k = 0; k < n; ++k) a[n - 1][k] = 1.0;
  a[n - 1][n] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[pivot][c])) pivot = r;
    }
    std::swap(a[c], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
  return pi;
}

}  // namespace

TEST_CASE("transition probabilities") {
  const Scenario sc(0.5, 1.4, kExp);
  for (long j = 0; j < 30; ++j) CHECK(transition_prob(sc, 0, j) == arrivals_per_service_pmf(sc, j));
  CHECK(transition_prob(sc, 1, 1) == doctest::Approx(0.339181).epsilon(1e-6));
  CHECK(transition_prob(sc, 1, 1) ==
        doctest::Approx((2.0 / 3.0) * (0.5 / 1.9) + (2.0 / 9.0) * (1.4 / 1.9)).epsilon(1e-14));
  CHECK(transition_prob(sc, 3, 1) == 0.0);
}

TEST_CASE("transition probability from orbit 1 against a one-cycle Monte Carlo") {
  // Orbit starts at 1: the next service goes to a primary truck with
  // probability lambda/(lambda+theta); arrivals during service join the orbit.
  const double lambda = 0.5, theta = 1.4;
  RandomSource rng(31337);
  constexpr int n = 1'000'000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const bool orbit_served = rng.exponential(theta) < rng.exponential(lambda);
    const double service = rng.exponential(1.0);
    int arrivals = 0;
    for (double t = rng.exponential(lambda); t <= service; t += rng.exponential(lambda)) ++arrivals;
    hits += (1 - (orbit_served ? 1 : 0) + arrivals) == 1;
  }
  const double p = transition_prob(Scenario(lambda, theta, kExp), 1, 1);
  CHECK(std::fabs(static_cast<double>(hits) / n - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("kernel rows are stochastic and skip-free to the left") {
  for (const auto& d : {kExp, kDet, kErl, kHyp}) {
    const Scenario sc = at_rho(0.7, 1.4, d);
    CAPTURE(d.to_string());
    for (long k = 0; k <= 20; ++k) {
      double total = 0.0;
      for (long j = std::max(0L, k - 1);; ++j) {
        const double p = transition_prob(sc, k, j);
        total += p;
        if (j > k + 5 && p < 1e-14 && 1.0 - total < 1e-13) break;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (long k = 2; k <= 50; ++k) {
      for (long j = 0; j < k - 1; ++j) CHECK(transition_prob(sc, k, j) == 0.0);
    }
  }
}

TEST_CASE("build_matrix") {
  const Scenario sc(0.5, 1.4, kExp);
  const auto m200 = build_matrix(sc, 200);
  CHECK(m200.tail_mass() < 1e-12);
  CHECK(m200.raw_row_sum(0) >= 1.0 - m200.tail_mass() - 1e-15);

  for (const auto& d : {kExp, kDet, kErl, kHyp}) {
    const auto m = build_matrix(at_rho(0.6, 1.4, d), 64);
    for (std::size_t k = 0; k < m.states(); ++k) {
      double total = 0.0;
      for (double p : m.row(k)) total += p;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
      for (std::size_t j = 0; j + 1 < k; ++j) CHECK(m(k, j) == 0.0);
    }
    for (std::size_t j = 0; j < m.states(); ++j) CHECK(m.raw(0, j) == transition_prob(at_rho(0.6, 1.4, d), 0, static_cast<long>(j)));
  }

  CHECK_THROWS_AS(build_matrix(Scenario(1.0, 1.4, kExp), 64), UnstableError);
  try {
    build_matrix(sc, kMaxTruncation + 1);
    FAIL("budget not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Budget);
  }
}

TEST_CASE("stationary solve matches a dense reference") {
  for (const auto& d : {kExp, kDet, kErl, kHyp}) {
    CAPTURE(d.to_string());
    const auto m = build_matrix(at_rho(0.5, 1.4, d), 60);
    const auto dist = stationary(m);
    const auto ref = dense_stationary(m);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::fabs(dist.pi[k] - ref[k]) < 1e-12);
    CHECK(dist.residual <= kStationaryResidual);
  }
}

TEST_CASE("stationary distribution") {
  const Scenario sc(0.5, 1.4, kExp);
  const auto dist = stationary(build_matrix(sc, 200));
  double total = 0.0;
  for (double p : dist.pi) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dist.residual <= 1e-12);
  CHECK(std::fabs(dist.pi[0] - 0.390356) <= 1.5e-6);
  CHECK(std::fabs(dist.pi[0] - evaluate_pgf(sc, 0.0)) < 1e-6);

  // Retrials become instantaneous: departure-epoch law of M/M/1, pi_0 = 1 - rho.
  const auto classic = solve_auto(Scenario(0.5, 1e6, kExp));
  CHECK(classic.distribution.pi[0] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("chain mean") {
  auto solved = solve_auto(Scenario(0.5, 1.4, kExp));
  CHECK(std::fabs(chain_mean(solved.distribution).mean - 1.357143) < 1e-6);
  CHECK_FALSE(chain_mean(solved.distribution).truncation_suspect);
  solved = solve_auto(Scenario(0.5, 1.4, kDet));
  CHECK(std::fabs(chain_mean(solved.distribution).mean - 1.107143) < 1e-6);

  StationaryDistribution degenerate{{1.0}, 0.0};
  CHECK(chain_mean(degenerate).mean == 0.0);

  // A short truncation in heavy traffic leaves visible mass at K.
  const auto coarse = stationary(build_matrix(Scenario(0.9, 1.4, kExp), 64));
  CHECK(chain_mean(coarse).truncation_suspect);
}

TEST_CASE("generating function agreement") {
  for (double rho : {0.3, 0.5, 0.7}) {
    const Scenario sc = at_rho(rho, 1.4, kExp);
    const auto solved = solve_auto(sc);
    for (double z : {0.0, 0.3, 0.7}) {
      double series = 0.0, zk = 1.0;
      for (double p : solved.distribution.pi) {
        series += p * zk;
        zk *= z;
      }
      CHECK(std::fabs(series - evaluate_pgf(sc, z)) <= 1e-6);
    }
  }
}

TEST_CASE("mean agreement under automatic truncation") {
  for (const auto& d : {kExp, kDet, kErl, kHyp}) {
    for (double rho : {0.1, 0.5, 0.8}) {
      for (double theta : {0.3, 1.4, 20.0}) {
        const Scenario sc = at_rho(rho, theta, d);
        CAPTURE(d.to_string());
        CAPTURE(rho);
        CAPTURE(theta);
        const auto solved = solve_auto(sc);
        const double analytic = mean_trucks(sc);
        CHECK(std::fabs(chain_mean(solved.distribution).mean - analytic) <= 1e-6 * (1.0 + analytic));
        CHECK(solved.matrix.tail_mass() < 1e-12);
        CHECK(solved.distribution.pi.back() < 1e-10);
      }
    }
  }
}

TEST_CASE("automatic truncation in heavy traffic") {
  const auto solved = solve_auto(Scenario(0.9, 1.4, kExp));
  // Doubling from 64: 64 and 128 leave pi_K above 1e-10, 256 is the first to pass.
  CHECK(solved.matrix.truncation() >= 256);
  CHECK(solved.matrix.tail_mass() < 1e-12);
  CHECK(solved.distribution.pi.back() < 1e-10);
  CHECK(stationary(build_matrix(Scenario(0.9, 1.4, kExp), 128)).pi.back() >= 1e-10);
  CHECK(std::fabs(chain_mean(solved.distribution).mean - 14.785714285714) <= 1e-6 * 15.8);
}
