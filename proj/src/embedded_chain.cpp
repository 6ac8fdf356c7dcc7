#include "rtgq/embedded_chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtgq/error.hpp"

namespace rtgq {

namespace {

constexpr std::size_t kAutoStart = 64;
constexpr double kAutoTailMass = 1e-12;
constexpr double kAutoLastState = 1e-10;
constexpr double kSuspectLastState = 1e-8;
constexpr double kRescaleAbove = 1e200;

}  // namespace

TransitionMatrix::TransitionMatrix(const Scenario& sc, std::size_t truncation)
    : k_max_(truncation), lambda_(sc.lambda()), theta_(sc.theta()) {
  q_.resize(k_max_ + 2);
  for (std::size_t n = 0; n < q_.size(); ++n) {
    q_[n] = arrivals_per_service_pmf(sc, static_cast<long>(n));
  }
  suffix_.assign(q_.size() + 1, 0.0);
  for (std::size_t n = q_.size(); n-- > 0;) suffix_[n] = suffix_[n + 1] + q_[n];

  double head = 0.0;
  for (std::size_t n = 0; n <= k_max_; ++n) head += q_[n];
  tail_mass_ = std::max(0.0, 1.0 - head);

  row_sum_.resize(k_max_ + 1);
  for (std::size_t k = 0; k <= k_max_; ++k) {
    const double retrial = static_cast<double>(k) * theta_;
    const double w_primary = lambda_ / (lambda_ + retrial);
    const double w_orbit = retrial / (lambda_ + retrial);
    const long span = static_cast<long>(k_max_ - k);
    // Columns max(0, k-1)..K cover offsets j-k in [-1, K-k].
    row_sum_[k] = w_primary * pmf_range(0, span) + w_orbit * pmf_range(0, span + 1);
  }
}

double TransitionMatrix::pmf_range(long from, long to) const {
  from = std::max(from, 0L);
  if (to < from) return 0.0;
  return suffix_[static_cast<std::size_t>(from)] - suffix_[static_cast<std::size_t>(to) + 1];
}

double TransitionMatrix::raw(std::size_t k, std::size_t j) const {
  if (k > k_max_ || j > k_max_) throw Error(ErrorCode::Domain, "state outside truncation");
  const long offset = static_cast<long>(j) - static_cast<long>(k);
  if (offset < -1) return 0.0;
  const double retrial = static_cast<double>(k) * theta_;
  return arrival_pmf(offset) * (lambda_ / (lambda_ + retrial)) +
         arrival_pmf(offset + 1) * (retrial / (lambda_ + retrial));
}

std::vector<double> TransitionMatrix::row(std::size_t k) const {
  std::vector<double> out(states(), 0.0);
  for (std::size_t j = (k == 0 ? 0 : k - 1); j <= k_max_; ++j) out[j] = (*this)(k, j);
  return out;
}

double TransitionMatrix::upward_mass(std::size_t k, std::size_t j) const {
  const double retrial = static_cast<double>(k) * theta_;
  const long lo = static_cast<long>(j) + 1 - static_cast<long>(k);
  const long hi = static_cast<long>(k_max_) - static_cast<long>(k);
  const double mass = (lambda_ / (lambda_ + retrial)) * pmf_range(lo, hi) +
                      (retrial / (lambda_ + retrial)) * pmf_range(lo + 1, hi + 1);
  return mass / row_sum_[k];
}

double transition_prob(const Scenario& sc, long k, long j) {
  if (k < 0 || j < 0) throw Error(ErrorCode::Domain, "states must be non-negative");
  if (j < k - 1) return 0.0;
  const double retrial = static_cast<double>(k) * sc.theta();
  const double lambda = sc.lambda();
  return arrivals_per_service_pmf(sc, j - k) * (lambda / (lambda + retrial)) +
         arrivals_per_service_pmf(sc, j - k + 1) * (retrial / (lambda + retrial));
}

TransitionMatrix build_matrix(const Scenario& sc, std::size_t truncation) {
  require_stable(sc);
  if (truncation < 1) throw Error(ErrorCode::InvalidArgument, "truncation must be at least 1");
  if (truncation > kMaxTruncation) {
    throw Error(ErrorCode::Budget, "truncation " + std::to_string(truncation) + " exceeds 2^20");
  }
  return TransitionMatrix(sc, truncation);
}

double max_residual(const TransitionMatrix& matrix, const std::vector<double>& pi) {
  const std::size_t n = matrix.states();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double flow = 0.0;
    const std::size_t last = std::min(j + 1, n - 1);
    for (std::size_t k = 0; k <= last; ++k) flow += pi[k] * matrix(k, j);
    worst = std::max(worst, std::fabs(flow - pi[j]));
  }
  return worst;
}

namespace {

void normalize(std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  for (double& x : v) x /= total;
}

std::vector<double> power_sweep(const TransitionMatrix& matrix, const std::vector<double>& pi) {
  const std::size_t n = matrix.states();
  std::vector<double> next(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (pi[k] == 0.0) continue;
    for (std::size_t j = (k == 0 ? 0 : k - 1); j < n; ++j) next[j] += pi[k] * matrix(k, j);
  }
  normalize(next);
  return next;
}

}  // namespace

StationaryDistribution stationary(const TransitionMatrix& matrix) {
  const std::size_t n = matrix.states();
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double up = 0.0;
    for (std::size_t k = 0; k <= j; ++k) {
      if (pi[k] != 0.0) up += pi[k] * matrix.upward_mass(k, j);
    }
    pi[j + 1] = up / matrix(j + 1, j);
    if (pi[j + 1] > kRescaleAbove) {
      for (std::size_t k = 0; k <= j + 1; ++k) pi[k] /= kRescaleAbove;
    }
  }
  normalize(pi);

  double residual = max_residual(matrix, pi);
  for (std::size_t sweep = 0; residual > kStationaryResidual; ++sweep) {
    if (sweep == kMaxSweeps) {
      throw Error(ErrorCode::NonConvergence,
                  "stationary solve residual " + std::to_string(residual) + " after " +
                      std::to_string(kMaxSweeps) + " sweeps");
    }
    pi = power_sweep(matrix, pi);
    residual = max_residual(matrix, pi);
  }
  return {std::move(pi), residual};
}

AutoChain solve_auto(const Scenario& sc) {
  require_stable(sc);
  for (std::size_t k = kAutoStart; k <= kMaxTruncation; k *= 2) {
    TransitionMatrix matrix(sc, k);
    if (!(matrix.tail_mass() < kAutoTailMass)) continue;
    auto dist = stationary(matrix);
    if (dist.pi.back() < kAutoLastState) return {std::move(matrix), std::move(dist)};
  }
  throw Error(ErrorCode::Budget, "automatic truncation would exceed 2^20 states");
}

ChainMean chain_mean(const StationaryDistribution& pi) {
  double mean = 0.0;
  for (std::size_t k = 1; k < pi.pi.size(); ++k) mean += static_cast<double>(k) * pi.pi[k];
  const bool suspect = !pi.pi.empty() && pi.pi.size() > 1 && pi.pi.back() > kSuspectLastState;
  return {mean, suspect};
}

}  // namespace rtgq
