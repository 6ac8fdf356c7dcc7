#pragma once

#include <cstddef>
#include <vector>

#include "rtgq/analytics.hpp"

namespace rtgq {

/// Largest truncation level accepted by build_matrix.
inline constexpr std::size_t kMaxTruncation = std::size_t{1} << 20;

/// One-step kernel of the orbit size seen just after each service completion,
/// truncated to states 0..K with rows renormalized.
///
/// Row k only depends on k through the primary/retrial split
/// lambda/(lambda+k theta) vs k theta/(lambda+k theta) and on the offset j-k,
/// so the matrix is held as the arrival pmf q_0..q_{K+1} plus per-row factors
/// rather than as a dense (K+1)^2 array.
class TransitionMatrix {
 public:
  TransitionMatrix(const Scenario& sc, std::size_t truncation);

  std::size_t truncation() const noexcept { return k_max_; }
  std::size_t states() const noexcept { return k_max_ + 1; }

  /// P(no. of arrivals during one service > K): the probability the
  /// untruncated kernel leaves 0..K from the empty orbit.
  double tail_mass() const noexcept { return tail_mass_; }

  /// Pre-renormalization sum of row k over columns 0..K.
  double raw_row_sum(std::size_t k) const { return row_sum_.at(k); }

  /// Untruncated kernel entry.
  double raw(std::size_t k, std::size_t j) const;

  /// Renormalized entry; zero whenever j + 1 < k.
  double operator()(std::size_t k, std::size_t j) const { return raw(k, j) / row_sum_[k]; }

  std::vector<double> row(std::size_t k) const;

  /// Renormalized mass row k sends to columns j+1..K, for k <= j.
  double upward_mass(std::size_t k, std::size_t j) const;

 private:
  double arrival_pmf(long n) const { return n < 0 ? 0.0 : q_[static_cast<std::size_t>(n)]; }
  // Sum of q_n for n in [from, to]; both inside 0..K+1.
  double pmf_range(long from, long to) const;

  std::size_t k_max_;
  double lambda_;
  double theta_;
  std::vector<double> q_;       // q_0..q_{K+1}
  std::vector<double> suffix_;  // suffix_[n] = q_n + ... + q_{K+1}
  std::vector<double> row_sum_;
  double tail_mass_;
};

/// Probability of moving from orbit size k to orbit size j between two
/// consecutive departures: q_{j-k} lambda/(lambda+k theta) + q_{j-k+1} k theta/(lambda+k theta).
double transition_prob(const Scenario& sc, long k, long j);

/// Builds the kernel for an explicit truncation K (>= 1). Throws UnstableError
/// and Error(Budget) when K exceeds kMaxTruncation.
TransitionMatrix build_matrix(const Scenario& sc, std::size_t truncation);

struct StationaryDistribution {
  std::vector<double> pi;
  double residual = 0.0;  // max_j |(pi P)_j - pi_j|

  std::size_t truncation() const noexcept { return pi.empty() ? 0 : pi.size() - 1; }
};

inline constexpr double kStationaryResidual = 1e-12;
inline constexpr std::size_t kMaxSweeps = 1'000'000;

/// Solves pi = pi P on the truncated chain. The kernel never drops by more
/// than one level, so the balance across each cut {0..j} | {j+1..K} gives pi
/// by a forward recursion of positive terms; power sweeps polish the result
/// if the residual is above kStationaryResidual.
StationaryDistribution stationary(const TransitionMatrix& matrix);

struct AutoChain {
  TransitionMatrix matrix;
  StationaryDistribution distribution;
};

/// Doubles K from 64 until tail_mass < 1e-12 and pi_K < 1e-10.
AutoChain solve_auto(const Scenario& sc);

struct ChainMean {
  double mean;
  bool truncation_suspect;  // pi_K > 1e-8
};

ChainMean chain_mean(const StationaryDistribution& pi);

double max_residual(const TransitionMatrix& matrix, const std::vector<double>& pi);

}  // namespace rtgq
