#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "rtgq/error.hpp"
#include "rtgq/simulator.hpp"

namespace rtgq {

Estimate estimate_with_ci(std::span<const double> batch_values, double confidence) {
  const std::size_t n = batch_values.size();
  if (n < 2) throw Error(ErrorCode::InsufficientData, "confidence interval needs at least 2 batches");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::Domain, "confidence must lie in (0, 1)");
  }
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t t(static_cast<double>(n - 1));
  const double critical = boost::math::quantile(t, 0.5 + 0.5 * confidence);
  return {mean, critical * sd / std::sqrt(static_cast<double>(n))};
}

}  // namespace rtgq
