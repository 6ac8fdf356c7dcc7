#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

namespace rtgq::detail {

struct QuadratureResult {
  double value;
  double error;  // sum of |K15 - G7| over the final partition
  bool converged;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: repeatedly bisects the
// panel with the largest |K15 - G7| until the summed estimate is below
// abs_tol or max_panels is reached.
template <class F>
QuadratureResult integrate_gk15(F&& f, double a, double b, double abs_tol, std::size_t max_panels) {
  static constexpr std::array<double, 8> xk{
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk{
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg{
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };

  auto rule = [&f](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double kronrod = wk[7] * fc;
    double gauss = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
      const double dx = h * xk[i];
      const double sum = f(c - dx) + f(c + dx);
      kronrod += wk[i] * sum;
      if (i % 2 == 1) gauss += wg[i / 2] * sum;
    }
    return Panel{lo, hi, kronrod * h, std::fabs((kronrod - gauss) * h)};
  };

  std::priority_queue<Panel> panels;
  panels.push(rule(a, b));
  double value = panels.top().value;
  double error = panels.top().error;
  while (error > abs_tol && panels.size() < max_panels) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = rule(worst.a, mid);
    const Panel right = rule(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the drift from incremental updates.
  value = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  return {value, error, error <= abs_tol};
}

}  // namespace rtgq::detail
