#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature used as an independent test
// oracle for density normalizations and moments.  Kept in test code so the
// library under test never depends on it.

#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace testsupport {

namespace gk {
// Kronrod-15 nodes and weights on [-1, 1]; Gauss-7 weights on the odd nodes.
inline constexpr double xk[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double wk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double wg[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};
}  // namespace gk

struct Interval {
  double a, b, value, error;
};

inline Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + h * gk::xk[i]);
    kron += gk::wk[i] * v;
    if (i % 2 == 1) gauss += gk::wg[i / 2] * v;
  }
  Interval r{a, b, kron * h, 0.0};
  r.error = std::abs((kron - gauss) * h);
  return r;
}

/// Globally adaptive bisection: repeatedly split the interval carrying the
/// largest error estimate until the summed estimate drops below abs_tol (or
/// an interval budget is hit, which still returns the best value found).
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double abs_tol = 1e-10,
                        std::size_t max_intervals = 20000) {
  auto cmp = [](const Interval& x, const Interval& y) { return x.error < y.error; };
  std::priority_queue<Interval, std::vector<Interval>, decltype(cmp)> q(cmp);
  q.push(gk15(f, a, b));
  double value = q.top().value;
  double error = q.top().error;
  while (error > abs_tol && q.size() < max_intervals) {
    const Interval worst = q.top();
    q.pop();
    if (worst.b - worst.a < 1e-300) {  // cannot refine further
      q.push(Interval{worst.a, worst.b, worst.value, 0.0});
      error -= worst.error;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Interval left = gk15(f, worst.a, mid);
    const Interval right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    q.push(left);
    q.push(right);
  }
  return value;
}

/// Integral over (0, inf) via the split [0,1] + inverted tail u = 1/t.
inline double integrate_zero_to_inf(const std::function<double(double)>& f,
                                    double abs_tol = 1e-10) {
  const double head = integrate(f, 0.0, 1.0, abs_tol / 2);
  const double tail = integrate(
      [&](double t) {
        const double u = 1.0 / t;
        return f(u) * u * u;
      },
      0.0, 1.0, abs_tol / 2);
  return head + tail;
}

/// Integral over the whole line, splitting at zero (for even-singularity
/// integrands like the horseshoe density).
inline double integrate_real_line_split(const std::function<double(double)>& f,
                                        double abs_tol = 1e-10) {
  return integrate_zero_to_inf([&](double u) { return f(u); }, abs_tol / 2) +
         integrate_zero_to_inf([&](double u) { return f(-u); }, abs_tol / 2);
}

}  // namespace testsupport
