#pragma once

#include <cmath>
#include <limits>

namespace rhlab {

// Neumaier (improved Kahan) compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Quadrature {
  double value = 0.0;
  double error_estimate = 0.0;
};

namespace detail {

template <typename F>
Quadrature simpson_segment(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Stop on the Richardson criterion, or once rounding dominates the difference.
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= noise) {
    return {left + right + delta / 15.0, std::fabs(delta) / 15.0};
  }
  const auto l = simpson_segment(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
  const auto r = simpson_segment(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  return {l.value + r.value, l.error_estimate + r.error_estimate};
}

}  // namespace detail

// Adaptive Simpson on [a, b]. Each accepted panel contributes |S2 - S1| / 15
// to error_estimate, and panels are split until that is within their share
// of tol, so error_estimate <= tol unless max_depth or rounding stops the
// refinement first.
template <typename F>
Quadrature adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (a == b) return {0.0, 0.0};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_segment(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace rhlab
