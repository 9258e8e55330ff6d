#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace reslab::quad {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Nodes and weights of the 5-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 5> kGauss5Nodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
inline constexpr std::array<double, 5> kGauss5Weights = {
    0.2369268850561890875142640, 0.4786286704993664680412915,
    0.5688888888888888888888889, 0.4786286704993664680412915,
    0.2369268850561890875142640};

// Integral of f over the oriented interval [lo, hi] with one 5-point panel.
template <class F>
double gauss5(F&& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double acc = 0.0;
  for (std::size_t j = 0; j < kGauss5Nodes.size(); ++j) {
    acc += kGauss5Weights[j] * f(mid + half * kGauss5Nodes[j]);
  }
  return half * acc;
}

// Composite 5-point rule on `panels` equal panels.
template <class F>
double composite_gauss5(F&& f, double lo, double hi, std::size_t panels) {
  const double width = (hi - lo) / static_cast<double>(panels);
  CompensatedSum sum;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = lo + width * static_cast<double>(k);
    const double b = (k + 1 == panels) ? hi : a + width;
    sum.add(gauss5(f, a, b));
  }
  return sum.value();
}

struct AdaptiveResult {
  double value;
  std::size_t panels;
  bool converged;
};

// Doubles the panel count until two successive composite estimates agree to
// rel_tol (relative, with an absolute floor of rel_tol * scale_floor).
template <class F>
AdaptiveResult adaptive_gauss5(F&& f, double lo, double hi, double rel_tol,
                               std::size_t initial_panels = 4,
                               std::size_t max_panels = std::size_t{1} << 22,
                               double scale_floor = 1e-300) {
  std::size_t panels = initial_panels == 0 ? 1 : initial_panels;
  double previous = composite_gauss5(f, lo, hi, panels);
  while (panels < max_panels) {
    panels *= 2;
    const double current = composite_gauss5(f, lo, hi, panels);
    const double scale = std::max(std::abs(current), scale_floor);
    if (std::abs(current - previous) <= rel_tol * scale) {
      return {current, panels, true};
    }
    previous = current;
  }
  return {previous, panels, false};
}

}  // namespace reslab::quad
