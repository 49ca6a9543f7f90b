#pragma once

#include <memory>
#include <span>

namespace kerrcat {

/// C2 cubic B-spline through uniformly spaced samples. Copies share the
/// immutable fitted coefficients. Evaluation outside [t0, t0 + (n-1) h] is
/// clamped to the nearest endpoint.
class UniformCubicSpline {
 public:
  UniformCubicSpline() = default;
  UniformCubicSpline(std::span<const double> samples, double t0, double step);

  double operator()(double t) const;
  double first() const { return t0_; }
  double last() const { return t1_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  double t0_ = 0.0;
  double t1_ = 0.0;
};

}  // namespace kerrcat
