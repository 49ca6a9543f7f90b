#include "kerrcat/interpolation.hpp"

#include <algorithm>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <fmt/format.h>

#include "kerrcat/diagnostics.hpp"

namespace kerrcat {

struct UniformCubicSpline::Impl {
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
  double constant = 0.0;
  bool is_constant = false;
};

UniformCubicSpline::UniformCubicSpline(std::span<const double> samples, double t0, double step) {
  if (samples.size() < 2 || !(step > 0.0))
    fail(Errc::invalid_argument, fmt::format("spline needs >= 2 samples and positive step (got {}, {})",
                                             samples.size(), step));
  auto impl = std::make_shared<Impl>();
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (*lo == *hi) {
    impl->is_constant = true;
    impl->constant = *lo;
  } else {
    impl->spline = boost::math::interpolators::cardinal_cubic_b_spline<double>(samples.data(), samples.size(), t0, step);
  }
  impl_ = std::move(impl);
  t0_ = t0;
  t1_ = t0 + step * static_cast<double>(samples.size() - 1);
}

double UniformCubicSpline::operator()(double t) const {
  if (!impl_) fail(Errc::invalid_argument, "evaluating an empty spline");
  if (impl_->is_constant) return impl_->constant;
  return impl_->spline(std::clamp(t, t0_, t1_));
}

}  // namespace kerrcat
