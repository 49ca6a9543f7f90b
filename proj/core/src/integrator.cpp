#include "kerrcat/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "kerrcat/diagnostics.hpp"

namespace kerrcat {

namespace odeint = boost::numeric::odeint;

void integrate_observed(const OdeRhs& rhs, ComplexVector& y, std::span<const double> times,
                        const IntegratorOptions& options, const OdeObserver& observer) {
  if (times.empty()) return;
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      fail(Errc::invalid_argument, fmt::format("observation times must increase (index {})", k));
  if (times.size() == 1) {
    observer(times.front(), y);
    return;
  }

  using stepper_type = odeint::runge_kutta_fehlberg78<ComplexVector>;
  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, stepper_type());
  auto system = [&](const ComplexVector& state, ComplexVector& dydt, double t) { rhs(t, state, dydt); };

  auto check_finite = [&](double t) {
    for (const auto& v : y)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        fail(Errc::integrator_failure, fmt::format("non-finite state at t = {:.6g}", t));
  };

  const double span = times.back() - times.front();
  const double min_step = 1e-14 * std::max(1.0, std::abs(times.back()));
  double dt = std::min(1e-3 * span, times[1] - times[0]);
  double t = times.front();
  observer(t, y);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double target = times[k];
    int rejections = 0;
    while (t < target) {
      double trial = std::min(dt, target - t);
      const bool last = trial == target - t;
      if (stepper.try_step(system, y, t, trial) == odeint::success) {
        rejections = 0;
        if (last) t = target;  // land exactly on the observation point
        dt = std::max(dt, trial);
        check_finite(t);
      } else {
        if (++rejections > options.max_rejections || trial < min_step)
          fail(Errc::stiffness, fmt::format("step size underflow at t = {:.6g} (dt = {:.3e})", t, trial));
        dt = trial;
      }
    }
    observer(target, y);
  }
}

}  // namespace kerrcat
