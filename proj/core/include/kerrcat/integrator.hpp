#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace kerrcat {

using ComplexVector = std::vector<std::complex<double>>;

/// dy/dt = f(t, y), written into dydt (already sized like y).
using OdeRhs = std::function<void(double t, const ComplexVector& y, ComplexVector& dydt)>;
using OdeObserver = std::function<void(double t, const ComplexVector& y)>;

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// consecutive rejected steps before declaring stiffness
  int max_rejections = 500;
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration of y from times.front() to
/// times.back(), landing exactly on every requested time and calling the
/// observer there (including times.front()). times must be increasing.
///
/// Throws Errc::stiffness when the step size collapses, and
/// Errc::integrator_failure when the state becomes non-finite.
void integrate_observed(const OdeRhs& rhs, ComplexVector& y, std::span<const double> times,
                        const IntegratorOptions& options, const OdeObserver& observer);

}  // namespace kerrcat
