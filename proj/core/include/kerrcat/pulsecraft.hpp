#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kerrcat/fockspace.hpp"

namespace kerrcat {

/// f^{(derivative_order)}(point) = value
struct BoundaryCondition {
  double point = 0.0;
  int derivative_order = 0;
  double value = 0.0;
};

/// Polynomial in t with ascending-power coefficients, defined on [0, t_f].
class PolynomialCurve {
 public:
  PolynomialCurve() = default;
  PolynomialCurve(std::vector<double> coefficients, double t_f);

  const std::vector<double>& coefficients() const { return coefficients_; }
  double t_f() const { return t_f_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }

  double operator()(double t) const { return derivative(t, 0); }
  double derivative(double t, int order = 1) const;

 private:
  std::vector<double> coefficients_;
  double t_f_ = 1.0;
};

/// Unique polynomial of the given degree meeting every condition. The system
/// is solved in the scaled variable s = t / t_f for conditioning.
/// Throws Errc::singular_system naming the conditions when they are not
/// independent.
PolynomialCurve solve_boundary_polynomial(std::span<const BoundaryCondition> conditions, int degree, double t_f);

/// gamma(0) = pi, gamma(t_f) = 0, gamma'(0) = gamma'(t_f) = 0, cubic.
PolynomialCurve mixing_angle_curve(double t_f);

/// beta = -pi/2 at 0, t_f/2, t_f with beta' = pi/(2 t_f) at both ends, quartic.
PolynomialCurve base_phase_curve(double t_f);

enum class ProtocolKind { base, optimal };

const char* to_string(ProtocolKind kind);

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::optimal;
  int n = 1;
  double t_f = 5.0;
  int samples = 2001;
  cplx alpha = 2.0;

  /// Throws Errc::invalid_argument on a violated precondition.
  void validate() const;
};

/// Sampled control schedule. Times in 1/K, energies in K.
struct PulseSchedule {
  std::vector<double> times;
  std::vector<double> gamma, gamma_dot;
  std::vector<double> beta, beta_dot;
  std::vector<double> omega_re, omega_im;
  std::vector<double> delta;
  std::vector<double> r_plus;
  std::vector<double> e_j, epsilon;
  /// true once e_j / epsilon hold a calibration
  bool calibrated = false;

  std::size_t size() const { return times.size(); }
  double t_f() const { return times.back(); }
};

/// Column order of the schedule CSV.
const std::vector<std::string>& schedule_csv_columns();

struct ControlPoint {
  double omega_re = 0.0;
  double omega_im = 0.0;
  double delta = 0.0;
};

/// Controls of the time-varying-phase protocol (R+ = (n/2)(2g - sin 2g))
/// for arbitrary (gamma, beta). With cot(beta) = 4 n sin^3(gamma) the
/// imaginary part vanishes; n = 0 gives the constant-phase family.
ControlPoint optimal_controls(double gamma, double gamma_dot, double beta, double beta_dot, double n);

PulseSchedule base_schedule(const ProtocolSpec& spec);
PulseSchedule optimal_schedule(const ProtocolSpec& spec);
/// Dispatches on spec.kind.
PulseSchedule design_schedule(const ProtocolSpec& spec);

/// Closed-form endpoint value of the base-protocol detuning. At both ends
/// gamma-dot -> 0 and cos(beta) -> 0 while cot(gamma) diverges; expanding
/// each factor to leading order gives Delta -> -3 beta'(endpoint).
double base_delta_endpoint_limit(const PolynomialCurve& gamma, const PolynomialCurve& beta, double t);

struct LrPhase {
  /// Quadrature of dR+/dt = (cos b Re W - sin b Im W) / (2 sin g), R+(0) = 0.
  std::vector<double> numeric;
  /// (n/2)(2 gamma - sin 2 gamma) shifted to zero at t = 0; optimal schedules only.
  std::optional<std::vector<double>> analytic;
  /// Richardson estimate of the quadrature error at t_f.
  double error_estimate = 0.0;
};

/// Throws Errc::quadrature when the error estimate exceeds 1e-8.
LrPhase lr_phase(const PulseSchedule& schedule, const ProtocolSpec& spec);

enum class CalibrationMode { approximate, exact_projection };

const char* to_string(CalibrationMode mode);

/// Fills e_j and epsilon. The full-space control term is
/// e_j(t) M(2 alpha) + epsilon(t)(a + a^dagger), with M the Laguerre operator.
///
/// exact_projection: e_j = -Delta / m_diag_gap, epsilon = Re W / (2 sx_element),
/// so the cat-subspace projection of the control equals the effective 2x2
/// Hamiltonian up to a multiple of the identity.
/// approximate: e_j = -Delta alpha sqrt(2 pi), epsilon = Re W / (2 (alpha* + alpha)).
PulseSchedule calibrate_physical(const PulseSchedule& schedule, const CatBasis& basis, CalibrationMode mode);

/// Cumulative integral of uniformly sampled values with fourth-order local
/// cubic interpolation; out[0] = 0.
std::vector<double> cumulative_integral(std::span<const double> values, double step);

}  // namespace kerrcat
