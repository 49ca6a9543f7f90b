#include "kerrcat/pulsecraft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <fmt/format.h>

#include "kerrcat/diagnostics.hpp"

namespace kerrcat {

namespace {

constexpr double kPi = std::numbers::pi;

// d^order/ds^order of s^power evaluated at s, as a coefficient multiplier.
double power_derivative(int power, int order, double s) {
  if (order > power) return 0.0;
  double factor = 1.0;
  for (int j = 0; j < order; ++j) factor *= power - j;
  return factor * std::pow(s, power - order);
}

std::string describe(const BoundaryCondition& c) {
  return fmt::format("f^({})({:.6g}) = {:.6g}", c.derivative_order, c.point, c.value);
}

std::vector<double> uniform_times(double t_f, int samples) {
  std::vector<double> t(samples);
  for (int k = 0; k < samples; ++k) t[k] = t_f * k / (samples - 1);
  t.back() = t_f;
  return t;
}

bool near_multiple_of_pi(double angle, double offset) {
  const double r = std::remainder(angle - offset, kPi);
  return std::abs(r) < 1e-12;
}

}  // namespace

PolynomialCurve::PolynomialCurve(std::vector<double> coefficients, double t_f)
    : coefficients_(std::move(coefficients)), t_f_(t_f) {
  if (coefficients_.empty()) fail(Errc::invalid_argument, "polynomial needs at least one coefficient");
}

double PolynomialCurve::derivative(double t, int order) const {
  double acc = 0.0;
  for (int i = degree(); i >= order; --i) {
    double factor = 1.0;
    for (int j = 0; j < order; ++j) factor *= i - j;
    acc = acc * t + factor * coefficients_[i];
  }
  return acc;
}

PolynomialCurve solve_boundary_polynomial(std::span<const BoundaryCondition> conditions, int degree, double t_f) {
  if (degree < 0) fail(Errc::invalid_argument, fmt::format("degree = {} must be non-negative", degree));
  if (!(t_f > 0.0)) fail(Errc::invalid_argument, fmt::format("t_f = {} must be positive", t_f));
  const int n = degree + 1;
  if (static_cast<int>(conditions.size()) != n)
    fail(Errc::invalid_argument,
         fmt::format("{} conditions supplied for degree {} (need {})", conditions.size(), degree, n));

  Eigen::MatrixXd system(n, n);
  Eigen::VectorXd rhs(n);
  for (int r = 0; r < n; ++r) {
    const auto& c = conditions[r];
    if (c.point < 0.0 || c.point > t_f)
      fail(Errc::invalid_argument, fmt::format("condition {} lies outside [0, {}]", describe(c), t_f));
    if (c.derivative_order < 0)
      fail(Errc::invalid_argument, fmt::format("condition {} has negative derivative order", describe(c)));
    const double s = c.point / t_f;
    for (int i = 0; i < n; ++i) system(r, i) = power_derivative(i, c.derivative_order, s);
    // d/dt = (1/t_f) d/ds
    rhs(r) = c.value * std::pow(t_f, c.derivative_order);
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-12);
  if (lu.rank() < n) {
    // Rows that add no rank relative to their predecessors are the conflicts.
    std::string conflicts;
    for (int r = 0, rank = 0; r < n; ++r) {
      Eigen::FullPivLU<Eigen::MatrixXd> partial(system.topRows(r + 1));
      partial.setThreshold(1e-12);
      if (partial.rank() == rank) {
        conflicts += (conflicts.empty() ? "" : "; ") + describe(conditions[r]);
      } else {
        rank = static_cast<int>(partial.rank());
      }
    }
    fail(Errc::singular_system, "boundary conditions are not independent: " + conflicts);
  }

  const Eigen::VectorXd scaled = lu.solve(rhs);
  std::vector<double> coeffs(n);
  for (int i = 0; i < n; ++i) coeffs[i] = scaled(i) / std::pow(t_f, i);
  PolynomialCurve curve(std::move(coeffs), t_f);

  for (const auto& c : conditions) {
    const double residual = std::abs(curve.derivative(c.point, c.derivative_order) - c.value);
    if (residual > 1e-10 * std::max(1.0, std::abs(c.value)))
      fail(Errc::internal_consistency, fmt::format("condition {} has residual {:.3e}", describe(c), residual));
  }
  return curve;
}

PolynomialCurve mixing_angle_curve(double t_f) {
  const BoundaryCondition conditions[] = {
      {0.0, 0, kPi},
      {t_f, 0, 0.0},
      {0.0, 1, 0.0},
      {t_f, 1, 0.0},
  };
  return solve_boundary_polynomial(conditions, 3, t_f);
}

PolynomialCurve base_phase_curve(double t_f) {
  const BoundaryCondition conditions[] = {
      {0.0, 0, -kPi / 2},
      {t_f / 2, 0, -kPi / 2},
      {t_f, 0, -kPi / 2},
      {0.0, 1, kPi / (2 * t_f)},
      {t_f, 1, kPi / (2 * t_f)},
  };
  return solve_boundary_polynomial(conditions, 4, t_f);
}

const char* to_string(ProtocolKind kind) { return kind == ProtocolKind::base ? "base" : "optimal"; }

const char* to_string(CalibrationMode mode) {
  return mode == CalibrationMode::approximate ? "approximate" : "exact-projection";
}

void ProtocolSpec::validate() const {
  if (!(t_f > 0.0) || !std::isfinite(t_f)) fail(Errc::invalid_argument, fmt::format("t_f = {} must be positive", t_f));
  if (samples < 200) fail(Errc::invalid_argument, fmt::format("samples = {} must be >= 200", samples));
  if (kind == ProtocolKind::optimal && n < 1)
    fail(Errc::invalid_argument, fmt::format("optimal protocol needs n >= 1, got {}", n));
  if (!(std::abs(alpha) > 0.0)) fail(Errc::invalid_argument, "alpha must be nonzero");
}

const std::vector<std::string>& schedule_csv_columns() {
  static const std::vector<std::string> columns = {"t",        "gamma",    "gamma_dot", "beta",
                                                   "beta_dot", "omega_re", "omega_im",  "delta",
                                                   "r_plus",   "e_j",      "epsilon"};
  return columns;
}

double base_delta_endpoint_limit(const PolynomialCurve& gamma, const PolynomialCurve& beta, double t) {
  const double g = gamma(t);
  const double b = beta(t);
  const double gd = gamma.derivative(t, 1);
  const double bd = beta.derivative(t, 1);
  if (!near_multiple_of_pi(g, 0.0)) {
    // No singularity: evaluate directly.
    return gd / std::sin(b) / std::tan(g) * std::cos(b) - bd;
  }
  const double gdd = gamma.derivative(t, 2);
  const double rate_scale = 1.0 / gamma.t_f();
  if (std::abs(gd) > 1e-12 * rate_scale || !near_multiple_of_pi(b, kPi / 2) || std::abs(gdd) < 1e-12)
    fail(Errc::endpoint_limit,
         fmt::format("detuning diverges at t = {:.6g} (gamma = {:.6g}, gamma' = {:.3e}, beta = {:.6g})", t, g, gd, b));
  // gamma' cot(gamma) -> 2/tau and cot(beta) -> -beta' tau, tau = t - endpoint.
  return -3.0 * bd;
}

namespace {

// Detuning from the base-protocol formula evaluated near (not at) an endpoint,
// with the offsets from the endpoint values computed by Taylor re-expansion so
// sin(gamma) is not lost to cancellation.
double base_delta_near(const PolynomialCurve& gamma, const PolynomialCurve& beta, double endpoint, double tau) {
  auto offset = [&](const PolynomialCurve& p) {
    double acc = 0.0, fact = 1.0, pw = 1.0;
    for (int k = 1; k <= p.degree(); ++k) {
      fact *= k;
      pw *= tau;
      acc += p.derivative(endpoint, k) * pw / fact;
    }
    return acc;
  };
  auto snapped_sin_cos = [](double x) {
    double s = std::sin(x), c = std::cos(x);
    if (std::abs(s) < 1e-14) s = 0.0;
    if (std::abs(c) < 1e-14) c = 0.0;
    return std::pair{s, c};
  };
  const auto [sg0, cg0] = snapped_sin_cos(gamma(endpoint));
  const auto [sb0, cb0] = snapped_sin_cos(beta(endpoint));
  const double dg = offset(gamma);
  const double db = offset(beta);
  const double sg = sg0 * std::cos(dg) + cg0 * std::sin(dg);
  const double cg = cg0 * std::cos(dg) - sg0 * std::sin(dg);
  const double sb = sb0 * std::cos(db) + cb0 * std::sin(db);
  const double cb = cb0 * std::cos(db) - sb0 * std::sin(db);
  const double gd = gamma.derivative(endpoint + tau, 1);
  const double bd = beta.derivative(endpoint + tau, 1);
  return gd / sb * cg / sg * cb - bd;
}

double base_delta_numeric_endpoint(const PolynomialCurve& gamma, const PolynomialCurve& beta, double endpoint,
                                   double direction) {
  const double h = 1e-6 * gamma.t_f() * direction;
  // Richardson over h and 2h removes the O(h) term.
  return 2.0 * base_delta_near(gamma, beta, endpoint, h) - base_delta_near(gamma, beta, endpoint, 2.0 * h);
}

// Endpoint value of a sampled smooth function by cubic extrapolation from
// the four nearest interior samples.
double extrapolate_endpoint(double f1, double f2, double f3, double f4) { return 4.0 * f1 - 6.0 * f2 + 4.0 * f3 - f4; }

void require_finite(const PulseSchedule& s) {
  const std::pair<const char*, const std::vector<double>*> arrays[] = {
      {"gamma", &s.gamma},       {"gamma_dot", &s.gamma_dot}, {"beta", &s.beta},   {"beta_dot", &s.beta_dot},
      {"omega_re", &s.omega_re}, {"omega_im", &s.omega_im},   {"delta", &s.delta}, {"r_plus", &s.r_plus},
  };
  for (const auto& [name, values] : arrays)
    for (std::size_t k = 0; k < values->size(); ++k)
      if (!std::isfinite((*values)[k]))
        fail(Errc::endpoint_limit, fmt::format("{} is not finite at t = {:.6g}", name, s.times[k]));
}

}  // namespace

PulseSchedule base_schedule(const ProtocolSpec& spec) {
  spec.validate();
  if (spec.kind != ProtocolKind::base) fail(Errc::invalid_argument, "base_schedule requires kind = base");

  const double t_f = spec.t_f;
  const PolynomialCurve gamma = mixing_angle_curve(t_f);
  const PolynomialCurve beta = base_phase_curve(t_f);

  PulseSchedule s;
  s.times = uniform_times(t_f, spec.samples);
  const std::size_t n = s.times.size();
  s.gamma.resize(n);
  s.gamma_dot.resize(n);
  s.beta.resize(n);
  s.beta_dot.resize(n);
  s.omega_re.resize(n);
  s.omega_im.assign(n, 0.0);
  s.delta.resize(n);
  s.e_j.assign(n, 0.0);
  s.epsilon.assign(n, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    const double t = s.times[k];
    s.gamma[k] = gamma(t);
    s.gamma_dot[k] = gamma.derivative(t, 1);
    s.beta[k] = beta(t);
    s.beta_dot[k] = beta.derivative(t, 1);
    s.omega_re[k] = s.gamma_dot[k] / std::sin(s.beta[k]);
    if (k != 0 && k != n - 1)
      s.delta[k] = s.omega_re[k] / std::tan(s.gamma[k]) * std::cos(s.beta[k]) - s.beta_dot[k];
  }

  const std::pair<std::size_t, double> ends[] = {{0, 1.0}, {n - 1, -1.0}};
  for (const auto& [k, direction] : ends) {
    const double t = s.times[k];
    const double series = base_delta_endpoint_limit(gamma, beta, t);
    const double numeric = base_delta_numeric_endpoint(gamma, beta, t, direction);
    if (!std::isfinite(series) || std::abs(series - numeric) > 1e-6 / t_f)
      fail(Errc::endpoint_limit, fmt::format("detuning limit at t = {:.6g}: series {:.10g} vs numeric {:.10g}", t,
                                             series, numeric));
    s.delta[k] = series;
  }
  s.omega_re.front() = 0.0;
  s.omega_re.back() = 0.0;

  s.r_plus = lr_phase(s, spec).numeric;
  require_finite(s);
  return s;
}

PulseSchedule optimal_schedule(const ProtocolSpec& spec) {
  spec.validate();
  if (spec.kind != ProtocolKind::optimal) fail(Errc::invalid_argument, "optimal_schedule requires kind = optimal");

  const double t_f = spec.t_f;
  const double n = spec.n;
  const PolynomialCurve gamma = mixing_angle_curve(t_f);

  PulseSchedule s;
  s.times = uniform_times(t_f, spec.samples);
  const std::size_t count = s.times.size();
  s.gamma.resize(count);
  s.gamma_dot.resize(count);
  s.beta.resize(count);
  s.beta_dot.resize(count);
  s.omega_re.resize(count);
  s.omega_im.resize(count);
  s.delta.resize(count);
  s.e_j.assign(count, 0.0);
  s.epsilon.assign(count, 0.0);

  for (std::size_t k = 0; k < count; ++k) {
    const double t = s.times[k];
    const double g = gamma(t);
    const double gd = gamma.derivative(t, 1);
    const double sg = std::sin(g);
    const double cg = std::cos(g);
    // cot(beta) = 4 n sin^3(gamma) on the branch through -pi/2.
    const double cot_beta = 4.0 * n * sg * sg * sg;
    const double b = -kPi / 2 - std::atan(cot_beta);
    const double bd = -12.0 * n * sg * sg * cg * gd / (1.0 + cot_beta * cot_beta);
    s.gamma[k] = g;
    s.gamma_dot[k] = gd;
    s.beta[k] = b;
    s.beta_dot[k] = bd;
    const auto controls = optimal_controls(g, gd, b, bd, n);
    s.omega_re[k] = controls.omega_re;
    s.omega_im[k] = controls.omega_im;
    s.delta[k] = controls.delta;
  }

  const double max_re = *std::max_element(s.omega_re.begin(), s.omega_re.end(),
                                          [](double x, double y) { return std::abs(x) < std::abs(y); });
  for (std::size_t k = 0; k < count; ++k)
    if (std::abs(s.omega_im[k]) > 1e-10 * std::abs(max_re))
      fail(Errc::branch_selection,
           fmt::format("Im W = {:.3e} at t = {:.6g} exceeds 1e-10 max|Re W|", s.omega_im[k], s.times[k]));

  s.r_plus = lr_phase(s, spec).numeric;
  require_finite(s);
  return s;
}

ControlPoint optimal_controls(double gamma, double gamma_dot, double beta, double beta_dot, double n) {
  const double sg = std::sin(gamma);
  const double cg = std::cos(gamma);
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const double sg3 = sg * sg * sg;
  ControlPoint out;
  out.omega_re = (4.0 * n * cb * sg3 + sb) * gamma_dot;
  out.omega_im = (-4.0 * n * sb * sg3 + cb) * gamma_dot;
  out.delta = 4.0 * n * gamma_dot * cg * sg * sg - beta_dot;
  return out;
}

PulseSchedule design_schedule(const ProtocolSpec& spec) {
  return spec.kind == ProtocolKind::base ? base_schedule(spec) : optimal_schedule(spec);
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n < 4) {
    for (std::size_t k = 1; k < n; ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return out;
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double piece;
    if (k == 0) {
      piece = (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
    } else if (k + 2 == n) {
      piece = (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]) / 24.0;
    } else {
      piece = (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]) / 24.0;
    }
    out[k + 1] = out[k] + h * piece;
  }
  return out;
}

LrPhase lr_phase(const PulseSchedule& schedule, const ProtocolSpec& spec) {
  const std::size_t n = schedule.size();
  if (n < 8 || schedule.gamma.size() != n || schedule.omega_re.size() != n || schedule.omega_im.size() != n)
    fail(Errc::invalid_argument, "lr_phase needs a populated schedule with at least 8 samples");

  std::vector<double> rate(n);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double b = schedule.beta[k];
    rate[k] = (std::cos(b) * schedule.omega_re[k] - std::sin(b) * schedule.omega_im[k]) /
              (2.0 * std::sin(schedule.gamma[k]));
  }
  // sin(gamma) vanishes at both ends; the rate itself stays smooth.
  rate[0] = extrapolate_endpoint(rate[1], rate[2], rate[3], rate[4]);
  rate[n - 1] = extrapolate_endpoint(rate[n - 2], rate[n - 3], rate[n - 4], rate[n - 5]);

  const double h = schedule.times[1] - schedule.times[0];
  LrPhase out;
  out.numeric = cumulative_integral(rate, h);

  if ((n - 1) % 2 == 0) {
    std::vector<double> coarse;
    coarse.reserve(n / 2 + 1);
    for (std::size_t k = 0; k < n; k += 2) coarse.push_back(rate[k]);
    const double coarse_total = cumulative_integral(coarse, 2.0 * h).back();
    out.error_estimate = std::abs(out.numeric.back() - coarse_total) / 15.0;
  } else {
    double trapezoid = 0.0;
    for (std::size_t k = 1; k < n; ++k) trapezoid += 0.5 * h * (rate[k - 1] + rate[k]);
    out.error_estimate = std::abs(out.numeric.back() - trapezoid);
  }
  if (!(out.error_estimate <= 1e-8))
    fail(Errc::quadrature, fmt::format("Lewis-Riesenfeld phase quadrature error {:.3e} exceeds 1e-8",
                                       out.error_estimate));

  if (spec.kind == ProtocolKind::optimal) {
    const double nn = spec.n;
    auto closed = [nn](double g) { return 0.5 * nn * (2.0 * g - std::sin(2.0 * g)); };
    const double origin = closed(schedule.gamma.front());
    std::vector<double> analytic(n);
    for (std::size_t k = 0; k < n; ++k) analytic[k] = closed(schedule.gamma[k]) - origin;
    out.analytic = std::move(analytic);
  }
  return out;
}

PulseSchedule calibrate_physical(const PulseSchedule& schedule, const CatBasis& basis, CalibrationMode mode) {
  const std::size_t n = schedule.size();
  if (schedule.delta.size() != n || schedule.omega_re.size() != n)
    fail(Errc::invalid_argument, "calibrate_physical needs delta and omega_re arrays");

  double ej_per_delta = 0.0;
  double eps_per_omega = 0.0;
  if (mode == CalibrationMode::exact_projection) {
    if (std::abs(basis.m_diag_gap) < 1e-12 || std::abs(basis.sx_element) < 1e-12)
      fail(Errc::degenerate_calibration,
           fmt::format("m_diag_gap = {:.3e}, sx_element = {:.3e}", basis.m_diag_gap, basis.sx_element));
    ej_per_delta = -1.0 / basis.m_diag_gap;
    eps_per_omega = 1.0 / (2.0 * basis.sx_element);
  } else {
    const double re_alpha = basis.alpha.real();
    if (std::abs(re_alpha) < 1e-12) fail(Errc::degenerate_calibration, "Re(alpha) = 0");
    ej_per_delta = -std::abs(basis.alpha) * std::sqrt(2.0 * kPi);
    eps_per_omega = 1.0 / (4.0 * re_alpha);
  }

  double max_re = 0.0, max_im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    max_re = std::max(max_re, std::abs(schedule.omega_re[k]));
    if (k < schedule.omega_im.size()) max_im = std::max(max_im, std::abs(schedule.omega_im[k]));
  }
  if (max_im > 1e-10 * std::max(max_re, 1e-300))
    warn(fmt::format("calibrate_physical: Im W up to {:.3e} cannot be driven by epsilon(a + a^dagger); ignored",
                     max_im));

  PulseSchedule out = schedule;
  out.e_j.resize(n);
  out.epsilon.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.e_j[k] = ej_per_delta * schedule.delta[k];
    out.epsilon[k] = eps_per_omega * schedule.omega_re[k];
  }
  out.calibrated = true;
  return out;
}

}  // namespace kerrcat
