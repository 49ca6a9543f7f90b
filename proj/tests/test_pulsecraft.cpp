#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <kerrcat/csv.hpp>
#include <kerrcat/diagnostics.hpp>
#include <kerrcat/pulsecraft.hpp>

using namespace kerrcat;
using std::numbers::pi;

namespace {

ProtocolSpec spec_of(ProtocolKind kind, int n = 1, double t_f = 5.0) {
  ProtocolSpec s;
  s.kind = kind;
  s.n = n;
  s.t_f = t_f;
  return s;
}

std::size_t mid(const PulseSchedule& s) { return (s.size() - 1) / 2; }

void check_schedule_invariants(const PulseSchedule& s) {
  CHECK(std::abs(s.gamma.front() - pi) < 1e-8);
  CHECK(std::abs(s.gamma.back()) < 1e-8);
  CHECK(std::abs(s.gamma_dot.front()) < 1e-8);
  CHECK(std::abs(s.gamma_dot.back()) < 1e-8);
  CHECK(std::hypot(s.omega_re.front(), s.omega_im.front()) < 1e-8);
  CHECK(std::hypot(s.omega_re.back(), s.omega_im.back()) < 1e-8);
  for (const auto* v : {&s.gamma, &s.gamma_dot, &s.beta, &s.beta_dot, &s.omega_re, &s.omega_im, &s.delta, &s.r_plus})
    for (double x : *v) REQUIRE(std::isfinite(x));
}

}  // namespace

TEST_CASE("boundary polynomial solver") {
  const double tf = 5.0;
  const PolynomialCurve g = mixing_angle_curve(tf);
  // pi (1 - 3 s^2 + 2 s^3)
  const std::vector<double> expect_g{pi, 0.0, -3.0 * pi / (tf * tf), 2.0 * pi / (tf * tf * tf)};
  REQUIRE(g.coefficients().size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(g.coefficients()[k] == doctest::Approx(expect_g[k]).epsilon(1e-12));

  const PolynomialCurve b = base_phase_curve(tf);
  REQUIRE(b.degree() == 4);
  CHECK(std::abs(b.coefficients()[4]) < 1e-14);
  for (double t : {0.3, 1.7, 2.5, 4.1}) {
    const double s = t / tf;
    CHECK(b(t) == doctest::Approx(-pi / 2 + (pi / 2) * s * (1 - s) * (1 - 2 * s)).epsilon(1e-12));
  }
  CHECK(std::abs(b.derivative(0.0) - pi / (2 * tf)) < 1e-10);
  CHECK(std::abs(b.derivative(tf) - pi / (2 * tf)) < 1e-10);

  const BoundaryCondition one[] = {{0.0, 0, 2.5}};
  const auto c = solve_boundary_polynomial(one, 0, 1.0);
  CHECK(c(0.7) == 2.5);

  const BoundaryCondition clash[] = {{0.0, 0, 1.0}, {0.0, 0, 2.0}};
  try {
    solve_boundary_polynomial(clash, 1, 1.0);
    FAIL("expected singular system");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_system);
    CHECK(std::string(e.what()).find("not independent") != std::string::npos);
  }
  const BoundaryCondition few[] = {{0.0, 0, 1.0}};
  CHECK_THROWS_AS(solve_boundary_polynomial(few, 2, 1.0), Error);
}

TEST_CASE("base schedule") {
  for (double tf : {1.0, 5.0, 10.0}) {
    const auto s = base_schedule(spec_of(ProtocolKind::base, 1, tf));
    check_schedule_invariants(s);
    const auto m = mid(s);
    CHECK(s.omega_re[m] == doctest::Approx(3 * pi / (2 * tf)).epsilon(1e-10));
    CHECK(s.delta.front() == doctest::Approx(-3 * pi / (2 * tf)).epsilon(1e-9));
    CHECK(s.delta.back() == doctest::Approx(-3 * pi / (2 * tf)).epsilon(1e-9));
    CHECK(s.delta[m] == doctest::Approx(pi / (4 * tf)).epsilon(1e-10));
    for (double x : s.omega_im) CHECK(x == 0.0);
    double min_sin = 1.0;
    for (double b : s.beta) {
      CHECK(b < 0.0);
      CHECK(b > -pi);
      min_sin = std::min(min_sin, std::abs(std::sin(b)));
    }
    CHECK(min_sin >= 0.9);
  }
}

TEST_CASE("detuning endpoint limit agrees with a near-endpoint evaluation") {
  const double tf = 5.0;
  const auto g = mixing_angle_curve(tf);
  const auto b = base_phase_curve(tf);
  auto delta = [&](double t) { return g.derivative(t) / std::sin(b(t)) * std::cos(b(t)) / std::tan(g(t)) - b.derivative(t); };
  const double t = 1e-4 * tf;
  const double near = 2.0 * delta(t) - delta(2.0 * t);
  CHECK(std::abs(base_delta_endpoint_limit(g, b, 0.0) - near) <= 1e-6 / tf);
  CHECK(std::abs(base_delta_endpoint_limit(g, b, tf) - (2.0 * delta(tf - t) - delta(tf - 2.0 * t))) <= 1e-6 / tf);
}

TEST_CASE("optimal schedule") {
  double previous_peak = 0.0;
  for (int n = 1; n <= 5; ++n) {
    for (double tf : {1.0, 5.0, 10.0}) {
      const auto s = optimal_schedule(spec_of(ProtocolKind::optimal, n, tf));
      check_schedule_invariants(s);
      CHECK(std::abs(s.beta.front() + pi / 2) < 1e-12);
      CHECK(std::abs(s.beta.back() + pi / 2) < 1e-12);
      double max_im = 0.0, max_re = 0.0, residual = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        max_im = std::max(max_im, std::abs(s.omega_im[k]));
        max_re = std::max(max_re, std::abs(s.omega_re[k]));
        if (k > 0 && k + 1 < s.size())
          residual = std::max(residual, std::abs(1.0 / std::tan(s.beta[k]) - 4.0 * n * std::pow(std::sin(s.gamma[k]), 3)));
      }
      CHECK(max_im <= 1e-10 * max_re);
      CHECK(residual <= 1e-9);
    }
    const auto s = optimal_schedule(spec_of(ProtocolKind::optimal, n));
    double peak = 0.0;
    for (double x : s.omega_re) peak = std::max(peak, std::abs(x));
    CHECK(peak > previous_peak);
    previous_peak = peak;
  }

  const auto s1 = optimal_schedule(spec_of(ProtocolKind::optimal, 1));
  const auto m = mid(s1);
  CHECK(s1.omega_re[m] == doctest::Approx(3 * pi * std::sqrt(17.0) / 10.0).epsilon(1e-10));
  CHECK(std::abs(s1.delta[m]) < 1e-10);

  CHECK_THROWS_AS(optimal_schedule(spec_of(ProtocolKind::optimal, 0)), Error);
  ProtocolSpec bad = spec_of(ProtocolKind::optimal);
  bad.samples = 100;
  CHECK_THROWS_AS(design_schedule(bad), Error);
  bad = spec_of(ProtocolKind::optimal, 1, -1.0);
  CHECK_THROWS_AS(design_schedule(bad), Error);
}

TEST_CASE("optimal controls with n = 0 reduce to the base controls") {
  const auto base = base_schedule(spec_of(ProtocolKind::base));
  for (std::size_t k = 0; k < base.size(); k += 50) {
    const auto c = optimal_controls(base.gamma[k], base.gamma_dot[k], base.beta[k], base.beta_dot[k], 0.0);
    // the base family has Omega = gamma'/sin(beta) real; the n = 0 form is gamma'(sin b, cos b)
    CHECK(std::abs(c.omega_re - base.gamma_dot[k] * std::sin(base.beta[k])) < 1e-12);
    CHECK(std::abs(c.omega_im - base.gamma_dot[k] * std::cos(base.beta[k])) < 1e-12);
    CHECK(std::abs(c.delta + base.beta_dot[k]) < 1e-12);
  }
}

TEST_CASE("Lewis-Riesenfeld phase") {
  const auto base_spec = spec_of(ProtocolKind::base);
  const auto base = base_schedule(base_spec);
  const auto lr = lr_phase(base, base_spec);
  CHECK(lr.numeric.front() == 0.0);
  CHECK(std::abs(lr.numeric.back() - lr.numeric.front()) <= 1e-3);
  CHECK_FALSE(lr.analytic.has_value());

  for (int n : {1, 3}) {
    const auto spec = spec_of(ProtocolKind::optimal, n);
    const auto s = optimal_schedule(spec);
    const auto phase = lr_phase(s, spec);
    REQUIRE(phase.analytic.has_value());
    double dev = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) dev = std::max(dev, std::abs(phase.numeric[k] - (*phase.analytic)[k]));
    CHECK(dev <= 1e-6);
    CHECK(phase.analytic->back() == doctest::Approx(-n * pi).epsilon(1e-12));
    CHECK(phase.error_estimate <= 1e-8);
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.r_plus[k] == phase.numeric[k]);
  }
}

TEST_CASE("cumulative integral") {
  const double h = 0.01;
  std::vector<double> v(301);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::cos(k * h);
  const auto out = cumulative_integral(v, h);
  for (std::size_t k = 0; k < v.size(); ++k) CHECK(std::abs(out[k] - std::sin(k * h)) < 1e-9);
}

TEST_CASE("physical calibration") {
  const CatBasis cb = cat_basis(60, 2.0);
  const auto s = optimal_schedule(spec_of(ProtocolKind::optimal));
  const auto approx = calibrate_physical(s, cb, CalibrationMode::approximate);
  const auto exact = calibrate_physical(s, cb, CalibrationMode::exact_projection);
  CHECK(approx.calibrated);
  CHECK_FALSE(s.calibrated);
  double worst = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(approx.epsilon[k] == doctest::Approx(s.omega_re[k] / 8.0).epsilon(1e-14));
    CHECK(approx.e_j[k] == doctest::Approx(-s.delta[k] * 2.0 * std::sqrt(2 * pi)).epsilon(1e-14));
    CHECK(exact.e_j[k] == doctest::Approx(-s.delta[k] / cb.m_diag_gap).epsilon(1e-14));
    CHECK(exact.epsilon[k] == doctest::Approx(s.omega_re[k] / (2 * cb.sx_element)).epsilon(1e-14));
    if (std::abs(approx.e_j[k]) > 1e-6) worst = std::max(worst, std::abs(exact.e_j[k] / approx.e_j[k] - 1.0));
  }
  // the two conventions differ by the approximation in the Laguerre gap
  CHECK(worst < 1e-2);

  PulseSchedule flat = s;
  std::fill(flat.delta.begin(), flat.delta.end(), 0.0);
  for (auto mode : {CalibrationMode::approximate, CalibrationMode::exact_projection})
    for (double x : calibrate_physical(flat, cb, mode).e_j) CHECK(x == 0.0);

  CatBasis broken = cb;
  broken.m_diag_gap = 0.0;
  try {
    calibrate_physical(s, broken, CalibrationMode::exact_projection);
    FAIL("expected degenerate calibration");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_calibration);
  }
}

TEST_CASE("time rescaling") {
  const auto a = design_schedule(spec_of(ProtocolKind::optimal, 2, 2.0));
  const auto b = design_schedule(spec_of(ProtocolKind::optimal, 2, 6.0));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); k += 97) {
    CHECK(b.omega_re[k] == doctest::Approx(a.omega_re[k] / 3.0).epsilon(1e-10));
    CHECK(b.delta[k] == doctest::Approx(a.delta[k] / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("schedule CSV") {
  ProtocolSpec spec = spec_of(ProtocolKind::base);
  spec.samples = 201;
  const auto s = base_schedule(spec);
  std::ostringstream a, b;
  write_schedule_csv(a, s);
  write_schedule_csv(b, s);
  CHECK(a.str() == b.str());
  const std::string text = a.str();
  CHECK(text.substr(0, text.find('\n')) == "t,gamma,gamma_dot,beta,beta_dot,omega_re,omega_im,delta,r_plus,e_j,epsilon");
  CHECK(std::count(text.begin(), text.end(), '\n') == 202);
}
