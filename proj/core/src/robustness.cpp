#include "kerrcat/robustness.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "kerrcat/csv.hpp"
#include "kerrcat/diagnostics.hpp"
#include "kerrcat/dynamics.hpp"
#include "kerrcat/parallel.hpp"
#include "kerrcat/simulation.hpp"

namespace kerrcat {

namespace {

constexpr double kPi = std::numbers::pi;

// Composite fourth-order integral of a complex sampled function and a
// Richardson estimate of its error from the every-other-sample grid.
SensitivityIntegral integrate_sensitivity(const std::vector<cplx>& f, double h, double prefactor) {
  const std::size_t n = f.size();
  std::vector<double> re(n), im(n);
  for (std::size_t k = 0; k < n; ++k) {
    re[k] = f[k].real();
    im[k] = f[k].imag();
  }
  const cplx fine{cumulative_integral(re, h).back(), cumulative_integral(im, h).back()};

  double err = 0.0;
  if ((n - 1) % 2 == 0 && n >= 9) {
    std::vector<double> re2, im2;
    for (std::size_t k = 0; k < n; k += 2) {
      re2.push_back(re[k]);
      im2.push_back(im[k]);
    }
    const cplx coarse{cumulative_integral(re2, 2 * h).back(), cumulative_integral(im2, 2 * h).back()};
    err = std::abs(fine - coarse) / 15.0;
  }
  SensitivityIntegral out;
  out.value = prefactor * std::norm(fine);
  // d|I|^2 = 2|I| d|I|
  out.error_estimate = prefactor * (2.0 * std::abs(fine) * err + err * err);
  return out;
}

}  // namespace

void ErrorModel::validate() const {
  if (!(std::abs(mu) <= 1.0) || !(std::abs(nu) <= 1.0))
    fail(Errc::invalid_argument, fmt::format("error rates mu = {}, nu = {} must lie in [-1, 1]", mu, nu));
}

std::size_t SweepResult::failed_cells() const {
  std::size_t n = 0;
  for (const auto& e : cell_errors) n += e.empty() ? 0 : 1;
  return n;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  write_csv_metadata(out, r.metadata);
  for (std::size_t i = 0; i < r.axis1.values.size(); ++i)
    for (std::size_t j = 0; j < r.axis2.values.size(); ++j)
      if (!r.error_at(i, j).empty())
        out << "# failed " << r.axis1.name << "=" << format_number(r.axis1.values[i]) << " " << r.axis2.name << "="
            << format_number(r.axis2.values[j]) << ": " << r.error_at(i, j) << '\n';
  write_csv_header(out, {r.axis1.name, r.axis2.name, "p_minus"});
  for (std::size_t i = 0; i < r.axis1.values.size(); ++i)
    for (std::size_t j = 0; j < r.axis2.values.size(); ++j) {
      const double row[] = {r.axis1.values[i], r.axis2.values[j], r.at(i, j)};
      write_csv_row(out, row);
    }
}

PulseSchedule apply_error(const PulseSchedule& schedule, const ErrorModel& err) {
  err.validate();
  PulseSchedule out = schedule;
  const double amp = 1.0 + err.mu;
  const double det = 1.0 + err.nu;
  for (auto& v : out.omega_re) v *= amp;
  for (auto& v : out.omega_im) v *= amp;
  for (auto& v : out.epsilon) v *= amp;
  for (auto& v : out.delta) v *= det;
  for (auto& v : out.e_j) v *= det;
  return out;
}

SensitivityIntegral qs_quadrature_detailed(const PulseSchedule& s, ProtocolKind kind) {
  const std::size_t n = s.size();
  if (n < 8 || s.r_plus.size() != n) fail(Errc::invalid_argument, "qs_quadrature needs r_plus on the schedule grid");
  const double h = s.times[1] - s.times[0];

  const std::vector<double> theta = kind == ProtocolKind::base ? eigenstate_phase(s) : s.r_plus;
  std::vector<cplx> integrand(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx phase = std::polar(1.0, 2.0 * theta[k]);
    const double g = s.gamma[k];
    if (kind == ProtocolKind::base) {
      const double c2 = std::cos(0.5 * g) * std::cos(0.5 * g);
      const double s2 = std::sin(0.5 * g) * std::sin(0.5 * g);
      integrand[k] = phase * s.omega_re[k] * (-c2 * std::polar(1.0, 2.0 * s.beta[k]) + s2);
    } else {
      const double sg = std::sin(g);
      integrand[k] = phase * s.gamma_dot[k] * sg * sg;
    }
  }
  const SensitivityIntegral out = integrate_sensitivity(integrand, h, kind == ProtocolKind::base ? 0.25 : 1.0);
  if (!(out.error_estimate <= 1e-8))
    fail(Errc::quadrature, fmt::format("sensitivity quadrature error {:.3e} exceeds 1e-8", out.error_estimate));
  return out;
}

double qs_quadrature(const PulseSchedule& schedule, ProtocolKind kind) {
  return qs_quadrature_detailed(schedule, kind).value;
}

double qs_analytic(double n) {
  if (n < 0.0 || !std::isfinite(n)) fail(Errc::invalid_argument, fmt::format("n = {} must be non-negative", n));
  if (n == 0.0) return kPi * kPi / 4.0;
  if (n == std::floor(n)) return 0.0;
  const double s = std::sin(n * kPi);
  return s * s / (4.0 * n * n);
}

double qs_finite_difference(const ProtocolSpec& spec, double mu_step, Model model, const PhysicalSetup& setup) {
  if (!(mu_step >= 1e-3 && mu_step <= 0.1))
    fail(Errc::invalid_argument, fmt::format("mu_step = {} outside [1e-3, 0.1]", mu_step));
  if (model != Model::effective && model != Model::full)
    fail(Errc::invalid_argument, "finite-difference sensitivity uses the effective or full model");
  const Simulator sim(setup);
  const PulseSchedule nominal = sim.prepare(spec);
  const double p0 = sim.run(nominal, model).final_p_minus();
  const double pp = sim.run(nominal, model, {mu_step, 0.0}).final_p_minus();
  const double pm = sim.run(nominal, model, {-mu_step, 0.0}).final_p_minus();
  return (p0 - 0.5 * (pp + pm)) / (mu_step * mu_step);
}

SweepResult robustness_sweep(const ProtocolSpec& spec, const std::vector<double>& mu_values,
                             const std::vector<double>& nu_values, Model model, const PhysicalSetup& setup,
                             int workers) {
  if (mu_values.empty() || nu_values.empty()) fail(Errc::invalid_argument, "sweep axes must be nonempty");
  for (double mu : mu_values) ErrorModel{mu, 0.0}.validate();
  for (double nu : nu_values) ErrorModel{0.0, nu}.validate();

  const Simulator sim(setup);
  const PulseSchedule nominal = sim.prepare(spec);

  SweepResult r;
  r.axis1 = {"mu", mu_values};
  r.axis2 = {"nu", nu_values};
  const std::size_t rows = mu_values.size(), cols = nu_values.size();
  r.p_minus_final = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols),
                                              std::numeric_limits<double>::quiet_NaN());
  r.cell_errors.assign(rows * cols, {});

  parallel_for(
      rows * cols,
      [&](std::size_t idx) {
        const std::size_t i = idx / cols, j = idx % cols;
        try {
          const Trajectory traj = sim.run(nominal, model, {mu_values[i], nu_values[j]});
          r.p_minus_final(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = traj.final_p_minus();
        } catch (const std::exception& e) {
          r.cell_errors[idx] = e.what();
        }
      },
      workers);

  r.metadata = {
      {"sweep", "robustness"},
      {"protocol", to_string(spec.kind)},
      {"n", std::to_string(spec.n)},
      {"t_f", format_number(spec.t_f)},
      {"samples", std::to_string(spec.samples)},
      {"alpha", format_number(std::abs(setup.alpha))},
      {"model", to_string(model)},
      {"dim", std::to_string(model == Model::lindblad_full ? setup.lindblad_dim : setup.dim)},
      {"calibration", to_string(setup.calibration)},
      {"output_points", std::to_string(setup.output_points)},
      {"tolerance", format_number(setup.tolerance)},
  };
  return r;
}

}  // namespace kerrcat
