#include "kerrcat/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kerrcat/diagnostics.hpp"

namespace kerrcat {

namespace {

constexpr cplx kI{0.0, 1.0};

double uniform_step(const PulseSchedule& s) {
  if (s.size() < 4) fail(Errc::invalid_argument, "schedule needs at least 4 samples");
  const double h = s.times[1] - s.times[0];
  const double span = s.times.back() - s.times.front();
  if (std::abs(h * static_cast<double>(s.size() - 1) - span) > 1e-9 * span)
    fail(Errc::invalid_argument, "schedule grid is not uniform");
  return h;
}

UniformCubicSpline spline_of(const std::vector<double>& values, const PulseSchedule& s, double h) {
  if (values.size() != s.size()) fail(Errc::invalid_argument, "schedule array length mismatch");
  return UniformCubicSpline(values, s.times.front(), h);
}

}  // namespace

void TimeGrid::validate() const {
  if (!(t_f > t0)) fail(Errc::invalid_argument, fmt::format("time grid needs t_f > t0 (got {}, {})", t0, t_f));
  if (!(tolerance >= 1e-14 && tolerance <= 1e-6))
    fail(Errc::invalid_argument, fmt::format("tolerance {} outside [1e-14, 1e-6]", tolerance));
  if (output_points < 2) fail(Errc::invalid_argument, fmt::format("output_points = {} must be >= 2", output_points));
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(output_points);
  for (int k = 0; k < output_points; ++k) t[k] = t0 + (t_f - t0) * k / (output_points - 1);
  t.back() = t_f;
  return t;
}

IntegratorOptions TimeGrid::integrator_options() const {
  IntegratorOptions o;
  o.rel_tol = tolerance;
  o.abs_tol = tolerance * 1e-2;
  return o;
}

TimeGrid TimeGrid::covering(const PulseSchedule& schedule, int output_points, double tolerance) {
  TimeGrid g;
  g.t0 = schedule.times.front();
  g.t_f = schedule.times.back();
  g.output_points = output_points;
  g.tolerance = tolerance;
  return g;
}

double Trajectory::max_norm_drift() const {
  double drift = 0.0;
  for (double n : norms) drift = std::max(drift, std::abs(n - norms.front()));
  return drift;
}

ScheduleInterpolant::ScheduleInterpolant(const PulseSchedule& s) {
  const double h = uniform_step(s);
  omega_re_ = spline_of(s.omega_re, s, h);
  omega_im_ = spline_of(s.omega_im, s, h);
  delta_ = spline_of(s.delta, s, h);
  calibrated_ = s.calibrated;
  if (calibrated_) {
    e_j_ = spline_of(s.e_j, s, h);
    epsilon_ = spline_of(s.epsilon, s, h);
  }
}

ControlValues ScheduleInterpolant::operator()(double t) const {
  ControlValues v;
  v.omega_re = omega_re_(t);
  v.omega_im = omega_im_(t);
  v.delta = delta_(t);
  if (calibrated_) {
    v.e_j = e_j_(t);
    v.epsilon = epsilon_(t);
  }
  return v;
}

Eigen::Matrix2cd effective_hamiltonian(double delta, cplx omega) {
  Eigen::Matrix2cd h;
  h << delta, std::conj(omega), omega, -delta;
  return 0.5 * h;
}

Trajectory propagate_effective(const PulseSchedule& schedule, const Eigen::Vector2cd& psi0, const TimeGrid& grid) {
  grid.validate();
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    fail(Errc::invalid_argument, fmt::format("initial state norm {:.12g} != 1", psi0.norm()));
  const ScheduleInterpolant controls(schedule);

  OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dydt) {
    const ControlValues c = controls(t);
    const cplx omega{c.omega_re, c.omega_im};
    // -i H y, H = (1/2)[[D, W*], [W, -D]]
    dydt[0] = -0.5 * kI * (c.delta * y[0] + std::conj(omega) * y[1]);
    dydt[1] = -0.5 * kI * (omega * y[0] - c.delta * y[1]);
  };

  Trajectory traj;
  const std::vector<double> times = grid.times();
  ComplexVector y{psi0(0), psi0(1)};
  integrate_observed(rhs, y, times, grid.integrator_options(), [&](double t, const ComplexVector& state) {
    Eigen::Vector2cd psi(state[0], state[1]);
    traj.times.push_back(t);
    traj.norms.push_back(psi.norm());
    traj.p_minus.push_back(std::norm(psi(0)));
    traj.p_plus.push_back(std::norm(psi(1)));
    traj.leakage.push_back(0.0);
    traj.states.push_back(psi);
  });

  if (traj.max_norm_drift() > 1e-6)
    fail(Errc::integrator_failure, fmt::format("norm drift {:.3e} in effective propagation", traj.max_norm_drift()));
  return traj;
}

FullHamiltonian::FullHamiltonian(const CatBasis& basis, double K, double P, double phi_a) {
  const int dim = basis.dim;
  kerr_ = kerr_hamiltonian(dim, K, P).matrix();
  control_diag_ = laguerre_diagonal(dim, phi_a > 0.0 ? phi_a : 2.0 * std::abs(basis.alpha));
  const auto ops = ladder_ops(dim);
  quadrature_ = ops.a.matrix() + ops.a_dag.matrix();
}

Eigen::MatrixXcd FullHamiltonian::at(double e_j, double epsilon) const {
  Eigen::MatrixXcd h = kerr_ + epsilon * quadrature_;
  h.diagonal() += e_j * control_diag_.cast<cplx>();
  return h;
}

FockOperator full_hamiltonian_at(double t, const PulseSchedule& schedule, const CatBasis& basis, double K, double P,
                                 double phi_a) {
  if (!schedule.calibrated) fail(Errc::uncalibrated_schedule, "full Hamiltonian needs e_j and epsilon");
  const ScheduleInterpolant controls(schedule);
  const ControlValues c = controls(t);
  return FockOperator(FullHamiltonian(basis, K, P, phi_a).at(c.e_j, c.epsilon));
}

Trajectory propagate_full(const PulseSchedule& schedule, const CatBasis& basis, double K, double P,
                          const FockState& psi0, const TimeGrid& grid, double phi_a) {
  grid.validate();
  if (!schedule.calibrated) fail(Errc::uncalibrated_schedule, "propagate_full needs a calibrated schedule");
  if (psi0.dim() != basis.dim)
    fail(Errc::dimension_mismatch, fmt::format("initial state dim {} vs basis dim {}", psi0.dim(), basis.dim));
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    fail(Errc::invalid_argument, fmt::format("initial state norm {:.12g} != 1", psi0.norm()));

  double max_drive = 0.0;
  for (std::size_t k = 0; k < schedule.size(); ++k)
    max_drive = std::max({max_drive, std::abs(schedule.e_j[k]), std::abs(schedule.epsilon[k])});
  const double gap = kerr_spectrum(basis.dim, K, P).gap;
  if (max_drive > gap / 5.0)
    warn(fmt::format("drive amplitude {:.4g} exceeds gap/5 = {:.4g}; two-level reduction is not valid", max_drive,
                     gap / 5.0));

  const FullHamiltonian hamiltonian(basis, K, P, phi_a);
  const ScheduleInterpolant controls(schedule);
  const int dim = basis.dim;

  OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dydt) {
    const ControlValues c = controls(t);
    Eigen::Map<const Eigen::VectorXcd> psi(y.data(), dim);
    Eigen::Map<Eigen::VectorXcd> out(dydt.data(), dim);
    out.noalias() = hamiltonian.kerr() * psi;
    out.noalias() += c.epsilon * (hamiltonian.quadrature() * psi);
    out += c.e_j * hamiltonian.control_diagonal().cast<cplx>().cwiseProduct(psi);
    out *= -kI;
  };

  const Eigen::VectorXcd& cp = basis.c_plus.amplitudes();
  const Eigen::VectorXcd& cm = basis.c_minus.amplitudes();

  Trajectory traj;
  traj.full_space = true;
  ComplexVector y(psi0.amplitudes().data(), psi0.amplitudes().data() + dim);
  integrate_observed(rhs, y, grid.times(), grid.integrator_options(), [&](double t, const ComplexVector& state) {
    Eigen::VectorXcd psi = Eigen::Map<const Eigen::VectorXcd>(state.data(), dim);
    const double pp = std::norm(cp.dot(psi));
    const double pm = std::norm(cm.dot(psi));
    traj.times.push_back(t);
    traj.norms.push_back(psi.norm());
    traj.p_plus.push_back(pp);
    traj.p_minus.push_back(pm);
    traj.leakage.push_back(psi.squaredNorm() - pp - pm);
    traj.states.push_back(std::move(psi));
  });

  if (traj.max_norm_drift() > 1e-6)
    fail(Errc::integrator_failure, fmt::format("norm drift {:.3e} in full propagation", traj.max_norm_drift()));
  return traj;
}

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> invariant_eigenstates(double gamma, double beta) {
  const double c = std::cos(0.5 * gamma);
  const double s = std::sin(0.5 * gamma);
  const cplx phase = std::polar(1.0, beta);
  Eigen::Vector2cd plus(c * phase, s);
  Eigen::Vector2cd minus(s, -c * std::conj(phase));
  return {plus, minus};
}

std::vector<double> eigenstate_phase(const PulseSchedule& s) {
  if (s.r_plus.size() != s.size() || s.beta.size() != s.size() || s.size() == 0)
    fail(Errc::invalid_argument, "eigenstate_phase needs r_plus and beta on the schedule grid");
  std::vector<double> out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = -s.r_plus[k] - 0.5 * (s.beta[k] - s.beta.front());
  return out;
}

Eigen::Matrix2cd invariant_matrix(double gamma, double beta) {
  const cplx phase = std::polar(1.0, beta);
  Eigen::Matrix2cd m;
  m << std::cos(gamma), std::sin(gamma) * phase, std::sin(gamma) * std::conj(phase), -std::cos(gamma);
  return 0.5 * m;
}

double invariant_residual(const PulseSchedule& s) {
  double worst = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double g = s.gamma[k], b = s.beta[k];
    const double gd = s.gamma_dot[k], bd = s.beta_dot[k];
    const cplx phase = std::polar(1.0, b);
    Eigen::Matrix2cd di;
    const cplx off = phase * (std::cos(g) * gd + kI * std::sin(g) * bd);
    di << -std::sin(g) * gd, off, std::conj(off), std::sin(g) * gd;
    di *= 0.5;
    const Eigen::Matrix2cd h = effective_hamiltonian(s.delta[k], cplx{s.omega_re[k], s.omega_im[k]});
    const Eigen::Matrix2cd inv = invariant_matrix(g, b);
    const Eigen::Matrix2cd r = kI * di - (h * inv - inv * h);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

Populations populations(const Trajectory& traj, const CatBasis& basis) {
  Populations out;
  const std::size_t n = traj.size();
  out.p_plus.resize(n);
  out.p_minus.resize(n);
  out.p_s.resize(n);

  const Eigen::VectorXcd& cp = basis.c_plus.amplitudes();
  const Eigen::VectorXcd& cm = basis.c_minus.amplitudes();
  for (std::size_t k = 0; k < n; ++k) {
    double pp = 0.0, pm = 0.0;
    if (!traj.states.empty()) {
      const Eigen::VectorXcd& psi = traj.states[k];
      if (psi.size() == 2 && !traj.full_space) {
        pm = std::norm(psi(0));
        pp = std::norm(psi(1));
      } else if (psi.size() == basis.dim) {
        pp = std::norm(cp.dot(psi));
        pm = std::norm(cm.dot(psi));
      } else {
        fail(Errc::dimension_mismatch, fmt::format("state dim {} vs basis dim {}", psi.size(), basis.dim));
      }
    } else if (!traj.densities.empty()) {
      const Eigen::MatrixXcd& rho = traj.densities[k];
      if (rho.rows() == 2 && !traj.full_space) {
        pm = rho(0, 0).real();
        pp = rho(1, 1).real();
      } else if (rho.rows() == basis.dim) {
        pp = cp.dot(rho * cp).real();
        pm = cm.dot(rho * cm).real();
      } else {
        fail(Errc::dimension_mismatch, fmt::format("density dim {} vs basis dim {}", rho.rows(), basis.dim));
      }
    } else {
      fail(Errc::invalid_argument, "trajectory stores no states");
    }
    out.p_plus[k] = pp;
    out.p_minus[k] = pm;
    out.p_s[k] = pp + pm;
  }
  return out;
}

std::vector<std::string> trajectory_csv_columns(bool renormalized) {
  std::vector<std::string> cols = {"t", "p_plus", "p_minus", "p_s", "leakage", "norm"};
  if (renormalized) {
    cols.emplace_back("p_plus_r");
    cols.emplace_back("p_minus_r");
  }
  return cols;
}

}  // namespace kerrcat
