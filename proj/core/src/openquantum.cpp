#include "kerrcat/openquantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "kerrcat/csv.hpp"
#include "kerrcat/diagnostics.hpp"
#include "kerrcat/parallel.hpp"
#include "kerrcat/simulation.hpp"

namespace kerrcat {

namespace {

constexpr cplx kI{0.0, 1.0};

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// D[L] rho accumulated into out.
void add_dissipator(const Eigen::Matrix2cd& l, const Eigen::Matrix2cd& rho, Eigen::Matrix2cd& out) {
  const Eigen::Matrix2cd ldl = l.adjoint() * l;
  out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

// Shared bookkeeping for density-matrix trajectories.
class DensityRecorder {
 public:
  DensityRecorder(Trajectory& traj, const Eigen::VectorXcd* c_plus, const Eigen::VectorXcd* c_minus)
      : traj_(traj), c_plus_(c_plus), c_minus_(c_minus) {
    traj_.min_eigenvalue = std::numeric_limits<double>::infinity();
  }

  void record(double t, Eigen::MatrixXcd rho) {
    double pp, pm;
    if (c_plus_) {
      pp = c_plus_->dot(rho * *c_plus_).real();
      pm = c_minus_->dot(rho * *c_minus_).real();
    } else {
      pm = rho(0, 0).real();
      pp = rho(1, 1).real();
    }
    const double trace = rho.trace().real();
    traj_.times.push_back(t);
    traj_.norms.push_back(trace);
    traj_.p_plus.push_back(pp);
    traj_.p_minus.push_back(pm);
    traj_.leakage.push_back(trace - pp - pm);
    traj_.max_hermiticity_defect =
        std::max(traj_.max_hermiticity_defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    traj_.min_eigenvalue = std::min(traj_.min_eigenvalue, min_eigenvalue(rho));
    traj_.densities.push_back(std::move(rho));
  }

  void check() const {
    if (traj_.max_norm_drift() > 1e-6)
      fail(Errc::integrator_failure, fmt::format("trace drift {:.3e} in master equation", traj_.max_norm_drift()));
    if (traj_.min_eigenvalue < -1e-6)
      fail(Errc::integrator_failure, fmt::format("density matrix eigenvalue {:.3e} < -1e-6", traj_.min_eigenvalue));
  }

 private:
  Trajectory& traj_;
  const Eigen::VectorXcd* c_plus_;
  const Eigen::VectorXcd* c_minus_;
};

}  // namespace

void NoiseParams::validate() const {
  if (!(kappa >= 0.0) || !(kappa_phi >= 0.0))
    fail(Errc::invalid_argument, fmt::format("noise rates kappa = {}, kappa_phi = {} must be >= 0", kappa, kappa_phi));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    fail(Errc::invalid_dimension, "density matrix must be square and nonempty");
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) fail(Errc::invalid_argument, fmt::format("density matrix not Hermitian ({:.3e})", herm));
  const double trace = entries_.trace().real();
  if (std::abs(trace - 1.0) > 1e-8) fail(Errc::invalid_argument, fmt::format("density matrix trace {:.12g}", trace));
  const double lowest = min_eigenvalue(entries_);
  if (lowest < -1e-8) fail(Errc::invalid_argument, fmt::format("density matrix eigenvalue {:.3e}", lowest));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) { return DensityMatrix(psi * psi.adjoint()); }

Trajectory lindblad_propagate(const PulseSchedule& schedule, const CatBasis& basis, double K, double P,
                              const NoiseParams& noise, const DensityMatrix& rho0, const TimeGrid& grid,
                              const LindbladOptions& options) {
  grid.validate();
  noise.validate();
  const int dim = basis.dim;
  if (rho0.dim() != dim)
    fail(Errc::dimension_mismatch, fmt::format("initial density dim {} vs basis dim {}", rho0.dim(), dim));
  if (options.include_drive && !schedule.calibrated)
    fail(Errc::uncalibrated_schedule, "driven master equation needs a calibrated schedule");

  const FullHamiltonian hamiltonian(basis, K, P, options.phi_a);
  const ScheduleInterpolant controls(schedule);

  // Number-basis factors of the dissipators: (a rho a^dagger)_ij =
  // sqrt((i+1)(j+1)) rho_{i+1,j+1}, {a^dagger a, rho}_ij = (i + j) rho_ij.
  Eigen::MatrixXd loss_anti(dim, dim), deph_sandwich(dim, dim), deph_anti(dim, dim);
  Eigen::MatrixXd loss_jump = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      loss_anti(i, j) = 0.5 * (i + j);
      deph_sandwich(i, j) = static_cast<double>(i) * j;
      deph_anti(i, j) = 0.5 * (static_cast<double>(i) * i + static_cast<double>(j) * j);
      if (i + 1 < dim && j + 1 < dim) loss_jump(i, j) = std::sqrt((i + 1.0) * (j + 1.0));
    }
  // Effective rate on rho_ij from both channels' diagonal parts.
  const Eigen::MatrixXd decay = noise.kappa * loss_anti + noise.kappa_phi * (deph_anti - deph_sandwich);

  OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dydt) {
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXcd> out(dydt.data(), dim, dim);
    if (options.include_drive) {
      const ControlValues c = controls(t);
      const Eigen::MatrixXcd h = hamiltonian.at(c.e_j, c.epsilon);
      out.noalias() = -kI * (h * rho);
      out.noalias() += kI * (rho * h);
    } else {
      out.noalias() = -kI * (hamiltonian.kerr() * rho);
      out.noalias() += kI * (rho * hamiltonian.kerr());
    }
    out.array() -= decay.array().cast<cplx>() * rho.array();
    if (noise.kappa > 0.0)
      out.topLeftCorner(dim - 1, dim - 1).array() +=
          noise.kappa * loss_jump.topLeftCorner(dim - 1, dim - 1).array().cast<cplx>() *
          rho.bottomRightCorner(dim - 1, dim - 1).array();
  };

  Trajectory traj;
  traj.full_space = true;
  DensityRecorder recorder(traj, &basis.c_plus.amplitudes(), &basis.c_minus.amplitudes());
  const Eigen::MatrixXcd& r0 = rho0.matrix();
  ComplexVector y(r0.data(), r0.data() + r0.size());
  integrate_observed(rhs, y, grid.times(), grid.integrator_options(), [&](double t, const ComplexVector& state) {
    recorder.record(t, Eigen::Map<const Eigen::MatrixXcd>(state.data(), dim, dim));
  });
  recorder.check();
  return traj;
}

Eigen::Matrix2cd cat_sigma_x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Eigen::Matrix2cd cat_sigma_y() {
  // i(sigma_- - sigma_+), sigma_- = |C-><C+| sits at (0, 1).
  Eigen::Matrix2cd m;
  m << 0.0, kI, -kI, 0.0;
  return m;
}

Eigen::Matrix2cd cat_sigma_z() {
  // |C+><C+| - |C-><C-|
  Eigen::Matrix2cd m;
  m << -1.0, 0.0, 0.0, 1.0;
  return m;
}

EffectiveChannel effective_channel(cplx alpha, const NoiseParams& noise, ChannelMode mode) {
  noise.validate();
  const double n2 = std::norm(alpha);
  EffectiveChannel ch;
  ch.a = std::tanh(n2);
  const double a = ch.a;
  const double amp = std::sqrt(noise.kappa * n2);
  if (mode == ChannelMode::bitflip_only) {
    ch.loss = amp * cat_sigma_x();
    ch.dephasing.setZero();
    return ch;
  }
  ch.loss = amp * (0.5 * (a + 1.0 / a) * cat_sigma_x() + 0.5 * (a - 1.0 / a) * cat_sigma_y());
  ch.dephasing = std::sqrt(noise.kappa_phi) * n2 *
                 (0.5 * (a * a + 1.0 / (a * a)) * Eigen::Matrix2cd::Identity() -
                  0.5 * (a * a - 1.0 / (a * a)) * cat_sigma_z());
  return ch;
}

Trajectory effective_lindblad_propagate(const PulseSchedule& schedule, cplx alpha, const NoiseParams& noise,
                                        const Eigen::Matrix2cd& rho0, const TimeGrid& grid, ChannelMode mode) {
  grid.validate();
  const DensityMatrix checked{Eigen::MatrixXcd(rho0)};
  const EffectiveChannel ch = effective_channel(alpha, noise, mode);
  const ScheduleInterpolant controls(schedule);

  OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dydt) {
    const ControlValues c = controls(t);
    Eigen::Matrix2cd rho;
    rho << y[0], y[2], y[1], y[3];
    const Eigen::Matrix2cd h = effective_hamiltonian(c.delta, cplx{c.omega_re, c.omega_im});
    Eigen::Matrix2cd d = -kI * (h * rho - rho * h);
    add_dissipator(ch.loss, rho, d);
    if (mode == ChannelMode::full_channel) add_dissipator(ch.dephasing, rho, d);
    dydt[0] = d(0, 0);
    dydt[1] = d(1, 0);
    dydt[2] = d(0, 1);
    dydt[3] = d(1, 1);
  };

  Trajectory traj;
  DensityRecorder recorder(traj, nullptr, nullptr);
  const Eigen::MatrixXcd& r0 = checked.matrix();
  ComplexVector y(r0.data(), r0.data() + 4);
  integrate_observed(rhs, y, grid.times(), grid.integrator_options(), [&](double t, const ComplexVector& state) {
    Eigen::MatrixXcd rho(2, 2);
    rho << state[0], state[2], state[1], state[3];
    recorder.record(t, std::move(rho));
  });
  recorder.check();
  return traj;
}

RenormalizedPopulations renormalized_populations(const Trajectory& traj) {
  RenormalizedPopulations out;
  out.p_plus.resize(traj.size());
  out.p_minus.resize(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double ps = traj.p_plus[k] + traj.p_minus[k];
    if (!(ps > 1e-12))
      fail(Errc::undefined_renormalization, fmt::format("P+ + P- = {:.3e} at t = {:.6g}", ps, traj.times[k]));
    out.p_plus[k] = traj.p_plus[k] / ps;
    out.p_minus[k] = traj.p_minus[k] / ps;
  }
  return out;
}

SweepResult decoherence_sweep(const ProtocolSpec& spec, const std::vector<double>& t_f_values,
                              const std::vector<double>& kappa_values, const NoiseParams& noise_base, Model model,
                              const PhysicalSetup& setup, int workers) {
  if (t_f_values.empty() || kappa_values.empty()) fail(Errc::invalid_argument, "sweep axes must be nonempty");
  if (model != Model::lindblad_full && model != Model::lindblad_effective)
    fail(Errc::invalid_argument, "decoherence sweep needs a master-equation model");
  noise_base.validate();
  for (double k : kappa_values) NoiseParams{k, noise_base.kappa_phi}.validate();

  const Simulator sim(setup);
  SweepResult r;
  r.axis1 = {"t_f", t_f_values};
  r.axis2 = {"kappa", kappa_values};
  const std::size_t rows = t_f_values.size(), cols = kappa_values.size();
  r.p_minus_final = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols),
                                              std::numeric_limits<double>::quiet_NaN());
  r.cell_errors.assign(rows * cols, {});

  // One schedule per t_f, shared by that row's cells.
  std::vector<PulseSchedule> schedules(rows);
  std::vector<std::string> design_errors(rows);
  parallel_for(
      rows,
      [&](std::size_t i) {
        try {
          ProtocolSpec cell = spec;
          cell.t_f = t_f_values[i];
          schedules[i] = sim.prepare(cell);
        } catch (const std::exception& e) {
          design_errors[i] = e.what();
        }
      },
      workers);

  parallel_for(
      rows * cols,
      [&](std::size_t idx) {
        const std::size_t i = idx / cols, j = idx % cols;
        if (!design_errors[i].empty()) {
          r.cell_errors[idx] = "design: " + design_errors[i];
          return;
        }
        try {
          const NoiseParams noise{kappa_values[j], noise_base.kappa_phi};
          const Trajectory traj = sim.run(schedules[i], model, {}, noise);
          r.p_minus_final(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = traj.final_p_minus();
        } catch (const std::exception& e) {
          r.cell_errors[idx] = e.what();
        }
      },
      workers);

  r.metadata = {
      {"sweep", "decoherence"},
      {"protocol", to_string(spec.kind)},
      {"n", std::to_string(spec.n)},
      {"samples", std::to_string(spec.samples)},
      {"alpha", format_number(std::abs(setup.alpha))},
      {"model", to_string(model)},
      {"dim", model == Model::lindblad_full ? std::to_string(setup.lindblad_dim) : "2"},
      {"kappa_phi", format_number(noise_base.kappa_phi)},
      {"channel", setup.effective_full_channel ? "full-channel" : "bitflip-only"},
      {"output_points", std::to_string(setup.output_points)},
      {"tolerance", format_number(setup.tolerance)},
  };
  return r;
}

}  // namespace kerrcat
