#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kerrcat/fockspace.hpp"
#include "kerrcat/integrator.hpp"
#include "kerrcat/interpolation.hpp"
#include "kerrcat/pulsecraft.hpp"

namespace kerrcat {

/// Output grid and integrator tolerance for one propagation. Times in 1/K.
struct TimeGrid {
  double t0 = 0.0;
  double t_f = 5.0;
  int output_points = 201;
  /// relative tolerance of the adaptive integrator
  double tolerance = 1e-10;

  void validate() const;
  std::vector<double> times() const;
  IntegratorOptions integrator_options() const;

  /// Grid spanning a schedule.
  static TimeGrid covering(const PulseSchedule& schedule, int output_points = 201, double tolerance = 1e-10);
};

/// Time-ordered states with derived populations. Two-level states are
/// ordered (|C->, |C+>).
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;     // pure-state runs
  std::vector<Eigen::MatrixXcd> densities;  // master-equation runs
  std::vector<double> norms;                // |psi| or tr(rho)
  std::vector<double> p_plus;
  std::vector<double> p_minus;
  std::vector<double> leakage;              // 1 - P+ - P-, zero for two-level runs
  bool full_space = false;

  // Master-equation health, filled by the density-matrix propagators.
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;

  std::size_t size() const { return times.size(); }
  double max_norm_drift() const;
  double final_p_minus() const { return p_minus.back(); }
};

/// Interpolated control values at arbitrary t.
struct ControlValues {
  double omega_re = 0.0;
  double omega_im = 0.0;
  double delta = 0.0;
  double e_j = 0.0;
  double epsilon = 0.0;
};

/// Cubic-spline view of a uniformly sampled schedule.
class ScheduleInterpolant {
 public:
  explicit ScheduleInterpolant(const PulseSchedule& schedule);

  ControlValues operator()(double t) const;
  bool calibrated() const { return calibrated_; }

 private:
  UniformCubicSpline omega_re_, omega_im_, delta_, e_j_, epsilon_;
  bool calibrated_ = false;
};

/// (1/2) [[Delta, Re W - i Im W], [Re W + i Im W, -Delta]] in (|C->, |C+>).
Eigen::Matrix2cd effective_hamiltonian(double delta, cplx omega);

/// Integrates i psi' = H_eff(t) psi. Throws Errc::integrator_failure when the
/// norm drifts by more than 1e-6.
Trajectory propagate_effective(const PulseSchedule& schedule, const Eigen::Vector2cd& psi0, const TimeGrid& grid);

/// Kerr oscillator plus the calibrated control terms. Precomputes the
/// time-independent pieces so evaluation at t is a pair of axpy's.
class FullHamiltonian {
 public:
  FullHamiltonian(const CatBasis& basis, double K, double P, double phi_a);

  /// H_Kerr + e_j M(phi_a) + epsilon (a + a^dagger)
  Eigen::MatrixXcd at(double e_j, double epsilon) const;

  const Eigen::MatrixXcd& kerr() const { return kerr_; }
  const Eigen::VectorXd& control_diagonal() const { return control_diag_; }
  const Eigen::MatrixXcd& quadrature() const { return quadrature_; }
  int dim() const { return static_cast<int>(kerr_.rows()); }

 private:
  Eigen::MatrixXcd kerr_;
  Eigen::VectorXd control_diag_;
  Eigen::MatrixXcd quadrature_;
};

/// phi_a <= 0 selects the default 2|alpha|.
FockOperator full_hamiltonian_at(double t, const PulseSchedule& schedule, const CatBasis& basis, double K, double P,
                                 double phi_a = 0.0);

/// Integrates the Schroedinger equation of the full truncated Fock-space
/// Hamiltonian. Warns when the drives leave the E_J, epsilon << gap regime
/// (max drive > gap / 5); throws Errc::integrator_failure on norm drift > 1e-6.
Trajectory propagate_full(const PulseSchedule& schedule, const CatBasis& basis, double K, double P,
                          const FockState& psi0, const TimeGrid& grid, double phi_a = 0.0);

/// Eigenstates of the invariant with eigenvalues +1/2 and -1/2.
std::pair<Eigen::Vector2cd, Eigen::Vector2cd> invariant_eigenstates(double gamma, double beta);

/// Phase carried by the + eigenstate along the exact evolution in the gauge of
/// invariant_eigenstates: -R+ - (beta - beta(0)) / 2. The second term is the
/// geometric part that schedule.r_plus leaves out.
std::vector<double> eigenstate_phase(const PulseSchedule& schedule);

/// (1/2)[[cos g, sin g e^{ib}], [sin g e^{-ib}, -cos g]]
Eigen::Matrix2cd invariant_matrix(double gamma, double beta);

/// max over the schedule grid of || i dI/dt - [H_eff, I] ||_F, with dI/dt
/// built from the sampled gamma_dot and beta_dot.
double invariant_residual(const PulseSchedule& schedule);

struct Populations {
  std::vector<double> p_plus;
  std::vector<double> p_minus;
  std::vector<double> p_s;
};

/// Recomputes P+, P-, P+ + P- from the stored states. Throws
/// Errc::dimension_mismatch when the states do not live in the basis' space.
Populations populations(const Trajectory& trajectory, const CatBasis& basis);

/// Column order of the trajectory CSV; renormalized columns are appended
/// when requested.
std::vector<std::string> trajectory_csv_columns(bool renormalized);

}  // namespace kerrcat
