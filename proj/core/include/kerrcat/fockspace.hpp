#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace kerrcat {

using cplx = std::complex<double>;

/// Dense complex square matrix on a truncated Fock space {|0>, ..., |dim-1>}.
class FockOperator {
 public:
  FockOperator() = default;
  explicit FockOperator(Eigen::MatrixXcd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  cplx operator()(int row, int col) const { return entries_(row, col); }

  FockOperator adjoint() const { return FockOperator(entries_.adjoint()); }

  /// max |H - H^dagger| entry
  double hermiticity_defect() const;
  /// max |U^dagger U - 1| entry
  double unitarity_defect() const;

  friend FockOperator operator*(const FockOperator& x, const FockOperator& y) {
    return FockOperator(x.entries_ * y.entries_);
  }

 private:
  Eigen::MatrixXcd entries_;
};

/// Pure state on the truncated Fock space.
class FockState {
 public:
  FockState() = default;
  explicit FockState(Eigen::VectorXcd amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  cplx operator[](int n) const { return amplitudes_(n); }
  double norm() const { return amplitudes_.norm(); }

  /// <this|other>
  cplx inner(const FockState& other) const;

 private:
  Eigen::VectorXcd amplitudes_;
};

struct LadderOperators {
  FockOperator a;
  FockOperator a_dag;
};

/// a|n> = sqrt(n)|n-1>. Throws Errc::invalid_dimension for dim < 2.
LadderOperators ladder_ops(int dim);

/// exp(alpha a^dagger - alpha* a) by scaling-and-squaring. Warns when the
/// truncated D|0> column loses more than 1e-8 of its norm.
FockOperator displacement(int dim, cplx alpha);

struct CoherentState {
  FockState state;
  /// 1 - sum_{n<dim} |<n|alpha>|^2, i.e. the norm lost to truncation
  /// before renormalization.
  double truncation_loss = 0.0;
};

/// |alpha> with amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!), renormalized.
CoherentState coherent_state(int dim, cplx alpha);

/// Even/odd cat states and the matrix elements the control calibration needs.
struct CatBasis {
  cplx alpha;
  int dim = 0;
  FockState c_plus;
  FockState c_minus;
  double n_plus = 0.0;
  double n_minus = 0.0;
  /// <C+|a + a^dagger|C->
  double sx_element = 0.0;
  /// <C+|M|C+> - <C-|M|C-> for the Laguerre control operator at phi_a = 2 alpha
  double m_diag_gap = 0.0;
};

CatBasis cat_basis(int dim, cplx alpha);

/// -K a^dagger^2 a^2 + P (a^dagger^2 + a^2)
FockOperator kerr_hamiltonian(int dim, double K, double P);

struct KerrSpectrum {
  std::vector<double> eigenvalues;  // ascending
  /// Mean of the top (degenerate cat) pair minus mean of the next pair.
  double gap = 0.0;
  bool converged = true;
};

/// Warns and clears `converged` when the gap moves by more than 1% between
/// dim and dim + 10.
KerrSpectrum kerr_spectrum(int dim, double K, double P);

/// Diagonal entries e^{-phi^2/2} L_n(phi^2), n = 0..dim-1.
Eigen::VectorXd laguerre_diagonal(int dim, double phi_a);

FockOperator laguerre_control_op(int dim, double phi_a);

/// (-1)^{a^dagger a}
FockOperator parity_operator(int dim);

}  // namespace kerrcat
