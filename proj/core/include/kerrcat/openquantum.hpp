#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kerrcat/dynamics.hpp"
#include "kerrcat/robustness.hpp"
#include "kerrcat/setup.hpp"

namespace kerrcat {

/// Single-photon loss and pure dephasing rates, units of K.
struct NoiseParams {
  double kappa = 0.0;
  double kappa_phi = 0.0;

  void validate() const;
  bool is_zero() const { return kappa == 0.0 && kappa_phi == 0.0; }
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

struct LindbladOptions {
  /// false integrates the literal undriven equation with H_Kerr only
  bool include_drive = true;
  /// <= 0 selects 2|alpha|
  double phi_a = 0.0;
};

/// rho' = -i[H(t), rho] + kappa D[a] rho + kappa_phi D[a^dagger a] rho on the
/// truncated Fock space, D[o] rho = o rho o^dagger - {o^dagger o, rho}/2.
/// Throws Errc::integrator_failure on trace drift or negativity beyond 1e-6.
Trajectory lindblad_propagate(const PulseSchedule& schedule, const CatBasis& basis, double K, double P,
                              const NoiseParams& noise, const DensityMatrix& rho0, const TimeGrid& grid,
                              const LindbladOptions& options = {});

enum class ChannelMode { full_channel, bitflip_only };

/// Jump operators of the cat-subspace projection in the (|C->, |C+>) basis.
struct EffectiveChannel {
  Eigen::Matrix2cd loss;       // sqrt(kappa)|alpha| ((A + 1/A)/2 sx + (A - 1/A)/2 sy)
  Eigen::Matrix2cd dephasing;  // sqrt(kappa_phi)|alpha|^2 ((A^2 + A^-2)/2 1 - (A^2 - A^-2)/2 sz)
  double a = 0.0;              // tanh |alpha|^2
};

/// Pauli matrices built from the cat states (sigma_+ = |C+><C-|), written in
/// the (|C->, |C+>) ordering.
Eigen::Matrix2cd cat_sigma_x();
Eigen::Matrix2cd cat_sigma_y();
Eigen::Matrix2cd cat_sigma_z();

EffectiveChannel effective_channel(cplx alpha, const NoiseParams& noise, ChannelMode mode);

Trajectory effective_lindblad_propagate(const PulseSchedule& schedule, cplx alpha, const NoiseParams& noise,
                                        const Eigen::Matrix2cd& rho0, const TimeGrid& grid, ChannelMode mode);

struct RenormalizedPopulations {
  std::vector<double> p_plus;
  std::vector<double> p_minus;
};

/// P+/(P+ + P-), P-/(P+ + P-). Throws Errc::undefined_renormalization when
/// P+ + P- <= 1e-12 at any output time.
RenormalizedPopulations renormalized_populations(const Trajectory& trajectory);

/// Redesigns the schedule at every t_f (spec.t_f is ignored) and records
/// P-(t_f) for every (t_f, kappa), kappa_phi taken from noise_base. model must
/// be one of the master-equation models.
SweepResult decoherence_sweep(const ProtocolSpec& spec, const std::vector<double>& t_f_values,
                              const std::vector<double>& kappa_values, const NoiseParams& noise_base, Model model,
                              const PhysicalSetup& setup = {}, int workers = 0);

}  // namespace kerrcat
