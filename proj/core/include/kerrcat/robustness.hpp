#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kerrcat/pulsecraft.hpp"
#include "kerrcat/setup.hpp"

namespace kerrcat {

/// Fractional systematic errors: epsilon -> (1 + mu) epsilon, E_J -> (1 + nu) E_J.
struct ErrorModel {
  double mu = 0.0;
  double nu = 0.0;

  void validate() const;
};

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// Rectangular grid of terminal P- values. Row index follows axis1, column
/// index axis2. Failed cells hold NaN and a message in cell_errors.
struct SweepResult {
  SweepAxis axis1;
  SweepAxis axis2;
  Eigen::MatrixXd p_minus_final;
  std::vector<std::string> cell_errors;  // row-major, empty when the cell succeeded
  std::vector<std::pair<std::string, std::string>> metadata;

  double at(std::size_t i, std::size_t j) const { return p_minus_final(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  const std::string& error_at(std::size_t i, std::size_t j) const { return cell_errors[i * axis2.values.size() + j]; }
  std::size_t failed_cells() const;
};

/// Long-format CSV: `# key: value` metadata lines, then a header
/// `<axis1>,<axis2>,p_minus` and one row per cell in index order.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Scales omega (both parts) and epsilon by 1 + mu, delta and e_j by 1 + nu.
PulseSchedule apply_error(const PulseSchedule& schedule, const ErrorModel& err);

struct SensitivityIntegral {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Systematic-error sensitivity by quadrature over the sampled schedule.
///   base:    (1/4) | int e^{2i th} W_R (-cos^2(g/2) e^{2ib} + sin^2(g/2)) dt |^2
///   optimal: | int e^{2iR+} g' sin^2 g dt |^2
/// with th = eigenstate_phase(schedule). The optimal form is the same for
/// either sign of the phase.
/// Throws Errc::quadrature when the Richardson error estimate exceeds 1e-8.
SensitivityIntegral qs_quadrature_detailed(const PulseSchedule& schedule, ProtocolKind kind);
double qs_quadrature(const PulseSchedule& schedule, ProtocolKind kind);

/// sin^2(n pi) / (4 n^2), pi^2/4 at n = 0, exactly 0 for positive integers.
double qs_analytic(double n);

/// Central second difference (P(0) - (P(+mu) + P(-mu))/2) / mu^2 of the
/// terminal P- from three propagations. mu_step must lie in [1e-3, 0.1] and
/// model must be effective or full.
double qs_finite_difference(const ProtocolSpec& spec, double mu_step, Model model, const PhysicalSetup& setup = {});

/// One propagation per (mu, nu) cell, cells evaluated concurrently and
/// gathered by index. Per-cell failures are recorded, not thrown.
SweepResult robustness_sweep(const ProtocolSpec& spec, const std::vector<double>& mu_values,
                             const std::vector<double>& nu_values, Model model, const PhysicalSetup& setup = {},
                             int workers = 0);

}  // namespace kerrcat
