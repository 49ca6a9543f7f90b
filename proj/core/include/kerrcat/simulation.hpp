#pragma once

#include "kerrcat/dynamics.hpp"
#include "kerrcat/openquantum.hpp"
#include "kerrcat/robustness.hpp"
#include "kerrcat/setup.hpp"

namespace kerrcat {

/// Runs one protocol from |C+> under any model. Holds the cat bases for
/// both truncations; immutable after construction and safe to share across
/// sweep workers.
class Simulator {
 public:
  explicit Simulator(PhysicalSetup setup = {});

  const PhysicalSetup& setup() const { return setup_; }
  const CatBasis& basis() const { return basis_; }
  const CatBasis& lindblad_basis() const { return lindblad_basis_; }
  const CatBasis& basis_for(Model model) const;

  /// Designs the schedule and calibrates e_j / epsilon against basis().
  PulseSchedule prepare(const ProtocolSpec& spec) const;

  /// Applies `error` to the calibrated schedule and propagates. Noise is
  /// ignored by the Schroedinger-equation models.
  Trajectory run(const PulseSchedule& calibrated, Model model, const ErrorModel& error = {},
                 const NoiseParams& noise = {}) const;

  TimeGrid grid_for(const PulseSchedule& schedule) const;

 private:
  PhysicalSetup setup_;
  CatBasis basis_;
  CatBasis lindblad_basis_;
};

}  // namespace kerrcat
