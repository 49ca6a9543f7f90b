#pragma once

#include <optional>
#include <string_view>

#include "kerrcat/fockspace.hpp"
#include "kerrcat/pulsecraft.hpp"

namespace kerrcat {

/// Which equations of motion a run integrates.
enum class Model {
  effective,           // two-level Schroedinger equation
  full,                // truncated Fock-space Schroedinger equation
  lindblad_full,       // truncated Fock-space master equation
  lindblad_effective,  // two-level master equation
};

const char* to_string(Model model);
std::optional<Model> parse_model(std::string_view name);

/// Physical and numerical settings shared by every run in a sweep. All
/// energies in units of K.
struct PhysicalSetup {
  cplx alpha = 2.0;
  /// Fock truncation for pure-state full-space runs
  int dim = 60;
  /// Fock truncation for full-space master-equation runs
  int lindblad_dim = 40;
  double K = 1.0;
  CalibrationMode calibration = CalibrationMode::exact_projection;
  int output_points = 201;
  double tolerance = 1e-10;
  /// Master equation with H_Kerr alone in the commutator (no control drive).
  bool undriven_master_equation = false;
  /// Two-level channel: true keeps the sigma_y / dephasing terms, false is
  /// the bit-flip-only reduction.
  bool effective_full_channel = true;

  /// Two-photon drive strength P = K |alpha|^2.
  double P() const { return K * std::norm(alpha); }
  void validate() const;
};

}  // namespace kerrcat
