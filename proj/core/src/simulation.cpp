#include "kerrcat/simulation.hpp"

#include <fmt/format.h>

#include "kerrcat/diagnostics.hpp"

namespace kerrcat {

const char* to_string(Model model) {
  switch (model) {
    case Model::effective: return "effective";
    case Model::full: return "full";
    case Model::lindblad_full: return "lindblad-full";
    case Model::lindblad_effective: return "lindblad-effective";
  }
  return "unknown";
}

std::optional<Model> parse_model(std::string_view name) {
  for (Model m : {Model::effective, Model::full, Model::lindblad_full, Model::lindblad_effective})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

void PhysicalSetup::validate() const {
  if (!(std::abs(alpha) > 0.0) || !std::isfinite(std::abs(alpha)))
    fail(Errc::invalid_argument, fmt::format("alpha = {} must be nonzero and finite", std::abs(alpha)));
  if (dim < 2) fail(Errc::invalid_dimension, fmt::format("dim = {} must be >= 2", dim));
  if (lindblad_dim < 2) fail(Errc::invalid_dimension, fmt::format("lindblad_dim = {} must be >= 2", lindblad_dim));
  if (!(K > 0.0) || !std::isfinite(K)) fail(Errc::invalid_argument, fmt::format("K = {} must be positive", K));
  if (output_points < 2) fail(Errc::invalid_argument, fmt::format("output_points = {} must be >= 2", output_points));
  if (!(tolerance > 0.0 && tolerance < 1e-3))
    fail(Errc::invalid_argument, fmt::format("tolerance = {} must lie in (0, 1e-3)", tolerance));
}

namespace {

PhysicalSetup checked(PhysicalSetup s) {
  s.validate();
  return s;
}

}  // namespace

Simulator::Simulator(PhysicalSetup setup)
    : setup_(checked(setup)),
      basis_(cat_basis(setup_.dim, setup_.alpha)),
      lindblad_basis_(cat_basis(setup_.lindblad_dim, setup_.alpha)) {}

const CatBasis& Simulator::basis_for(Model model) const {
  return model == Model::lindblad_full ? lindblad_basis_ : basis_;
}

PulseSchedule Simulator::prepare(const ProtocolSpec& spec) const {
  ProtocolSpec s = spec;
  s.alpha = setup_.alpha;
  return calibrate_physical(design_schedule(s), basis_, setup_.calibration);
}

TimeGrid Simulator::grid_for(const PulseSchedule& schedule) const {
  return TimeGrid::covering(schedule, setup_.output_points, setup_.tolerance);
}

Trajectory Simulator::run(const PulseSchedule& calibrated, Model model, const ErrorModel& error,
                          const NoiseParams& noise) const {
  const TimeGrid grid = grid_for(calibrated);
  switch (model) {
    case Model::effective:
      return propagate_effective(apply_error(calibrated, error), Eigen::Vector2cd(0.0, 1.0), grid);
    case Model::full:
      if (!calibrated.calibrated) fail(Errc::uncalibrated_schedule, "full model needs a calibrated schedule");
      return propagate_full(apply_error(calibrated, error), basis_, setup_.K, setup_.P(), basis_.c_plus, grid);
    case Model::lindblad_full: {
      const PulseSchedule local = calibrate_physical(calibrated, lindblad_basis_, setup_.calibration);
      LindbladOptions options;
      options.include_drive = !setup_.undriven_master_equation;
      return lindblad_propagate(apply_error(local, error), lindblad_basis_, setup_.K, setup_.P(), noise,
                                DensityMatrix::pure(lindblad_basis_.c_plus.amplitudes()), grid, options);
    }
    case Model::lindblad_effective: {
      Eigen::Matrix2cd rho0 = Eigen::Matrix2cd::Zero();
      rho0(1, 1) = 1.0;
      return effective_lindblad_propagate(
          apply_error(calibrated, error), setup_.alpha, noise, rho0, grid,
          setup_.effective_full_channel ? ChannelMode::full_channel : ChannelMode::bitflip_only);
    }
  }
  fail(Errc::invalid_argument, "unknown model");
}

}  // namespace kerrcat
