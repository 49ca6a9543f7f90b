#include "kerrcat/csv.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "kerrcat/diagnostics.hpp"
#include "kerrcat/openquantum.hpp"

namespace kerrcat {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{}", value);
}

void write_csv_header(std::ostream& out, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_number(values[i]);
  out << '\n';
}

void write_csv_metadata(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
}

void write_schedule_csv(std::ostream& out, const PulseSchedule& s) {
  write_csv_header(out, schedule_csv_columns());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double row[] = {s.times[k],    s.gamma[k], s.gamma_dot[k], s.beta[k], s.beta_dot[k], s.omega_re[k],
                          s.omega_im[k], s.delta[k], s.r_plus[k],    s.e_j[k],  s.epsilon[k]};
    write_csv_row(out, row);
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool renormalized,
                          const std::vector<std::pair<std::string, std::string>>& metadata) {
  write_csv_metadata(out, metadata);
  write_csv_header(out, trajectory_csv_columns(renormalized));
  RenormalizedPopulations renorm;
  if (renormalized) renorm = renormalized_populations(traj);
  std::vector<double> row;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    row = {traj.times[k], traj.p_plus[k], traj.p_minus[k], traj.p_plus[k] + traj.p_minus[k], traj.leakage[k],
           traj.norms[k]};
    if (renormalized) {
      row.push_back(renorm.p_plus[k]);
      row.push_back(renorm.p_minus[k]);
    }
    write_csv_row(out, row);
  }
}

}  // namespace kerrcat
