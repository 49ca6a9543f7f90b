#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kerrcat/dynamics.hpp"
#include "kerrcat/pulsecraft.hpp"

namespace kerrcat {

/// Fixed, locale-independent number formatting used by every CSV writer
/// (shortest round-trip representation; "nan" for failed cells).
std::string format_number(double value);

void write_csv_header(std::ostream& out, const std::vector<std::string>& columns);
void write_csv_row(std::ostream& out, std::span<const double> values);
void write_csv_metadata(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& metadata);

/// Columns t, gamma, gamma_dot, beta, beta_dot, omega_re, omega_im, delta,
/// r_plus, e_j, epsilon.
void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule);

/// Columns t, p_plus, p_minus, p_s, leakage, norm, and p_plus_r, p_minus_r
/// when `renormalized` is set.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool renormalized = false,
                          const std::vector<std::pair<std::string, std::string>>& metadata = {});

}  // namespace kerrcat
