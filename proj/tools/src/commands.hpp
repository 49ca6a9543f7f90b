#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace kerrcat::cli {

inline constexpr const char* kFigureIds[] = {"fig2", "fig3", "fig4", "fig6", "fig7", "fig8", "bench9"};

/// 1 for validation errors, 2 for numerical failures and anything else.
int exit_code_for(const std::exception& e);

/// Each command writes CSV to config.output (stdout when empty) and returns
/// the process exit code. Numerical failures propagate as kerrcat::Error.
int run_design(const RunConfig& config, std::ostream& stdout_sink);
int run_evolve(const RunConfig& config, std::ostream& stdout_sink);
int run_sweep(const RunConfig& config, std::ostream& stdout_sink);
int run_spectrum(const RunConfig& config, std::ostream& stdout_sink);

struct PresetReport {
  std::vector<std::string> files;
  /// "<file> <cell>: <message>" for every failed sweep cell
  std::vector<std::string> failures;
};

/// Writes the preset's CSV files into `directory`. Keys set explicitly in
/// the config override the preset's own parameters.
PresetReport run_figure_preset(std::string_view id, const RunConfig& config, const std::string& directory);

}  // namespace kerrcat::cli
