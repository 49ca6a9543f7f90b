#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <kerrcat/openquantum.hpp>
#include <kerrcat/pulsecraft.hpp>
#include <kerrcat/robustness.hpp>
#include <kerrcat/setup.hpp>

namespace kerrcat::cli {

struct RunConfig {
  ProtocolSpec protocol;
  PhysicalSetup setup;
  NoiseParams noise;
  ErrorModel error;
  Model model = Model::full;
  /// file for single outputs, directory for figure presets; empty is stdout / "."
  std::string output;
  bool renormalized = false;
  /// K in rad/us (2 pi times K/2pi in MHz); only used for physical-unit reports
  std::optional<double> k_mhz;
  std::string sweep = "robustness";
  std::vector<double> mu_values{0.0};
  std::vector<double> nu_values{0.0};
  std::vector<double> t_f_values{5.0};
  std::vector<double> kappa_values{0.0};
  int threads = 0;

  /// keys assigned by a document or a flag, in contrast to defaults
  std::set<std::string, std::less<>> explicit_keys;

  bool is_set(std::string_view key) const { return explicit_keys.contains(key); }
  void validate() const;
};

struct KeyInfo {
  const char* name;
  const char* help;
};

/// Every accepted key, in documentation order.
const std::vector<KeyInfo>& config_keys();

/// Applies one key=value pair. `where` prefixes diagnostics (e.g. "run.cfg:4").
void apply_setting(RunConfig& config, std::string_view key, std::string_view value, std::string_view where);

/// Flat key=value lines; `#` starts a comment, blank lines are ignored.
/// Throws kerrcat::Error with a line/field diagnostic on unknown keys or bad
/// values, then validates the result.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// "a,b,c" or "start:stop:step" (inclusive of stop within 1e-9 step).
std::vector<double> parse_list(std::string_view text);

}  // namespace kerrcat::cli
