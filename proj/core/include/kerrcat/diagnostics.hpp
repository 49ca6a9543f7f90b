#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kerrcat {

enum class Errc {
  invalid_argument,
  invalid_dimension,
  dimension_mismatch,
  uncalibrated_schedule,
  internal_consistency,
  singular_system,
  endpoint_limit,
  branch_selection,
  degenerate_calibration,
  overflow,
  quadrature,
  stiffness,
  integrator_failure,
  undefined_renormalization,
};

/// Library-wide exception. Validation codes map to CLI exit status 1,
/// everything else is a numerical failure (exit status 2).
class Error : public std::runtime_error {
 public:
  /// what() is "<code>: <detail>"
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  bool is_validation() const noexcept;

 private:
  Errc code_;
  std::string detail_;
};

const char* to_string(Errc code) noexcept;

[[noreturn]] void fail(Errc code, const std::string& what);

using WarningHandler = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink and returns the previous one.
/// The default sink writes "warning: <msg>" to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

/// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace kerrcat
