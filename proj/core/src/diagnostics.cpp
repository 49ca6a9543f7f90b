#include "kerrcat/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace kerrcat {

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

bool Error::is_validation() const noexcept {
  switch (code_) {
    case Errc::invalid_argument:
    case Errc::invalid_dimension:
    case Errc::dimension_mismatch:
    case Errc::uncalibrated_schedule:
      return true;
    default:
      return false;
  }
}

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_dimension: return "invalid dimension";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::uncalibrated_schedule: return "uncalibrated schedule";
    case Errc::internal_consistency: return "internal consistency";
    case Errc::singular_system: return "singular system";
    case Errc::endpoint_limit: return "endpoint limit failure";
    case Errc::branch_selection: return "branch selection";
    case Errc::degenerate_calibration: return "degenerate calibration";
    case Errc::overflow: return "overflow";
    case Errc::quadrature: return "quadrature";
    case Errc::stiffness: return "stiffness";
    case Errc::integrator_failure: return "integrator failure";
    case Errc::undefined_renormalization: return "undefined renormalization";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  WarningHandler previous = std::move(handler_slot());
  handler_slot() = std::move(handler);
  return previous;
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (handler_slot()) handler_slot()(message);
}

WarningCapture::WarningCapture() {
  previous_ = set_warning_handler([this](std::string_view msg) { messages_.emplace_back(msg); });
}

WarningCapture::~WarningCapture() { set_warning_handler(std::move(previous_)); }

bool WarningCapture::contains(std::string_view needle) const {
  for (const auto& m : messages_)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace kerrcat
