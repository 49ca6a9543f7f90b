#include "config.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include <kerrcat/diagnostics.hpp>

namespace kerrcat::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view where, std::string_view key, const std::string& what) {
  fail(Errc::invalid_argument, fmt::format("{}: field '{}': {}", where, key, what));
}

double to_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw std::invalid_argument(fmt::format("'{}' is not a finite number", text));
  return v;
}

int to_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument(fmt::format("'{}' is not an integer", text));
  return v;
}

bool to_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument(fmt::format("'{}' is not a boolean", text));
}

}  // namespace

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = {
      {"kind", "protocol: base or optimal"},
      {"n", "optimal-protocol integer n >= 1"},
      {"t_f", "total time in 1/K"},
      {"samples", "schedule samples"},
      {"alpha", "cat amplitude (real, > 0)"},
      {"dim", "Fock truncation for pure-state runs"},
      {"lindblad_dim", "Fock truncation for master-equation runs"},
      {"K", "Kerr strength (energy unit)"},
      {"k_mhz", "K in rad/us for physical-unit reports"},
      {"calibration", "exact or approx"},
      {"model", "effective, full, lindblad-full or lindblad-effective"},
      {"kappa", "single-photon loss rate in K"},
      {"kappa_phi", "pure dephasing rate in K"},
      {"mu", "fractional epsilon error"},
      {"nu", "fractional E_J error"},
      {"channel", "two-level channel: full or bitflip"},
      {"undriven", "master equation with H_Kerr only"},
      {"output_points", "trajectory output samples"},
      {"tolerance", "integrator relative tolerance"},
      {"renormalized", "add p_plus_r, p_minus_r columns"},
      {"output", "output file (or directory for figure)"},
      {"sweep", "robustness or decoherence"},
      {"mu_values", "sweep axis: list or start:stop:step"},
      {"nu_values", "sweep axis: list or start:stop:step"},
      {"t_f_values", "sweep axis: list or start:stop:step"},
      {"kappa_values", "sweep axis: list or start:stop:step"},
      {"threads", "worker threads, 0 = auto"},
  };
  return keys;
}

std::vector<double> parse_list(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.empty()) throw std::invalid_argument("empty list");
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw std::invalid_argument("range needs start:stop:step");
    const double start = to_double(text.substr(0, a));
    const double stop = to_double(text.substr(a + 1, b - a - 1));
    const double step = to_double(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw std::invalid_argument("range has more than 100000 points");
    // 12 significant digits drops the accumulated k * step rounding
    for (long k = 0; k < count; ++k) {
      const double v = start + static_cast<double>(k) * step;
      out.push_back(std::abs(v) < 1e-9 * step ? 0.0 : std::stod(fmt::format("{:.12g}", v)));
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(to_double(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw, std::string_view where) {
  const std::string_view value = trim(raw);
  try {
    if (key == "kind") {
      if (value == "base") c.protocol.kind = ProtocolKind::base;
      else if (value == "optimal") c.protocol.kind = ProtocolKind::optimal;
      else throw std::invalid_argument(fmt::format("'{}' is not base or optimal", value));
    } else if (key == "n") {
      c.protocol.n = to_int(value);
    } else if (key == "t_f") {
      c.protocol.t_f = to_double(value);
    } else if (key == "samples") {
      c.protocol.samples = to_int(value);
    } else if (key == "alpha") {
      c.setup.alpha = to_double(value);
      c.protocol.alpha = c.setup.alpha;
    } else if (key == "dim") {
      c.setup.dim = to_int(value);
    } else if (key == "lindblad_dim") {
      c.setup.lindblad_dim = to_int(value);
    } else if (key == "K") {
      c.setup.K = to_double(value);
    } else if (key == "k_mhz") {
      c.k_mhz = to_double(value);
    } else if (key == "calibration") {
      if (value == "exact") c.setup.calibration = CalibrationMode::exact_projection;
      else if (value == "approx") c.setup.calibration = CalibrationMode::approximate;
      else throw std::invalid_argument(fmt::format("'{}' is not exact or approx", value));
    } else if (key == "model") {
      const auto m = parse_model(value);
      if (!m) throw std::invalid_argument(fmt::format("unknown model '{}'", value));
      c.model = *m;
    } else if (key == "kappa") {
      c.noise.kappa = to_double(value);
    } else if (key == "kappa_phi") {
      c.noise.kappa_phi = to_double(value);
    } else if (key == "mu") {
      c.error.mu = to_double(value);
    } else if (key == "nu") {
      c.error.nu = to_double(value);
    } else if (key == "channel") {
      if (value == "full") c.setup.effective_full_channel = true;
      else if (value == "bitflip") c.setup.effective_full_channel = false;
      else throw std::invalid_argument(fmt::format("'{}' is not full or bitflip", value));
    } else if (key == "undriven") {
      c.setup.undriven_master_equation = to_bool(value);
    } else if (key == "output_points") {
      c.setup.output_points = to_int(value);
    } else if (key == "tolerance") {
      c.setup.tolerance = to_double(value);
    } else if (key == "renormalized") {
      c.renormalized = to_bool(value);
    } else if (key == "output") {
      c.output = std::string(value);
    } else if (key == "sweep") {
      if (value != "robustness" && value != "decoherence")
        throw std::invalid_argument(fmt::format("'{}' is not robustness or decoherence", value));
      c.sweep = std::string(value);
    } else if (key == "mu_values") {
      c.mu_values = parse_list(value);
    } else if (key == "nu_values") {
      c.nu_values = parse_list(value);
    } else if (key == "t_f_values") {
      c.t_f_values = parse_list(value);
    } else if (key == "kappa_values") {
      c.kappa_values = parse_list(value);
    } else if (key == "threads") {
      c.threads = to_int(value);
    } else {
      fail(Errc::invalid_argument, fmt::format("{}: unknown key '{}'", where, key));
    }
  } catch (const std::invalid_argument& e) {
    bad(where, key, e.what());
  }
  c.explicit_keys.emplace(key);
}

void RunConfig::validate() const {
  auto check = [](std::string_view key, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      fail(e.code(), fmt::format("field '{}': {}", key, e.detail()));
    }
  };
  check("protocol", [&] { protocol.validate(); });
  check("setup", [&] { setup.validate(); });
  check("noise", [&] { noise.validate(); });
  check("error", [&] { error.validate(); });
  if (!(std::abs(setup.alpha) > 0.0) || setup.alpha.real() <= 0.0)
    fail(Errc::invalid_argument, "field 'alpha': must be > 0");
  if (k_mhz && !(*k_mhz > 0.0)) fail(Errc::invalid_argument, "field 'k_mhz': must be > 0");
  if (threads < 0) fail(Errc::invalid_argument, "field 'threads': must be >= 0");
  check("mu_values", [&] { for (double v : mu_values) ErrorModel{v, 0.0}.validate(); });
  check("nu_values", [&] { for (double v : nu_values) ErrorModel{0.0, v}.validate(); });
  for (double v : t_f_values)
    if (!(v > 0.0)) fail(Errc::invalid_argument, fmt::format("field 't_f_values': {} must be > 0", v));
  check("kappa_values", [&] { for (double v : kappa_values) NoiseParams{v, 0.0}.validate(); });
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  RunConfig c;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = fmt::format("{}:{}", source, line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(Errc::invalid_argument, fmt::format("{}: expected key=value", where));
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) fail(Errc::invalid_argument, fmt::format("{}: missing key", where));
    if (c.is_set(key)) fail(Errc::invalid_argument, fmt::format("{}: field '{}' set twice", where, key));
    apply_setting(c, key, line.substr(eq + 1), where);
  }
  c.validate();
  return c;
}

}  // namespace kerrcat::cli
