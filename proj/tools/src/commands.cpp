#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <fmt/format.h>

#include <kerrcat/csv.hpp>
#include <kerrcat/diagnostics.hpp>
#include <kerrcat/fockspace.hpp>
#include <kerrcat/simulation.hpp>

namespace kerrcat::cli {

namespace {

using Metadata = std::vector<std::pair<std::string, std::string>>;

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) fail(Errc::invalid_argument, fmt::format("cannot open '{}' for writing", path));
      out_ = &file_;
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

Metadata run_metadata(const RunConfig& c, Model model) {
  return {
      {"protocol", to_string(c.protocol.kind)},
      {"n", std::to_string(c.protocol.n)},
      {"t_f", format_number(c.protocol.t_f)},
      {"alpha", format_number(c.setup.alpha.real())},
      {"model", to_string(model)},
      {"dim", std::to_string(model == Model::lindblad_full ? c.setup.lindblad_dim
                             : model == Model::full       ? c.setup.dim
                                                          : 2)},
      {"kappa", format_number(c.noise.kappa)},
      {"kappa_phi", format_number(c.noise.kappa_phi)},
      {"mu", format_number(c.error.mu)},
      {"nu", format_number(c.error.nu)},
  };
}

std::vector<std::string> sweep_failures(const std::string& file, const SweepResult& r) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < r.axis1.values.size(); ++i)
    for (std::size_t j = 0; j < r.axis2.values.size(); ++j)
      if (!r.error_at(i, j).empty())
        out.push_back(fmt::format("{} {}={} {}={}: {}", file, r.axis1.name, format_number(r.axis1.values[i]),
                                  r.axis2.name, format_number(r.axis2.values[j]), r.error_at(i, j)));
  return out;
}

// Preset parameter unless the user set the key.
template <class T>
T pick(const RunConfig& c, std::string_view key, const T& configured, const T& preset) {
  return c.is_set(key) ? configured : preset;
}

class PresetWriter {
 public:
  PresetWriter(std::string directory, PresetReport& report) : dir_(std::move(directory)), report_(report) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    const std::string path = (std::filesystem::path(dir_) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::invalid_argument, fmt::format("cannot open '{}' for writing", path));
    report_.files.push_back(path);
    return out;
  }

 private:
  std::string dir_;
  PresetReport& report_;
};

void write_run(PresetWriter& w, const std::string& name, const RunConfig& c, const Simulator& sim,
               const PulseSchedule& schedule, Model model, bool renormalized) {
  const Trajectory traj = sim.run(schedule, model, c.error, c.noise);
  auto out = w.open(name);
  write_trajectory_csv(out, traj, renormalized, run_metadata(c, model));
}

}  // namespace

int exit_code_for(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  return err && err->is_validation() ? 1 : 2;
}

int run_design(const RunConfig& c, std::ostream& fallback) {
  const Simulator sim(c.setup);
  const PulseSchedule schedule = sim.prepare(c.protocol);
  Sink sink(c.output, fallback);
  write_schedule_csv(*sink, schedule);
  return 0;
}

int run_evolve(const RunConfig& c, std::ostream& fallback) {
  const Simulator sim(c.setup);
  const PulseSchedule schedule = sim.prepare(c.protocol);
  const Trajectory traj = sim.run(schedule, c.model, c.error, c.noise);
  Sink sink(c.output, fallback);
  write_trajectory_csv(*sink, traj, c.renormalized, run_metadata(c, c.model));
  return 0;
}

int run_sweep(const RunConfig& c, std::ostream& fallback) {
  SweepResult r;
  if (c.sweep == "robustness") {
    r = robustness_sweep(c.protocol, c.mu_values, c.nu_values, c.model, c.setup, c.threads);
  } else {
    r = decoherence_sweep(c.protocol, c.t_f_values, c.kappa_values, c.noise, c.model, c.setup, c.threads);
  }
  {
    Sink sink(c.output, fallback);
    write_sweep_csv(*sink, r);
  }
  for (const auto& f : sweep_failures(c.output.empty() ? "sweep" : c.output, r)) std::cerr << "failed cell " << f << '\n';
  return r.failed_cells() == 0 ? 0 : 2;
}

int run_spectrum(const RunConfig& c, std::ostream& fallback) {
  const KerrSpectrum spec = kerr_spectrum(c.setup.dim, c.setup.K, c.setup.P());
  Sink sink(c.output, fallback);
  write_csv_metadata(*sink, {{"dim", std::to_string(c.setup.dim)},
                             {"K", format_number(c.setup.K)},
                             {"P", format_number(c.setup.P())},
                             {"gap", format_number(spec.gap)},
                             {"converged", spec.converged ? "true" : "false"}});
  write_csv_header(*sink, {"level", "energy"});
  const auto n = spec.eigenvalues.size();
  // highest first: the cat doublet sits at the top of the spectrum
  for (std::size_t k = 0; k < n; ++k) {
    const double row[] = {static_cast<double>(k), spec.eigenvalues[n - 1 - k]};
    write_csv_row(*sink, row);
  }
  return 0;
}

PresetReport run_figure_preset(std::string_view id, const RunConfig& base, const std::string& directory) {
  PresetReport report;
  PresetWriter w(directory, report);
  RunConfig c = base;
  const int workers = c.threads;

  if (id == "fig2") {
    c.protocol.kind = ProtocolKind::base;
    c.model = pick(base, "model", base.model, Model::full);
    const Simulator sim(c.setup);
    const PulseSchedule s = sim.prepare(c.protocol);
    auto out = w.open("fig2_schedule.csv");
    write_schedule_csv(out, s);
    out.close();
    write_run(w, "fig2_populations.csv", c, sim, s, c.model, c.renormalized);
  } else if (id == "fig3") {
    const Model model = pick(base, "model", base.model, Model::effective);
    const auto mus = pick(base, "mu_values", base.mu_values, parse_list("-0.3:0.3:0.02"));
    struct Case {
      ProtocolKind kind;
      int n;
      const char* file;
    };
    for (const Case& k : {Case{ProtocolKind::base, 1, "fig3_base.csv"}, Case{ProtocolKind::optimal, 1, "fig3_n1.csv"},
                          Case{ProtocolKind::optimal, 2, "fig3_n2.csv"}, Case{ProtocolKind::optimal, 5, "fig3_n5.csv"}}) {
      ProtocolSpec spec = c.protocol;
      spec.kind = k.kind;
      spec.n = k.n;
      const SweepResult r = robustness_sweep(spec, mus, {0.0}, model, c.setup, workers);
      auto out = w.open(k.file);
      write_sweep_csv(out, r);
      for (auto& f : sweep_failures(k.file, r)) report.failures.push_back(std::move(f));
    }
  } else if (id == "fig4") {
    c.protocol.kind = ProtocolKind::optimal;
    c.model = pick(base, "model", base.model, Model::full);
    const Simulator sim(c.setup);
    for (int n : {1, 2, 5}) {
      c.protocol.n = n;
      const PulseSchedule s = sim.prepare(c.protocol);
      auto out = w.open(fmt::format("fig4_n{}_schedule.csv", n));
      write_schedule_csv(out, s);
      out.close();
      write_run(w, fmt::format("fig4_n{}_populations.csv", n), c, sim, s, c.model, c.renormalized);
    }
  } else if (id == "fig6") {
    c.protocol.kind = ProtocolKind::optimal;
    const Model model = pick(base, "model", base.model, Model::full);
    const auto axis = parse_list("-0.2:0.2:0.04");
    const SweepResult r = robustness_sweep(c.protocol, pick(base, "mu_values", base.mu_values, axis),
                                           pick(base, "nu_values", base.nu_values, axis), model, c.setup, workers);
    auto out = w.open("fig6_grid.csv");
    write_sweep_csv(out, r);
    report.failures = sweep_failures("fig6_grid.csv", r);
  } else if (id == "fig7") {
    c.protocol.kind = ProtocolKind::optimal;
    c.model = pick(base, "model", base.model, Model::lindblad_full);
    const Simulator sim(c.setup);
    const PulseSchedule s = sim.prepare(c.protocol);
    const double rate = 0.01;
    c.noise = {pick(base, "kappa", base.noise.kappa, rate), 0.0};
    write_run(w, "fig7_loss.csv", c, sim, s, c.model, true);
    c.noise = {0.0, pick(base, "kappa_phi", base.noise.kappa_phi, rate)};
    write_run(w, "fig7_dephasing.csv", c, sim, s, c.model, true);
  } else if (id == "fig8") {
    c.protocol.kind = ProtocolKind::optimal;
    c.protocol.n = pick(base, "n", base.protocol.n, 1);
    const Model model = pick(base, "model", base.model, Model::lindblad_effective);
    const NoiseParams noise{0.0, pick(base, "kappa_phi", base.noise.kappa_phi, 0.0)};
    const SweepResult r = decoherence_sweep(
        c.protocol, pick(base, "t_f_values", base.t_f_values, {1.0, 1.1, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0}),
        pick(base, "kappa_values", base.kappa_values, {0.0, 0.0025, 0.005, 0.0075, 0.01, 0.015, 0.02}), noise, model,
        c.setup, workers);
    auto out = w.open("fig8_grid.csv");
    write_sweep_csv(out, r);
    report.failures = sweep_failures("fig8_grid.csv", r);
  } else if (id == "bench9") {
    const double k_phys = base.k_mhz.value_or(2.0 * std::numbers::pi * 6.7);
    // rates quoted as rate/2pi in MHz, converted to units of K
    const double to_k = 2.0 * std::numbers::pi / k_phys;
    c.protocol.kind = ProtocolKind::optimal;
    c.protocol.n = pick(base, "n", base.protocol.n, 1);
    c.protocol.t_f = pick(base, "t_f", base.protocol.t_f, 1.1);
    c.noise = {pick(base, "kappa", base.noise.kappa, 0.01 * to_k), pick(base, "kappa_phi", base.noise.kappa_phi, 0.045 * to_k)};
    c.error = {pick(base, "mu", base.error.mu, 0.1), pick(base, "nu", base.error.nu, 0.1)};
    c.model = pick(base, "model", base.model, Model::lindblad_full);
    const Simulator sim(c.setup);
    const Trajectory traj = sim.run(sim.prepare(c.protocol), c.model, c.error, c.noise);
    const auto renorm = renormalized_populations(traj);
    auto out = w.open("bench9_summary.csv");
    Metadata meta = run_metadata(c, c.model);
    meta.emplace_back("k_mhz", format_number(k_phys));
    write_csv_metadata(out, meta);
    write_csv_header(out, {"t_f", "t_f_ns", "kappa", "kappa_phi", "kappa_over_2pi_mhz", "kappa_phi_over_2pi_mhz", "mu",
                           "nu", "p_minus", "p_minus_r", "p_s", "leakage"});
    const double ps = traj.p_plus.back() + traj.p_minus.back();
    const double row[] = {c.protocol.t_f,
                          1000.0 * c.protocol.t_f / k_phys,
                          c.noise.kappa,
                          c.noise.kappa_phi,
                          c.noise.kappa / to_k,
                          c.noise.kappa_phi / to_k,
                          c.error.mu,
                          c.error.nu,
                          traj.final_p_minus(),
                          renorm.p_minus.back(),
                          ps,
                          traj.leakage.back()};
    write_csv_row(out, row);
  } else {
    fail(Errc::invalid_argument, fmt::format("unknown figure id '{}'", id));
  }
  return report;
}

}  // namespace kerrcat::cli
