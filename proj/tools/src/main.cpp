#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <kerrcat/diagnostics.hpp>

#include "commands.hpp"
#include "config.hpp"

using namespace kerrcat;
using namespace kerrcat::cli;

namespace {

RunConfig load(const std::string& config_path, const std::map<std::string, std::string>& flags,
               const std::map<std::string, CLI::Option*>& options) {
  RunConfig c;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) fail(Errc::invalid_argument, fmt::format("cannot read config '{}'", config_path));
    std::stringstream text;
    text << in.rdbuf();
    c = parse_config(text.str(), config_path);
  }
  for (const auto& [key, opt] : options)
    if (opt->count() > 0) apply_setting(c, key, flags.at(key), "--" + key);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr-cat population inversion: pulse design, propagation and sweeps"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("-c,--config", config_path, "key=value config file")->check(CLI::ExistingFile);

  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
  for (const auto& key : config_keys()) options[key.name] = app.add_option(std::string("--") + key.name, flags[key.name], key.help);

  auto* design = app.add_subcommand("design", "emit the control schedule CSV");
  auto* evolve = app.add_subcommand("evolve", "propagate one run, emit the trajectory CSV");
  auto* sweep = app.add_subcommand("sweep", "robustness (mu, nu) or decoherence (t_f, kappa) grid");
  auto* spectrum = app.add_subcommand("spectrum", "Kerr Hamiltonian spectrum CSV");
  auto* figure = app.add_subcommand("figure", "figure-reproduction preset");
  std::string figure_id;
  figure->add_option("id", figure_id, "fig2, fig3, fig4, fig6, fig7, fig8 or bench9")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(kFigureIds), std::end(kFigureIds))));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  set_warning_handler([](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; });

  try {
    const RunConfig c = load(config_path, flags, options);
    if (*design) return run_design(c, std::cout);
    if (*evolve) return run_evolve(c, std::cout);
    if (*sweep) return run_sweep(c, std::cout);
    if (*spectrum) return run_spectrum(c, std::cout);
    if (*figure) {
      const auto report = run_figure_preset(figure_id, c, c.output.empty() ? "." : c.output);
      for (const auto& f : report.files) std::cerr << "wrote " << f << '\n';
      for (const auto& f : report.failures) std::cerr << "failed cell " << f << '\n';
      return report.failures.empty() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
