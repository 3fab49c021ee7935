#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "loclab/cli.hpp"
#include "loclab/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"localiser-lab: spectral localiser index experiments"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir, regime;
  std::optional<int> threads;
  for (const char* name : {"index", "sweep", "bounds", "semifinite", "asymptotic"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--regime", regime, "empirical or theorem")->check(CLI::IsMember({"empirical", "theorem"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  loclab::ExperimentConfig cfg;
  try {
    cfg = loclab::load_config(config_path);
    if (cfg.command != command)
      throw loclab::Error(loclab::ErrorCode::ConfigInvalid,
                          "config command '" + cfg.command + "' does not match '" + command + "'");
    if (!regime.empty()) cfg.regime = regime;
  } catch (const loclab::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::filesystem::path dir = !out_dir.empty() ? out_dir : cfg.out_dir.value_or(".");
  loclab::RunReport report;
  try {
    report = loclab::run(cfg, loclab::resolve_threads(threads));
  } catch (const loclab::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  for (const auto& note : report.notes) std::cout << "note: " << note << "\n";
  for (const auto& c : report.certificates)
    if (c.asserted && !c.pass)
      std::cout << "FAILED " << c.name << " [" << c.item << "]: " << loclab::format_double(c.lhs) << " "
                << c.relation << " " << loclab::format_double(c.rhs) << "\n";
  if (report.error) std::cerr << "error: " << *report.error << "\n";
  try {
    loclab::write_outputs(report, cfg, dir);
  } catch (const std::exception& e) {
    std::cerr << "cannot write outputs: " << e.what() << "\n";
    return 1;
  }
  std::cout << report.rows.size() << " rows, " << report.certificates.size() << " certificates -> "
            << dir.string() << "\n";
  return loclab::exit_code(report);
}
