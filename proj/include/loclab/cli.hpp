#pragma once

// Experiment runner behind the localiser-lab executable: JSON configs in,
// report.csv and certificates.json out.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "loclab/operators.hpp"

namespace loclab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolkitVersion = "1.0.0";

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string command;
  std::string regime = "empirical";
  std::optional<Index> N;
  std::vector<Index> windings;
  std::vector<double> weights;
  std::optional<double> eps, delta, t, lambda;
  std::vector<double> t_grid, s_grid, kappa_grid, lambda_grid;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

/// Throws Error(ConfigInvalid) on unknown keys, wrong types or bad values.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical form: keys sorted, absent optionals omitted.
nlohmann::json to_json(const ExperimentConfig& cfg);

struct Certificate {
  std::string name;
  std::string item;
  double lhs = 0.0;
  std::string relation;
  double rhs = 0.0;
  bool pass = false;
  bool asserted = true;
};

struct RunReport {
  std::string command;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<Certificate> certificates;
  /// Extra per-command data (tables, regions, snaps) for certificates.json.
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> notes;
  std::optional<std::string> error;
  double seconds = 0.0;

  bool all_pass() const;
  std::string csv() const;
  nlohmann::json certificates_json(const ExperimentConfig& cfg) const;
};

/// Runs the experiment; numerical errors are caught into report.error with
/// the rows finished so far kept.
RunReport run(const ExperimentConfig& cfg, int threads);

/// 0 when every asserted flag holds, 1 otherwise or on a numerical error.
int exit_code(const RunReport& report);

void write_outputs(const RunReport& report, const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// Shortest-round-trip is not used: fixed 17 significant digits.
std::string format_double(double x);

/// --threads, else LOCALISER_LAB_THREADS, else the hardware concurrency.
int resolve_threads(std::optional<int> flag);

}  // namespace loclab
