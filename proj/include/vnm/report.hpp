#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnm/scenarios.hpp"

namespace vnm::report {

inline constexpr int schema_version = 1;

enum class Command { RunScenario, EvolveQm, EvolveCm, McCompare, Table1Report };

std::string_view to_string(Command c) noexcept;
/// ConfigInvalid for unknown names.
Command parse_command(std::string_view name);

/// Validated job description. `document` keeps the (seed-resolved) input so
/// the manifest can echo it.
struct RunConfig {
  Command command = Command::Table1Report;
  nlohmann::json parameters = nlohmann::json::object();
  scenarios::ToleranceOverrides tolerances;
  std::uint64_t seed = 0;
  bool seed_given = false;
  nlohmann::json document;
};

/// Reads `{"schema_version": 1, "command"?, "seed"?, "tolerances"?, "parameters"?}`.
/// ConfigInvalid names the offending field. The CLI seed and tolerances, when
/// given, replace the file's.
RunConfig parse_config(Command command, const nlohmann::json& doc, std::optional<std::uint64_t> cli_seed = {},
                       const scenarios::ToleranceOverrides& cli_tolerances = {});

/// Fails with ConfigInvalid unless the command's parameters validate; run by
/// parse_config before anything executes.
void validate_parameters(const RunConfig& config);

/// One row of the QM/CM correspondence table.
struct Table1Row {
  std::string id;
  std::string title;
  scenarios::Check qm;
  scenarios::Check cm;

  bool pass() const noexcept { return qm.pass && cm.pass; }
};

struct Table1Report {
  std::vector<Table1Row> rows;
  scenarios::ScenarioResult result;  // the row checks, flattened
};

/// Shared Gaussian test family for both sides: sigma_x = 1 and a minimum
/// uncertainty momentum width, A = x / A = q.
struct Table1Params {
  double epsilon = 2.0;
  double mean = 0.5;
  double sigma_x = 1.0;
  double hbar = 1.0;
  double sigma_Q = 0.3;
  double tau = 0.3;
  double dtau = 1e-4;
  scenarios::GridSpec xgrid{-8.0, 8.0, 256};
  scenarios::GridSpec pgrid{-8.0, 8.0, 256};
};

Table1Report table1_report(const Table1Params& params, const scenarios::ToleranceOverrides& overrides = {});

struct JobOutput {
  Command command = Command::Table1Report;
  std::vector<scenarios::ScenarioResult> results;
  std::optional<Table1Report> table1;

  bool passed() const noexcept;
};

JobOutput execute(const RunConfig& config);

/// Writes one CSV per series, checks.json, table1.json (table1-report only) and
/// manifest.json into `out_dir`. Returns the manifest.
nlohmann::json write_outputs(const RunConfig& config, const JobOutput& output, const std::filesystem::path& out_dir,
                             const std::string& started_utc);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string utc_now();

/// %.17g, with nan/inf spelled out.
std::string format_double(double v);

}  // namespace vnm::report
