#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vnm/error.hpp"
#include "vnm/report.hpp"

namespace {

enum Exit { AllPassed = 0, ChecksFailed = 1, BadConfig = 2, Failure = 3 };

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return {{"schema_version", vnm::report::schema_version}};
  std::ifstream in(path);
  vnm::require(static_cast<bool>(in), vnm::ErrorCode::ConfigInvalid, "--config: cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    vnm::fail(vnm::ErrorCode::ConfigInvalid, std::string("--config: ") + e.what());
  }
}

vnm::scenarios::ToleranceOverrides parse_tolerances(const std::vector<std::string>& items) {
  vnm::scenarios::ToleranceOverrides out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    vnm::require(eq != std::string::npos && eq > 0, vnm::ErrorCode::ConfigInvalid,
                 "--tolerance: expected name=value, got '" + item + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    vnm::require(used > 0 && used == item.size() - eq - 1 && v >= 0.0, vnm::ErrorCode::ConfigInvalid,
                 "--tolerance: '" + item + "' needs a non-negative number");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical measurement models: scenarios, solvers and the correspondence report"};
  std::string command, config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tolerances;
  app.add_option("command", command, "run-scenario | evolve-qm | evolve-cm | mc-compare | table1-report")->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "RNG seed, overrides the config");
  app.add_option("--tolerance", tolerances, "check tolerance override name=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? AllPassed : BadConfig;
  }

  try {
    const auto cmd = vnm::report::parse_command(command);
    const auto config = vnm::report::parse_config(cmd, load_config(config_path), seed, parse_tolerances(tolerances));
    const std::string started = vnm::report::utc_now();
    const auto output = vnm::report::execute(config);
    const auto manifest = vnm::report::write_outputs(config, output, out_dir, started);

    const auto& summary = manifest.at("checks");
    std::cout << to_string(cmd) << ": " << summary.at("total").get<std::size_t>() - summary.at("failed").get<std::size_t>()
              << "/" << summary.at("total").get<std::size_t>() << " checks passed, outputs in " << out_dir << "\n";
    if (output.passed()) return AllPassed;
    for (const auto& r : output.results)
      for (const auto& c : r.checks)
        if (!c.pass)
          std::cerr << "ToleranceExceeded: " << r.name << "." << c.name << " measured "
                    << vnm::report::format_double(c.measured) << " expected " << vnm::report::format_double(c.expected)
                    << " tolerance " << vnm::report::format_double(c.tolerance) << " ("
                    << vnm::scenarios::to_string(c.comparison) << ")\n";
    return ChecksFailed;
  } catch (const vnm::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == vnm::ErrorCode::ConfigInvalid ? BadConfig : Failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Failure;
  }
}
