#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>

#include "vnm/error.hpp"
#include "vnm/report.hpp"

#ifndef VNM_VERSION
#define VNM_VERSION "0.0.0"
#endif

namespace vnm::report {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::InvalidArgument, "cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  require(EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) == 1,
          ErrorCode::InvalidState, "SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

namespace {

// Non-finite values have no JSON spelling; they are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json check_json(const scenarios::Check& c) {
  return {{"name", c.name},
          {"description", c.description},
          {"measured", number(c.measured)},
          {"expected", number(c.expected)},
          {"tolerance", number(c.tolerance)},
          {"comparison", std::string(scenarios::to_string(c.comparison))},
          {"pass", c.pass},
          {"provenance", c.provenance}};
}

json result_json(const scenarios::ScenarioResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  json inputs = json::object(), scalars = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = number(v);
  for (const auto& [k, v] : r.scalars) scalars[k] = number(v);
  return {{"name", r.name}, {"passed", r.passed()}, {"inputs", inputs},
          {"scalars", scalars}, {"notes", r.notes}, {"checks", checks}};
}

std::string csv_header_cell(const std::string& name, const std::string& units) {
  return units.empty() ? name : name + " [" + units + "]";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorCode::InvalidArgument, "write failed for " + path.string());
}

std::string series_csv(const scenarios::Series& s) {
  std::string out = csv_header_cell(s.axis, s.axis_units);
  for (const auto& name : s.column_names) out += "," + csv_header_cell(name, s.value_units);
  out += "\n";
  for (std::size_t i = 0; i < s.axis_values.size(); ++i) {
    out += format_double(s.axis_values[i]);
    for (const auto& col : s.columns) out += "," + format_double(col.at(i));
    out += "\n";
  }
  return out;
}

}  // namespace

json write_outputs(const RunConfig& config, const JobOutput& output, const fs::path& out_dir,
                   const std::string& started_utc) {
  fs::create_directories(out_dir);
  std::vector<std::string> files;

  for (const auto& r : output.results)
    for (const auto& s : r.series) {
      const std::string name = r.name + "_" + s.name + ".csv";
      write_text(out_dir / name, series_csv(s));
      files.push_back(name);
    }

  json results = json::array();
  for (const auto& r : output.results) results.push_back(result_json(r));
  write_text(out_dir / "checks.json", results.dump(2) + "\n");
  files.push_back("checks.json");

  if (output.table1) {
    json rows = json::array();
    for (const auto& row : output.table1->rows)
      rows.push_back({{"id", row.id}, {"title", row.title}, {"qm", check_json(row.qm)},
                      {"cm", check_json(row.cm)}, {"pass", row.pass()}});
    const json table = {{"rows", rows}, {"passed", output.table1->result.passed()}};
    write_text(out_dir / "table1.json", table.dump(2) + "\n");
    files.push_back("table1.json");
  }

  std::size_t total = 0, failed = 0;
  json failing = json::array();
  for (const auto& r : output.results)
    for (const auto& c : r.checks) {
      ++total;
      if (!c.pass) {
        ++failed;
        failing.push_back(r.name + "." + c.name);
      }
    }

  json outputs = json::array();
  for (const auto& f : files)
    outputs.push_back({{"file", f}, {"sha256", sha256_file(out_dir / f)}, {"bytes", fs::file_size(out_dir / f)}});

  json manifest = {{"artifact", "vnm"},
                   {"version", VNM_VERSION},
                   {"schema_version", schema_version},
                   {"command", std::string(to_string(config.command))},
                   {"config", config.document},
                   {"seed", config.seed},
                   {"started_utc", started_utc},
                   {"finished_utc", utc_now()},
                   {"checks", {{"total", total}, {"failed", failed}, {"failing", failing}}},
                   {"passed", output.passed()},
                   {"outputs", outputs}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace vnm::report
