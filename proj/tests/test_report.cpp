#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "vnm/error.hpp"
#include "vnm/report.hpp"

using namespace vnm;
using namespace vnm::report;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string config_error(Command cmd, const json& doc) {
  try {
    parse_config(cmd, doc);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    return e.what();
  }
  FAIL("config accepted: " << doc.dump());
  return {};
}

json with_params(json params) { return {{"schema_version", 1}, {"parameters", std::move(params)}}; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("vnm_test_report_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("command names round-trip") {
  for (auto c : {Command::RunScenario, Command::EvolveQm, Command::EvolveCm, Command::McCompare, Command::Table1Report})
    CHECK(parse_command(to_string(c)) == c);
  CHECK_THROWS_AS(parse_command("plot"), Error);
}

TEST_CASE("config validation names the offending field") {
  CHECK(config_error(Command::Table1Report, json::object()).find("schema_version") != std::string::npos);
  CHECK(config_error(Command::Table1Report, {{"schema_version", 2}}).find("schema_version") != std::string::npos);
  CHECK(config_error(Command::Table1Report, {{"schema_version", 1}, {"colour", 1}}).find("colour") != std::string::npos);
  CHECK(config_error(Command::EvolveQm, {{"schema_version", 1}, {"command", "evolve-cm"}}).find("command") !=
        std::string::npos);
  CHECK(config_error(Command::Table1Report, with_params({{"tau", 0.1}, {"sigma_P", 0.2}})).find("tau") !=
        std::string::npos);
  CHECK(config_error(Command::Table1Report, with_params({{"epsilon", 0.0}})).find("parameters.epsilon") !=
        std::string::npos);
  CHECK(config_error(Command::RunScenario, with_params({{"scenario", "two_delta"}, {"sigma_P", -1.0}}))
            .find("parameters.sigma_P") != std::string::npos);
  CHECK(config_error(Command::RunScenario, with_params({{"scenario", "nope"}})).find("parameters.scenario") !=
        std::string::npos);
  CHECK(config_error(Command::RunScenario, with_params({{"scenario", "two_delta"}, {"q5", 1.0}}))
            .find("parameters.q5") != std::string::npos);
  CHECK(config_error(Command::RunScenario, with_params({{"scenario", "two_delta"}, {"qgrid", {{"lo", 1}, {"hi", 0}}}}))
            .find("parameters.qgrid") != std::string::npos);
  CHECK(config_error(Command::EvolveQm, with_params({{"state", {{"sigma_x", 1.0}, {"sigma_p", 0.1}}}}))
            .find("parameters.state") != std::string::npos);
  CHECK(config_error(Command::EvolveCm, with_params({{"observable", {{"kind", "spin"}}}}))
            .find("parameters.observable.kind") != std::string::npos);
  CHECK(config_error(Command::McCompare, with_params({{"position", {{"n", 1}}}})).find("parameters.position.n") !=
        std::string::npos);
  CHECK(config_error(Command::McCompare, with_params({{"observables", {"spin"}}})).find("parameters.observables") !=
        std::string::npos);
  CHECK(config_error(Command::Table1Report, {{"schema_version", 1}, {"tolerances", {{"row1_qm", -1.0}}}})
            .find("tolerances.row1_qm") != std::string::npos);
}

TEST_CASE("seed and tolerance precedence") {
  const json doc = {{"schema_version", 1}, {"seed", 7}, {"tolerances", {{"a", 1.0}, {"b", 2.0}}}};
  const auto from_file = parse_config(Command::McCompare, doc);
  CHECK(from_file.seed == 7);
  CHECK(from_file.seed_given);
  const auto from_cli = parse_config(Command::McCompare, doc, 9, {{"b", 3.0}});
  CHECK(from_cli.seed == 9);
  CHECK(from_cli.tolerances.at("a") == 1.0);
  CHECK(from_cli.tolerances.at("b") == 3.0);
  CHECK(from_cli.document.at("seed") == 9);
  const auto bare = parse_config(Command::McCompare, {{"schema_version", 1}});
  CHECK_FALSE(bare.seed_given);
  CHECK(bare.document.at("command") == "mc-compare");
}

TEST_CASE("table1 report on defaults") {
  const auto rep = table1_report(Table1Params{});
  REQUIRE(rep.rows.size() == 4);
  for (const auto& row : rep.rows) {
    INFO(row.id << " qm " << row.qm.measured << " cm " << row.cm.measured);
    CHECK(row.pass());
  }
  CHECK(rep.rows[0].qm.measured == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.rows[1].cm.measured == doctest::Approx(0.15).epsilon(1e-8));
  CHECK(rep.rows[2].qm.expected == doctest::Approx(0.85));
  CHECK(rep.result.passed());
  CHECK(rep.result.checks.size() == 10);

  SUBCASE("tau = 0 leaves both states alone") {
    Table1Params p;
    p.tau = 0.0;
    const auto zero = table1_report(p);
    CHECK(zero.rows[2].qm.measured == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(zero.rows[2].cm.measured == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(zero.result.passed());
  }
  SUBCASE("an impossible tolerance fails exactly that row") {
    const auto strict = table1_report(Table1Params{}, {{"row4_cm", 0.0}});
    CHECK_FALSE(strict.rows[3].pass());
    CHECK(strict.rows[0].pass());
  }
}

TEST_CASE("commands execute") {
  SUBCASE("evolve-qm") {
    const auto out = execute(parse_config(Command::EvolveQm, {{"schema_version", 1}}));
    REQUIRE(out.results.size() == 1);
    CHECK(out.passed());
  }
  SUBCASE("evolve-cm both observables") {
    for (const char* kind : {"position", "action_polynomial"}) {
      const auto out = execute(parse_config(Command::EvolveCm, with_params({{"observable", {{"kind", kind}}}})));
      CHECK(out.passed());
    }
  }
  SUBCASE("mc-compare one observable") {
    const auto out = execute(
        parse_config(Command::McCompare, with_params({{"observables", {"position"}}, {"position", {{"n", 20000}}}})));
    REQUIRE(out.results.size() == 1);
    CHECK(out.results[0].name == "mc_position");
    CHECK(out.passed());
  }
  SUBCASE("run-scenario two_delta reports resolved") {
    const auto out = execute(parse_config(Command::RunScenario, with_params({{"scenario", "two_delta"}})));
    REQUIRE(out.results.size() == 1);
    CHECK(out.results[0].notes.at("resolved") == "true");
  }
}

TEST_CASE("outputs are byte-stable") {
  const auto cfg = parse_config(Command::RunScenario, with_params({{"scenario", "interference"}}));
  const auto a = fresh_dir("a"), b = fresh_dir("b");
  const auto ma = write_outputs(cfg, execute(cfg), a, "t0");
  const auto mb = write_outputs(cfg, execute(cfg), b, "t1");
  CHECK(ma.at("outputs") == mb.at("outputs"));
  for (const auto& f : ma.at("outputs")) {
    const auto name = f.at("file").get<std::string>();
    CHECK(slurp(a / name) == slurp(b / name));
    CHECK(f.at("sha256").get<std::string>() == sha256_file(a / name));
  }
  const auto csv = slurp(a / "interference_pointer_Q.csv");
  CHECK(csv.substr(0, csv.find('\n')).find(" [") != std::string::npos);
  CHECK(ma.at("passed") == true);
  CHECK(ma.at("config").at("parameters").at("scenario") == "interference");
}

TEST_CASE("number formatting and digests") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  const auto d = fresh_dir("digest");
  fs::create_directories(d);
  std::ofstream(d / "abc") << "abc";
  CHECK(sha256_file(d / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
