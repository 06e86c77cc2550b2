#include <cmath>

#include "params.hpp"
#include "vnm/error.hpp"

namespace vnm::report {

using nlohmann::json;

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::RunScenario: return "run-scenario";
    case Command::EvolveQm: return "evolve-qm";
    case Command::EvolveCm: return "evolve-cm";
    case Command::McCompare: return "mc-compare";
    case Command::Table1Report: return "table1-report";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::RunScenario, Command::EvolveQm, Command::EvolveCm, Command::McCompare, Command::Table1Report})
    if (to_string(c) == name) return c;
  fail(ErrorCode::ConfigInvalid, "command: unknown command '" + std::string(name) + "'");
}

namespace detail {

namespace {

// JSON integers parse as signed when written without a sign; accept both.
bool is_unsigned_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

const json& empty_object() {
  static const json e = json::object();
  return e;
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  fail(ErrorCode::ConfigInvalid, field + ": " + why);
}

}  // namespace

Reader::Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) invalid(path_, "expected an object");
}

const json& Reader::at(const std::string& key) {
  seen_.insert(key);
  return j_.at(key);
}

double Reader::number(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_number()) invalid(field(key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(field(key), "must be finite");
  return x;
}

double Reader::positive(const std::string& key, double fallback) {
  const double x = number(key, fallback);
  if (!(x > 0.0)) invalid(field(key), "must be strictly positive");
  return x;
}

double Reader::non_negative(const std::string& key, double fallback) {
  const double x = number(key, fallback);
  if (!(x >= 0.0)) invalid(field(key), "must be non-negative");
  return x;
}

std::size_t Reader::count(const std::string& key, std::size_t fallback, std::size_t min) {
  std::size_t n = fallback;
  if (has(key)) {
    const auto& v = at(key);
    if (!is_unsigned_integer(v)) invalid(field(key), "expected a non-negative integer");
    n = v.get<std::size_t>();
  }
  if (n < min) invalid(field(key), "must be at least " + std::to_string(min));
  return n;
}

std::uint64_t Reader::u64(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!is_unsigned_integer(v)) invalid(field(key), "expected an unsigned 64-bit integer");
  return v.get<std::uint64_t>();
}

std::string Reader::string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_string()) invalid(field(key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> Reader::numbers(const std::string& key, const std::vector<double>& fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_array() || v.empty()) invalid(field(key), "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) invalid(field(key), "expected finite numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> Reader::strings(const std::string& key, const std::vector<std::string>& fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_array() || v.empty()) invalid(field(key), "expected a non-empty array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) invalid(field(key), "expected strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::complex<double> Reader::complex(const std::string& key, std::complex<double> fallback) {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  invalid(field(key), "expected a number or [re, im]");
}

scenarios::GridSpec Reader::grid(const std::string& key, const scenarios::GridSpec& fallback) {
  if (!has(key)) return fallback;
  Reader g(at(key), field(key));
  scenarios::GridSpec s;
  s.lo = g.number("lo", fallback.lo);
  s.hi = g.number("hi", fallback.hi);
  s.n = g.count("n", fallback.n, 2);
  if (!(s.hi > s.lo)) invalid(field(key), "hi must exceed lo");
  g.finish();
  return s;
}

Reader Reader::object(const std::string& key) {
  if (!has(key)) return Reader(empty_object(), field(key));
  return Reader(at(key), field(key));
}

std::pair<double, double> Reader::coupling_tau(double eps_fallback, double tau_fallback) {
  const double eps = positive("epsilon", eps_fallback);
  if (has("tau") && has("sigma_P")) invalid(path_, "give exactly one of tau and sigma_P");
  if (has("sigma_P")) {
    const double sP = non_negative("sigma_P", 0.0);
    return {eps, 0.5 * eps * eps * sP * sP};
  }
  return {eps, non_negative("tau", tau_fallback)};
}

std::pair<double, double> Reader::coupling(double eps_fallback, double sigma_P_fallback) {
  const double eps = positive("epsilon", eps_fallback);
  if (has("tau") && has("sigma_P")) invalid(path_, "give exactly one of tau and sigma_P");
  if (has("tau")) return {eps, std::sqrt(2.0 * non_negative("tau", 0.0)) / eps};
  return {eps, non_negative("sigma_P", sigma_P_fallback)};
}

void Reader::finish() const {
  for (const auto& [key, value] : j_.items())
    if (!seen_.contains(key)) invalid(field(key), "unknown field");
}

scenarios::TwoDeltaParams two_delta_params(Reader& r) {
  scenarios::TwoDeltaParams p;
  p.q0 = r.number("q0", p.q0);
  p.q1 = r.number("q1", p.q1);
  std::tie(p.epsilon, p.probe.sigma_P) = r.coupling(p.epsilon, p.probe.sigma_P);
  p.probe.sigma_Q = r.positive("sigma_Q", p.probe.sigma_Q);
  p.qgrid = r.grid("qgrid", p.qgrid);
  p.pgrid = r.grid("pgrid", p.pgrid);
  p.Qgrid = r.grid("Qgrid", p.Qgrid);
  const Grid1D qg = p.qgrid.grid();
  if (!qg.contains(p.q0)) invalid(r.path() + ".q0", "outside qgrid");
  if (!qg.contains(p.q1)) invalid(r.path() + ".q1", "outside qgrid");
  return p;
}

scenarios::InterferenceParams interference_params(Reader& r) {
  scenarios::InterferenceParams p;
  p.alpha = r.complex("alpha", p.alpha);
  p.beta = r.complex("beta", p.beta);
  if (std::norm(p.alpha) + std::norm(p.beta) == 0.0) invalid(r.path() + ".alpha", "alpha and beta both vanish");
  p.separation = r.non_negative("separation", p.separation);
  p.packet_width = r.positive("packet_width", p.packet_width);
  std::tie(p.epsilon, p.probe.sigma_P) = r.coupling(p.epsilon, p.probe.sigma_P);
  p.probe.sigma_Q = r.positive("sigma_Q", p.probe.sigma_Q);
  p.xgrid = r.grid("xgrid", p.xgrid);
  p.Qgrid = r.grid("Qgrid", p.Qgrid);
  p.hbar = r.positive("hbar", p.hbar);
  return p;
}

scenarios::NumberBasisParams number_basis_params(Reader& r) {
  scenarios::NumberBasisParams p;
  p.sigma_qbar = r.positive("sigma_qbar", p.sigma_qbar);
  p.sigma_pbar = r.positive("sigma_pbar", p.sigma_pbar);
  p.dim = r.count("dim", p.dim, 4);
  p.hbar = r.positive("hbar", p.hbar);
  std::tie(p.epsilon, p.tau) = r.coupling_tau(p.epsilon, p.tau);
  return p;
}

scenarios::GaussianBesselParams gaussian_bessel_params(Reader& r) {
  scenarios::GaussianBesselParams p;
  p.sigma_qbar = r.positive("sigma_qbar", p.sigma_qbar);
  p.sigma_pbar = r.positive("sigma_pbar", p.sigma_pbar);
  p.xi_max = r.positive("xi_max", p.xi_max);
  p.nxi = r.count("nxi", p.nxi, 2);
  p.ntheta = r.count("ntheta", p.ntheta, 4);
  p.grid_n = r.count("grid_n", p.grid_n, 4);
  return p;
}

scenarios::McPositionParams mc_position_params(Reader& r, std::uint64_t seed) {
  scenarios::McPositionParams p;
  p.seed = seed;
  p.sigma_q = r.positive("sigma_q", p.sigma_q);
  p.sigma_p = r.positive("sigma_p", p.sigma_p);
  std::tie(p.epsilon, p.probe.sigma_P) = r.coupling(p.epsilon, p.probe.sigma_P);
  p.probe.sigma_Q = r.positive("sigma_Q", p.probe.sigma_Q);
  p.grid = r.grid("grid", p.grid);
  p.n = r.count("n", p.n, 2);
  p.bins = r.count("bins", p.bins, 1);
  p.l1_constant = r.positive("l1_constant", p.l1_constant);
  return p;
}

scenarios::McActionParams mc_action_params(Reader& r, std::uint64_t seed) {
  scenarios::McActionParams p;
  p.seed = seed;
  p.sigma_q = r.positive("sigma_q", p.sigma_q);
  p.sigma_p = r.positive("sigma_p", p.sigma_p);
  p.coefficients = r.numbers("coefficients", p.coefficients);
  std::tie(p.epsilon, p.probe.sigma_P) = r.coupling(p.epsilon, p.probe.sigma_P);
  p.probe.sigma_Q = r.positive("sigma_Q", p.probe.sigma_Q);
  p.grid = r.grid("grid", p.grid);
  p.n = r.count("n", p.n, 2);
  p.bins = r.count("bins", p.bins, 1);
  p.l1_constant = r.positive("l1_constant", p.l1_constant);
  return p;
}

Table1Params table1_params(Reader& r) {
  Table1Params p;
  std::tie(p.epsilon, p.tau) = r.coupling_tau(p.epsilon, p.tau);
  p.mean = r.number("mean", p.mean);
  p.sigma_x = r.positive("sigma_x", p.sigma_x);
  p.hbar = r.positive("hbar", p.hbar);
  p.sigma_Q = r.positive("sigma_Q", p.sigma_Q);
  p.dtau = r.positive("dtau", p.dtau);
  p.xgrid = r.grid("xgrid", p.xgrid);
  p.pgrid = r.grid("pgrid", p.pgrid);
  return p;
}

EvolveQmParams evolve_qm_params(Reader& r) {
  EvolveQmParams p;
  p.xgrid = r.grid("xgrid", p.xgrid);
  p.pgrid = r.grid("pgrid", p.pgrid);
  p.hbar = r.positive("hbar", p.hbar);
  Reader s = r.object("state");
  p.mean_x = s.number("mean_x", p.mean_x);
  p.sigma_x = s.positive("sigma_x", p.sigma_x);
  p.sigma_p = s.positive("sigma_p", 0.5 * p.hbar / p.sigma_x);
  if (p.sigma_x * p.sigma_p < 0.5 * p.hbar * (1.0 - 1e-12)) invalid(s.path(), "sigma_x sigma_p must be at least hbar / 2");
  s.finish();
  p.polynomial = r.numbers("polynomial", p.polynomial);
  std::tie(p.epsilon, p.tau) = r.coupling_tau(p.epsilon, p.tau);
  return p;
}

EvolveCmParams evolve_cm_params(Reader& r) {
  EvolveCmParams p;
  p.qgrid = r.grid("qgrid", p.qgrid);
  p.pgrid = r.grid("pgrid", p.pgrid);
  Reader s = r.object("state");
  p.sigma_q = s.positive("sigma_q", p.sigma_q);
  p.sigma_p = s.positive("sigma_p", p.sigma_p);
  s.finish();
  Reader o = r.object("observable");
  p.kind = o.string("kind", p.kind);
  if (p.kind != "position" && p.kind != "action_polynomial")
    invalid(o.path() + ".kind", "expected 'position' or 'action_polynomial'");
  p.coefficients = o.numbers("coefficients", p.coefficients);
  p.scale_C = o.positive("scale_C", p.scale_C);
  o.finish();
  std::tie(p.epsilon, p.tau) = r.coupling_tau(p.epsilon, p.tau);
  const Grid1D qg = p.qgrid.grid(), pg = p.pgrid.grid();
  if (qg.half_width() < 6.0 * p.sigma_q) invalid(r.path() + ".qgrid", "must cover +-6 sigma_q");
  if (pg.half_width() < 6.0 * p.sigma_p) invalid(r.path() + ".pgrid", "must cover +-6 sigma_p");
  return p;
}

}  // namespace detail

namespace {

scenarios::ToleranceOverrides read_tolerances(const json& doc) {
  scenarios::ToleranceOverrides out;
  if (!doc.contains("tolerances")) return out;
  const auto& t = doc.at("tolerances");
  require(t.is_object(), ErrorCode::ConfigInvalid, "tolerances: expected an object");
  for (const auto& [k, v] : t.items()) {
    require(v.is_number() && v.get<double>() >= 0.0, ErrorCode::ConfigInvalid,
            "tolerances." + k + ": expected a non-negative number");
    out[k] = v.get<double>();
  }
  return out;
}

}  // namespace

RunConfig parse_config(Command command, const json& doc, std::optional<std::uint64_t> cli_seed,
                       const scenarios::ToleranceOverrides& cli_tolerances) {
  require(doc.is_object(), ErrorCode::ConfigInvalid, "config: expected a JSON object");
  require(doc.contains("schema_version"), ErrorCode::ConfigInvalid, "schema_version: missing");
  require(doc.at("schema_version").is_number_integer() && doc.at("schema_version").get<int>() == schema_version,
          ErrorCode::ConfigInvalid, "schema_version: expected " + std::to_string(schema_version));
  for (const auto& [k, v] : doc.items())
    require(k == "schema_version" || k == "command" || k == "seed" || k == "tolerances" || k == "parameters",
            ErrorCode::ConfigInvalid, k + ": unknown field");
  if (doc.contains("command")) {
    require(doc.at("command").is_string(), ErrorCode::ConfigInvalid, "command: expected a string");
    require(parse_command(doc.at("command").get<std::string>()) == command, ErrorCode::ConfigInvalid,
            "command: config is for '" + doc.at("command").get<std::string>() + "'");
  }

  RunConfig cfg;
  cfg.command = command;
  if (doc.contains("parameters")) cfg.parameters = doc.at("parameters");
  require(cfg.parameters.is_object(), ErrorCode::ConfigInvalid, "parameters: expected an object");
  cfg.tolerances = read_tolerances(doc);
  for (const auto& [k, v] : cli_tolerances) cfg.tolerances[k] = v;
  cfg.seed = detail::default_seed;
  if (doc.contains("seed")) {
    require(detail::is_unsigned_integer(doc.at("seed")), ErrorCode::ConfigInvalid, "seed: expected an unsigned 64-bit integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.seed_given = true;
  }
  if (cli_seed) {
    cfg.seed = *cli_seed;
    cfg.seed_given = true;
  }

  cfg.document = doc;
  cfg.document["command"] = std::string(to_string(command));
  cfg.document["seed"] = cfg.seed;
  if (!cfg.tolerances.empty()) cfg.document["tolerances"] = cfg.tolerances;
  validate_parameters(cfg);
  return cfg;
}

}  // namespace vnm::report
