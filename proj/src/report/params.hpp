#pragma once

// Typed views of the command parameter objects. Every reader rejects unknown
// keys and out-of-range values with ConfigInvalid naming the field.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnm/report.hpp"

namespace vnm::report::detail {

class Reader {
 public:
  Reader(const nlohmann::json& j, std::string path);

  bool has(const std::string& key) const { return j_.contains(key); }
  double number(const std::string& key, double fallback);
  double positive(const std::string& key, double fallback);
  double non_negative(const std::string& key, double fallback);
  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min);
  std::uint64_t u64(const std::string& key, std::uint64_t fallback);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback);
  std::complex<double> complex(const std::string& key, std::complex<double> fallback);
  scenarios::GridSpec grid(const std::string& key, const scenarios::GridSpec& fallback);
  Reader object(const std::string& key);
  const std::string& path() const noexcept { return path_; }

  /// Reads epsilon and at most one of tau / sigma_P; returns {epsilon, sigma_P}.
  std::pair<double, double> coupling(double eps_fallback, double sigma_P_fallback);
  /// Same, returning {epsilon, tau}.
  std::pair<double, double> coupling_tau(double eps_fallback, double tau_fallback);

  void finish() const;

 private:
  const nlohmann::json& at(const std::string& key);
  std::string field(const std::string& key) const { return path_ + "." + key; }

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

scenarios::TwoDeltaParams two_delta_params(Reader& r);
scenarios::InterferenceParams interference_params(Reader& r);
scenarios::NumberBasisParams number_basis_params(Reader& r);
scenarios::GaussianBesselParams gaussian_bessel_params(Reader& r);
scenarios::McPositionParams mc_position_params(Reader& r, std::uint64_t seed);
scenarios::McActionParams mc_action_params(Reader& r, std::uint64_t seed);
Table1Params table1_params(Reader& r);

struct EvolveQmParams {
  scenarios::GridSpec xgrid{-8.0, 8.0, 256};
  scenarios::GridSpec pgrid{-8.0, 8.0, 256};
  double mean_x = 0.0;
  double sigma_x = 1.0;
  double sigma_p = 0.5;
  double hbar = 1.0;
  std::vector<double> polynomial{0.0, 1.0};  // A(x) = sum c_k x^k
  double epsilon = 1.0;
  double tau = 0.3;
};

struct EvolveCmParams {
  scenarios::GridSpec qgrid{-8.0, 8.0, 256};
  scenarios::GridSpec pgrid{-8.0, 8.0, 256};
  double sigma_q = 1.0;
  double sigma_p = 1.0;
  std::string kind = "position";
  std::vector<double> coefficients{0.0, 1.0};
  double scale_C = 1.0;
  double epsilon = 1.0;
  double tau = 0.3;
};

EvolveQmParams evolve_qm_params(Reader& r);
EvolveCmParams evolve_cm_params(Reader& r);

scenarios::ScenarioResult evolve_qm(const EvolveQmParams& p, const scenarios::ToleranceOverrides& tol);
scenarios::ScenarioResult evolve_cm(const EvolveCmParams& p, const scenarios::ToleranceOverrides& tol);

/// Parsed job: the scenario runs in order, plus the table when requested.
struct Plan {
  std::vector<std::function<scenarios::ScenarioResult()>> tasks;
  std::optional<Table1Params> table1;
};

/// Reads every parameter up front so a bad config fails before any work.
Plan plan(const RunConfig& config);

inline constexpr std::uint64_t default_seed = 20240501;

}  // namespace vnm::report::detail
