#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcq/extract.hpp"

namespace tcq::cli {

using json = nlohmann::json;

inline constexpr const char* kConfigSchema = "tcq.config/1";
inline constexpr const char* kReportSchema = "tcq.report/1";
inline constexpr const char* kVersion = "1.0.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reed-Solomon {q, n, s, eval_points} unless `generator` (n rows of k symbols) is given.
struct CodeSpec {
  std::uint32_t q = 5;
  std::size_t n = 5;
  std::size_t s = 1;  // degree bound, k = s + 1
  std::vector<Symbol> eval_points;
  std::vector<std::vector<Symbol>> generator;
};

// kind: honest | classical | mixture | corrupted | random | anticommuting
// corruption: point_flips | slice_scramble | mixture
// classical corrupts the deterministic honest strategy; mixture averages `components` honest strategies for
// distinct planted codewords, each corrupted at `rate`.
struct StrategySpec {
  std::string kind = "honest";
  std::size_t r = 1;
  std::uint64_t codeword_seed = 0;
  std::string corruption = "point_flips";
  double rate = 0.0;
  bool rederive_pairs = false;
  std::size_t components = 2;
};

struct RunConfig {
  CodeSpec code;
  std::size_t m = 2;
  StrategySpec strategy;
  std::string game = "synchronous";  // synchronous | two_prover
  int method = 2;
  std::size_t k = 0;
  double tol = 1e-8;
  std::size_t tuple_budget = 10000;
  std::size_t tuple_samples = 2000;
  std::uint64_t rounds = 100000;
  std::vector<double> sweep;  // corruption rates for the extract sweep
  std::uint64_t seed = 0;
  std::string out;
};

// Unknown keys throw in strict mode and are listed in `warnings` otherwise.
RunConfig parse_config(const json& j, bool strict, std::vector<std::string>* warnings = nullptr);
json config_to_json(const RunConfig& c);
// Throws ConfigError on any invalid field; called before any computation.
void validate_config(const RunConfig& c);

LinearCode build_code(const RunConfig& c);
SynchronousStrategy build_strategy(const RunConfig& c);
SynchronousStrategy build_strategy(const RunConfig& c, double rate);

json goodness_to_json(const GoodnessReport& g);
json extraction_to_json(const ExtractionReport& r);

json cmd_code_info(const RunConfig& c);
json cmd_value(const RunConfig& c);
// csv receives "rho,eps,delta,eta" rows when the config has a sweep.
json cmd_extract(const RunConfig& c, std::string* csv = nullptr);

struct VerifyRow {
  std::string key;
  std::string module;
  std::string description;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::set<std::string> faults;  // known: "orthogonalize"
  std::uint64_t seed = 0;
};

std::vector<std::string> verify_keys();
std::vector<std::string> known_faults();
std::vector<VerifyRow> run_verify(const VerifyOptions& opt);
json cmd_verify(const RunConfig& c, const VerifyOptions& opt);
std::string format_matrix(const std::vector<VerifyRow>& rows);

// Required fields and types of a report; unknown fields are problems in strict mode.
std::vector<std::string> check_report(const json& report, bool strict);

// Drops the timing block so reports can be compared for reproducibility.
json without_timing(json report);

}  // namespace tcq::cli
