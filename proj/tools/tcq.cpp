#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "tcq/cli.hpp"

using namespace tcq::cli;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor code test: game values, extraction and property checks"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path;
  bool strict = false;
  std::optional<std::uint64_t> seed, rounds;
  std::optional<int> method;
  std::optional<std::size_t> k, tuples;
  std::optional<double> tol;
  std::vector<std::string> faults;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out_path, "write the JSON report here instead of stdout");
    sub->add_flag("--strict", strict, "reject unknown config fields");
  };
  auto* code_info = app.add_subcommand("code-info", "code parameters, distance and gamma table");
  auto* value = app.add_subcommand("value", "exact and Monte Carlo game value with goodness");
  auto* extract = app.add_subcommand("extract", "run the extraction pipeline and report eta");
  auto* verify = app.add_subcommand("verify", "run the property suite and print a pass/fail matrix");
  auto* check = app.add_subcommand("check-report", "validate a report file against the schema");
  for (auto* sub : {code_info, value, extract, verify}) add_common(sub);
  value->add_option("--rounds", rounds, "Monte Carlo rounds");
  extract->add_option("--method", method, "pasting method (1 or 2)");
  extract->add_option("--k", k, "Method 2 tuple size (0 picks the default)");
  extract->add_option("--tuples", tuples, "tuple enumeration budget");
  extract->add_option("--tol", tol, "duality solver tolerance");
  extract->add_option("--csv", csv_path, "write the sweep table here");
  verify->add_option("--inject-fault", faults, "deliberately break a component (known: orthogonalize)");
  std::string report_path;
  check->add_option("report", report_path, "report JSON")->required()->check(CLI::ExistingFile);
  check->add_flag("--strict", strict, "reject unknown fields");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      auto problems = check_report(load_json(report_path), strict);
      for (const auto& p : problems) std::cerr << p << '\n';
      std::cout << (problems.empty() ? "ok" : "invalid") << '\n';
      return problems.empty() ? 0 : 1;
    }

    std::vector<std::string> warnings;
    RunConfig c = config_path.empty() ? RunConfig{} : parse_config(load_json(config_path), strict, &warnings);
    if (seed) c.seed = *seed;
    if (rounds) c.rounds = *rounds;
    if (method) c.method = *method;
    if (k) c.k = *k;
    if (tuples) c.tuple_budget = *tuples;
    if (tol) c.tol = *tol;
    if (!out_path.empty()) c.out = out_path;
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    validate_config(c);

    json report;
    int status = 0;
    if (code_info->parsed()) {
      report = cmd_code_info(c);
    } else if (value->parsed()) {
      report = cmd_value(c);
    } else if (extract->parsed()) {
      std::string csv;
      report = cmd_extract(c, &csv);
      if (!csv_path.empty()) {
        if (c.sweep.empty()) throw ConfigError("--csv needs a sweep in the config");
        write_text(csv_path, csv);
      }
    } else {
      VerifyOptions opt;
      opt.seed = c.seed;
      opt.faults.insert(faults.begin(), faults.end());
      report = cmd_verify(c, opt);
      std::vector<VerifyRow> rows;
      for (const auto& r : report["checks"])
        rows.push_back({r["key"], r["module"], r["description"], r["pass"], r["detail"]});
      std::cerr << format_matrix(rows);
      status = report["all_pass"].get<bool>() ? 0 : 1;
    }
    if (!warnings.empty()) report["warnings"] = warnings;

    const std::string text = report.dump(2) + "\n";
    if (c.out.empty())
      std::cout << text;
    else
      write_text(c.out, text);
    return status;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
