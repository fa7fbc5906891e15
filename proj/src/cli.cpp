#include "tcq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "tcq/rng.hpp"
#include "tcq/spectral.hpp"
#include "tcq/strategies.hpp"

namespace tcq::cli {

namespace {

using Clock = std::chrono::steady_clock;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where, bool strict,
                    std::vector<std::string>* warnings) {
  for (const auto& [key, _] : obj.items()) {
    if (allowed.count(key)) continue;
    std::string msg = "unknown field '" + where + key + "'";
    if (strict) throw ConfigError(msg);
    if (warnings) warnings->push_back(msg);
  }
}

template <class T>
void read(const json& obj, const char* key, T& into) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

CorruptionKind corruption_kind(const std::string& name) {
  if (name == "point_flips") return CorruptionKind::PointFlips;
  if (name == "slice_scramble") return CorruptionKind::SliceScramble;
  if (name == "mixture") return CorruptionKind::MixtureOfCodewords;
  throw ConfigError("unknown corruption '" + name + "'");
}

json timing_block(Clock::time_point start) {
  return {{"seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
}

json report_head(const RunConfig& c, const std::string& command) {
  return {{"schema", kReportSchema}, {"version", kVersion}, {"command", command}, {"config", config_to_json(c)}};
}

json nu_to_json(const NuSeries& v) {
  return {{"gamma_m", v.gamma_m}, {"nu1", v.nu1},   {"nu2", v.nu2},     {"nu3", v.nu3},   {"nu4", v.nu4},
          {"nu5", v.nu5},         {"nu6", v.nu6},   {"nu7", v.nu7},     {"nu2p", v.nu2p}, {"nu3pp", v.nu3pp},
          {"nu3p", v.nu3p},       {"nu4p", v.nu4p}, {"nu5p", v.nu5p},   {"nu6p", v.nu6p}, {"mu1", v.mu1},
          {"mu2", v.mu2},         {"completeness2", v.completeness2}};
}

ExtractionConfig extraction_config(const RunConfig& c) {
  ExtractionConfig e;
  e.pasting.method = c.method;
  e.pasting.k = c.k;
  e.pasting.tuple_budget = c.tuple_budget;
  e.pasting.tuple_samples = c.tuple_samples;
  e.pasting.seed = derive_seed(c.seed, 0x70);
  e.duality.tol = c.tol;
  e.duality.seed = derive_seed(c.seed, 0x64);
  return e;
}

}  // namespace

RunConfig parse_config(const json& j, bool strict, std::vector<std::string>* warnings) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, {"schema", "code", "m", "strategy", "game", "extraction", "rounds", "sweep", "seed", "out"}, "",
                 strict, warnings);
  RunConfig c;
  if (j.contains("schema") && j.at("schema") != kConfigSchema)
    throw ConfigError(std::string("config schema must be ") + kConfigSchema);
  if (j.contains("code")) {
    const auto& code = j.at("code");
    if (!code.is_object()) throw ConfigError("'code' must be an object");
    reject_unknown(code, {"q", "n", "s", "eval_points", "generator"}, "code.", strict, warnings);
    read(code, "q", c.code.q);
    read(code, "n", c.code.n);
    read(code, "s", c.code.s);
    read(code, "eval_points", c.code.eval_points);
    read(code, "generator", c.code.generator);
    if (!c.code.generator.empty()) {
      c.code.n = c.code.generator.size();
      c.code.s = c.code.generator[0].size() - 1;
    }
  }
  read(j, "m", c.m);
  if (j.contains("strategy")) {
    const auto& st = j.at("strategy");
    if (!st.is_object()) throw ConfigError("'strategy' must be an object");
    reject_unknown(st, {"kind", "r", "codeword_seed", "corruption", "rate", "rederive_pairs", "components"},
                   "strategy.", strict, warnings);
    read(st, "components", c.strategy.components);
    read(st, "kind", c.strategy.kind);
    read(st, "r", c.strategy.r);
    read(st, "codeword_seed", c.strategy.codeword_seed);
    read(st, "corruption", c.strategy.corruption);
    read(st, "rate", c.strategy.rate);
    read(st, "rederive_pairs", c.strategy.rederive_pairs);
  }
  read(j, "game", c.game);
  if (j.contains("extraction")) {
    const auto& ex = j.at("extraction");
    if (!ex.is_object()) throw ConfigError("'extraction' must be an object");
    reject_unknown(ex, {"method", "k", "tol", "tuple_budget", "tuple_samples"}, "extraction.", strict, warnings);
    read(ex, "method", c.method);
    read(ex, "k", c.k);
    read(ex, "tol", c.tol);
    read(ex, "tuple_budget", c.tuple_budget);
    read(ex, "tuple_samples", c.tuple_samples);
  }
  read(j, "rounds", c.rounds);
  read(j, "sweep", c.sweep);
  read(j, "seed", c.seed);
  read(j, "out", c.out);
  return c;
}

json config_to_json(const RunConfig& c) {
  return {{"schema", kConfigSchema},
          {"code",
           {{"q", c.code.q},
            {"n", c.code.n},
            {"s", c.code.s},
            {"eval_points", c.code.eval_points},
            {"generator", c.code.generator}}},
          {"m", c.m},
          {"strategy",
           {{"kind", c.strategy.kind},
            {"r", c.strategy.r},
            {"codeword_seed", c.strategy.codeword_seed},
            {"corruption", c.strategy.corruption},
            {"rate", c.strategy.rate},
            {"rederive_pairs", c.strategy.rederive_pairs},
            {"components", c.strategy.components}}},
          {"game", c.game},
          {"extraction",
           {{"method", c.method},
            {"k", c.k},
            {"tol", c.tol},
            {"tuple_budget", c.tuple_budget},
            {"tuple_samples", c.tuple_samples}}},
          {"rounds", c.rounds},
          {"sweep", c.sweep},
          {"seed", c.seed},
          {"out", c.out}};
}

void validate_config(const RunConfig& c) {
  if (!is_prime(c.code.q)) throw ConfigError("code.q must be prime");
  if (!c.code.generator.empty()) {
    const std::size_t k = c.code.generator[0].size();
    if (k == 0) throw ConfigError("code.generator rows must be nonempty");
    for (const auto& row : c.code.generator) {
      if (row.size() != k) throw ConfigError("code.generator rows must have equal length");
      for (Symbol v : row)
        if (v >= c.code.q) throw ConfigError("code.generator entries must lie in [0, q)");
    }
    if (!c.code.eval_points.empty()) throw ConfigError("code.eval_points and code.generator are exclusive");
  } else {
    if (c.code.n < 2 || c.code.n > c.code.q) throw ConfigError("code.n must satisfy 2 <= n <= q");
    if (c.code.s < 1 || c.code.s >= c.code.n) throw ConfigError("code.s must satisfy 1 <= s < n");
    if (!c.code.eval_points.empty()) {
      if (c.code.eval_points.size() != c.code.n) throw ConfigError("code.eval_points must have n entries");
      std::set<Symbol> seen;
      for (Symbol v : c.code.eval_points)
        if (v >= c.code.q || !seen.insert(v).second)
          throw ConfigError("code.eval_points must be distinct elements of [0, q)");
    }
  }
  if (c.m < 1) throw ConfigError("m must be at least 1");
  const std::uint64_t N = int_pow(c.code.n, c.m);
  if (N * N > kEnumerationBudget) throw ConfigError("n^m too large: the game has more than 10^6 question pairs");
  static const std::set<std::string> kinds{"honest", "classical", "mixture", "corrupted", "random", "anticommuting"};
  const auto& kind = c.strategy.kind;
  if (!kinds.count(kind))
    throw ConfigError("strategy.kind must be honest, classical, mixture, corrupted, random or anticommuting");
  if (c.strategy.r < 1 || c.strategy.r > kMixtureDimBudget) throw ConfigError("strategy.r must be in [1, 4096]");
  if (kind == "classical" && c.strategy.r != 1) throw ConfigError("classical strategies have r = 1");
  if (kind == "mixture" && (c.strategy.components < 1 || c.strategy.components * c.strategy.r > kMixtureDimBudget))
    throw ConfigError("strategy.components * r must be in [1, 4096]");
  corruption_kind(c.strategy.corruption);
  if (!(c.strategy.rate >= 0 && c.strategy.rate <= 1)) throw ConfigError("strategy.rate must be in [0, 1]");
  if (kind == "anticommuting" && (c.code.q != 3 || c.code.n != 3 || c.code.s != 1 || c.m != 2 ||
                                  !c.code.generator.empty() || !c.code.eval_points.empty()))
    throw ConfigError("the anticommuting exhibit is defined for RS(3,3,1) with m = 2");
  if (c.game != "synchronous" && c.game != "two_prover") throw ConfigError("game must be synchronous or two_prover");
  if (c.method != 1 && c.method != 2) throw ConfigError("extraction.method must be 1 or 2");
  if (!(c.tol > 0)) throw ConfigError("extraction.tol must be positive");
  if (c.tuple_budget < 1 || c.tuple_samples < 1) throw ConfigError("tuple budgets must be positive");
  if (c.rounds < 1) throw ConfigError("rounds must be positive");
  for (double r : c.sweep)
    if (!(r >= 0 && r <= 1)) throw ConfigError("sweep rates must be in [0, 1]");
  if (!c.sweep.empty() && (kind == "random" || kind == "anticommuting"))
    throw ConfigError("a sweep needs a strategy with a corruption rate");

  LinearCode code = [&] {
    try {
      return build_code(c);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("code: ") + e.what());
    }
  }();
  if (!code.interpolable()) throw ConfigError("code is not interpolable");
  if (c.method == 2 && c.k != 0 && c.k < code.t()) throw ConfigError("extraction.k must be at least t");
}

LinearCode build_code(const RunConfig& c) {
  if (c.code.generator.empty()) return make_reed_solomon(c.code.q, c.code.n, c.code.s, c.code.eval_points);
  const auto& rows = c.code.generator;
  FieldMatrix G(rows.size(), rows[0].size(), c.code.q);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) G.set(i, j, rows[i][j]);
  return LinearCode(G);
}

SynchronousStrategy build_strategy(const RunConfig& c) { return build_strategy(c, c.strategy.rate); }

SynchronousStrategy build_strategy(const RunConfig& c, double rate) {
  validate_config(c);
  const auto& kind = c.strategy.kind;
  if (kind == "anticommuting") return anticommuting_pair_strategy();
  LinearCode code = build_code(c);
  if (kind == "random") return random_projective_strategy(code, c.m, c.strategy.r, c.seed);
  CorruptionModel model{corruption_kind(c.strategy.corruption), rate, derive_seed(c.seed, 0x63),
                        c.strategy.rederive_pairs};
  if (kind == "classical")
    return embed_classical(corrupt(honest_classical(code, planted_codeword(code, c.m, c.strategy.codeword_seed)), model));
  auto lifted = [&](std::uint64_t codeword_seed) {
    SynchronousStrategy s = honest_strategy(code, planted_codeword(code, c.m, codeword_seed));
    return c.strategy.r > 1 ? tensor_with_identity(s, c.strategy.r) : s;
  };
  if (kind == "honest") return lifted(c.strategy.codeword_seed);
  if (kind == "corrupted") return corrupt(lifted(c.strategy.codeword_seed), model);
  std::vector<SynchronousStrategy> parts;
  for (std::size_t i = 0; i < c.strategy.components; ++i) {
    CorruptionModel mi = model;
    mi.seed = derive_seed(model.seed, i);
    parts.push_back(corrupt(lifted(i == 0 ? c.strategy.codeword_seed : derive_seed(c.strategy.codeword_seed, i)), mi));
  }
  std::vector<Rational> w(parts.size(), Rational(1, static_cast<std::int64_t>(parts.size())));
  return mixture(parts, w);
}

json goodness_to_json(const GoodnessReport& g) {
  return {{"eps", g.eps},
          {"delta", g.delta},
          {"delta_first", g.delta_first},
          {"delta_second", g.delta_second},
          {"xi", g.xi},
          {"lines_pass", g.lines_pass},
          {"subcube_pass", g.subcube_pass},
          {"sync_pass", g.sync_pass},
          {"pass_probability", g.pass_probability}};
}

json extraction_to_json(const ExtractionReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"m", l.m},
                      {"x", l.x},
                      {"nu", l.nu},
                      {"completeness", l.completeness},
                      {"consistency", l.consistency},
                      {"psi_deficit", l.psi_deficit},
                      {"zeta", l.zeta},
                      {"gap", l.gap},
                      {"completeness_ok", l.completeness_ok}});
  json pastings = json::array();
  for (const auto& p : r.pastings)
    pastings.push_back({{"m", p.m},
                        {"method", p.method},
                        {"k", p.k},
                        {"tuples", p.tuples},
                        {"sampled", p.sampled},
                        {"kappa", p.kappa},
                        {"zeta", p.zeta},
                        {"completeness_raw", p.completeness_raw},
                        {"consistency", p.consistency},
                        {"commutator_slice_points", p.commutator_slice_points},
                        {"commutator_slices", p.commutator_slices},
                        {"nu", nu_to_json(p.nu)},
                        {"completeness_bound_ok", p.completeness_bound_ok},
                        {"consistency_bound_ok", p.consistency_bound_ok}});
  return {{"eps", r.eps},       {"delta", r.delta},   {"pass", r.pass},
          {"eta", r.eta},       {"levels", levels},   {"pastings", pastings},
          {"self_improvement_ok", r.self_improvement_ok}};
}

json cmd_code_info(const RunConfig& c) {
  auto start = Clock::now();
  validate_config(c);
  LinearCode code = build_code(c);
  json rep = report_head(c, "code-info");
  const std::size_t d = distance(code);
  json gammas = json::array();
  for (std::size_t j = 1; j <= c.m; ++j) {
    const double ratio = static_cast<double>(d) / static_cast<double>(code.n());
    json row = {{"m", j},
                {"gamma", gamma(code.n(), d, j)},
                {"gamma_formula", 1.0 - std::pow(ratio, static_cast<double>(j))},
                {"tensor_distance", int_pow(d, j)}};
    TensorCode tc(code, j);
    if (tc.enumerable() && tc.size() <= 100000) {
      std::size_t best = tc.points();
      for (const auto& w : tc.all_codewords()) {
        std::size_t weight = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Symbol v) { return v != 0; }));
        if (weight > 0) best = std::min(best, weight);
      }
      row["tensor_distance_enumerated"] = best;
      row["gamma_enumerated"] = 1.0 - static_cast<double>(best) / static_cast<double>(tc.points());
    }
    gammas.push_back(row);
  }
  rep["code"] = {{"q", code.q()},
                 {"n", code.n()},
                 {"k", code.k()},
                 {"d", d},
                 {"t", code.t()},
                 {"singleton_bound", code.n() - code.k() + 1},
                 {"interpolable", code.interpolable()},
                 {"codewords", code.size()},
                 {"gamma_table", gammas}};
  rep["timing"] = timing_block(start);
  return rep;
}

json cmd_value(const RunConfig& c) {
  auto start = Clock::now();
  SynchronousStrategy s = build_strategy(c);
  json rep = report_head(c, "value");
  MonteCarloResult mc;
  double exact = 0;
  if (c.game == "synchronous") {
    GameSpec g = build_game(s.code, s.m);
    exact = evaluate_synchronous(s, g);
    rep["goodness"] = goodness_to_json(goodness_synchronous(s, g));
    mc = monte_carlo_play(s, g, c.rounds, c.seed);
  } else {
    GameSpec g2 = build_two_prover_game(s.code, s.m);
    BipartiteStrategy b = synchronous_embedding(s);
    BipartiteResult res = evaluate_bipartite(b, g2);
    exact = res.pass;
    rep["goodness"] = goodness_to_json(res.goodness);
    mc = monte_carlo_play(b, g2, c.rounds, c.seed);
  }
  const double dev = mc.rate - exact;
  double z = mc.std_error > 0 ? dev / mc.std_error : (std::abs(dev) <= 1e-9 ? 0.0 : INFINITY);
  rep["value"] = {{"exact", exact},
                  {"monte_carlo",
                   {{"rounds", mc.rounds},
                    {"passes", mc.passes},
                    {"rate", mc.rate},
                    {"std_error", mc.std_error},
                    {"z", std::isfinite(z) ? json(z) : json(nullptr)},
                    {"within_3sigma", std::abs(dev) <= 3 * mc.std_error + 1e-9}}}};
  rep["timing"] = timing_block(start);
  return rep;
}

json cmd_extract(const RunConfig& c, std::string* csv) {
  auto start = Clock::now();
  validate_config(c);
  json rep = report_head(c, "extract");
  ExtractionConfig ec = extraction_config(c);
  SynchronousStrategy s = build_strategy(c);
  Extraction ex = extract_global(s, ec);
  rep["extraction"] = extraction_to_json(ex.report);

  if (!c.sweep.empty()) {
    json rows = json::array();
    std::ostringstream os;
    os << "rho,eps,delta,eta\n" << std::setprecision(17);
    RunConfig sc = c;
    if (sc.strategy.kind == "honest") sc.strategy.kind = "corrupted";
    for (double rho : c.sweep) {
      Extraction e = extract_global(build_strategy(sc, rho), ec);
      rows.push_back({{"rho", rho}, {"eps", e.report.eps}, {"delta", e.report.delta}, {"eta", e.report.eta}});
      os << rho << ',' << e.report.eps << ',' << e.report.delta << ',' << e.report.eta << '\n';
    }
    rep["sweep"] = rows;
    if (csv) *csv = os.str();
  }
  rep["timing"] = timing_block(start);
  return rep;
}

json without_timing(json report) {
  report.erase("timing");
  return report;
}

// ---- verify -----------------------------------------------------------------

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::pair<std::string, int>> failures;  // first-seen order
  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    for (auto& f : failures)
      if (f.first == what) {
        ++f.second;
        return;
      }
    failures.emplace_back(what, 1);
  }
  std::string summary() const {
    std::ostringstream os;
    if (!failures.empty()) {
      os << "FAILED:";
      for (const auto& [what, count] : failures) os << ' ' << what << " (x" << count << ");";
      os << ' ';
    }
    os << detail.str();
    return os.str();
  }
};

using CheckFn = std::function<void(Outcome&, const VerifyOptions&)>;

struct CheckDef {
  std::string key, module, description;
  CheckFn run;
};

LinearCode rs(std::uint32_t q, std::size_t n, std::size_t s) { return make_reed_solomon(q, n, s); }

void check_field(Outcome& o, const VerifyOptions& opt) {
  Rng rng(derive_seed(opt.seed, 1));
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u}) {
    std::uniform_int_distribution<std::int64_t> pick(0, q - 1);
    for (int i = 0; i < 200; ++i) {
      FieldElement a(pick(rng), q), b(pick(rng), q), c(pick(rng), q);
      o.require((a + b) * c == a * c + b * c, "distributivity");
      o.require(a - a == FieldElement(0, q), "additive inverse");
      if (a.value != 0) o.require(a * field_inv(a) == FieldElement(1, q), "multiplicative inverse");
    }
  }
  o.detail << "5 fields x 200 triples";
}

void check_rs_distance(Outcome& o, const VerifyOptions&) {
  int count = 0;
  for (std::uint32_t q : {3u, 5u})
    for (std::size_t n = 2; n <= q; ++n)
      for (std::size_t s = 1; s < n; ++s) {
        o.require(distance(rs(q, n, s)) == n - s, "RS distance n - s");
        ++count;
      }
  o.detail << count << " codes";
}

void check_interpolation(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(5, 5, 2);
  Rng rng(derive_seed(opt.seed, 2));
  std::uniform_int_distribution<Symbol> sym(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> coords{0, 1, 2, 3, 4};
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(code.t());
    std::vector<Symbol> values(code.t());
    for (auto& v : values) v = sym(rng);
    int matches = 0;
    for (std::uint64_t i = 0; i < code.size(); ++i) {
      auto w = code.codeword_at(i);
      bool ok = true;
      for (std::size_t j = 0; j < coords.size(); ++j) ok = ok && w[coords[j]] == values[j];
      matches += ok;
    }
    o.require(matches == 1, "exactly one matching codeword");
    auto w = interpolate(code, coords, values);
    for (std::size_t j = 0; j < coords.size(); ++j) o.require(w[coords[j]] == values[j], "interpolant matches");
  }
  o.detail << "50 random (coords, values) on RS(5,5,2)";
}

void check_tensor_distance(Outcome& o, const VerifyOptions&) {
  LinearCode code = rs(3, 3, 1);
  TensorCode tc(code, 2);
  std::size_t best = tc.points();
  for (const auto& w : tc.all_codewords()) {
    auto wt = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Symbol v) { return v != 0; }));
    if (wt) best = std::min(best, wt);
  }
  o.require(best == code.d() * code.d(), "tensor distance d^2");
  o.detail << "min weight " << best;
}

void check_honest(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(3, 3, 1);
  auto s = honest_strategy(code, planted_codeword(code, 2, opt.seed));
  double v = evaluate_synchronous(s, build_game(code, 2));
  o.require(std::abs(v - 1) <= 1e-10, "honest value 1");
  o.detail << "value " << v;
}

void check_goodness(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(3, 3, 1);
  GameSpec g = build_game(code, 2);
  double worst = 0;
  for (std::uint64_t i = 0; i < 4; ++i) {
    auto rep = goodness_synchronous(random_projective_strategy(code, 2, 2, derive_seed(opt.seed, 30 + i)), g);
    double err = std::abs(rep.pass_probability - (1 - 0.5 * (rep.eps + 0.5 * (rep.delta_first + rep.delta_second))));
    worst = std::max(worst, err);
  }
  o.require(worst <= 1e-10, "pass = 1 - (eps + delta)/2");
  o.detail << "max deviation " << worst;
}

void check_metric(Outcome& o, const VerifyOptions& opt) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    std::vector<Submeasurement> ms, ns;
    for (std::uint64_t x = 0; x < 3; ++x) {
      ms.push_back(random_projective_measurement(3, 4, derive_seed(opt.seed, 100 * i + x), true));
      ns.push_back(random_submeasurement(3, 4, derive_seed(opt.seed, 100 * i + x + 50), 0.0));
    }
    auto M = MeasurementFamily::uniform(ms), N = MeasurementFamily::uniform(ns);
    double cons = consistency(M, N), close = closeness(M, N);
    auto fM = data_process(M, {0, 1, 0, 2}, 3), fN = data_process(N, {0, 1, 0, 2}, 3);
    o.require(consistency(fM, fN) <= cons + 1e-9, "data processing");
    o.require(close <= std::sqrt(2 * cons) + 1e-9, "closeness <= sqrt(2 consistency)");
    o.require(cons <= close + 1e-9, "consistency <= closeness");
  }
  o.detail << "20 family pairs";
}

void check_projectivization(Outcome& o, const VerifyOptions& opt) {
  double worst = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto A = random_near_projective(2 + i % 3, 2 + i % 3, derive_seed(opt.seed, 200 + i), 0.05, i % 2 ? 0.0 : 0.02);
    auto res = orthogonalize(A);
    if (opt.faults.count("orthogonalize")) {
      std::swap(res.projective[0], res.projective[1]);
      res.distance = std::sqrt(squared_distance(A, res.projective));
    }
    o.require(validate_submeasurement(res.projective, true).ok, "rounded measurement is projective");
    o.require(res.distance <= res.bound + 1e-12, "distance <= sqrt(18 zeta)");
    if (res.bound > 0) worst = std::max(worst, res.distance / res.bound);
  }
  o.detail << "50 inputs, worst distance/bound " << worst;
}

void check_duality(Outcome& o, const VerifyOptions& opt) {
  auto scalar = solve_duality({Op::Constant(1, 1, 0.2), Op::Constant(1, 1, 0.7), Op::Constant(1, 1, 0.1)});
  o.require(std::abs(scalar.primal - 0.7) <= 1e-7, "scalar closed form");
  double worst_gap = 0;
  for (std::uint64_t i = 0; i < 8; ++i) {
    Rng rng(derive_seed(opt.seed, 300 + i));
    std::vector<Op> A;
    for (int g = 0; g < 4; ++g) A.push_back(random_psd(3, rng, 1 + g % 3));
    for (auto& a : A) a /= op_norm(a);
    DualityOptions dopt;
    dopt.seed = derive_seed(opt.seed, 400 + i);
    auto sol = solve_duality(A, dopt);
    worst_gap = std::max(worst_gap, sol.gap);
    o.require(sol.gap <= 1e-6 && sol.gap >= -1e-8, "gap");
    o.require(sol.min_slack >= -1e-7, "feasibility");
    o.require(sol.slackness_residual <= 1e-5, "complementary slackness");
  }
  o.detail << "8 instances, worst gap " << worst_gap;
}

void check_self_improvement(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(3, 3, 1);
  TensorCode tc(code, 2);
  auto c = planted_codeword(code, 2, opt.seed);
  Submeasurement G;
  G.elements.assign(tc.size(), Op::Zero(1, 1));
  G[tc.index_of(c.table)] = Op::Identity(1, 1);
  auto fixed = self_improve(honest_strategy(code, c), G);
  o.require(fixed.zeta <= 1e-8 && std::abs(fixed.completeness - 1) <= 1e-12, "honest fixed point");
  for (std::uint64_t i = 0; i < 3; ++i) {
    auto s = random_projective_strategy(code, 2, 2, derive_seed(opt.seed, 500 + i));
    auto si = self_improve(s, random_projective_measurement(2, tc.size(), derive_seed(opt.seed, 510 + i), true));
    o.require(si.completeness_ok, "tau(H) >= 1 - nu - zeta");
    o.require(si.psi_check_min >= -1e-7, "psi(X) >= E_x tau(X A^x_h(x))");
  }
  o.detail << "fixed point plus 3 random strategies";
}

void check_pasting(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(5, 5, 1);
  auto c = planted_codeword(code, 2, opt.seed);
  auto s = honest_strategy(code, c);
  TensorCode lower(code, 1);
  std::vector<Submeasurement> slices;
  for (std::size_t x = 0; x < 5; ++x) {
    Submeasurement G;
    G.elements.assign(lower.size(), Op::Zero(1, 1));
    G[lower.index_of(restrict_slice(code, c, x).table)] = Op::Identity(1, 1);
    slices.push_back(G);
  }
  auto p1 = paste_method1(s, slices), p2 = paste_method2(s, slices);
  double diff = 0;
  for (std::size_t h = 0; h < p1.H.size(); ++h) diff = std::max(diff, (p1.H[h] - p2.H[h]).norm());
  o.require(diff <= 1e-12, "Method 1 equals Method 2 on honest slices");
  o.require(std::abs(p1.completeness_raw - 1) <= 1e-12, "honest completeness");
  o.detail << "max difference " << diff;
}

void check_induction(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(5, 5, 1);
  auto c = planted_codeword(code, 2, opt.seed);
  auto honest = extract_global(honest_strategy(code, c));
  o.require(honest.report.eta <= 1e-8, "honest eta");
  auto bad = corrupt(honest_strategy(code, c), {CorruptionKind::PointFlips, 0.04, derive_seed(opt.seed, 600), false});
  auto ex = extract_global(bad);
  TensorCode tc(code, 2);
  o.require(ex.G[tc.index_of(c.table)](0, 0).real() > 0.5, "corrupted table decodes to the planted codeword");
  o.detail << "eta honest " << honest.report.eta << ", corrupted " << ex.report.eta;
}

void check_commutation(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(3, 3, 1);
  GameSpec g = build_game(code, 2);
  auto honest = commutator_report(honest_strategy(code, planted_codeword(code, 2, opt.seed)), g);
  o.require(honest.points == 0.0, "honest commutator 0");
  for (std::uint64_t i = 0; i < 4; ++i) {
    auto rep = commutator_report(random_projective_strategy(code, 2, 2, derive_seed(opt.seed, 700 + i)), g);
    o.require(rep.points_ok, "sqrt(32 m delta) bound");
  }
  auto ex = commutator_report(anticommuting_pair_strategy(), g);
  o.require(ex.subcube_fail >= 0.01, "anticommuting exhibit fails the subcube test");
  o.detail << "exhibit commutator " << ex.points << ", subcube failure " << ex.subcube_fail;
}

void check_variance(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(5, 5, 1);
  for (std::uint64_t i = 0; i < 3; ++i) {
    auto c = planted_codeword(code, 2, derive_seed(opt.seed, 800 + i));
    auto s = corrupt(honest_strategy(code, c), {CorruptionKind::PointFlips, 0.04 * (i + 1), derive_seed(opt.seed, 810 + i), false});
    double eps = goodness_synchronous(s, build_game(code, 2)).eps;
    const auto& words = tensor_codewords(code, 2);
    std::vector<Op> A(words.size(), Op::Zero(1, 1));
    for (std::size_t g = 0; g < words.size(); ++g)
      for (std::size_t x = 0; x < s.num_points(); ++x) A[g] += s.points[x][words[g][x]] / 25.0;
    auto rep = variance_report(s, solve_duality(A).T, eps);
    o.require(rep.local_ok && rep.var_ok, "variance bounds");
    o.require(rep.global_le_m_local, "global <= m local");
  }
  o.detail << "3 corrupted strategies";
}

void check_spectral(Outcome& o, const VerifyOptions&) {
  for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 1}, {3, 2}, {4, 2}, {3, 3}}) {
    double expect = 1.0 / (static_cast<double>(m) * static_cast<double>(int_pow(n, m)));
    o.require(std::abs(axis_graph(n, m).lambda2() - expect) <= 1e-9, "lambda2 = 1/(m n^m)");
  }
  o.detail << "4 graphs";
}

void check_chernoff(Outcome& o, const VerifyOptions& opt) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng(derive_seed(opt.seed, 900 + i));
    Op P = random_psd(4, rng);
    Op G = P / (op_norm(P) * 1.01);
    o.require(chernoff_operator_check(G, 24, 2, 1.0 / 6.0).ok, "operator Chernoff bound");
  }
  o.require(std::abs(binomial_tail(4, 2, 0.5) - 11.0 / 16.0) <= 1e-15, "binomial tail");
  o.detail << "20 random G, k = 24";
}

void check_tv(Outcome& o, const VerifyOptions&) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k)
      o.require(tuple_tv_distance(n, k) <= static_cast<double>(k * k) / static_cast<double>(n) + 1e-12, "TV <= k^2/n");
  o.detail << "n <= 6, k <= 3";
}

void check_symmetrization(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(3, 3, 1);
  GameSpec g2 = build_two_prover_game(code, 2);
  double worst = 0;
  for (std::uint64_t i = 0; i < 2; ++i) {
    BipartiteStrategy b{random_projective_strategy(code, 2, 2, derive_seed(opt.seed, 1000 + i)),
                        random_projective_strategy(code, 2, 2, derive_seed(opt.seed, 1010 + i)), Vec()};
    Rng rng(derive_seed(opt.seed, 1020 + i));
    b.psi = random_gaussian(4, 1, rng).col(0);
    b.psi /= b.psi.norm();
    auto sym = symmetrize(b);
    o.require(validate_symmetric_form(sym).ok, "symmetric form");
    double diff = std::abs(evaluate_bipartite(sym, g2).pass - evaluate_bipartite(b, g2).pass);
    worst = std::max(worst, diff);
    o.require(diff <= 1e-9, "value preserved");
  }
  auto s = random_projective_strategy(code, 2, 2, opt.seed);
  auto emb = evaluate_bipartite(synchronous_embedding(s), g2);
  o.require(std::abs(emb.goodness.xi) <= 1e-10, "embedding has xi = 0");
  o.detail << "worst value change " << worst;
}

void check_monte_carlo(Outcome& o, const VerifyOptions& opt) {
  LinearCode code = rs(3, 3, 1);
  GameSpec g = build_game(code, 2);
  auto s = random_projective_strategy(code, 2, 2, derive_seed(opt.seed, 1100));
  double exact = evaluate_synchronous(s, g);
  auto mc = monte_carlo_play(s, g, 20000, derive_seed(opt.seed, 1101));
  o.require(std::abs(mc.rate - exact) <= 3 * mc.std_error, "within 3 sigma");
  auto again = monte_carlo_play(s, g, 20000, derive_seed(opt.seed, 1101));
  o.require(again.passes == mc.passes, "seed reproducible");
  o.detail << "exact " << exact << ", empirical " << mc.rate;
}

const std::vector<CheckDef>& checks() {
  static const std::vector<CheckDef> defs{
      {"field-axioms", "galois", "GF(q) arithmetic satisfies the field axioms", check_field},
      {"rs-distance", "codes", "RS(q,n,s) has distance n - s", check_rs_distance},
      {"interpolation", "codes", "t values determine exactly one codeword", check_interpolation},
      {"tensor-distance", "tensor", "C^{⊗2} has distance d^2", check_tensor_distance},
      {"honest-completeness", "game", "honest strategies win with probability 1", check_honest},
      {"goodness-relation", "game", "pass = 1 - (eps + delta)/2", check_goodness},
      {"metric-calculus", "opalg", "data processing and consistency/closeness relations", check_metric},
      {"projectivization", "opalg", "orthogonalization within sqrt(18 zeta)", check_projectivization},
      {"duality", "extract", "duality gap, feasibility and slackness", check_duality},
      {"self-improvement", "extract", "completeness conclusion and psi spot checks", check_self_improvement},
      {"pasting", "extract", "both pasting methods agree on honest slices", check_pasting},
      {"induction", "extract", "extraction recovers planted codewords", check_induction},
      {"commutation", "extract", "point commutators within sqrt(32 m delta)", check_commutation},
      {"variance", "extract", "local and global variance bounds", check_variance},
      {"spectral-gap", "spectral", "lambda2 of the axis graph", check_spectral},
      {"chernoff", "spectral", "binomial tail and operator Chernoff bound", check_chernoff},
      {"tv-distance", "spectral", "distinct tuples are k^2/n close to uniform", check_tv},
      {"symmetrization", "game", "symmetrization and embedding preserve value", check_symmetrization},
      {"monte-carlo", "game", "sampled referee matches the exact value", check_monte_carlo},
  };
  return defs;
}

}  // namespace

std::vector<std::string> verify_keys() {
  std::vector<std::string> keys;
  for (const auto& c : checks()) keys.push_back(c.key);
  return keys;
}

std::vector<std::string> known_faults() { return {"orthogonalize"}; }

std::vector<VerifyRow> run_verify(const VerifyOptions& opt) {
  for (const auto& f : opt.faults)
    if (f != "orthogonalize") throw ConfigError("unknown fault '" + f + "'");
  std::vector<VerifyRow> rows;
  for (const auto& def : checks()) {
    Outcome o;
    try {
      def.run(o, opt);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    rows.push_back({def.key, def.module, def.description, o.pass, o.summary()});
  }
  return rows;
}

json cmd_verify(const RunConfig& c, const VerifyOptions& opt) {
  auto start = Clock::now();
  json rep = report_head(c, "verify");
  auto rows = run_verify(opt);
  json list = json::array();
  bool all = true;
  for (const auto& r : rows) {
    list.push_back({{"key", r.key}, {"module", r.module}, {"description", r.description}, {"pass", r.pass},
                    {"detail", r.detail}});
    all = all && r.pass;
  }
  rep["checks"] = list;
  rep["all_pass"] = all;
  rep["faults"] = std::vector<std::string>(opt.faults.begin(), opt.faults.end());
  rep["timing"] = timing_block(start);
  return rep;
}

std::string format_matrix(const std::vector<VerifyRow>& rows) {
  std::size_t w = 0, mw = 0;
  for (const auto& r : rows) {
    w = std::max(w, r.key.size());
    mw = std::max(mw, r.module.size());
  }
  std::ostringstream os;
  for (const auto& r : rows)
    os << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(w)) << r.key << "  "
       << std::setw(static_cast<int>(mw)) << r.module << "  " << r.detail << '\n';
  return os.str();
}

// ---- report schema -------------------------------------------------------------

namespace {

enum class Kind { Number, Integer, Boolean, String, Object, Array, Any };

bool has_kind(const json& v, Kind k) {
  switch (k) {
    case Kind::Number: return v.is_number() || v.is_null();
    case Kind::Integer: return v.is_number_integer() || v.is_number_unsigned();
    case Kind::Boolean: return v.is_boolean();
    case Kind::String: return v.is_string();
    case Kind::Object: return v.is_object();
    case Kind::Array: return v.is_array();
    case Kind::Any: return true;
  }
  return false;
}

using Fields = std::map<std::string, Kind>;

void check_object(const json& obj, const Fields& required, const Fields& optional, const std::string& where, bool strict,
                  std::vector<std::string>& problems) {
  if (!obj.is_object()) {
    problems.push_back(where + " is not an object");
    return;
  }
  for (const auto& [key, kind] : required) {
    if (!obj.contains(key))
      problems.push_back("missing " + where + key);
    else if (!has_kind(obj.at(key), kind))
      problems.push_back("wrong type for " + where + key);
  }
  for (const auto& [key, value] : obj.items()) {
    if (required.count(key)) continue;
    auto it = optional.find(key);
    if (it == optional.end()) {
      if (strict) problems.push_back("unknown field " + where + key);
    } else if (!has_kind(value, it->second)) {
      problems.push_back("wrong type for " + where + key);
    }
  }
}

const Fields kGoodness{{"eps", Kind::Number},        {"delta", Kind::Number},        {"delta_first", Kind::Number},
                       {"delta_second", Kind::Number}, {"xi", Kind::Number},          {"lines_pass", Kind::Number},
                       {"subcube_pass", Kind::Number}, {"sync_pass", Kind::Number},   {"pass_probability", Kind::Number}};

}  // namespace

std::vector<std::string> check_report(const json& report, bool strict) {
  std::vector<std::string> problems;
  check_object(report, {{"schema", Kind::String}, {"version", Kind::String}, {"command", Kind::String},
                        {"config", Kind::Object}},
               {{"timing", Kind::Object}, {"code", Kind::Object}, {"goodness", Kind::Object}, {"value", Kind::Object},
                {"extraction", Kind::Object}, {"sweep", Kind::Array}, {"checks", Kind::Array},
                {"all_pass", Kind::Boolean}, {"faults", Kind::Array}, {"warnings", Kind::Array}},
               "", strict, problems);
  if (!problems.empty() && !report.is_object()) return problems;
  if (report.value("schema", "") != kReportSchema) problems.push_back("schema is not " + std::string(kReportSchema));
  if (report.contains("config")) {
    try {
      validate_config(parse_config(report.at("config"), strict));
    } catch (const std::exception& e) {
      problems.push_back(std::string("config: ") + e.what());
    }
  }
  if (report.contains("timing")) check_object(report["timing"], {{"seconds", Kind::Number}}, {}, "timing.", strict, problems);
  if (report.contains("goodness")) check_object(report["goodness"], kGoodness, {}, "goodness.", strict, problems);
  if (report.contains("value")) {
    check_object(report["value"], {{"exact", Kind::Number}, {"monte_carlo", Kind::Object}}, {}, "value.", strict,
                 problems);
    if (report["value"].contains("monte_carlo"))
      check_object(report["value"]["monte_carlo"],
                   {{"rounds", Kind::Integer}, {"passes", Kind::Integer}, {"rate", Kind::Number},
                    {"std_error", Kind::Number}, {"z", Kind::Number}, {"within_3sigma", Kind::Boolean}},
                   {}, "value.monte_carlo.", strict, problems);
  }
  if (report.contains("code"))
    check_object(report["code"],
                 {{"q", Kind::Integer}, {"n", Kind::Integer}, {"k", Kind::Integer}, {"d", Kind::Integer},
                  {"t", Kind::Integer}, {"singleton_bound", Kind::Integer}, {"interpolable", Kind::Boolean},
                  {"codewords", Kind::Integer},
                  {"gamma_table", Kind::Array}},
                 {}, "code.", strict, problems);
  if (report.contains("extraction")) {
    const auto& ex = report["extraction"];
    check_object(ex,
                 {{"eps", Kind::Number}, {"delta", Kind::Number}, {"pass", Kind::Number}, {"eta", Kind::Number},
                  {"levels", Kind::Array}, {"pastings", Kind::Array}, {"self_improvement_ok", Kind::Boolean}},
                 {}, "extraction.", strict, problems);
    if (ex.contains("levels") && ex["levels"].is_array())
      for (const auto& l : ex["levels"])
        check_object(l,
                     {{"m", Kind::Integer}, {"x", Kind::Integer}, {"nu", Kind::Number}, {"completeness", Kind::Number},
                      {"consistency", Kind::Number}, {"psi_deficit", Kind::Number}, {"zeta", Kind::Number},
                      {"gap", Kind::Number}, {"completeness_ok", Kind::Boolean}},
                     {}, "extraction.levels[].", strict, problems);
    if (ex.contains("pastings") && ex["pastings"].is_array())
      for (const auto& p : ex["pastings"])
        check_object(p,
                     {{"m", Kind::Integer}, {"method", Kind::Integer}, {"k", Kind::Integer}, {"tuples", Kind::Integer},
                      {"sampled", Kind::Boolean}, {"kappa", Kind::Number}, {"zeta", Kind::Number},
                      {"completeness_raw", Kind::Number}, {"consistency", Kind::Number},
                      {"commutator_slice_points", Kind::Number}, {"commutator_slices", Kind::Number},
                      {"nu", Kind::Object}, {"completeness_bound_ok", Kind::Boolean},
                      {"consistency_bound_ok", Kind::Boolean}},
                     {}, "extraction.pastings[].", strict, problems);
  }
  if (report.contains("checks") && report["checks"].is_array())
    for (const auto& c : report["checks"])
      check_object(c,
                   {{"key", Kind::String}, {"module", Kind::String}, {"description", Kind::String},
                    {"pass", Kind::Boolean}, {"detail", Kind::String}},
                   {}, "checks[].", strict, problems);
  return problems;
}

}  // namespace tcq::cli
