// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tcq/extract.hpp"
#include "tcq/spectral.hpp"

using namespace tcq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool ok = true;
  std::size_t failures = 0;
  std::string first_failure;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) first_failure = what;
    ok = false;
    ++failures;
  }
};

std::size_t weight(const Table& w) {
  std::size_t c = 0;
  for (Symbol v : w) c += v != 0;
  return c;
}

std::size_t min_tensor_weight(const LinearCode& code, std::size_t m) {
  TensorCode tc(code, m);
  std::size_t best = tc.points();
  for (const auto& w : tc.all_codewords())
    if (std::size_t wt = weight(w)) best = std::min(best, wt);
  return best;
}

Submeasurement indicator(std::size_t outcomes, std::size_t hot, std::size_t r) {
  Submeasurement G;
  G.elements.assign(outcomes, Op::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)));
  G[hot] = Op::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  return G;
}

double max_diff(const Submeasurement& A, const Submeasurement& B) {
  double d = 0;
  for (std::size_t i = 0; i < A.size(); ++i) d = std::max(d, (A[i] - B[i]).cwiseAbs().maxCoeff());
  return d;
}

// Point answers of an r = 1 classical strategy.
Table observed_table(const SynchronousStrategy& s) {
  Table seen(s.num_points(), 0);
  for (std::size_t u = 0; u < seen.size(); ++u)
    for (Symbol a = 0; a < s.q(); ++a)
      if (s.points[u][a](0, 0).real() > 0.5) seen[u] = a;
  return seen;
}

std::size_t nearest_codeword(const std::vector<Table>& words, const Table& seen) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < words.size(); ++i)
    if (agreement_count(words[i], seen) > agreement_count(words[best], seen)) best = i;
  return best;
}

void c1_honest_completeness(Outcome& c) {
  auto start = Clock::now();
  LinearCode code = make_reed_solomon(5, 5, 1);
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    double v = evaluate_synchronous(honest_strategy(code, planted_codeword(code, 2, seed)), build_game(code, 2));
    worst = std::max(worst, std::abs(v - 1));
  }
  const double t = seconds_since(start);
  c.require(worst <= 1e-10, "value differs from 1");
  c.require(t < 60, "runtime");
  c.note << "max |value - 1| = " << worst << ", " << t << " s";
}

void c2_distances(Outcome& c) {
  int codes = 0;
  for (std::uint32_t q : {3u, 5u, 7u})
    for (std::size_t n = 2; n <= q; ++n)
      for (std::size_t s = 1; s < n; ++s) {
        auto code = make_reed_solomon(q, n, s);
        c.require(brute_force_distance(code.generator()) == n - s, "RS distance");
        ++codes;
      }
  for (std::uint32_t q : {3u, 5u}) {
    auto code = make_reed_solomon(q, q, 1);
    const std::size_t d = q - 1;
    c.require(min_tensor_weight(code, 2) == d * d, "tensor distance");
  }
  c.note << codes << " RS codes, 2 tensor codes";
}

void c3_interpolation(Outcome& c) {
  std::mt19937_64 rng(3);
  int codes = 0;
  for (std::uint32_t q : {3u, 5u, 7u})
    for (std::size_t n = 2; n <= q; ++n)
      for (std::size_t s = 1; s < n; ++s) {
        auto code = make_reed_solomon(q, n, s);
        std::vector<Codeword> words;
        for (std::uint64_t i = 0; i < code.size(); ++i) words.push_back(code.codeword_at(i));
        std::uniform_int_distribution<Symbol> sym(0, q - 1);
        for (int trial = 0; trial < 200; ++trial) {
          std::vector<std::size_t> coords(n);
          std::iota(coords.begin(), coords.end(), 0);
          std::shuffle(coords.begin(), coords.end(), rng);
          coords.resize(code.t());
          std::vector<Symbol> values(code.t());
          for (auto& v : values) v = sym(rng);
          int matches = 0;
          for (const auto& w : words) {
            bool hit = true;
            for (std::size_t j = 0; j < coords.size() && hit; ++j) hit = w[coords[j]] == values[j];
            matches += hit;
          }
          c.require(matches == 1, "matching codeword count != 1");
        }
        ++codes;
      }
  c.note << codes << " codes x 200 trials";
}

void c4_spectral(Outcome& c) {
  double worst = 0;
  for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 1}, {3, 2}, {4, 2}, {3, 3}}) {
    const double expect = 1.0 / (static_cast<double>(m) * static_cast<double>(int_pow(n, m)));
    worst = std::max(worst, std::abs(axis_graph(n, m).lambda2() - expect));
  }
  c.require(worst <= 1e-9, "lambda2");
  c.note << "max error " << worst;
}

void c5_metric(Outcome& c) {
  const std::vector<std::size_t> f{0, 1, 0, 2};
  for (std::uint64_t i = 0; i < 100; ++i) {
    std::vector<Submeasurement> ms, ns, ps;
    for (std::uint64_t x = 0; x < 3; ++x) {
      const std::uint64_t base = 1000 * i + 10 * x;
      ms.push_back(random_projective_measurement(3, 4, base + 1, true));
      ns.push_back(random_submeasurement(3, 4, base + 2, 0.0));
      ps.push_back(random_submeasurement(3, 4, base + 3, 0.0));
    }
    auto M = MeasurementFamily::uniform(ms), N = MeasurementFamily::uniform(ns), P = MeasurementFamily::uniform(ps);
    const double cons = consistency(M, N), close = closeness(M, N);
    c.require(consistency(data_process(M, f, 3), data_process(N, f, 3)) <= cons + 1e-9, "data processing");
    c.require(consistency(data_process(N, f, 3), data_process(P, f, 3)) <= consistency(N, P) + 1e-9,
              "data processing (nonprojective)");
    c.require(close <= std::sqrt(2 * cons) + 1e-9, "closeness <= sqrt(2 consistency)");
    c.require(cons <= close + 1e-9, "consistency <= closeness");
    c.require(closeness(M, P) <= close + closeness(N, P) + 1e-9, "closeness triangle");

    Rng rng(5000 + i);
    Op A = random_gaussian(4, 4, rng), B = random_gaussian(4, 4, rng);
    c.require(std::abs(trace_state(A * B)) <= tau_norm(A) * tau_norm(B) + 1e-9, "Cauchy-Schwarz");
    c.require(one_norm(A * B) <= op_norm(A) * one_norm(B) + 1e-9, "Holder");
    c.require(tau_norm(A + B) <= tau_norm(A) + tau_norm(B) + 1e-9, "tau-norm triangle");
    c.require(one_norm(A + B) <= one_norm(A) + one_norm(B) + 1e-9, "trace-norm triangle");
  }
  c.note << "100 family triples, 100 operator pairs";
}

void c6_orthogonalization(Outcome& c) {
  double worst = 0, max_zeta = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t r = 2 + seed % 4, outcomes = 2 + seed % 5;
    auto A = random_near_projective(r, outcomes, 7000 + seed, 0.05, seed % 3 == 0 ? 0.02 : 0.0);
    auto res = orthogonalize(A);
    max_zeta = std::max(max_zeta, res.zeta);
    c.require(res.zeta <= 0.05, "input defect above 0.05");
    c.require(validate_submeasurement(res.projective, true).ok, "rounded output not projective");
    c.require(res.distance <= std::sqrt(18 * res.zeta) + 1e-12, "distance above sqrt(18 zeta)");
    if (res.zeta > 0) worst = std::max(worst, res.distance / std::sqrt(18 * res.zeta));
  }
  c.note << "max zeta " << max_zeta << ", worst distance/bound " << worst;
}

void c7_duality(Outcome& c) {
  auto scalar = solve_duality({Op::Constant(1, 1, 0.3), Op::Constant(1, 1, 0.9), Op::Constant(1, 1, 0.5)});
  c.require(std::abs(scalar.primal - 0.9) <= 1e-9 && std::abs(scalar.dual - 0.9) <= 1e-9, "scalar closed form");
  c.require(std::abs(scalar.T[1](0, 0).real() - 1) <= 1e-6, "scalar T concentrates on the maximum");

  std::vector<std::vector<Op>> instances;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng(8000 + i);
    const std::size_t r = 1 + i % 4, g = 2 + i % 5;
    std::vector<Op> A;
    for (std::size_t j = 0; j < g; ++j) A.push_back(random_psd(r, rng, 1 + j % r));
    double top = 0;
    for (const auto& a : A) top = std::max(top, op_norm(a));
    for (auto& a : A) a /= top;
    instances.push_back(A);
  }
  // instances arising from game strategies: A_g = E_x A^x_{g(x)}
  auto code = make_reed_solomon(3, 3, 1);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto s = random_projective_strategy(code, 2, 2, seed);
    const auto& words = tensor_codewords(code, 2);
    std::vector<Op> A(words.size(), Op::Zero(2, 2));
    for (std::size_t g = 0; g < words.size(); ++g)
      for (std::size_t x = 0; x < s.num_points(); ++x) A[g] += s.points[x][words[g][x]] / 9.0;
    instances.push_back(A);
  }
  double worst_gap = 0, worst_slack = 0, worst_cs = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    DualityOptions opt;
    opt.seed = 9000 + i;
    auto sol = solve_duality(instances[i], opt);
    worst_gap = std::max(worst_gap, std::abs(sol.gap));
    worst_slack = std::min(worst_slack, sol.min_slack);
    worst_cs = std::max(worst_cs, sol.slackness_residual);
    c.require(std::abs(sol.gap) <= 1e-6, "gap");
    c.require(sol.min_slack >= -1e-7, "W below A_g / r");
    c.require(sol.slackness_residual <= 1e-5, "complementary slackness");
  }
  c.note << instances.size() << " instances, max gap " << worst_gap << ", min slack " << worst_slack
         << ", max residual " << worst_cs;
}

void c8_self_improvement(Outcome& c) {
  int runs = 0;
  for (auto [q, seed] : std::vector<std::pair<std::uint32_t, std::uint64_t>>{{3, 1}, {5, 2}}) {
    auto code = make_reed_solomon(q, q, 1);
    TensorCode tc(code, 2);
    auto w = planted_codeword(code, 2, seed);
    for (std::size_t r : {1, 2}) {
      auto s = tensor_with_identity(honest_strategy(code, w), r);
      auto G = indicator(tc.size(), tc.index_of(w.table), r);
      auto si = self_improve(s, G);
      c.require(max_diff(si.H, G) <= 1e-8, "H != G at the honest fixed point");
      for (double deficit : {si.nu, si.consistency, si.psi_deficit, si.zeta, 1 - si.completeness})
        c.require(std::abs(deficit) <= 1e-8, "honest deficit above 1e-8");
      c.require(si.completeness_ok, "tau(H) >= 1 - nu - zeta");
      ++runs;
    }
  }
  auto code = make_reed_solomon(3, 3, 1);
  TensorCode tc(code, 2);
  double worst = 1;
  auto record = [&](const SelfImprovement& si) {
    c.require(si.completeness >= 1 - si.nu - si.zeta - 1e-9, "tau(H) >= 1 - nu - zeta");
    worst = std::min(worst, si.completeness - (1 - si.nu - si.zeta));
    ++runs;
  };
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto s = random_projective_strategy(code, 2, 2, seed);
    record(self_improve(s, random_projective_measurement(2, tc.size(), 100 + seed, true)));
    auto w = planted_codeword(code, 2, seed);
    auto bad = corrupt(honest_strategy(code, w), {CorruptionKind::PointFlips, 0.1, seed, false});
    record(self_improve(bad, indicator(tc.size(), tc.index_of(w.table), 1)));
  }
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto ex = extract_global(random_projective_strategy(code, 2, 2, 200 + seed));
    for (const auto& l : ex.report.levels) {
      c.require(l.completeness_ok, "extraction level completeness");
      ++runs;
    }
  }
  c.note << runs << " runs, min tau(H) - (1 - nu - zeta) over random runs " << worst;
}

void c9_classical_decoding(Outcome& c) {
  auto code = make_reed_solomon(5, 5, 1);
  const auto& words = tensor_codewords(code, 2);
  double slowest = 0, least_mass = 1;
  for (int step = 1; step <= 5; ++step) {
    const double rho = 0.01 * step;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto w = planted_codeword(code, 2, 40 + seed);
      auto s = corrupt(honest_strategy(code, w), {CorruptionKind::PointFlips, rho, 50 + seed, false});
      auto start = Clock::now();
      auto ex = extract_global(s);
      slowest = std::max(slowest, seconds_since(start));
      const std::size_t best = nearest_codeword(words, observed_table(s));
      const double mass = ex.G[best](0, 0).real();
      least_mass = std::min(least_mass, mass);
      c.require(mass >= 1 - 1e-8, "G not concentrated on the nearest codeword");
      c.require(std::abs(ex.report.eta - (1 - agreement_fraction(words[best], observed_table(s)))) <= 1e-10,
                "eta differs from the nearest-codeword disagreement");
    }
  }
  c.require(slowest < 600, "runtime");
  c.note << "15 runs, min mass on nearest codeword " << least_mass << ", slowest " << slowest << " s";
}

void c10_monotonicity(Outcome& c) {
  auto code = make_reed_solomon(5, 5, 1);
  std::ostringstream series;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto w = planted_codeword(code, 2, 60 + seed);
    double prev = -1;
    for (int step = 0; step <= 8; ++step) {
      const double rho = 0.025 * step;
      auto s = corrupt(honest_strategy(code, w), {CorruptionKind::PointFlips, rho, 70 + seed, false});
      const double eta = extract_global(s).report.eta;
      if (step == 0) c.require(eta <= 1e-8, "eta(0) above 1e-8");
      c.require(eta >= prev - 1e-12, "eta decreased");
      prev = eta;
      if (seed == 0) series << (step ? " " : "") << eta;
    }
  }
  c.note << "3 planted codewords, rho = 0..0.2; eta series " << series.str();
}

void c11_method2_completeness(Outcome& c) {
  auto code = make_reed_solomon(3, 3, 1);
  auto w = planted_codeword(code, 2, 8);
  const std::size_t base = 4, D = 64;
  auto s = tensor_with_identity(honest_strategy(code, w), D);
  TensorCode lower(code, 1);
  double worst = 0;
  for (double kappa : {0.25, 0.5, 0.75}) {
    const std::size_t cut = static_cast<std::size_t>((1 - kappa) * base);
    std::vector<Submeasurement> slices;
    for (std::size_t x = 0; x < 3; ++x) {
      Submeasurement G;
      G.elements.assign(lower.size(), Op::Zero(D, D));
      const std::size_t scale = static_cast<std::size_t>(int_pow(base, x));
      auto& target = G[lower.index_of(restrict_slice(code, w, x).table)];
      for (std::size_t j = 0; j < D; ++j)
        if ((j / scale) % base < cut) target(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1;
      slices.push_back(G);
    }
    PastingConfig cfg;
    cfg.k = 3;
    auto res = paste_method2(s, slices, cfg);
    const double err = std::abs(res.completeness_raw - binomial_tail(3, 2, 1 - kappa));
    worst = std::max(worst, err);
    c.require(err <= 1e-6, "product model differs from F(1 - kappa)");
  }
  bool any_precondition = false;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(11000 + seed);
    const std::size_t r = 2 + seed % 4;
    Op P = random_psd(r, rng);
    Op G = P / (op_norm(P) * (1.0 + 0.01 * static_cast<double>(seed % 7)));
    auto chk = chernoff_operator_check(G, 20, 2, 1.0 / 6.0, false);
    any_precondition = any_precondition || chk.precondition;
    c.require(chk.ok, "operator Chernoff inequality");
  }
  c.note << "product model max error " << worst << "; 100 Chernoff checks at (20, 2, 1/6), precondition k >= 2t/theta "
         << (any_precondition ? "held" : "not met (inequality checked anyway)");
}

void c12_tv(Outcome& c) {
  double tightest = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
      const double bound = static_cast<double>(k * k) / static_cast<double>(n);
      const double tv = tuple_tv_distance(n, k);
      c.require(tv <= bound + 1e-12, "TV above k^2/n");
      tightest = std::max(tightest, tv / bound);
    }
  c.note << "max TV/bound " << tightest;
}

void c13_commutation(Outcome& c) {
  auto code = make_reed_solomon(3, 3, 1);
  for (std::size_t m : {2, 3}) {
    GameSpec g = build_game(code, m);
    auto honest = commutator_report(tensor_with_identity(honest_strategy(code, planted_codeword(code, m, 1)), 2), g);
    c.require(honest.points == 0.0, "honest commutator nonzero");
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto rep = commutator_report(random_projective_strategy(code, m, 2, 300 + seed), g);
      c.require(rep.points <= std::sqrt(32.0 * static_cast<double>(m) * rep.subcube_fail) + 1e-9,
                "random strategy above the commutator bound");
    }
  }
  auto exhibit = commutator_report(anticommuting_pair_strategy(), build_game(code, 2));
  c.require(exhibit.subcube_fail >= 0.01, "exhibit passes the subcube test");
  c.note << "exhibit subcube failure " << exhibit.subcube_fail << ", commutator " << exhibit.points;
}

void c14_monte_carlo(Outcome& c) {
  auto code = make_reed_solomon(3, 3, 1);
  GameSpec g = build_game(code, 2);
  double worst_z = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = random_projective_strategy(code, 2, 1 + seed % 3, 400 + seed);
    const double exact = evaluate_synchronous(s, g);
    auto mc = monte_carlo_play(s, g, 100000, 500 + seed);
    const double sigma = std::sqrt(exact * (1 - exact) / 100000.0);
    const double z = sigma > 0 ? std::abs(mc.rate - exact) / sigma : 0.0;
    worst_z = std::max(worst_z, z);
    c.require(std::abs(mc.rate - exact) <= 3 * sigma, "outside 3 sigma");
  }
  c.note << "10 strategies x 1e5 rounds, max |z| " << worst_z;
}

void c15_two_prover(Outcome& c) {
  auto code = make_reed_solomon(3, 3, 1);
  GameSpec g = build_game(code, 2), g2 = build_two_prover_game(code, 2);
  double worst_emb = 0, worst_sym = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = random_projective_strategy(code, 2, 1 + seed % 3, 600 + seed);
    auto rep = goodness_synchronous(s, g);
    auto res = evaluate_bipartite(synchronous_embedding(s), g2);
    c.require(std::abs(res.goodness.xi) <= 1e-10, "embedding xi != 0");
    const double d = std::max({std::abs(res.goodness.lines_pass - rep.lines_pass),
                               std::abs(res.goodness.subcube_pass - rep.subcube_pass),
                               std::abs(res.pass - (rep.lines_pass + rep.subcube_pass + 1.0) / 3.0)});
    worst_emb = std::max(worst_emb, d);
    c.require(d <= 1e-10, "embedding changes the value");

    auto b = tcq::testing::random_bipartite(code, 2, 1 + seed % 3, 1 + (seed + 1) % 3, 700 + seed);
    auto sym = symmetrize(b);
    c.require(validate_symmetric_form(sym).ok, "symmetrized strategy not symmetric");
    const double ds = std::abs(evaluate_bipartite(sym, g2).pass - evaluate_bipartite(b, g2).pass);
    worst_sym = std::max(worst_sym, ds);
    c.require(ds <= 1e-9, "symmetrize changes the value");
  }
  c.note << "10 strategies, embedding max diff " << worst_emb << ", symmetrize max diff " << worst_sym;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"honest completeness", c1_honest_completeness},
      {"code and tensor distances", c2_distances},
      {"interpolation uniqueness", c3_interpolation},
      {"axis graph spectral gap", c4_spectral},
      {"metric calculus", c5_metric},
      {"orthogonalization bound", c6_orthogonalization},
      {"duality", c7_duality},
      {"self-improvement", c8_self_improvement},
      {"classical decoding", c9_classical_decoding},
      {"end-to-end monotonicity", c10_monotonicity},
      {"Method 2 completeness and operator Chernoff", c11_method2_completeness},
      {"tuple TV bound", c12_tv},
      {"commutation diagnostics", c13_commutation},
      {"Monte Carlo referee", c14_monte_carlo},
      {"two-prover embedding and symmetrization", c15_two_prover},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome c;
    auto start = Clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s  %2zu  %-44s  %s", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), c.note.str().c_str());
    if (!c.ok) std::printf("  [%zu failures, first: %s]", c.failures, c.first_failure.c_str());
    std::printf("  (%.2f s)\n", seconds_since(start));
    std::fflush(stdout);
    failed += !c.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
