#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "support.hpp"
#include "tcq/extract.hpp"
#include "tcq/spectral.hpp"
#include "tcq/strategies.hpp"

using namespace tcq;

namespace {

Op scalar(double v) { return Op::Constant(1, 1, v); }

Submeasurement indicator(std::size_t outcomes, std::size_t at, std::size_t r) {
  Submeasurement M;
  M.elements.assign(outcomes, Op::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)));
  M[at] = Op::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  return M;
}

SynchronousStrategy inflate(const SynchronousStrategy& s, std::size_t D) { return tensor_with_identity(s, D); }

double max_diff(const Submeasurement& a, const Submeasurement& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).norm());
  return d;
}

LinearCode rs(std::uint32_t q, std::size_t n, std::size_t s) { return make_reed_solomon(q, n, s); }

std::vector<Op> random_psd_list(std::size_t count, std::size_t r, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Op> out;
  for (std::size_t i = 0; i < count; ++i) {
    Op P = random_psd(r, rng, 1 + i % r);
    out.push_back(P / op_norm(P));
  }
  return out;
}

}  // namespace

TEST(Duality, ScalarClosedFormIsTheMaximum) {
  std::vector<Op> A{scalar(0.2), scalar(0.7), scalar(0.1)};
  for (auto solver : {DualSolver::Barrier, DualSolver::ExponentiatedGradient}) {
    DualityOptions opt;
    opt.solver = solver;
    auto sol = solve_duality(A, opt);
    EXPECT_NEAR(sol.primal, 0.7, 1e-7);
    EXPECT_GE(sol.T[1](0, 0).real(), 1 - 1e-6);
    EXPECT_LE(sol.gap, 1e-6);
    EXPECT_GE(sol.gap, -1e-8);
  }
}

TEST(Duality, AutoSolvesScalarCaseExactly) {
  std::vector<Op> A{scalar(0.3), scalar(0.9), scalar(0.5), scalar(0.9)};
  auto sol = solve_duality(A);
  EXPECT_EQ(sol.primal, 0.9);
  EXPECT_EQ(sol.dual, 0.9);
  EXPECT_EQ(sol.gap, 0.0);
  EXPECT_EQ(sol.T[1](0, 0).real(), 1.0);
  EXPECT_EQ(sol.T[3](0, 0).real(), 0.0);
  EXPECT_EQ(sol.min_slack, 0.0);
  EXPECT_LE(sol.slackness_residual, 1e-15);
}

TEST(Duality, SingleConstraintIsTight) {
  auto A = random_psd_list(1, 3, 11);
  auto sol = solve_duality(A);
  EXPECT_LT((sol.W - A[0] / 3.0).norm(), 1e-6);
  EXPECT_LT((sol.T[0] - Op::Identity(3, 3)).norm(), 1e-8);
  EXPECT_LE(std::abs(sol.gap), 1e-8);
}

TEST(Duality, CommutingDiagonalGivesElementwiseMax) {
  Rng rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  const int r = 4;
  std::vector<Op> A;
  Eigen::VectorXd top = Eigen::VectorXd::Zero(r);
  for (int g = 0; g < 5; ++g) {
    Eigen::VectorXd d(r);
    for (int i = 0; i < r; ++i) d(i) = U(rng);
    top = top.cwiseMax(d);
    A.push_back(d.cast<cplx>().asDiagonal());
  }
  for (auto solver : {DualSolver::Barrier, DualSolver::ExponentiatedGradient}) {
    DualityOptions opt;
    opt.solver = solver;
    auto sol = solve_duality(A, opt);
    Op expect = (top / r).cast<cplx>().asDiagonal();
    EXPECT_LT((sol.W - expect).norm(), 1e-6);
    EXPECT_LE(sol.gap, 1e-6);
  }
}

TEST(Duality, RandomInstancesCertifyOptimality) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::size_t r = 2 + seed % 3, count = 3 + seed % 6;
    auto A = random_psd_list(count, r, seed);
    DualityOptions opt;
    opt.seed = seed;
    auto sol = solve_duality(A, opt);
    EXPECT_TRUE(sol.converged) << seed;
    EXPECT_LE(sol.gap, 1e-6) << seed;
    EXPECT_GE(sol.gap, -1e-8) << seed;
    EXPECT_GE(sol.min_slack, -1e-7) << seed;
    EXPECT_LE(sol.completeness_error, 1e-8) << seed;
    EXPECT_LE(sol.slackness_residual, 1e-5) << seed;
    for (const auto& t : sol.T.elements) EXPECT_GE(min_eigenvalue(t), -1e-9);

    std::vector<Op> shuffled = A;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 1, shuffled.end());
    EXPECT_NEAR(solve_duality(shuffled, opt).primal, sol.primal, 1e-6) << seed;
  }
}

TEST(Duality, RejectsBadInput) {
  EXPECT_THROW(solve_duality({}), std::invalid_argument);
  EXPECT_THROW(solve_duality({scalar(-1.0)}), std::invalid_argument);
  EXPECT_THROW(solve_duality({scalar(1.0), Op::Identity(2, 2)}), std::invalid_argument);
}

TEST(SelfImprove, HonestFixedPoint) {
  auto code = rs(5, 5, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 3);
  auto s = honest_strategy(code, c);
  TensorCode tc(code, 2);
  auto G = indicator(tc.size(), tc.index_of(c.table), 1);
  auto si = self_improve(s, G);
  EXPECT_LT(max_diff(si.H, G), 1e-12);
  EXPECT_NEAR(si.completeness, 1.0, 1e-12);
  EXPECT_LE(si.nu, 1e-12);
  EXPECT_LE(si.consistency, 1e-8);
  EXPECT_LE(std::abs(si.psi_deficit), 1e-8);
  EXPECT_LE(si.zeta, 1e-8);
  EXPECT_TRUE(si.completeness_ok);
}

TEST(SelfImprove, CorruptedScalarKeepsPlantedIndicator) {
  auto code = rs(5, 5, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 4);
  auto s = corrupt(honest_strategy(code, c), {CorruptionKind::PointFlips, 0.04, 9, false});
  std::size_t flipped = 0;
  for (std::size_t u = 0; u < s.num_points(); ++u)
    if (s.points[u][c.table[u]](0, 0).real() < 0.5) ++flipped;
  ASSERT_EQ(flipped, 1u);
  TensorCode tc(code, 2);
  auto G = indicator(tc.size(), tc.index_of(c.table), 1);
  auto si = self_improve(s, G);
  EXPECT_LT(max_diff(si.H, G), 1e-12);
  const double miscount = static_cast<double>(flipped) / static_cast<double>(s.num_points());
  EXPECT_NEAR(si.consistency, miscount, 1e-12);
  EXPECT_NEAR(si.nu, miscount, 1e-12);
  EXPECT_TRUE(si.completeness_ok);
}

TEST(SelfImprove, RandomMeasurementOnHonestStrategy) {
  auto code = rs(3, 3, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 1);
  auto s = inflate(honest_strategy(code, c), 2);
  TensorCode tc(code, 2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto G = random_projective_measurement(2, tc.size(), seed, true);
    auto si = self_improve(s, G);
    EXPECT_TRUE(si.completeness_ok) << seed;
    EXPECT_GE(si.completeness, 1 - si.nu - si.zeta - 1e-9);
    EXPECT_GE(si.psi_check_min, -1e-7);
    EXPECT_LE(si.consistency, 1e-8) << seed;
    EXPECT_TRUE(validate_submeasurement(si.H, true));
  }
}

TEST(SelfImprove, RandomStrategiesSatisfyCompleteness) {
  auto code = rs(3, 3, 1);
  TensorCode tc(code, 2);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto s = tcq::testing::random_strategy(code, 2, 2, seed);
    auto G = random_projective_measurement(2, tc.size(), seed + 50, true);
    auto si = self_improve(s, G);
    EXPECT_TRUE(si.completeness_ok) << seed;
    EXPECT_GE(si.psi_check_min, -1e-7) << seed;
    EXPECT_LE(si.duality.gap, 1e-6) << seed;
    EXPECT_LE(si.rounding_distance, si.rounding_bound + 1e-12) << seed;
  }
}

TEST(Restrict, HonestSliceAndDimension) {
  auto code = rs(3, 3, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 3, 2);
  auto s = honest_strategy(code, c);
  for (std::size_t x = 0; x < 3; ++x) {
    auto sub = restrict_strategy(s, x);
    auto expect = honest_strategy(code, restrict_slice(code, c, x));
    EXPECT_EQ(sub.m, 2u);
    EXPECT_EQ(sub.r, s.r);
    ASSERT_EQ(sub.points.size(), expect.points.size());
    for (std::size_t u = 0; u < sub.points.size(); ++u) EXPECT_LT(max_diff(sub.points[u], expect.points[u]), 1e-15);
    for (std::size_t l = 0; l < sub.lines.size(); ++l) EXPECT_LT(max_diff(sub.lines[l], expect.lines[l]), 1e-15);
    for (std::size_t p = 0; p < sub.pairs.size(); ++p) EXPECT_LT(max_diff(sub.pairs[p], expect.pairs[p]), 1e-15);
  }
  EXPECT_THROW(restrict_strategy(s, 3), std::out_of_range);
}

TEST(Restrict, SliceLinesInconsistencyAveragesWithinFactor) {
  auto code = rs(3, 3, 1);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    for (std::size_t m : {2u, 3u}) {
      auto s = seed % 2 ? tcq::testing::random_strategy(code, m, 2, seed)
                        : corrupt(honest_strategy(code, tcq::testing::random_tensor_codeword(code, m, seed)),
                                  {CorruptionKind::PointFlips, 0.2, seed, false});
      double eps = goodness_synchronous(s, build_game(code, m)).eps;
      double avg = 0;
      for (std::size_t x = 0; x < 3; ++x) {
        auto sub = restrict_strategy(s, x);
        avg += goodness_synchronous(sub, build_game(code, m - 1)).eps / 3.0;
      }
      const double M = static_cast<double>(m - 1);
      EXPECT_LE(avg, (M + 1) / M * eps + 1e-12) << seed << " m=" << m;
    }
  }
}

namespace {

std::vector<Submeasurement> honest_slices(const LinearCode& code, const TensorCodeword& c, std::size_t r) {
  TensorCode lower(code, c.m - 1);
  std::vector<Submeasurement> out;
  for (std::size_t x = 0; x < code.n(); ++x)
    out.push_back(indicator(lower.size(), lower.index_of(restrict_slice(code, c, x).table), r));
  return out;
}

}  // namespace

TEST(Pasting, HonestSlicesGiveHonestIndicatorBothMethods) {
  auto code = rs(5, 5, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 6);
  auto s = honest_strategy(code, c);
  auto slices = honest_slices(code, c, 1);
  TensorCode tc(code, 2);
  auto expect = indicator(tc.size(), tc.index_of(c.table), 1);
  PastingConfig cfg;
  auto p1 = paste_method1(s, slices, cfg);
  auto p2 = paste_method2(s, slices, cfg);
  EXPECT_LT(max_diff(p1.H, expect), 1e-12);
  EXPECT_LT(max_diff(p2.H, expect), 1e-12);
  EXPECT_LT(max_diff(p1.H, p2.H), 1e-12);
  EXPECT_NEAR(p1.completeness_raw, 1.0, 1e-12);
  EXPECT_NEAR(p2.completeness_raw, 1.0, 1e-12);
  EXPECT_LE(p1.consistency, 1e-12);
  EXPECT_EQ(p1.tuples, 20u);
  EXPECT_EQ(p2.k, 5u);
  EXPECT_EQ(p2.tuples, 120u);
}

TEST(Pasting, HonestSlicesWithRankGiveHonestIndicator) {
  auto code = rs(3, 3, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 3, 6);
  auto s = inflate(honest_strategy(code, c), 2);
  auto slices = honest_slices(code, c, 2);
  TensorCode tc(code, 3);
  auto expect = indicator(tc.size(), tc.index_of(c.table), 2);
  EXPECT_LT(max_diff(paste_method1(s, slices).H, expect), 1e-12);
  EXPECT_LT(max_diff(paste_method2(s, slices).H, expect), 1e-12);
}

TEST(Pasting, Method1MatchesClassicalInterpolationDecoder) {
  auto code = rs(5, 5, 1);
  auto s = honest_strategy(code, tcq::testing::random_tensor_codeword(code, 2, 1));
  TensorCode lower(code, 1), upper(code, 2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::vector<TensorCodeword> words;
    std::vector<Submeasurement> slices;
    for (std::size_t x = 0; x < 5; ++x) {
      words.push_back(tcq::testing::random_tensor_codeword(code, 1, seed * 10 + x));
      slices.push_back(indicator(lower.size(), lower.index_of(words.back().table), 1));
    }
    std::map<std::uint64_t, double> oracle;
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = 0; b < 5; ++b) {
        if (a == b) continue;
        auto h = interpolate_slices(code, 2, {a, b}, {words[a], words[b]});
        oracle[upper.index_of(h.table)] += 1.0 / 20.0;
      }
    auto res = paste_method1(s, slices);
    for (std::uint64_t h = 0; h < upper.size(); ++h) {
      double got = res.H_raw[h](0, 0).real();
      double want = oracle.count(h) ? oracle[h] : 0.0;
      EXPECT_NEAR(got, want, 1e-12) << seed << " h=" << h;
    }
    EXPECT_NEAR(res.completeness_raw, 1.0, 1e-12);
  }
}

TEST(Pasting, IntermediateMeasurementIsSubmeasurement) {
  auto code = rs(3, 3, 1);
  TensorCode lower(code, 1);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto s = tcq::testing::random_strategy(code, 2, 3, seed);
    std::vector<Submeasurement> slices;
    for (std::size_t x = 0; x < 3; ++x) {
      auto G = random_projective_measurement(3, lower.size() + 1, seed * 7 + x, true);
      G.elements.pop_back();  // drop one outcome so the slice is incomplete
      slices.push_back(G);
    }
    for (int method : {1, 2}) {
      auto res = method == 1 ? paste_method1(s, slices) : paste_method2(s, slices);
      EXPECT_TRUE(validate_submeasurement(res.H_raw, false)) << seed;
      EXPECT_TRUE(validate_measurement(res.H, false)) << seed;
      EXPECT_LE(res.completeness_raw, 1 + 1e-12);
    }
  }
}

TEST(Pasting, EmptySlicesGiveOnlyCompletionMass) {
  auto code = rs(3, 3, 1);
  auto s = tcq::testing::random_strategy(code, 2, 2, 3);
  TensorCode lower(code, 1), upper(code, 2);
  std::vector<Submeasurement> slices(3);
  for (auto& G : slices) G.elements.assign(lower.size(), Op::Zero(2, 2));
  for (int method : {1, 2}) {
    auto res = method == 1 ? paste_method1(s, slices) : paste_method2(s, slices);
    EXPECT_EQ(res.completeness_raw, 0.0);
    EXPECT_LT((res.H[0] - Op::Identity(2, 2)).norm(), 1e-15);
    for (std::uint64_t h = 1; h < upper.size(); ++h) EXPECT_EQ(res.H[h].norm(), 0.0);
  }
}

TEST(Pasting, Method2BinomialProductModel) {
  // Diagonal space indexed by base-4 digits (d_0, d_1, d_2); slice x fires on basis vectors with d_x below a cut.
  auto code = rs(3, 3, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 8);
  const std::size_t base = 4, D = 64;
  auto s = inflate(honest_strategy(code, c), D);
  TensorCode lower(code, 1);
  for (double kappa : {0.25, 0.5, 0.75}) {
    const std::size_t cut = static_cast<std::size_t>((1 - kappa) * base);
    std::vector<Submeasurement> slices;
    for (std::size_t x = 0; x < 3; ++x) {
      Submeasurement G;
      G.elements.assign(lower.size(), Op::Zero(D, D));
      std::size_t digit_scale = static_cast<std::size_t>(int_pow(base, x));
      auto& target = G[lower.index_of(restrict_slice(code, c, x).table)];
      for (std::size_t j = 0; j < D; ++j)
        if ((j / digit_scale) % base < cut) target(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1;
      slices.push_back(G);
    }
    PastingConfig cfg;
    cfg.k = 3;
    auto res = paste_method2(s, slices, cfg);
    EXPECT_NEAR(res.completeness_raw, binomial_tail(3, 2, 1 - kappa), 1e-6) << kappa;
    EXPECT_EQ(res.k, 3u);
  }
}

TEST(Pasting, RejectsBadConfig) {
  auto code = rs(3, 3, 2);  // t = 3, six ordered triples
  auto c = tcq::testing::random_tensor_codeword(code, 2, 1);
  auto s = honest_strategy(code, c);
  auto slices = honest_slices(code, c, 1);
  PastingConfig cfg;
  cfg.k = 2;
  EXPECT_THROW(paste_method2(s, slices, cfg), std::invalid_argument);
  cfg.k = 0;
  cfg.tuple_budget = 3;
  cfg.allow_sampling = false;
  EXPECT_THROW(paste_method1(s, slices, cfg), BudgetExceeded);
  cfg.allow_sampling = true;
  cfg.tuple_samples = 30;
  auto res = paste_method1(s, slices, cfg);
  EXPECT_TRUE(res.sampled);
  EXPECT_EQ(res.tuples, 30u);
  TensorCode tc(code, 2);
  EXPECT_LT(max_diff(res.H, indicator(tc.size(), tc.index_of(c.table), 1)), 1e-12);
}

TEST(Extract, HonestPipelineIsExact) {
  for (int method : {1, 2}) {
    auto code = rs(5, 5, 1);
    auto c = tcq::testing::random_tensor_codeword(code, 2, 12);
    ExtractionConfig cfg;
    cfg.pasting.method = method;
    auto ex = extract_global(honest_strategy(code, c), cfg);
    TensorCode tc(code, 2);
    EXPECT_LT(max_diff(ex.G, indicator(tc.size(), tc.index_of(c.table), 1)), 1e-10);
    EXPECT_LE(ex.report.eta, 1e-8);
    EXPECT_EQ(ex.report.levels.size(), 5u);
    EXPECT_EQ(ex.report.pastings.size(), 1u);
    EXPECT_TRUE(ex.report.self_improvement_ok);
  }
}

TEST(Extract, HonestThreeDimensional) {
  auto code = rs(3, 3, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 3, 2);
  auto ex = extract_global(honest_strategy(code, c));
  TensorCode tc(code, 3);
  EXPECT_LT(max_diff(ex.G, indicator(tc.size(), tc.index_of(c.table), 1)), 1e-10);
  EXPECT_LE(ex.report.eta, 1e-8);
  EXPECT_EQ(ex.report.pastings.size(), 4u);  // three inner, one outer
  EXPECT_EQ(ex.report.levels.size(), 3u * 3u + 3u);
}

TEST(Extract, BaseCaseReturnsLineMeasurement) {
  auto code = rs(5, 5, 2);
  auto s = tcq::testing::random_strategy(code, 1, 2, 4);
  auto ex = extract_global(s);
  EXPECT_LT(max_diff(ex.G, s.lines[0]), 1e-15);
}

TEST(Extract, CorruptedScalarDecodesNearestCodeword) {
  auto code = rs(5, 5, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 21);
  auto s = corrupt(honest_strategy(code, c), {CorruptionKind::PointFlips, 0.05, 3, false});
  Table seen(s.num_points());
  for (std::size_t u = 0; u < seen.size(); ++u)
    for (Symbol a = 0; a < 5; ++a)
      if (s.points[u][a](0, 0).real() > 0.5) seen[u] = a;
  TensorCode tc(code, 2);
  const auto& words = tc.all_codewords();
  std::size_t best = 0;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (agreement_count(words[i], seen) > agreement_count(words[best], seen)) best = i;
  auto ex = extract_global(s);
  std::size_t top = 0;
  for (std::size_t i = 0; i < ex.G.size(); ++i)
    if (ex.G[i](0, 0).real() > ex.G[top](0, 0).real()) top = i;
  EXPECT_EQ(top, best);
  EXPECT_GT(ex.G[top](0, 0).real(), 0.5);
  EXPECT_NEAR(ex.report.eta, 1.0 - agreement_fraction(words[best], seen), 1e-10);
}

TEST(Extract, RandomStrategyReportIsFinite) {
  auto code = rs(3, 3, 1);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto s = tcq::testing::random_strategy(code, 2, 2, seed);
    auto ex = extract_global(s);
    EXPECT_TRUE(validate_measurement(ex.G, false)) << seed;
    EXPECT_TRUE(ex.report.self_improvement_ok) << seed;
    EXPECT_GE(ex.report.eta, -1e-12);
    EXPECT_LE(ex.report.eta, 1 + 1e-12);
    for (const auto& p : ex.report.pastings) {
      EXPECT_TRUE(std::isfinite(p.nu.mu2));
      EXPECT_TRUE(p.completeness_bound_ok);
      EXPECT_TRUE(p.consistency_bound_ok);
    }
  }
}

TEST(Diagnostics, HonestCommutatorsVanish) {
  auto code = rs(3, 3, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 2);
  auto s = inflate(honest_strategy(code, c), 2);
  auto slices = honest_slices(code, c, 2);
  auto rep = commutator_report(s, build_game(code, 2), &slices);
  EXPECT_EQ(rep.points, 0.0);
  EXPECT_EQ(*rep.slice_points, 0.0);
  EXPECT_EQ(*rep.slices, 0.0);
  EXPECT_TRUE(rep.points_ok);
}

TEST(Diagnostics, AnticommutingExhibitFailsSubcubeTest) {
  auto s = anticommuting_pair_strategy();
  auto rep = commutator_report(s, build_game(s.code, 2));
  EXPECT_GE(rep.subcube_fail, 0.01);
  EXPECT_GT(rep.points, 0.1);
  EXPECT_TRUE(rep.points_ok);
}

TEST(Diagnostics, RandomStrategiesMeetCommutatorBound) {
  auto code = rs(3, 3, 1);
  auto g = build_game(code, 2);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto rep = commutator_report(tcq::testing::random_strategy(code, 2, 2 + seed % 2, seed), g);
    EXPECT_TRUE(rep.points_ok) << seed << ": " << rep.points << " vs " << rep.points_bound;
  }
}

TEST(Diagnostics, VarianceHonestIsZero) {
  auto code = rs(5, 5, 1);
  auto c = tcq::testing::random_tensor_codeword(code, 2, 5);
  auto s = honest_strategy(code, c);
  TensorCode tc(code, 2);
  auto rep = variance_report(s, indicator(tc.size(), tc.index_of(c.table), 1), 0.0);
  EXPECT_LE(rep.zeta_var, 1e-12);
  EXPECT_LE(rep.zeta_local, 1e-12);
  EXPECT_TRUE(rep.local_ok && rep.var_ok && rep.global_le_m_local);
}

TEST(Diagnostics, VarianceBoundsOnCorruptedStrategies) {
  auto code = rs(5, 5, 1);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = tcq::testing::random_tensor_codeword(code, 2, seed);
    auto s = corrupt(honest_strategy(code, c), {CorruptionKind::PointFlips, 0.02 * seed, seed, false});
    double eps = goodness_synchronous(s, build_game(code, 2)).eps;
    const auto& words = tensor_codewords(code, 2);
    std::vector<Op> A(words.size(), Op::Zero(1, 1));
    for (std::size_t g = 0; g < words.size(); ++g)
      for (std::size_t x = 0; x < s.num_points(); ++x) A[g] += s.points[x][words[g][x]] / 25.0;
    auto T = solve_duality(A).T;
    auto rep = variance_report(s, T, eps);
    EXPECT_TRUE(rep.local_ok) << seed;
    EXPECT_TRUE(rep.var_ok) << seed;
    EXPECT_TRUE(rep.global_le_m_local) << seed;
  }
}

TEST(NuSeries, MatchesHandEvaluation) {
  auto v = nu_series(1, 2, 5, 4, 5, 0.0, 0.0, 0.0, 0.0);
  EXPECT_NEAR(v.gamma_m, 0.2, 1e-15);
  EXPECT_NEAR(v.nu2, 0.8, 1e-15);
  EXPECT_NEAR(v.nu3, 2 * 2 * 0.8, 1e-15);
  EXPECT_NEAR(v.nu6, 8 * (0.8 + 0.2), 1e-13);
  EXPECT_NEAR(v.nu2p, 27 * std::pow(0.8, 0.25), 1e-12);
  EXPECT_NEAR(v.completeness2, 1 - v.nu5p - v.nu6p - std::exp(-5.0 / 72), 1e-12);
}
