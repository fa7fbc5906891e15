#include "tcq/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcq/parallel.hpp"
#include "tcq/rng.hpp"

namespace tcq {

namespace {

Validation check_family(const std::vector<Submeasurement>& fam, std::size_t count, std::size_t outcomes,
                        std::size_t r, bool projective, const Tolerances& tol, const char* name) {
  if (fam.size() != count) return {false, std::string(name) + " family has wrong question count"};
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (fam[i].size() != outcomes) return {false, std::string(name) + " measurement has wrong outcome count"};
    if (fam[i].dim() != r) return {false, std::string(name) + " measurement has wrong dimension"};
    auto v = validate_measurement(fam[i], projective, tol);
    if (!v) return {false, std::string(name) + " " + std::to_string(i) + ": " + v.message};
  }
  return {};
}

Op transpose_op(const Op& X) { return X.transpose(); }

SynchronousStrategy map_strategy(const SynchronousStrategy& s, std::size_t r, const std::function<Op(const Op&)>& f) {
  SynchronousStrategy out(s.code, s.m, r);
  auto map_family = [&](const std::vector<Submeasurement>& fam, std::vector<Submeasurement>& dst) {
    dst.resize(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
      dst[i].elements.reserve(fam[i].size());
      for (const auto& e : fam[i].elements) dst[i].elements.push_back(f(e));
    }
  };
  map_family(s.points, out.points);
  map_family(s.lines, out.lines);
  map_family(s.pairs, out.pairs);
  return out;
}

}  // namespace

Validation validate_strategy(const SynchronousStrategy& s, bool projective, const Tolerances& tol) {
  const std::size_t q = s.q();
  if (auto v = check_family(s.points, s.num_points(), q, s.r, projective, tol, "points"); !v) return v;
  if (auto v = check_family(s.lines, s.num_lines(), s.code.size(), s.r, projective, tol, "lines"); !v) return v;
  const std::size_t N = s.num_points();
  return check_family(s.pairs, N * N, q * q, s.r, projective, tol, "pairs");
}

Validation validate_bipartite(const BipartiteStrategy& s, const Tolerances& tol) {
  if (auto v = validate_strategy(s.first, true, tol); !v) return {false, "first prover: " + v.message};
  if (auto v = validate_strategy(s.second, true, tol); !v) return {false, "second prover: " + v.message};
  if (static_cast<std::size_t>(s.psi.size()) != s.first.r * s.second.r) return {false, "state has wrong dimension"};
  if (std::abs(s.psi.norm() - 1.0) > 1e-10) return {false, "state is not normalized"};
  return {};
}

Rational GameSpec::total_weight() const {
  Rational s(0);
  for (const auto& p : pairs) s += p.weight;
  return s;
}

Rational GameSpec::test_weight(TestKind t) const {
  Rational s(0);
  for (const auto& p : pairs)
    if (p.test == t) s += p.weight;
  return s;
}

namespace {

void add_lines_test(std::vector<QuestionPair>& out, std::size_t n, std::size_t m, Rational scale, bool both_roles) {
  const std::size_t N = int_pow(n, m);
  const Rational w = scale / Rational(static_cast<std::int64_t>(m * N));
  for (std::size_t ui = 0; ui < N; ++ui) {
    Point u = point_coords(n, m, ui);
    for (std::size_t j = 0; j < m; ++j) {
      Point icpt = u;
      icpt.erase(icpt.begin() + static_cast<std::ptrdiff_t>(j));
      std::size_t li = line_index(n, m, AxisLine{j, icpt});
      QuestionPair qp;
      qp.first = {QuestionKind::Line, li};
      qp.second = {QuestionKind::Point, ui};
      qp.check = Check::LinePoint;
      qp.slot = u[j];
      qp.test = TestKind::Lines;
      if (!both_roles) {
        qp.weight = w;
        out.push_back(qp);
        continue;
      }
      qp.weight = w / Rational(2);
      out.push_back(qp);
      std::swap(qp.first, qp.second);
      qp.check = Check::PointLine;
      out.push_back(qp);
    }
  }
}

// Calls f(j, u, v, weight) for the subcube pair distribution.
template <class F>
void for_each_subcube_pair(std::size_t n, std::size_t m, F&& f) {
  for (const auto& wc : enumerate_subcubes(n, m)) {
    auto pts = enumerate_points(n, m, wc.cube);
    const Rational w = Rational(static_cast<std::int64_t>(wc.weight_num), static_cast<std::int64_t>(wc.weight_den)) /
                       Rational(static_cast<std::int64_t>(pts.size() * pts.size()));
    for (const auto& u : pts)
      for (const auto& v : pts) f(wc.cube.j, point_index(n, u), point_index(n, v), w);
  }
}

void add_subcube_test(std::vector<QuestionPair>& out, std::size_t n, std::size_t m, Rational scale, bool both_roles) {
  const std::size_t N = int_pow(n, m);
  for_each_subcube_pair(n, m, [&](std::size_t j, std::size_t u, std::size_t v, Rational w) {
    for (std::size_t t = 0; t < 2; ++t) {
      QuestionPair qp;
      qp.first = {QuestionKind::Pair, t == 0 ? u * N + v : v * N + u};
      qp.second = {QuestionKind::Point, u};
      qp.check = Check::PairPoint;
      qp.slot = t;
      qp.test = TestKind::Subcube;
      qp.subcube_j = j;
      qp.weight = scale * w / Rational(2);
      if (!both_roles) {
        out.push_back(qp);
        continue;
      }
      qp.weight /= Rational(2);
      out.push_back(qp);
      std::swap(qp.first, qp.second);
      qp.check = Check::PointPair;
      out.push_back(qp);
    }
  });
}

}  // namespace

GameSpec build_game(const LinearCode& code, std::size_t m) {
  if (!code.interpolable()) throw std::invalid_argument("base code must be interpolable");
  if (m == 0) throw std::invalid_argument("m must be positive");
  const std::uint64_t N = int_pow(code.n(), m);
  if (N * N > kEnumerationBudget) throw BudgetExceeded("question enumeration budget exceeded");
  GameSpec g{code, m, false, {}, {}};
  for (std::uint64_t i = 0; i < code.size(); ++i) g.base_codewords.push_back(code.codeword_at(i));
  add_lines_test(g.pairs, code.n(), m, Rational(1, 2), false);
  add_subcube_test(g.pairs, code.n(), m, Rational(1, 2), false);
  return g;
}

GameSpec build_two_prover_game(const LinearCode& code, std::size_t m) {
  if (!code.interpolable()) throw std::invalid_argument("base code must be interpolable");
  const std::uint64_t N = int_pow(code.n(), m);
  if (N * N > kEnumerationBudget) throw BudgetExceeded("question enumeration budget exceeded");
  GameSpec g{code, m, true, {}, {}};
  for (std::uint64_t i = 0; i < code.size(); ++i) g.base_codewords.push_back(code.codeword_at(i));
  add_lines_test(g.pairs, code.n(), m, Rational(1, 3), true);
  add_subcube_test(g.pairs, code.n(), m, Rational(1, 3), true);
  // synchronicity: line, point, or pair with probability 1/3 each
  const Rational sync(1, 9);
  const std::size_t L = m * int_pow(code.n(), m - 1);
  for (std::size_t l = 0; l < L; ++l) {
    QuestionPair qp;
    qp.first = qp.second = {QuestionKind::Line, l};
    qp.test = TestKind::Sync;
    qp.weight = sync / Rational(static_cast<std::int64_t>(L));
    g.pairs.push_back(qp);
  }
  for (std::size_t u = 0; u < N; ++u) {
    QuestionPair qp;
    qp.first = qp.second = {QuestionKind::Point, u};
    qp.test = TestKind::Sync;
    qp.weight = sync / Rational(static_cast<std::int64_t>(N));
    g.pairs.push_back(qp);
  }
  for_each_subcube_pair(code.n(), m, [&](std::size_t j, std::size_t u, std::size_t v, Rational w) {
    QuestionPair qp;
    qp.first = qp.second = {QuestionKind::Pair, u * N + v};
    qp.test = TestKind::Sync;
    qp.subcube_j = j;
    qp.weight = sync * w;
    g.pairs.push_back(qp);
  });
  return g;
}

std::size_t outcome_count(const SynchronousStrategy& s, const Question& q) {
  switch (q.kind) {
    case QuestionKind::Point: return s.q();
    case QuestionKind::Line: return s.code.size();
    case QuestionKind::Pair: return s.q() * s.q();
  }
  return 0;
}

const Submeasurement& measurement_for(const SynchronousStrategy& s, const Question& q) {
  switch (q.kind) {
    case QuestionKind::Point: return s.points.at(q.index);
    case QuestionKind::Line: return s.lines.at(q.index);
    case QuestionKind::Pair: return s.pairs.at(q.index);
  }
  throw std::logic_error("unknown question kind");
}

bool accepts(const GameSpec& g, const QuestionPair& qp, std::size_t a, std::size_t b) {
  const std::size_t q = g.code.q();
  switch (qp.check) {
    case Check::LinePoint: return g.base_codewords[a][qp.slot] == b;
    case Check::PointLine: return g.base_codewords[b][qp.slot] == a;
    case Check::PairPoint: return (qp.slot == 0 ? a / q : a % q) == b;
    case Check::PointPair: return (qp.slot == 0 ? b / q : b % q) == a;
    case Check::Equal: return a == b;
  }
  return false;
}

namespace {

// The data-processed measurement each prover's answer is reduced to before comparison.
Submeasurement reduced(const SynchronousStrategy& s, const GameSpec& g, const Question& q, const QuestionPair& qp) {
  const Submeasurement& M = measurement_for(s, q);
  const std::size_t qq = s.q();
  switch (q.kind) {
    case QuestionKind::Point: return M;
    case QuestionKind::Line: {
      std::vector<std::size_t> f(M.size());
      for (std::size_t c = 0; c < f.size(); ++c) f[c] = g.base_codewords[c][qp.slot];
      return data_process(M, f, qq);
    }
    case QuestionKind::Pair: {
      std::vector<std::size_t> f(M.size());
      for (std::size_t c = 0; c < f.size(); ++c) f[c] = qp.slot == 0 ? c / qq : c % qq;
      return data_process(M, f, qq);
    }
  }
  throw std::logic_error("unknown question kind");
}

Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> coeffs(const Vec& psi,
                                                                                             std::size_t rA,
                                                                                             std::size_t rB) {
  return {psi.data(), static_cast<Eigen::Index>(rA), static_cast<Eigen::Index>(rB)};
}

}  // namespace

double expectation(const Vec& psi, std::size_t rA, std::size_t rB, const Op& X, const Op& Y) {
  auto K = coeffs(psi, rA, rB);
  return (K.adjoint() * X * K * Y.transpose()).trace().real();
}

double accept_probability(const SynchronousStrategy& s, const GameSpec& g, const QuestionPair& qp) {
  if (qp.check == Check::Equal) {
    const auto& M = measurement_for(s, qp.first);
    double p = 0;
    for (const auto& e : M.elements) p += tau_product(e, e);
    return p;
  }
  auto X = reduced(s, g, qp.first, qp);
  auto Y = reduced(s, g, qp.second, qp);
  double p = 0;
  for (std::size_t a = 0; a < X.size(); ++a) p += tau_product(X[a], Y[a]);
  return p;
}

double accept_probability(const BipartiteStrategy& s, const GameSpec& g, const QuestionPair& qp) {
  const std::size_t rA = s.first.r, rB = s.second.r;
  if (qp.check == Check::Equal) {
    const auto& M = measurement_for(s.first, qp.first);
    const auto& N = measurement_for(s.second, qp.second);
    double p = 0;
    for (std::size_t a = 0; a < M.size(); ++a) p += expectation(s.psi, rA, rB, M[a], N[a]);
    return p;
  }
  auto X = reduced(s.first, g, qp.first, qp);
  auto Y = reduced(s.second, g, qp.second, qp);
  double p = 0;
  for (std::size_t a = 0; a < X.size(); ++a) p += expectation(s.psi, rA, rB, X[a], Y[a]);
  return p;
}

namespace {

void check_match(const SynchronousStrategy& s, const GameSpec& g) {
  if (s.m != g.m || s.code.generator().rows() != g.code.n() || s.code.k() != g.code.k() ||
      s.code.q() != g.code.q())
    throw std::invalid_argument("strategy does not match the game");
}

template <class S>
std::vector<double> all_accept(const S& s, const GameSpec& g) {
  std::vector<double> acc(g.pairs.size());
  parallel_for(g.pairs.size(), [&](std::size_t i) { acc[i] = accept_probability(s, g, g.pairs[i]); });
  return acc;
}

}  // namespace

double evaluate_synchronous(const SynchronousStrategy& s, const GameSpec& g) {
  check_match(s, g);
  auto acc = all_accept(s, g);
  double v = 0;
  for (std::size_t i = 0; i < acc.size(); ++i) v += boost::rational_cast<double>(g.pairs[i].weight) * acc[i];
  return v;
}

GoodnessReport goodness_synchronous(const SynchronousStrategy& s, const GameSpec& g) {
  check_match(s, g);
  std::vector<double> eps_terms(g.pairs.size(), 0.0), acc(g.pairs.size(), 0.0);
  parallel_for(g.pairs.size(), [&](std::size_t i) {
    const auto& qp = g.pairs[i];
    if (qp.test == TestKind::Sync) return;
    auto X = reduced(s, g, qp.first, qp);
    auto Y = reduced(s, g, qp.second, qp);
    eps_terms[i] = inconsistency(X, Y);
    acc[i] = accept_probability(s, g, qp);
  });
  GoodnessReport rep;
  double wl = 0, ws0 = 0, ws1 = 0;
  double pl = 0, ps = 0;
  for (std::size_t i = 0; i < g.pairs.size(); ++i) {
    const auto& qp = g.pairs[i];
    const double w = boost::rational_cast<double>(qp.weight);
    if (qp.test == TestKind::Lines) {
      rep.eps += w * eps_terms[i];
      pl += w * acc[i];
      wl += w;
    } else if (qp.test == TestKind::Subcube) {
      ps += w * acc[i];
      if (qp.slot == 0) {
        rep.delta_first += w * eps_terms[i];
        ws0 += w;
      } else {
        rep.delta_second += w * eps_terms[i];
        ws1 += w;
      }
    }
  }
  rep.eps /= wl;
  rep.delta_first /= ws0;
  rep.delta_second /= ws1;
  rep.delta = std::max(rep.delta_first, rep.delta_second);
  rep.lines_pass = pl / wl;
  rep.subcube_pass = ps / (ws0 + ws1);
  rep.pass_probability = pl + ps;
  return rep;
}

BipartiteResult evaluate_bipartite(const BipartiteStrategy& s, const GameSpec& g2) {
  check_match(s.first, g2);
  check_match(s.second, g2);
  if (!g2.two_prover) throw std::invalid_argument("evaluate_bipartite needs the two-prover game");
  auto acc = all_accept(s, g2);
  BipartiteResult res;
  double wl = 0, ws0 = 0, ws1 = 0, wy = 0;
  double pl = 0, p0 = 0, p1 = 0, py = 0;
  for (std::size_t i = 0; i < g2.pairs.size(); ++i) {
    const auto& qp = g2.pairs[i];
    const double w = boost::rational_cast<double>(qp.weight);
    res.pass += w * acc[i];
    switch (qp.test) {
      case TestKind::Lines: pl += w * acc[i]; wl += w; break;
      case TestKind::Subcube:
        if (qp.slot == 0) { p0 += w * acc[i]; ws0 += w; }
        else { p1 += w * acc[i]; ws1 += w; }
        break;
      case TestKind::Sync: py += w * acc[i]; wy += w; break;
    }
  }
  auto& gr = res.goodness;
  gr.lines_pass = pl / wl;
  gr.eps = 1.0 - gr.lines_pass;
  gr.delta_first = 1.0 - p0 / ws0;
  gr.delta_second = 1.0 - p1 / ws1;
  gr.delta = std::max(gr.delta_first, gr.delta_second);
  gr.subcube_pass = (p0 + p1) / (ws0 + ws1);
  gr.sync_pass = py / wy;
  gr.xi = 1.0 - gr.sync_pass;
  gr.pass_probability = res.pass;
  return res;
}

BipartiteStrategy synchronous_embedding(const SynchronousStrategy& s) {
  BipartiteStrategy b{s, map_strategy(s, s.r, transpose_op), Vec::Zero(static_cast<Eigen::Index>(s.r * s.r))};
  const double amp = 1.0 / std::sqrt(static_cast<double>(s.r));
  for (std::size_t i = 0; i < s.r; ++i) b.psi(static_cast<Eigen::Index>(i * s.r + i)) = amp;
  return b;
}

BipartiteStrategy pad_to_equal_dims(const BipartiteStrategy& s) {
  const std::size_t rA = s.first.r, rB = s.second.r, d = std::max(rA, rB);
  if (rA == rB) return s;
  auto pad = [d](const SynchronousStrategy& st) {
    const auto r = static_cast<Eigen::Index>(st.r), D = static_cast<Eigen::Index>(d);
    SynchronousStrategy out(st.code, st.m, d);
    auto pad_family = [&](const std::vector<Submeasurement>& fam, std::vector<Submeasurement>& dst) {
      dst.resize(fam.size());
      for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t a = 0; a < fam[i].size(); ++a) {
          Op X = Op::Zero(D, D);
          X.topLeftCorner(r, r) = fam[i][a];
          if (a == 0) X.bottomRightCorner(D - r, D - r).setIdentity();
          dst[i].elements.push_back(std::move(X));
        }
    };
    pad_family(st.points, out.points);
    pad_family(st.lines, out.lines);
    pad_family(st.pairs, out.pairs);
    return out;
  };
  BipartiteStrategy out{rA < d ? pad(s.first) : s.first, rB < d ? pad(s.second) : s.second, Vec::Zero(static_cast<Eigen::Index>(d * d))};
  for (std::size_t i = 0; i < rA; ++i)
    for (std::size_t j = 0; j < rB; ++j)
      out.psi(static_cast<Eigen::Index>(i * d + j)) = s.psi(static_cast<Eigen::Index>(i * rB + j));
  return out;
}

BipartiteStrategy symmetrize(const BipartiteStrategy& input) {
  BipartiteStrategy s = pad_to_equal_dims(input);
  const std::size_t d = s.first.r;
  const auto D = static_cast<Eigen::Index>(2 * d);
  // first prover: X ⊗ |0⟩⟨0| + X̃ᵀ ⊗ |1⟩⟨1|, ancilla as the fast index
  SynchronousStrategy sym(s.first.code, s.first.m, 2 * d);
  auto build = [&](const std::vector<Submeasurement>& A, const std::vector<Submeasurement>& B,
                   std::vector<Submeasurement>& dst) {
    dst.resize(A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t a = 0; a < A[i].size(); ++a) {
        Op X = Op::Zero(D, D);
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c) {
            X(static_cast<Eigen::Index>(2 * r), static_cast<Eigen::Index>(2 * c)) = A[i][a](r, c);
            X(static_cast<Eigen::Index>(2 * r + 1), static_cast<Eigen::Index>(2 * c + 1)) = B[i][a](c, r);
          }
        dst[i].elements.push_back(std::move(X));
      }
  };
  build(s.first.points, s.second.points, sym.points);
  build(s.first.lines, s.second.lines, sym.lines);
  build(s.first.pairs, s.second.pairs, sym.pairs);

  BipartiteStrategy out{sym, map_strategy(sym, 2 * d, transpose_op), Vec::Zero(D * D)};
  const double h = 1.0 / std::sqrt(2.0);
  auto idx = [&](std::size_t i, std::size_t alpha, std::size_t j, std::size_t beta) {
    return static_cast<Eigen::Index>((2 * i + alpha) * (2 * d) + (2 * j + beta));
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      out.psi(idx(i, 0, j, 1)) += h * s.psi(static_cast<Eigen::Index>(i * d + j));
      out.psi(idx(i, 1, j, 0)) += h * std::conj(s.psi(static_cast<Eigen::Index>(j * d + i)));
    }
  return out;
}

Validation validate_symmetric_form(const BipartiteStrategy& s, double tol) {
  if (s.first.r != s.second.r) return {false, "provers have different dimensions"};
  auto cmp = [&](const std::vector<Submeasurement>& A, const std::vector<Submeasurement>& B) {
    if (A.size() != B.size()) return false;
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t a = 0; a < A[i].size(); ++a)
        if ((A[i][a].transpose() - B[i][a]).cwiseAbs().maxCoeff() > tol) return false;
    return true;
  };
  if (!cmp(s.first.points, s.second.points) || !cmp(s.first.lines, s.second.lines) ||
      !cmp(s.first.pairs, s.second.pairs))
    return {false, "second prover is not the transpose of the first"};
  Op K = coeffs(s.psi, s.first.r, s.second.r);
  if ((K - K.adjoint()).cwiseAbs().maxCoeff() > tol) return {false, "state coefficient matrix is not Hermitian"};
  return {};
}

namespace {

template <class Prob>
std::vector<double> distribution_from(std::size_t na, std::size_t nb, Prob&& prob) {
  std::vector<double> p(na * nb);
  double total = 0;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      double v = prob(a, b);
      if (v < -1e-9) throw std::domain_error("negative outcome probability; strategy is invalid");
      p[a * nb + b] = std::max(0.0, v);
      total += p[a * nb + b];
    }
  if (std::abs(total - 1.0) > 1e-9) throw std::domain_error("outcome probabilities do not sum to one");
  return p;
}

}  // namespace

std::vector<double> answer_distribution(const SynchronousStrategy& s, const QuestionPair& qp) {
  const auto& M = measurement_for(s, qp.first);
  const auto& N = measurement_for(s, qp.second);
  return distribution_from(M.size(), N.size(), [&](std::size_t a, std::size_t b) {
    return (is_zero(M[a]) || is_zero(N[b])) ? 0.0 : tau_product(M[a], N[b]);
  });
}

std::vector<double> answer_distribution(const BipartiteStrategy& s, const QuestionPair& qp) {
  const auto& M = measurement_for(s.first, qp.first);
  const auto& N = measurement_for(s.second, qp.second);
  return distribution_from(M.size(), N.size(), [&](std::size_t a, std::size_t b) {
    return (is_zero(M[a]) || is_zero(N[b])) ? 0.0 : expectation(s.psi, s.first.r, s.second.r, M[a], N[b]);
  });
}

namespace {

const SynchronousStrategy& second_prover(const SynchronousStrategy& s) { return s; }
const SynchronousStrategy& second_prover(const BipartiteStrategy& s) { return s.second; }

template <class S>
MonteCarloResult play(const S& s, const GameSpec& g, std::uint64_t rounds, std::uint64_t seed) {
  if (rounds == 0) throw std::invalid_argument("rounds must be positive");
  std::vector<double> cum(g.pairs.size());
  double acc = 0;
  for (std::size_t i = 0; i < g.pairs.size(); ++i) cum[i] = (acc += boost::rational_cast<double>(g.pairs[i].weight));
  // questions first, so only sampled pairs need their distributions
  std::vector<std::size_t> chosen(rounds);
  std::vector<double> answer_u(rounds);
  for (std::uint64_t i = 0; i < rounds; ++i) {
    CounterRng rng(seed, i);
    double u = rng.uniform() * acc;
    chosen[i] = std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), cum.size() - 1);
    answer_u[i] = rng.uniform();
  }
  std::vector<char> needed(g.pairs.size(), 0);
  for (auto c : chosen) needed[c] = 1;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < needed.size(); ++i)
    if (needed[i]) todo.push_back(i);
  std::vector<std::vector<double>> dist(g.pairs.size());
  parallel_for(todo.size(), [&](std::size_t t) { dist[todo[t]] = answer_distribution(s, g.pairs[todo[t]]); });
  MonteCarloResult res;
  res.rounds = rounds;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    const auto& qp = g.pairs[chosen[i]];
    const auto& p = dist[chosen[i]];
    std::size_t nb = outcome_count(second_prover(s), qp.second);
    double u = answer_u[i], c = 0;
    std::size_t k = 0;
    for (; k + 1 < p.size(); ++k) {
      c += p[k];
      if (u < c) break;
    }
    res.passes += accepts(g, qp, k / nb, k % nb);
  }
  res.rate = static_cast<double>(res.passes) / static_cast<double>(rounds);
  res.std_error = std::sqrt(std::max(res.rate * (1 - res.rate), 0.0) / static_cast<double>(rounds));
  return res;
}

}  // namespace

MonteCarloResult monte_carlo_play(const SynchronousStrategy& s, const GameSpec& g, std::uint64_t rounds,
                                  std::uint64_t seed) {
  check_match(s, g);
  return play(s, g, rounds, seed);
}

MonteCarloResult monte_carlo_play(const BipartiteStrategy& s, const GameSpec& g, std::uint64_t rounds,
                                  std::uint64_t seed) {
  check_match(s.first, g);
  return play(s, g, rounds, seed);
}

}  // namespace tcq
