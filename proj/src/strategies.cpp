#include "tcq/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tcq {

namespace {

Op indicator(bool on) { return Op::Constant(1, 1, on ? cplx(1, 0) : cplx(0, 0)); }

std::size_t line_of(std::size_t n, std::size_t m, const Point& u, std::size_t axis) {
  Point icpt = u;
  icpt.erase(icpt.begin() + static_cast<std::ptrdiff_t>(axis));
  return line_index(n, m, AxisLine{axis, icpt});
}

}  // namespace

ClassicalStrategy honest_classical(const LinearCode& code, const TensorCodeword& c) {
  const std::size_t n = code.n(), m = c.m, N = int_pow(n, m);
  if (c.table.size() != N) throw std::invalid_argument("table shape mismatch");
  ClassicalStrategy s{code, m, c.table, {}, {}};
  auto lines = enumerate_lines(n, m);
  s.lines.resize(lines.size());
  for (const auto& l : lines) s.lines[line_index(n, m, l)] = restrict_line(n, m, c.table, l);
  s.pairs.resize(N * N);
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t v = 0; v < N; ++v) s.pairs[u * N + v] = {c.table[u], c.table[v]};
  return s;
}

SynchronousStrategy tensor_with_identity(const SynchronousStrategy& s, std::size_t D) {
  if (D == 0) throw std::invalid_argument("identity factor needs D >= 1");
  const auto d = static_cast<Eigen::Index>(D);
  auto lift = [&](const Submeasurement& M) {
    Submeasurement out;
    for (const auto& e : M.elements) {
      Op big = Op::Zero(e.rows() * d, e.cols() * d);
      for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
          if (e(i, j) != cplx(0)) big.block(i * d, j * d, d, d) = e(i, j) * Op::Identity(d, d);
      out.elements.push_back(std::move(big));
    }
    return out;
  };
  SynchronousStrategy out(s.code, s.m, s.r * D);
  for (const auto& M : s.points) out.points.push_back(lift(M));
  for (const auto& M : s.lines) out.lines.push_back(lift(M));
  for (const auto& M : s.pairs) out.pairs.push_back(lift(M));
  return out;
}

TensorCodeword planted_codeword(const LinearCode& code, std::size_t m, std::uint64_t seed) {
  TensorCode tc(code, m);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> sym(0, code.q() - 1);
  std::vector<Symbol> coeffs(tc.coeff_len());
  for (auto& c : coeffs) c = sym(rng);
  return {m, tc.encode_coeffs(coeffs)};
}

SynchronousStrategy random_projective_strategy(const LinearCode& code, std::size_t m, std::size_t r, std::uint64_t seed) {
  SynchronousStrategy s(code, m, r);
  const std::size_t q = code.q(), N = s.num_points();
  std::uint64_t k = seed * 1000003;
  for (std::size_t u = 0; u < N; ++u) s.points.push_back(random_projective_measurement(r, q, ++k, true));
  for (std::size_t l = 0; l < s.num_lines(); ++l)
    s.lines.push_back(random_projective_measurement(r, code.size(), ++k, true));
  for (std::size_t x = 0; x < N * N; ++x) s.pairs.push_back(random_projective_measurement(r, q * q, ++k, true));
  return s;
}

SynchronousStrategy embed_classical(const ClassicalStrategy& s) {
  SynchronousStrategy out(s.code, s.m, 1);
  const std::size_t q = s.code.q(), N = out.num_points();
  if (s.points.size() != N || s.lines.size() != out.num_lines() || s.pairs.size() != N * N)
    throw std::invalid_argument("classical strategy has wrong shape");
  const std::uint64_t nc = s.code.size();
  out.points.resize(N);
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t a = 0; a < q; ++a) out.points[u].elements.push_back(indicator(s.points[u] == a));
  out.lines.resize(s.lines.size());
  for (std::size_t l = 0; l < s.lines.size(); ++l) {
    if (!is_codeword(s.code, s.lines[l])) throw std::invalid_argument("line answer is not a codeword");
    const std::uint64_t g = s.code.index_of(s.lines[l]);
    for (std::uint64_t c = 0; c < nc; ++c) out.lines[l].elements.push_back(indicator(c == g));
  }
  out.pairs.resize(N * N);
  for (std::size_t i = 0; i < N * N; ++i) {
    const std::size_t ans = s.pairs[i].first * q + s.pairs[i].second;
    for (std::size_t c = 0; c < q * q; ++c) out.pairs[i].elements.push_back(indicator(c == ans));
  }
  return out;
}

SynchronousStrategy honest_strategy(const LinearCode& code, const TensorCodeword& c) {
  return embed_classical(honest_classical(code, c));
}

double classical_value(const ClassicalStrategy& s, const GameSpec& g) {
  const std::size_t q = s.code.q();
  auto answer = [&](const Question& x) -> std::size_t {
    switch (x.kind) {
      case QuestionKind::Point: return s.points[x.index];
      case QuestionKind::Line: return s.code.index_of(s.lines[x.index]);
      case QuestionKind::Pair: return s.pairs[x.index].first * q + s.pairs[x.index].second;
    }
    return 0;
  };
  Rational v(0);
  for (const auto& qp : g.pairs)
    if (accepts(g, qp, answer(qp.first), answer(qp.second))) v += qp.weight;
  return boost::rational_cast<double>(v);
}

double classical_line_miscount(const ClassicalStrategy& s) {
  const std::size_t n = s.code.n(), N = int_pow(n, s.m);
  std::size_t bad = 0;
  for (std::size_t ui = 0; ui < N; ++ui) {
    Point u = point_coords(n, s.m, ui);
    for (std::size_t j = 0; j < s.m; ++j) bad += s.lines[line_of(n, s.m, u, j)][u[j]] != s.points[ui];
  }
  return static_cast<double>(bad) / static_cast<double>(N * s.m);
}

SynchronousStrategy mixture(const std::vector<SynchronousStrategy>& parts, const std::vector<Rational>& weights) {
  if (parts.empty() || parts.size() != weights.size()) throw std::invalid_argument("mixture needs one weight per part");
  Rational total(0);
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("negative mixture weight");
    total += w;
  }
  if (total != Rational(1)) throw std::invalid_argument("mixture weights must sum to 1");
  for (const auto& p : parts)
    if (p.m != parts[0].m || p.code.k() != parts[0].code.k() || p.code.n() != parts[0].code.n() ||
        p.code.q() != parts[0].code.q())
      throw std::invalid_argument("mixture parts play different games");
  // copies c_i with c_i * r_i proportional to w_i
  std::vector<Rational> per(parts.size());
  std::int64_t lcm = 1;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    per[i] = weights[i] / Rational(static_cast<std::int64_t>(parts[i].r));
    lcm = std::lcm(lcm, per[i].denominator());
    if (lcm > static_cast<std::int64_t>(kMixtureDimBudget)) throw std::invalid_argument("mixture denominator budget exceeded");
  }
  std::vector<std::int64_t> copies(parts.size());
  std::int64_t g = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    copies[i] = (per[i] * Rational(lcm)).numerator();
    g = std::gcd(g, copies[i]);
  }
  std::size_t dim = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    copies[i] /= g;
    dim += static_cast<std::size_t>(copies[i]) * parts[i].r;
  }
  if (dim > kMixtureDimBudget) throw std::invalid_argument("mixture denominator budget exceeded");

  SynchronousStrategy out(parts[0].code, parts[0].m, dim);
  auto build = [&](auto member, std::vector<Submeasurement>& dst) {
    const auto& ref = parts[0].*member;
    dst.resize(ref.size());
    for (std::size_t x = 0; x < ref.size(); ++x) {
      const std::size_t outcomes = ref[x].size();
      dst[x].elements.assign(outcomes, Op::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
      Eigen::Index off = 0;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(parts[i].r);
        for (std::int64_t c = 0; c < copies[i]; ++c) {
          for (std::size_t a = 0; a < outcomes; ++a) dst[x].elements[a].block(off, off, r, r) = (parts[i].*member)[x][a];
          off += r;
        }
      }
    }
  };
  build(&SynchronousStrategy::points, out.points);
  build(&SynchronousStrategy::lines, out.lines);
  build(&SynchronousStrategy::pairs, out.pairs);
  return out;
}

namespace {

std::vector<Symbol> random_nonzero(std::size_t len, std::uint32_t q, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> sym(0, q - 1);
  std::vector<Symbol> v(len);
  do {
    for (auto& x : v) x = sym(rng);
  } while (std::all_of(v.begin(), v.end(), [](Symbol x) { return x == 0; }));
  return v;
}

std::size_t corruption_count(double rate, std::size_t total) {
  if (rate < 0 || rate > 1) throw std::invalid_argument("corruption rate must lie in [0, 1]");
  auto c = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(total) - 1e-9));
  return std::min(c, total);
}

// Per-point additive shifts realizing point flips or slice scrambles.
std::vector<Symbol> point_shifts(const LinearCode& code, std::size_t m, const CorruptionModel& model) {
  const std::size_t n = code.n(), N = int_pow(n, m);
  const std::uint32_t q = code.q();
  std::mt19937_64 rng(model.seed);
  std::vector<Symbol> shift(N, 0);
  if (model.kind == CorruptionKind::PointFlips) {
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<std::uint32_t> nz(1, q - 1);
    for (std::size_t i = 0; i < corruption_count(model.rate, N); ++i) shift[order[i]] = nz(rng);
    return shift;
  }
  std::vector<std::size_t> slices(n);
  std::iota(slices.begin(), slices.end(), 0);
  std::shuffle(slices.begin(), slices.end(), rng);
  const std::size_t count = corruption_count(model.rate, n);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t x = slices[i];
    Table h;
    if (m == 1) {
      h = random_nonzero(1, q, rng);
    } else {
      TensorCode lower(code, m - 1);
      h = lower.encode_coeffs(random_nonzero(lower.coeff_len(), q, rng));
    }
    for (std::size_t z = 0; z < h.size(); ++z) shift[z * n + x] = h[z];
  }
  return shift;
}

std::vector<Submeasurement> relabel(const std::vector<Submeasurement>& fam, const std::function<std::size_t(std::size_t, std::size_t)>& to) {
  std::vector<Submeasurement> out(fam.size());
  for (std::size_t x = 0; x < fam.size(); ++x) {
    out[x].elements.assign(fam[x].size(), Op::Zero(fam[x][0].rows(), fam[x][0].cols()));
    for (std::size_t a = 0; a < fam[x].size(); ++a) out[x].elements[to(x, a)] += fam[x][a];
  }
  return out;
}

SynchronousStrategy shift_points(const SynchronousStrategy& s, const std::vector<Symbol>& shift, bool pairs) {
  SynchronousStrategy out = s;
  const std::size_t q = s.q(), N = s.num_points();
  out.points = relabel(s.points, [&](std::size_t u, std::size_t a) { return (a + shift[u]) % q; });
  if (pairs)
    out.pairs = relabel(s.pairs, [&](std::size_t x, std::size_t ab) {
      return ((ab / q + shift[x / N]) % q) * q + (ab % q + shift[x % N]) % q;
    });
  return out;
}

}  // namespace

SynchronousStrategy shift_by_codeword(const SynchronousStrategy& s, const Table& w) {
  const std::size_t n = s.n(), q = s.q();
  if (!is_tensor_codeword(s.code, s.m, w)) throw std::invalid_argument("shift must be a tensor codeword");
  SynchronousStrategy out = shift_points(s, std::vector<Symbol>(w.begin(), w.end()), true);
  std::vector<Codeword> wl(s.num_lines());
  for (const auto& l : enumerate_lines(n, s.m)) wl[line_index(n, s.m, l)] = restrict_line(n, s.m, w, l);
  out.lines = relabel(s.lines, [&](std::size_t l, std::size_t c) {
    Codeword g = s.code.codeword_at(c);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<Symbol>((g[i] + wl[l][i]) % q);
    return static_cast<std::size_t>(s.code.index_of(g));
  });
  return out;
}

SynchronousStrategy corrupt(const SynchronousStrategy& s, const CorruptionModel& model) {
  if (model.kind == CorruptionKind::MixtureOfCodewords) {
    corruption_count(model.rate, 1);
    const Rational p(static_cast<std::int64_t>(std::llround(model.rate * 1000)), 1000);
    if (p == Rational(0)) return s;
    std::mt19937_64 rng(model.seed);
    TensorCode tc(s.code, s.m);
    const Table w = tc.encode_coeffs(random_nonzero(tc.coeff_len(), s.code.q(), rng));
    return mixture({s, shift_by_codeword(s, w)}, {Rational(1) - p, p});
  }
  return shift_points(s, point_shifts(s.code, s.m, model), model.rederive_pairs);
}

ClassicalStrategy corrupt(const ClassicalStrategy& s, const CorruptionModel& model) {
  if (model.kind == CorruptionKind::MixtureOfCodewords)
    throw std::invalid_argument("mixture corruption produces a quantum strategy; corrupt the embedded strategy");
  const auto shift = point_shifts(s.code, s.m, model);
  const std::uint32_t q = s.code.q();
  const std::size_t N = shift.size();
  ClassicalStrategy out = s;
  for (std::size_t u = 0; u < N; ++u) out.points[u] = (s.points[u] + shift[u]) % q;
  if (model.rederive_pairs)
    for (std::size_t x = 0; x < N * N; ++x) {
      out.pairs[x].first = (s.pairs[x].first + shift[x / N]) % q;
      out.pairs[x].second = (s.pairs[x].second + shift[x % N]) % q;
    }
  return out;
}

namespace {

Op kron(const Op& A, const Op& B) {
  Op K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

Op pauli(char c) {
  Op P(2, 2);
  switch (c) {
    case 'I': P << 1, 0, 0, 1; break;
    case 'X': P << 0, 1, 1, 0; break;
    case 'Y': P << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': P << 1, 0, 0, -1; break;
    default: throw std::logic_error("unknown Pauli");
  }
  return P;
}

// +1 eigenspace -> 0, -1 eigenspace -> 1
std::pair<Op, Op> spectral_pair(const Op& O) {
  const Op I = Op::Identity(O.rows(), O.cols());
  return {(I + O) / 2.0, (I - O) / 2.0};
}

}  // namespace

Op anticommuting_observable(std::size_t u0, std::size_t u1) {
  static const char* grid[3][3] = {{"IZ", "ZI", "ZZ"}, {"XI", "IX", "XX"}, {"XZ", "ZX", "YY"}};
  static const double sign[3][3] = {{1, 1, 1}, {1, 1, 1}, {-1, -1, 1}};
  if (u0 > 2 || u1 > 2) throw std::out_of_range("point outside [3]^2");
  const char* g = grid[u0][u1];
  return sign[u0][u1] * kron(pauli(g[0]), pauli(g[1]));
}

SynchronousStrategy anticommuting_pair_strategy() {
  const LinearCode code = make_reed_solomon(3, 3, 1);
  const std::size_t n = 3, m = 2, r = 4, N = 9;
  SynchronousStrategy s(code, m, r);
  const Op zero = Op::Zero(4, 4);
  std::vector<Op> obs(N);
  s.points.resize(N);
  for (std::size_t u = 0; u < N; ++u) {
    obs[u] = anticommuting_observable(u / n, u % n);
    auto [plus, minus] = spectral_pair(obs[u]);
    s.points[u].elements = {plus, minus, zero};
  }
  s.lines.resize(s.num_lines());
  for (const auto& l : enumerate_lines(n, m)) {
    auto& M = s.lines[line_index(n, m, l)];
    M.elements.assign(code.size(), zero);
    for (std::size_t e = 0; e < 8; ++e) {
      Op proj = Op::Identity(4, 4);
      std::vector<Symbol> vals(3);
      for (std::size_t i = 0; i < 3; ++i) {
        vals[i] = (e >> i) & 1;
        proj = proj * s.points[point_index(n, l.point(i))][vals[i]];
      }
      if (is_zero(proj, 1e-12)) continue;
      // codeword through the first two values
      const Codeword g = interpolate(code, {0, 1}, {vals[0], vals[1]});
      M.elements[code.index_of(g)] += proj;
    }
  }
  s.pairs.resize(N * N);
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t v = 0; v < N; ++v) {
      auto& P = s.pairs[u * N + v];
      P.elements.assign(9, zero);
      const bool commute = is_zero(obs[u] * obs[v] - obs[v] * obs[u], 1e-12);
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
          if (commute)
            P.elements[a * 3 + b] = s.points[u][a] * s.points[v][b];
          else if (a == b)
            P.elements[a * 3 + b] = s.points[u][a];
        }
    }
  return s;
}

}  // namespace tcq
