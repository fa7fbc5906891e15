#include "tcq/extract.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tcq/parallel.hpp"
#include "tcq/rng.hpp"

namespace tcq {

namespace {

using Index = Eigen::Index;

double sq_tau(const Op& X) { return X.squaredNorm() / static_cast<double>(X.rows()); }

Op identity(Index r) { return Op::Identity(r, r); }

std::string code_key(const LinearCode& code, std::size_t m) {
  std::ostringstream os;
  const auto& G = code.generator();
  os << code.q() << ':' << G.rows() << 'x' << G.cols() << ':' << m << ':';
  for (std::size_t i = 0; i < G.rows(); ++i)
    for (std::size_t j = 0; j < G.cols(); ++j) os << G.at(i, j) << ',';
  return os.str();
}

// Columns are vec (column-major) of an orthonormal basis of r x r Hermitian matrices.
Eigen::MatrixXcd hermitian_basis(Index r) {
  const Index D = r * r;
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(D, D);
  const double s = 1.0 / std::sqrt(2.0);
  Index k = 0;
  for (Index i = 0; i < r; ++i) B(i + i * r, k++) = 1.0;
  for (Index i = 0; i < r; ++i)
    for (Index j = i + 1; j < r; ++j) {
      B(i + j * r, k) = s;
      B(j + i * r, k) = s;
      ++k;
      B(i + j * r, k) = cplx(0, s);
      B(j + i * r, k) = cplx(0, -s);
      ++k;
    }
  return B;
}

Eigen::VectorXd basis_coords(const Eigen::MatrixXcd& B, const Op& X) {
  Eigen::Map<const Eigen::VectorXcd> v(X.data(), X.size());
  return (B.adjoint() * v).real();
}

Op from_coords(const Eigen::MatrixXcd& B, const Eigen::VectorXd& c, Index r) {
  Eigen::VectorXcd v = B * c.cast<cplx>();
  return Eigen::Map<Op>(v.data(), r, r);
}

// Σ^{-1/2} T Σ^{-1/2} with Σ = sum T.
void normalize_measurement(std::vector<Op>& T) {
  Op S = Op::Zero(T[0].rows(), T[0].cols());
  for (const auto& t : T) S += t;
  Op R = matrix_function(hermitian_part(S), [](double v) { return v > 0 ? 1.0 / std::sqrt(v) : 0.0; }, 0.0);
  for (auto& t : T) t = hermitian_part(R * t * R);
}

double dual_value(const std::vector<Op>& T, const std::vector<Op>& C) {
  double v = 0;
  for (std::size_t g = 0; g < C.size(); ++g) v += (T[g].cwiseProduct(C[g].transpose())).sum().real();
  return v;
}

struct SlackState {
  std::vector<Op> Y;
  double logdet = 0;
};

// Cholesky of every W - C_g; false when one fails to be positive definite.
bool slack_state(const Op& W, const std::vector<Op>& C, bool want_inverse, SlackState& st) {
  const Index r = W.rows();
  st.logdet = 0;
  if (want_inverse) st.Y.resize(C.size());
  for (std::size_t g = 0; g < C.size(); ++g) {
    Eigen::LLT<Op> llt(W - C[g]);
    if (llt.info() != Eigen::Success) return false;
    const auto& L = llt.matrixLLT();
    for (Index i = 0; i < r; ++i) {
      double d = L(i, i).real();
      if (!(d > 0) || !std::isfinite(d)) return false;
      st.logdet += 2 * std::log(d);
    }
    if (want_inverse) st.Y[g] = hermitian_part(llt.solve(identity(r)));
  }
  return true;
}

DualitySolution barrier_solve(const std::vector<Op>& C, const DualityOptions& opt) {
  const Index r = C[0].rows();
  const Index D = r * r;
  const std::size_t Ng = C.size();
  const Eigen::MatrixXcd B = hermitian_basis(r);

  double top = 0;
  for (const auto& c : C) top = std::max(top, max_eigenvalue(c));
  Op W = (top + 1.0) * identity(r);
  double t = 1.0;

  DualitySolution sol;
  bool stop = false;
  while (!stop) {
    for (;;) {
      SlackState st;
      if (!slack_state(W, C, true, st)) throw std::logic_error("barrier iterate left the feasible region");
      Op Ysum = Op::Zero(r, r);
      for (const auto& y : st.Y) Ysum += y;
      Eigen::VectorXd grad = basis_coords(B, t * identity(r) - Ysum);
      Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(D, D);
      for (const auto& y : st.Y)
        for (Index i = 0; i < r; ++i)
          for (Index j = 0; j < r; ++j) K.block(i * r, j * r, r, r) += y(j, i) * y;
      Eigen::MatrixXd H = (B.adjoint() * K * B).real();
      H = 0.5 * (H + H.transpose());
      Eigen::VectorXd step = H.ldlt().solve(-grad);
      double decrement = -grad.dot(step);
      if (!std::isfinite(decrement) || decrement <= 1e-10) break;

      Op dW = hermitian_part(from_coords(B, step, r));
      double f0 = t * W.trace().real() - st.logdet;
      // f carries t * tr(W); allow for its rounding error when comparing
      const double slack = 1e-13 * (std::abs(f0) + 1.0);
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-20) {
        Op Wn = W + alpha * dW;
        SlackState sn;
        if (slack_state(Wn, C, false, sn)) {
          double f1 = t * Wn.trace().real() - sn.logdet;
          if (f1 <= f0 - 0.25 * alpha * decrement + slack) {
            W = Wn;
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      ++sol.iterations;
      if (!moved || sol.iterations >= opt.max_newton) {
        if (sol.iterations >= opt.max_newton) stop = true;
        break;
      }
    }

    SlackState st;
    slack_state(W, C, true, st);
    std::vector<Op> T(Ng);
    for (std::size_t g = 0; g < Ng; ++g) T[g] = st.Y[g] / t;
    normalize_measurement(T);
    double primal = W.trace().real();
    double dual = dual_value(T, C);
    if (sol.T.elements.empty() || primal - dual < sol.gap) {
      sol.W = W;
      sol.T.elements = T;
      sol.primal = primal;
      sol.dual = dual;
      sol.gap = primal - dual;
    }
    if (sol.gap <= opt.tol) {
      sol.converged = true;
      break;
    }
    if (t > 1e16) break;
    t *= 10;
  }
  return sol;
}

DualitySolution gradient_solve(const std::vector<Op>& C, const DualityOptions& opt) {
  const Index r = C[0].rows();
  const std::size_t Ng = C.size();
  double top = 0;
  for (const auto& c : C) top = std::max(top, max_eigenvalue(c));
  double eta = top > 0 ? 1.0 / top : 1.0;

  std::vector<Op> L(Ng, Op::Zero(r, r));
  DualitySolution sol;
  for (std::size_t it = 0; it < opt.max_gradient; ++it) {
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& l : L) shift = std::max(shift, max_eigenvalue(l));
    std::vector<Op> T(Ng);
    for (std::size_t g = 0; g < Ng; ++g)
      T[g] = matrix_function(L[g], [shift](double v) { return std::exp(v - shift); }, 1e-6 * (1.0 + std::abs(shift)));
    normalize_measurement(T);
    double dual = dual_value(T, C);
    Op W0 = Op::Zero(r, r);
    for (std::size_t g = 0; g < Ng; ++g) W0 += C[g] * T[g];
    W0 = hermitian_part(W0);
    double lift = 0;
    for (const auto& c : C) lift = std::max(lift, max_eigenvalue(hermitian_part(c - W0)));
    Op W = W0 + lift * identity(r);
    double primal = W.trace().real();
    sol.iterations = it + 1;
    if (sol.T.elements.empty() || primal - dual < sol.gap) {
      sol.W = W;
      sol.T.elements = T;
      sol.primal = primal;
      sol.dual = dual;
      sol.gap = primal - dual;
    }
    if (sol.gap <= opt.tol) {
      sol.converged = true;
      break;
    }
    for (std::size_t g = 0; g < Ng; ++g) L[g] = hermitian_part(L[g] + eta * C[g]);
    eta = std::min(eta * 1.05, 1e8 / std::max(top, 1e-300));
  }
  return sol;
}

std::vector<std::size_t> nonzero_outcomes(const Submeasurement& M) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < M.size(); ++a)
    if (M[a].norm() > 0) out.push_back(a);
  return out;
}

std::uint64_t count_tuples(std::size_t n, std::size_t k) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < k; ++i) c *= (n - i);
  return c;
}

struct TupleSet {
  std::vector<std::vector<std::size_t>> tuples;
  bool sampled = false;
};

TupleSet distinct_tuples(std::size_t n, std::size_t k, const PastingConfig& cfg, std::uint64_t label) {
  TupleSet ts;
  std::uint64_t total = count_tuples(n, k);
  if (total <= cfg.tuple_budget) {
    std::vector<std::size_t> cur;
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self) -> void {
      if (cur.size() == k) {
        ts.tuples.push_back(cur);
        return;
      }
      for (std::size_t x = 0; x < n; ++x) {
        if (used[x]) continue;
        used[x] = true;
        cur.push_back(x);
        self(self);
        cur.pop_back();
        used[x] = false;
      }
    };
    rec(rec);
    return ts;
  }
  if (!cfg.allow_sampling) throw BudgetExceeded("distinct tuple count exceeds tuple_budget and sampling is disabled");
  ts.sampled = true;
  Rng rng(derive_seed(cfg.seed, label));
  std::vector<std::size_t> perm(n);
  for (std::size_t s = 0; s < cfg.tuple_samples; ++s) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(perm[i], perm[pick(rng)]);
    }
    ts.tuples.emplace_back(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return ts;
}

using Accum = std::map<std::uint64_t, Op>;

struct PasteContext {
  const SynchronousStrategy& s;
  const std::vector<Submeasurement>& slices;
  SliceAlgebra alg;
  std::size_t t, k, n;
  Index r;
  double prune;
  std::vector<std::vector<Symbol>> lower_coeffs;
  std::vector<std::vector<std::size_t>> nonzero;
  std::vector<Op> bottom;
  std::vector<bool> bottom_live;

  PasteContext(const SynchronousStrategy& s_, const std::vector<Submeasurement>& sl, std::size_t k_, double prune_)
      : s(s_), slices(sl), alg(TensorCode(s_.code, s_.m)), t(s_.code.t()), k(k_), n(s_.n()),
        r(static_cast<Index>(s_.r)), prune(prune_) {
    const auto& lower = alg.lower();
    lower_coeffs.resize(lower.size());
    for (std::uint64_t g = 0; g < lower.size(); ++g) lower_coeffs[g] = lower.coeffs_at(g);
    for (const auto& G : slices) {
      nonzero.push_back(nonzero_outcomes(G));
      Op b = identity(r) - G.total();
      bottom_live.push_back(b.norm() >= prune);
      bottom.push_back(hermitian_part(b));
    }
  }
};

struct Walker {
  const PasteContext& ctx;
  const std::vector<std::size_t>& tuple;
  double weight;
  Accum& acc;
  std::size_t pruned = 0;
  std::vector<std::size_t> coords;
  std::vector<std::vector<Symbol>> chosen;
  std::vector<Symbol> h_coeffs;
  std::uint64_t h = 0;

  Walker(const PasteContext& c, const std::vector<std::size_t>& tp, double w, Accum& a)
      : ctx(c), tuple(tp), weight(w), acc(a) {}

  void deposit(const Op& L) {
    Op contrib = weight * (L * L.adjoint());
    auto it = acc.find(h);
    if (it == acc.end())
      acc.emplace(h, std::move(contrib));
    else
      it->second += contrib;
  }

  void fix_h() {
    h_coeffs = ctx.alg.interpolate_coeffs(coords, chosen);
    h = ctx.alg.upper().index_of_coeffs(h_coeffs);
  }

  bool extend(const Op& L, const Op& F, Op& out) {
    out = L * F;
    if (out.norm() < ctx.prune) {
      ++pruned;
      return false;
    }
    return true;
  }

  void method1(std::size_t depth, const Op& L) {
    if (depth == ctx.t) {
      fix_h();
      deposit(L);
      return;
    }
    std::size_t x = tuple[depth];
    Op next;
    for (std::size_t g : ctx.nonzero[x]) {
      if (!extend(L, ctx.slices[x][g], next)) continue;
      coords.push_back(x);
      chosen.push_back(ctx.lower_coeffs[g]);
      method1(depth + 1, next);
      coords.pop_back();
      chosen.pop_back();
    }
  }

  void method2(std::size_t depth, std::size_t cnt, const Op& L) {
    if (depth == ctx.k) {
      if (cnt >= ctx.t) deposit(L);
      return;
    }
    if (cnt + (ctx.k - depth) < ctx.t) return;
    std::size_t x = tuple[depth];
    Op next;
    if (ctx.bottom_live[x] && extend(L, ctx.bottom[x], next)) method2(depth + 1, cnt, next);
    if (cnt < ctx.t) {
      for (std::size_t g : ctx.nonzero[x]) {
        if (!extend(L, ctx.slices[x][g], next)) continue;
        coords.push_back(x);
        chosen.push_back(ctx.lower_coeffs[g]);
        if (cnt + 1 == ctx.t) fix_h();
        method2(depth + 1, cnt + 1, next);
        coords.pop_back();
        chosen.pop_back();
      }
    } else {
      std::uint64_t g = ctx.alg.lower().index_of_coeffs(ctx.alg.slice_coeffs(h_coeffs, x));
      const Op& Gx = ctx.slices[x][g];
      if (Gx.norm() > 0 && extend(L, Gx, next)) method2(depth + 1, cnt + 1, next);
    }
  }
};

PastingResult paste(const SynchronousStrategy& s, const std::vector<Submeasurement>& slices, const PastingConfig& cfg,
                    int method) {
  if (s.m < 2) throw std::invalid_argument("pasting needs a strategy over [n]^m with m >= 2");
  if (!s.code.interpolable()) throw std::invalid_argument("pasting needs an interpolable base code");
  if (slices.size() != s.n()) throw std::invalid_argument("need one slice measurement per last coordinate");
  const auto& lower_words = tensor_codewords(s.code, s.m - 1);
  for (const auto& G : slices) {
    if (G.size() != lower_words.size() || G.dim() != s.r)
      throw std::invalid_argument("slice measurement has the wrong outcome count or dimension");
    auto v = validate_submeasurement(G, false);
    if (!v) throw std::invalid_argument("slice is not a submeasurement: " + v.message);
  }
  const std::size_t t = s.code.t();
  std::size_t k = t;
  if (method == 2) {
    k = cfg.k == 0 ? method2_default_k(s.m - 1, t, s.n()) : std::min(cfg.k, s.n());
    if (k < t) throw std::invalid_argument("Method 2 needs k >= t");
  }
  PasteContext ctx(s, slices, k, cfg.prune);
  TupleSet ts = distinct_tuples(s.n(), k, cfg, 0x7061737465ULL + s.m);

  const std::size_t chunks = std::min<std::size_t>(64, ts.tuples.size());
  std::vector<Accum> acc(chunks);
  std::vector<std::size_t> pruned(chunks, 0);
  const double w = 1.0 / static_cast<double>(ts.tuples.size());
  const Op start = identity(ctx.r);
  parallel_for(chunks, [&](std::size_t c) {
    for (std::size_t i = c; i < ts.tuples.size(); i += chunks) {
      Walker walker(ctx, ts.tuples[i], w, acc[c]);
      if (method == 1)
        walker.method1(0, start);
      else
        walker.method2(0, 0, start);
      pruned[c] += walker.pruned;
    }
  });

  const std::uint64_t upper_size = tensor_codewords(s.code, s.m).size();
  PastingResult res;
  res.k = k;
  res.tuples = ts.tuples.size();
  res.sampled = ts.sampled;
  res.H_raw.elements.assign(upper_size, Op::Zero(ctx.r, ctx.r));
  for (std::size_t c = 0; c < chunks; ++c) {
    for (auto& [h, op] : acc[c]) res.H_raw[h] += op;
    res.pruned += pruned[c];
  }
  for (auto& op : res.H_raw.elements) op = hermitian_part(op);
  res.prune_error = static_cast<double>(res.pruned) * cfg.prune * cfg.prune;
  Op total = res.H_raw.total();
  res.completeness_raw = trace_state(total).real();
  res.H = res.H_raw;
  res.H[0] += identity(ctx.r) - total;
  res.consistency = points_inconsistency(s, res.H);
  return res;
}

double commutator_sq(const Op& X, const Op& Y) { return sq_tau(X * Y - Y * X); }

}  // namespace

const std::vector<Table>& tensor_codewords(const LinearCode& code, std::size_t m) {
  static std::mutex lock;
  static std::map<std::string, std::unique_ptr<TensorCode>> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto& slot = cache[code_key(code, m)];
  if (!slot) slot = std::make_unique<TensorCode>(code, m);
  return slot->all_codewords();
}

namespace {

// r = 1: W = max_g c_g and T is the indicator of the first maximizer.
DualitySolution scalar_solve(const std::vector<Op>& C) {
  DualitySolution sol;
  std::size_t best = 0;
  for (std::size_t g = 1; g < C.size(); ++g)
    if (C[g](0, 0).real() > C[best](0, 0).real()) best = g;
  sol.W = C[best];
  sol.T.elements.assign(C.size(), Op::Zero(1, 1));
  sol.T[best] = Op::Identity(1, 1);
  sol.primal = sol.dual = C[best](0, 0).real();
  sol.converged = true;
  return sol;
}

}  // namespace

DualitySolution solve_duality(const std::vector<Op>& A, const DualityOptions& opt) {
  if (A.empty()) throw std::invalid_argument("solve_duality needs at least one operator");
  const Index r = A[0].rows();
  std::vector<Op> C;
  C.reserve(A.size());
  for (const auto& a : A) {
    if (a.rows() != r || a.cols() != r) throw std::invalid_argument("operators must share one square shape");
    if (!is_hermitian(a, 1e-9) || min_eigenvalue(a) < -1e-9) throw std::invalid_argument("operators must be PSD");
    C.push_back(hermitian_part(a) / static_cast<double>(r));
  }
  DualSolver solver = opt.solver;
  DualitySolution sol;
  if (solver == DualSolver::Auto && r == 1) {
    sol = scalar_solve(C);
  } else {
    if (solver == DualSolver::Auto) solver = r <= 32 ? DualSolver::Barrier : DualSolver::ExponentiatedGradient;
    sol = solver == DualSolver::Barrier ? barrier_solve(C, opt) : gradient_solve(C, opt);
  }

  sol.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& c : C) sol.min_slack = std::min(sol.min_slack, min_eigenvalue(hermitian_part(sol.W - c)));
  sol.completeness_error = op_norm(sol.T.total() - identity(r));
  Rng rng(derive_seed(opt.seed, 0x6373));
  for (int i = 0; i < 20; ++i) {
    Op X = random_hermitian(static_cast<std::size_t>(r), rng);
    X /= op_norm(X);
    cplx rhs = 0;
    for (std::size_t g = 0; g < C.size(); ++g) rhs += (sol.T[g] * X * C[g]).trace();
    sol.slackness_residual = std::max(sol.slackness_residual, std::abs((X * sol.W).trace() - rhs));
  }
  return sol;
}

double points_inconsistency(const SynchronousStrategy& s, const Submeasurement& M) {
  const auto& words = tensor_codewords(s.code, s.m);
  if (M.size() != words.size()) throw std::invalid_argument("measurement outcome count does not match C^m");
  const std::size_t N = s.num_points();
  std::vector<double> per(N);
  parallel_for(N, [&](std::size_t x) {
    std::vector<std::size_t> f(words.size());
    for (std::size_t g = 0; g < words.size(); ++g) f[g] = words[g][x];
    per[x] = inconsistency(data_process(M, f, s.q()), s.points[x]);
  });
  return std::accumulate(per.begin(), per.end(), 0.0) / static_cast<double>(N);
}

SelfImprovement self_improve(const SynchronousStrategy& s, const Submeasurement& G, const DualityOptions& opt) {
  const auto& words = tensor_codewords(s.code, s.m);
  if (G.size() != words.size() || G.dim() != s.r)
    throw std::invalid_argument("G must be a measurement over the codewords of C^m on the strategy's space");
  if (auto v = validate_measurement(G, false); !v) throw std::invalid_argument("G is not complete: " + v.message);
  const Index r = static_cast<Index>(s.r);
  const std::size_t N = s.num_points();
  const std::size_t Ng = words.size();

  SelfImprovement out;
  out.nu = points_inconsistency(s, G);

  std::vector<Op> A(Ng);
  parallel_for(Ng, [&](std::size_t g) {
    Op acc = Op::Zero(r, r);
    for (std::size_t x = 0; x < N; ++x) acc += s.points[x][words[g][x]];
    A[g] = hermitian_part(acc / static_cast<double>(N));
  });
  out.duality = solve_duality(A, opt);
  const auto& T = out.duality.T;

  out.H_raw.elements.resize(Ng);
  parallel_for(Ng, [&](std::size_t g) {
    Op acc = Op::Zero(r, r);
    if (T[g].norm() > 0)
      for (std::size_t x = 0; x < N; ++x) {
        const Op& P = s.points[x][words[g][x]];
        acc += P * T[g] * P;
      }
    out.H_raw[g] = hermitian_part(acc / static_cast<double>(N));
  });
  auto rounded = orthogonalize(out.H_raw);
  out.H = std::move(rounded.projective);
  out.projectivity_defect = rounded.zeta;
  out.rounding_distance = rounded.distance;
  out.rounding_bound = rounded.bound;

  out.completeness_raw = trace_state(out.H_raw.total()).real();
  out.completeness = trace_state(out.H.total()).real();
  out.consistency = points_inconsistency(s, out.H);
  out.psi_deficit = ((identity(r) - out.H.total()) * out.duality.W).trace().real();
  out.rounding_loss = std::max(0.0, out.completeness_raw - out.completeness);
  out.zeta = std::max({out.consistency, out.psi_deficit, out.rounding_loss + std::max(0.0, out.duality.gap)});
  out.completeness_ok = out.completeness >= 1.0 - out.nu - out.zeta - 1e-9;

  Rng rng(derive_seed(opt.seed, 0x7073));
  std::uniform_int_distribution<std::size_t> pick(0, Ng - 1);
  out.psi_check_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10; ++i) {
    std::size_t h = pick(rng);
    Op X = random_psd(static_cast<std::size_t>(r), rng);
    X /= X.trace().real();
    double psi = (X * out.duality.W).trace().real();
    double rhs = tau_product(X, A[h]);
    out.psi_check_min = std::min(out.psi_check_min, psi - rhs);
  }
  return out;
}

SynchronousStrategy restrict_strategy(const SynchronousStrategy& s, std::size_t x) {
  if (s.m < 2) throw std::invalid_argument("restriction needs m >= 2");
  if (x >= s.n()) throw std::out_of_range("slice coordinate out of range");
  const std::size_t n = s.n();
  const std::size_t m = s.m - 1;
  SynchronousStrategy out(s.code, m, s.r);
  const std::size_t Nl = out.num_points();
  out.points.resize(Nl);
  for (std::size_t u = 0; u < Nl; ++u) out.points[u] = s.points[u * n + x];
  out.lines.resize(out.num_lines());
  for (const auto& line : enumerate_lines(n, m)) {
    AxisLine up{line.axis, line.intercept};
    up.intercept.push_back(x);
    out.lines[line_index(n, m, line)] = s.lines[line_index(n, s.m, up)];
  }
  out.pairs.resize(Nl * Nl);
  const std::size_t Nu = s.num_points();
  for (std::size_t u = 0; u < Nl; ++u)
    for (std::size_t v = 0; v < Nl; ++v) out.pairs[u * Nl + v] = s.pairs[(u * n + x) * Nu + (v * n + x)];
  return out;
}

std::size_t method2_default_k(std::size_t m, std::size_t t, std::size_t n) { return std::min(12 * m * t, n); }

PastingResult paste_method1(const SynchronousStrategy& s, const std::vector<Submeasurement>& slices,
                            const PastingConfig& cfg) {
  return paste(s, slices, cfg, 1);
}

PastingResult paste_method2(const SynchronousStrategy& s, const std::vector<Submeasurement>& slices,
                            const PastingConfig& cfg) {
  return paste(s, slices, cfg, 2);
}

NuSeries nu_series(std::size_t m, std::size_t t, std::size_t n, std::size_t d, std::size_t k, double eps, double delta,
                   double zeta, double kappa) {
  const double M = static_cast<double>(m), T = static_cast<double>(t), K = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  eps = std::max(0.0, eps);
  delta = std::max(0.0, delta);
  zeta = std::max(0.0, zeta);
  const double line_term = std::sqrt(2 * (M + 1) * eps);
  NuSeries v;
  v.gamma_m = 1.0 - std::pow(static_cast<double>(d) / nn, M);
  v.nu1 = 8 * (std::sqrt(zeta) + std::sqrt((M + 1) * delta));
  v.nu2 = 4 * (v.gamma_m + v.nu1);
  v.nu3 = T * (T * v.nu2 + std::sqrt(zeta + line_term));
  v.nu4 = v.nu3 + line_term;
  v.nu5 = std::sqrt(v.nu4) + std::sqrt(zeta);
  v.nu6 = 2 * T * T * (v.nu2 + 1 / nn);
  v.nu7 = v.nu6 + 2 * std::pow(v.nu5 + 2 * v.nu6, 1 / T);
  v.nu2p = 27 * std::pow(v.nu2, 0.25);
  v.nu3pp = K * v.nu2p + std::sqrt(zeta + line_term);
  v.nu3p = K * v.nu3pp + K * K / nn;
  v.nu4p = v.nu3p + line_term;
  v.nu5p = 2 * K * K / nn + K * v.nu3pp + v.gamma_m;
  v.nu6p = 2 * K * K * v.nu2p;
  const double tail = std::exp(-K / (72 * M * M));
  const double kap = kappa * (1 + 1 / (3 * M));
  v.mu1 = kappa + v.nu4 + v.nu7;
  v.mu2 = kap + v.nu4p + v.nu5p + v.nu6p + tail;
  v.completeness2 = 1 - kap - v.nu5p - v.nu6p - tail;
  return v;
}

CommutatorReport commutator_report(const SynchronousStrategy& s, const GameSpec& g,
                                   const std::vector<Submeasurement>* slices) {
  CommutatorReport rep;
  rep.subcube_fail = std::max(0.0, 1.0 - goodness_synchronous(s, g).subcube_pass);
  const std::size_t N = s.num_points();
  std::vector<double> row(N, 0.0);
  parallel_for(N, [&](std::size_t u) {
    for (std::size_t v = 0; v < N; ++v)
      for (std::size_t a = 0; a < s.q(); ++a)
        for (std::size_t b = 0; b < s.q(); ++b) row[u] += commutator_sq(s.points[u][a], s.points[v][b]);
  });
  rep.points = std::sqrt(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(N * N));
  rep.points_bound = std::sqrt(32.0 * static_cast<double>(s.m) * rep.subcube_fail);
  rep.points_ok = rep.points <= rep.points_bound + 1e-9;

  if (slices) {
    if (s.m < 2 || slices->size() != s.n()) throw std::invalid_argument("need one slice measurement per coordinate");
    const auto& words = tensor_codewords(s.code, s.m - 1);
    const std::size_t n = s.n();
    const std::size_t Nl = int_pow(n, s.m - 1);
    // evaluated[x * Nl + u] = G^x_[g -> g(u)]
    std::vector<Submeasurement> evaluated(n * Nl);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t u = 0; u < Nl; ++u) {
        std::vector<std::size_t> f(words.size());
        for (std::size_t c = 0; c < words.size(); ++c) f[c] = words[c][u];
        evaluated[x * Nl + u] = data_process((*slices)[x], f, s.q());
      }
    const std::size_t E = evaluated.size();
    std::vector<double> er(E, 0.0);
    parallel_for(E, [&](std::size_t i) {
      for (std::size_t j = 0; j < E; ++j)
        for (std::size_t a = 0; a < s.q(); ++a)
          for (std::size_t b = 0; b < s.q(); ++b) er[i] += commutator_sq(evaluated[i][a], evaluated[j][b]);
    });
    rep.slice_points = std::sqrt(std::accumulate(er.begin(), er.end(), 0.0) / static_cast<double>(E * E));

    std::vector<std::vector<std::size_t>> live(n);
    for (std::size_t x = 0; x < n; ++x) live[x] = nonzero_outcomes((*slices)[x]);
    std::vector<double> sr(n, 0.0);
    parallel_for(n, [&](std::size_t x) {
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t a : live[x])
          for (std::size_t b : live[y]) sr[x] += commutator_sq((*slices)[x][a], (*slices)[y][b]);
    });
    rep.slices = std::sqrt(std::accumulate(sr.begin(), sr.end(), 0.0) / static_cast<double>(n * n));
  }
  return rep;
}

VarianceReport variance_report(const SynchronousStrategy& s, const Submeasurement& T, double eps) {
  const auto& words = tensor_codewords(s.code, s.m);
  if (T.size() != words.size()) throw std::invalid_argument("T must be indexed by the codewords of C^m");
  if (auto v = validate_measurement(T, false); !v) throw std::invalid_argument("T is not complete: " + v.message);
  const std::size_t n = s.n();
  const std::size_t N = s.num_points();
  const Index r = static_cast<Index>(s.r);
  const auto lines = enumerate_lines(n, s.m);

  // Σ_g 2[E_x τ(T X_x²) − τ(T (E_x X_x)²)] over a set of points
  auto spread = [&](std::size_t g, const std::vector<std::size_t>& pts) {
    Op mean = Op::Zero(r, r);
    double sq = 0;
    for (std::size_t x : pts) {
      const Op& X = s.points[x][words[g][x]];
      mean += X;
      sq += tau_product(T[g], X * X);
    }
    mean /= static_cast<double>(pts.size());
    return 2 * (sq / static_cast<double>(pts.size()) - tau_product(T[g], mean * mean));
  };
  std::vector<std::size_t> all(N);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<std::size_t>> line_pts;
  for (const auto& l : lines) {
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(point_index(n, l.point(i)));
    line_pts.push_back(std::move(pts));
  }
  std::vector<double> glob(words.size(), 0.0), loc(words.size(), 0.0);
  parallel_for(words.size(), [&](std::size_t g) {
    if (T[g].norm() == 0) return;
    glob[g] = spread(g, all);
    for (const auto& pts : line_pts) loc[g] += spread(g, pts);
    loc[g] /= static_cast<double>(line_pts.size());
  });
  double gv = std::max(0.0, std::accumulate(glob.begin(), glob.end(), 0.0));
  double lv = std::max(0.0, std::accumulate(loc.begin(), loc.end(), 0.0));

  VarianceReport rep;
  rep.zeta_var = std::sqrt(gv);
  rep.zeta_local = std::sqrt(lv);
  rep.eps = eps;
  rep.gamma = 1.0 - static_cast<double>(s.code.d()) / static_cast<double>(n);
  rep.local_bound = 2 * std::sqrt(2 * std::max(0.0, eps)) + 2 * std::sqrt(rep.gamma);
  rep.var_bound = std::sqrt(static_cast<double>(s.m)) * rep.local_bound;
  rep.local_ok = rep.zeta_local <= rep.local_bound + 1e-9;
  rep.var_ok = rep.zeta_var <= rep.var_bound + 1e-9;
  rep.global_le_m_local = gv <= static_cast<double>(s.m) * lv + 1e-9;
  return rep;
}

double extraction_eta(const SynchronousStrategy& s, const Submeasurement& G) {
  const auto& words = tensor_codewords(s.code, s.m);
  if (G.size() != words.size()) throw std::invalid_argument("G must be indexed by the codewords of C^m");
  const std::size_t N = s.num_points();
  std::vector<double> per(N, 0.0);
  std::vector<std::size_t> live = nonzero_outcomes(G);
  parallel_for(N, [&](std::size_t u) {
    for (std::size_t c : live) per[u] += tau_product(G[c], s.points[u][words[c][u]]);
  });
  return 1.0 - std::accumulate(per.begin(), per.end(), 0.0) / static_cast<double>(N);
}

Extraction extract_global(const SynchronousStrategy& s, const ExtractionConfig& cfg) {
  if (s.m == 0) throw std::invalid_argument("strategy needs m >= 1");
  if (!s.code.interpolable()) throw std::invalid_argument("extraction needs an interpolable base code");
  if (auto v = validate_strategy(s); !v) throw std::invalid_argument("invalid strategy: " + v.message);
  const GameSpec game = build_game(s.code, s.m);
  const GoodnessReport good = goodness_synchronous(s, game);

  Extraction out;
  out.report.eps = good.eps;
  out.report.delta = good.delta;
  out.report.pass = good.pass_probability;

  if (s.m == 1) {
    const auto& words = tensor_codewords(s.code, 1);
    for (std::uint64_t i = 0; i < words.size(); ++i)
      if (words[i] != s.code.codeword_at(i)) throw std::logic_error("tensor and base codeword orders disagree");
    out.G = s.lines[0];
  } else {
    const std::size_t n = s.n();
    std::vector<Submeasurement> slices(n);
    double cons_sum = 0, psi_sum = 0;
    for (std::size_t x = 0; x < n; ++x) {
      SynchronousStrategy sub = restrict_strategy(s, x);
      Extraction inner = extract_global(sub, cfg);
      auto& rep = out.report;
      rep.levels.insert(rep.levels.end(), inner.report.levels.begin(), inner.report.levels.end());
      rep.pastings.insert(rep.pastings.end(), inner.report.pastings.begin(), inner.report.pastings.end());
      rep.self_improvement_ok = rep.self_improvement_ok && inner.report.self_improvement_ok;

      DualityOptions dopt = cfg.duality;
      dopt.seed = derive_seed(cfg.duality.seed, s.m * 1000 + x);
      SelfImprovement si = self_improve(sub, inner.G, dopt);
      LevelRecord lr;
      lr.m = sub.m;
      lr.x = x;
      lr.nu = si.nu;
      lr.completeness = si.completeness;
      lr.consistency = si.consistency;
      lr.psi_deficit = si.psi_deficit;
      lr.zeta = si.zeta;
      lr.gap = si.duality.gap;
      lr.completeness_ok = si.completeness_ok;
      rep.levels.push_back(lr);
      rep.self_improvement_ok = rep.self_improvement_ok && si.completeness_ok;
      cons_sum += si.consistency;
      psi_sum += si.psi_deficit;
      slices[x] = std::move(si.H);
    }

    PastingConfig pcfg = cfg.pasting;
    PastingResult pr = pcfg.method == 1 ? paste_method1(s, slices, pcfg) : paste_method2(s, slices, pcfg);
    PastingRecord rec;
    rec.m = s.m;
    rec.method = pcfg.method == 1 ? 1 : 2;
    rec.k = pr.k;
    rec.tuples = pr.tuples;
    rec.sampled = pr.sampled;
    double mass = 0;
    for (const auto& G : slices) mass += trace_state(G.total()).real();
    rec.kappa = std::max(0.0, 1.0 - mass / static_cast<double>(n));
    rec.zeta = std::max(cons_sum, psi_sum) / static_cast<double>(n);
    rec.completeness_raw = pr.completeness_raw;
    rec.consistency = pr.consistency;
    CommutatorReport cr = commutator_report(s, game, &slices);
    rec.commutator_slice_points = cr.slice_points.value_or(0.0);
    rec.commutator_slices = cr.slices.value_or(0.0);
    rec.nu = nu_series(s.m - 1, s.code.t(), n, s.code.d(), pr.k, good.eps, good.delta, rec.zeta, rec.kappa);
    if (rec.method == 2) rec.completeness_bound_ok = pr.completeness_raw >= rec.nu.completeness2 - 1e-9;
    rec.consistency_bound_ok = pr.consistency <= (rec.method == 1 ? rec.nu.mu1 : rec.nu.mu2) + 1e-9;
    out.report.pastings.push_back(rec);
    out.G = std::move(pr.H);
  }
  out.report.eta = extraction_eta(s, out.G);
  return out;
}

}  // namespace tcq
