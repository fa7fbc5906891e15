#include "tcq/codes.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace tcq {

namespace {

std::uint64_t checked_power(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > kEnumerationBudget) return kEnumerationBudget + 1;
    out *= base;
  }
  return out;
}

// visits all k-subsets of [n] in lexicographic order; stops when f returns false
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    if (!f(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::size_t brute_force_distance(const FieldMatrix& G) {
  const std::uint32_t q = G.modulus();
  const std::uint64_t total = checked_power(q, G.cols());
  if (total > kEnumerationBudget) throw BudgetExceeded("code enumeration budget exceeded");
  std::size_t best = G.rows();
  bool any_nonzero = false;
  std::vector<Symbol> msg(G.cols(), 0);
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    // increment msg as a base-q counter, last entry fastest
    for (std::size_t j = G.cols(); j-- > 0;) {
      if (++msg[j] < q) break;
      msg[j] = 0;
    }
    auto w = G.multiply(msg);
    std::size_t wt = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Symbol s) { return s != 0; }));
    if (wt == 0) continue;  // only happens for rank-deficient generators
    any_nonzero = true;
    best = std::min(best, wt);
  }
  return any_nonzero ? best : 0;
}

bool check_interpolable(const FieldMatrix& G, std::size_t t) {
  if (t == 0 || t > G.rows()) return false;
  bool ok = true;
  for_each_subset(G.rows(), t, [&](const std::vector<std::size_t>& rows) {
    if (G.select_rows(rows).rank() != t) ok = false;
    return ok;
  });
  return ok;
}

LinearCode::LinearCode(FieldMatrix generator) : generator_(std::move(generator)) {
  if (generator_.rows() == 0 || generator_.cols() == 0) throw std::invalid_argument("empty generator");
  if (generator_.cols() > generator_.rows()) throw std::invalid_argument("k exceeds n");
  if (generator_.rank() != generator_.cols()) throw std::invalid_argument("generator is not full column rank");
  size_ = checked_power(q(), k());
  if (size_ > kEnumerationBudget) throw BudgetExceeded("code enumeration budget exceeded");
  d_ = brute_force_distance(generator_);
  interpolable_ = check_interpolable(generator_, t());
  // first information set in lexicographic order
  for_each_subset(n(), k(), [&](const std::vector<std::size_t>& rows) {
    auto sub = generator_.select_rows(rows);
    if (sub.rank() != k()) return true;
    info_set_ = rows;
    info_inverse_ = invert(sub);
    return false;
  });
}

std::vector<Symbol> LinearCode::message_at(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("codeword index");
  std::vector<Symbol> msg(k());
  for (std::size_t j = k(); j-- > 0;) {
    msg[j] = static_cast<Symbol>(index % q());
    index /= q();
  }
  return msg;
}

std::uint64_t LinearCode::index_of_message(const std::vector<Symbol>& msg) const {
  if (msg.size() != k()) throw std::invalid_argument("message length mismatch");
  std::uint64_t idx = 0;
  for (Symbol s : msg) idx = idx * q() + (s % q());
  return idx;
}

Codeword LinearCode::codeword_at(std::uint64_t index) const { return generator_.multiply(message_at(index)); }

std::vector<Symbol> LinearCode::message_of(const Codeword& word) const {
  if (word.size() != n()) throw std::invalid_argument("word length mismatch");
  std::vector<Symbol> vals(k());
  for (std::size_t i = 0; i < k(); ++i) vals[i] = word[info_set_[i]] % q();
  return info_inverse_.multiply(vals);
}

std::uint64_t LinearCode::index_of(const Codeword& word) const {
  auto msg = message_of(word);
  if (generator_.multiply(msg) != word) throw std::invalid_argument("word is not a codeword");
  return index_of_message(msg);
}

LinearCode make_reed_solomon(std::uint32_t q, std::size_t n, std::size_t s, std::vector<Symbol> eval_points) {
  if (!is_prime(q)) throw std::invalid_argument("q must be prime");
  if (n > q) throw std::invalid_argument("n exceeds q");
  if (s >= n) throw std::invalid_argument("degree s must be below n");
  if (eval_points.empty()) {
    eval_points.resize(n);
    std::iota(eval_points.begin(), eval_points.end(), 0);
  }
  if (eval_points.size() != n) throw std::invalid_argument("need n evaluation points");
  std::set<Symbol> seen;
  for (auto& p : eval_points) {
    if (p >= q) throw std::invalid_argument("evaluation point out of field");
    if (!seen.insert(p).second) throw std::invalid_argument("repeated evaluation point");
  }
  FieldMatrix G(n, s + 1, q);
  for (std::size_t i = 0; i < n; ++i) {
    Symbol pw = 1;
    for (std::size_t j = 0; j <= s; ++j) {
      G.set(i, j, pw);
      pw = mul_mod(pw, eval_points[i], q);
    }
  }
  return LinearCode(std::move(G));
}

Codeword encode(const LinearCode& code, const std::vector<Symbol>& message) {
  if (message.size() != code.k()) throw std::invalid_argument("message length mismatch");
  return code.generator().multiply(message);
}

bool is_codeword(const LinearCode& code, const Codeword& word) {
  if (word.size() != code.n()) throw std::invalid_argument("word length mismatch");
  return solve_linear(code.generator(), word).has_value();
}

std::size_t distance(const LinearCode& code) { return code.d(); }

bool check_interpolable(const LinearCode& code) { return check_interpolable(code.generator(), code.t()); }

Codeword interpolate(const LinearCode& code, const std::vector<std::size_t>& coords, const std::vector<Symbol>& values) {
  if (!code.interpolable()) throw std::invalid_argument("code is not interpolable");
  if (coords.size() != code.t() || values.size() != coords.size())
    throw std::invalid_argument("need exactly t coordinates and values");
  std::set<std::size_t> seen(coords.begin(), coords.end());
  if (seen.size() != coords.size()) throw std::invalid_argument("duplicate coordinates");
  auto sol = solve_linear(code.generator().select_rows(coords), values);
  if (!sol) throw std::logic_error("interpolation system inconsistent");
  return encode(code, sol->x);
}

std::size_t hamming_distance(const Codeword& a, const Codeword& b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace tcq
