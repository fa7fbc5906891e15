#include "tcq/galois.hpp"

#include <string>

namespace tcq {

bool is_prime(std::uint32_t q) {
  if (q < 2) return false;
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= q; ++p)
    if (q % p == 0) return false;
  return true;
}

FieldElement::FieldElement(std::int64_t v, std::uint32_t modulus) : q(modulus) {
  if (!is_prime(modulus)) throw std::invalid_argument("modulus " + std::to_string(modulus) + " is not prime");
  std::int64_t r = v % static_cast<std::int64_t>(modulus);
  if (r < 0) r += modulus;
  value = static_cast<Symbol>(r);
}

static void same_field(FieldElement a, FieldElement b) {
  if (a.q != b.q) throw std::invalid_argument("modulus mismatch");
}

FieldElement field_add(FieldElement a, FieldElement b) {
  same_field(a, b);
  a.value = add_mod(a.value, b.value, a.q);
  return a;
}

FieldElement field_sub(FieldElement a, FieldElement b) {
  same_field(a, b);
  a.value = sub_mod(a.value, b.value, a.q);
  return a;
}

FieldElement field_mul(FieldElement a, FieldElement b) {
  same_field(a, b);
  a.value = mul_mod(a.value, b.value, a.q);
  return a;
}

FieldElement field_neg(FieldElement a) {
  a.value = a.value == 0 ? 0 : a.q - a.value;
  return a;
}

Symbol inv_mod(Symbol a, std::uint32_t q) {
  if (a % q == 0) throw std::domain_error("no inverse");
  // extended Euclid
  std::int64_t t = 0, nt = 1, r = q, nr = a % q;
  while (nr != 0) {
    std::int64_t quo = r / nr;
    std::int64_t tmp = t - quo * nt;
    t = nt;
    nt = tmp;
    tmp = r - quo * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += q;
  return static_cast<Symbol>(t);
}

FieldElement field_inv(FieldElement a) {
  a.value = inv_mod(a.value, a.q);
  return a;
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t q)
    : rows_(rows), cols_(cols), q_(q), data_(rows * cols, 0) {
  if (!is_prime(q)) throw std::invalid_argument("modulus " + std::to_string(q) + " is not prime");
}

FieldMatrix FieldMatrix::identity(std::size_t n, std::uint32_t q) {
  FieldMatrix I(n, n, q);
  for (std::size_t i = 0; i < n; ++i) I.set(i, i, 1);
  return I;
}

std::vector<Symbol> FieldMatrix::multiply(const std::vector<Symbol>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("dimension mismatch");
  std::vector<Symbol> y(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc = (acc + static_cast<std::uint64_t>(at(i, j)) * (x[j] % q_)) % q_;
    y[i] = static_cast<Symbol>(acc);
  }
  return y;
}

FieldMatrix FieldMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  FieldMatrix out(idx.size(), cols_, q_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= rows_) throw std::out_of_range("row index");
    for (std::size_t j = 0; j < cols_; ++j) out.set(i, j, at(idx[i], j));
  }
  return out;
}

namespace {

// Reduced row echelon form of [A | B] in place; returns pivot columns (all < ncols_a).
std::vector<std::size_t> rref(std::vector<std::vector<Symbol>>& M, std::size_t ncols_a, std::uint32_t q) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols_a && row < M.size(); ++col) {
    std::size_t piv = row;
    while (piv < M.size() && M[piv][col] == 0) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[piv], M[row]);
    Symbol inv = inv_mod(M[row][col], q);
    for (auto& v : M[row]) v = mul_mod(v, inv, q);
    for (std::size_t i = 0; i < M.size(); ++i) {
      if (i == row || M[i][col] == 0) continue;
      Symbol f = M[i][col];
      for (std::size_t j = 0; j < M[i].size(); ++j) M[i][j] = sub_mod(M[i][j], mul_mod(f, M[row][j], q), q);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t FieldMatrix::rank() const {
  std::vector<std::vector<Symbol>> M(rows_, std::vector<Symbol>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) M[i][j] = at(i, j);
  return rref(M, cols_, q_).size();
}

std::optional<LinearSolution> solve_linear(const FieldMatrix& A, const std::vector<Symbol>& b) {
  if (b.size() != A.rows()) throw std::invalid_argument("dimension mismatch");
  const std::uint32_t q = A.modulus();
  std::vector<std::vector<Symbol>> M(A.rows(), std::vector<Symbol>(A.cols() + 1));
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) M[i][j] = A.at(i, j);
    M[i][A.cols()] = b[i] % q;
  }
  auto pivots = rref(M, A.cols(), q);
  for (std::size_t i = pivots.size(); i < M.size(); ++i)
    if (M[i][A.cols()] != 0) return std::nullopt;
  LinearSolution sol;
  sol.rank = pivots.size();
  sol.x.assign(A.cols(), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) sol.x[pivots[i]] = M[i][A.cols()];
  return sol;
}

FieldMatrix invert(const FieldMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("not square");
  const std::size_t n = A.rows();
  const std::uint32_t q = A.modulus();
  std::vector<std::vector<Symbol>> M(n, std::vector<Symbol>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = A.at(i, j);
    M[i][n + i] = 1;
  }
  if (rref(M, n, q).size() != n) throw std::domain_error("singular matrix");
  FieldMatrix out(n, n, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.set(i, j, M[i][n + j]);
  return out;
}

}  // namespace tcq
