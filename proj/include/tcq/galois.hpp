#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tcq {

using Symbol = std::uint32_t;

bool is_prime(std::uint32_t q);

// Element of GF(q), q prime.
struct FieldElement {
  Symbol value = 0;
  std::uint32_t q = 2;

  FieldElement() = default;
  FieldElement(std::int64_t v, std::uint32_t modulus);

  bool operator==(const FieldElement& o) const { return value == o.value && q == o.q; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
};

FieldElement field_add(FieldElement a, FieldElement b);
FieldElement field_sub(FieldElement a, FieldElement b);
FieldElement field_mul(FieldElement a, FieldElement b);
FieldElement field_neg(FieldElement a);
FieldElement field_inv(FieldElement a);

inline FieldElement operator+(FieldElement a, FieldElement b) { return field_add(a, b); }
inline FieldElement operator-(FieldElement a, FieldElement b) { return field_sub(a, b); }
inline FieldElement operator*(FieldElement a, FieldElement b) { return field_mul(a, b); }

// Raw helpers on symbols already reduced mod q. No checks.
inline Symbol add_mod(Symbol a, Symbol b, std::uint32_t q) {
  Symbol s = a + b;
  return s >= q ? s - q : s;
}
inline Symbol sub_mod(Symbol a, Symbol b, std::uint32_t q) { return a >= b ? a - b : a + q - b; }
inline Symbol mul_mod(Symbol a, Symbol b, std::uint32_t q) {
  return static_cast<Symbol>((static_cast<std::uint64_t>(a) * b) % q);
}
Symbol inv_mod(Symbol a, std::uint32_t q);

class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t q);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return q_; }

  Symbol at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Symbol v) { data_[i * cols_ + j] = v % q_; }
  FieldElement element(std::size_t i, std::size_t j) const { return FieldElement(at(i, j), q_); }

  std::vector<Symbol> multiply(const std::vector<Symbol>& x) const;
  FieldMatrix select_rows(const std::vector<std::size_t>& idx) const;
  std::size_t rank() const;

  static FieldMatrix identity(std::size_t n, std::uint32_t q);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::uint32_t q_ = 2;
  std::vector<Symbol> data_;
};

struct LinearSolution {
  std::vector<Symbol> x;  // one particular solution (free variables set to 0)
  std::size_t rank = 0;
};

// Gaussian elimination over GF(q). nullopt when the system is inconsistent.
std::optional<LinearSolution> solve_linear(const FieldMatrix& A, const std::vector<Symbol>& b);

// Inverse of a square invertible matrix; throws if singular.
FieldMatrix invert(const FieldMatrix& A);

}  // namespace tcq
