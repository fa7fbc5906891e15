#pragma once

#include <cstdint>
#include <vector>

#include "tcq/galois.hpp"

namespace tcq {

using Codeword = std::vector<Symbol>;

inline constexpr std::uint64_t kEnumerationBudget = 1000000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear [n,k,d] code over GF(q) given by an n x k generator. Immutable.
class LinearCode {
 public:
  explicit LinearCode(FieldMatrix generator);

  std::uint32_t q() const { return generator_.modulus(); }
  std::size_t n() const { return generator_.rows(); }
  std::size_t k() const { return generator_.cols(); }
  std::size_t d() const { return d_; }
  std::size_t t() const { return n() - d_ + 1; }
  bool interpolable() const { return interpolable_; }
  const FieldMatrix& generator() const { return generator_; }

  // q^k, the number of codewords
  std::uint64_t size() const { return size_; }

  // Lexicographic order over messages, first entry most significant.
  std::vector<Symbol> message_at(std::uint64_t index) const;
  std::uint64_t index_of_message(const std::vector<Symbol>& msg) const;
  Codeword codeword_at(std::uint64_t index) const;
  // Index of a codeword; throws if word is not in the code.
  std::uint64_t index_of(const Codeword& word) const;
  std::vector<Symbol> message_of(const Codeword& word) const;

 private:
  FieldMatrix generator_;
  std::size_t d_ = 0;
  std::uint64_t size_ = 0;
  bool interpolable_ = false;
  std::vector<std::size_t> info_set_;  // k coordinates on which the code is invertible
  FieldMatrix info_inverse_;
};

// Reed-Solomon code of degree < s+1; generator column j evaluates x^j.
// Empty eval_points means 0,1,...,n-1.
LinearCode make_reed_solomon(std::uint32_t q, std::size_t n, std::size_t s,
                             std::vector<Symbol> eval_points = {});

Codeword encode(const LinearCode& code, const std::vector<Symbol>& message);
bool is_codeword(const LinearCode& code, const Codeword& word);
// Minimum weight by enumeration (budget 10^6 codewords).
std::size_t distance(const LinearCode& code);
std::size_t brute_force_distance(const FieldMatrix& generator);
bool check_interpolable(const LinearCode& code);
bool check_interpolable(const FieldMatrix& generator, std::size_t t);
Codeword interpolate(const LinearCode& code, const std::vector<std::size_t>& coords,
                     const std::vector<Symbol>& values);
std::size_t hamming_distance(const Codeword& a, const Codeword& b);

}  // namespace tcq
