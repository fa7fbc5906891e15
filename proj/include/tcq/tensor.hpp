#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tcq/codes.hpp"

namespace tcq {

using Table = std::vector<Symbol>;  // n^m values, row-major, last coordinate fastest
using Point = std::vector<std::size_t>;

std::uint64_t int_pow(std::uint64_t base, std::size_t exp);
std::size_t point_index(std::size_t n, const Point& u);
Point point_coords(std::size_t n, std::size_t m, std::size_t index);

struct TensorCodeword {
  std::size_t m = 0;
  Table table;
};

// Axis-parallel line: coordinate `axis` (0-based) varies, the other m-1 are `intercept`.
struct AxisLine {
  std::size_t axis = 0;
  Point intercept;

  Point point(std::size_t i) const;  // the point with value i on the axis
  bool operator==(const AxisLine& o) const { return axis == o.axis && intercept == o.intercept; }
};

std::size_t line_index(std::size_t n, std::size_t m, const AxisLine& line);

// Points with fixed last j-1 coordinates; j = 1 is the whole cube.
struct Subcube {
  std::size_t j = 1;
  Point tail;

  std::size_t free_coords(std::size_t m) const { return m - j + 1; }
  bool contains(const Point& u) const;
};

struct WeightedSubcube {
  Subcube cube;
  std::uint64_t weight_num = 1;  // probability = num / den
  std::uint64_t weight_den = 1;
};

std::vector<AxisLine> enumerate_lines(std::size_t n, std::size_t m);
std::vector<WeightedSubcube> enumerate_subcubes(std::size_t n, std::size_t m);
std::vector<Point> enumerate_points(std::size_t n, std::size_t m, const Subcube& cube);
std::vector<Point> enumerate_points(std::size_t n, std::size_t m);

// The tensor code C^{⊗m} with canonical codeword indexing: lexicographic over the
// k^m coefficient tensor (flattened row-major, first entry most significant).
class TensorCode {
 public:
  TensorCode(LinearCode base, std::size_t m);

  const LinearCode& base() const { return base_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return base_.n(); }
  std::size_t points() const { return points_; }
  std::size_t coeff_len() const { return coeff_len_; }
  // q^{k^m}; throws BudgetExceeded if above the enumeration budget
  std::uint64_t size() const;
  bool enumerable() const { return enumerable_; }

  std::vector<Symbol> coeffs_at(std::uint64_t index) const;
  std::uint64_t index_of_coeffs(const std::vector<Symbol>& coeffs) const;
  Table encode_coeffs(const std::vector<Symbol>& coeffs) const;
  std::vector<Symbol> coeffs_of(const Table& table) const;  // assumes a codeword
  Table codeword_at(std::uint64_t index) const;
  std::uint64_t index_of(const Table& table) const;  // throws if not a codeword

  // Cached full enumeration; only when size() is within budget.
  const std::vector<Table>& all_codewords() const;

 private:
  LinearCode base_;
  std::size_t m_;
  std::size_t points_;
  std::size_t coeff_len_;
  std::uint64_t size_ = 0;
  bool enumerable_ = false;
  mutable std::shared_ptr<std::vector<Table>> cache_;
};

TensorCodeword tensor_encode(const LinearCode& code, std::size_t m, const std::vector<Symbol>& coeffs);
bool is_tensor_codeword(const LinearCode& code, std::size_t m, const Table& table);
Codeword restrict_line(const LinearCode& code, const TensorCodeword& c, const AxisLine& line);
Codeword restrict_line(std::size_t n, std::size_t m, const Table& table, const AxisLine& line);
// h(., ..., ., x): fixes the last coordinate.
TensorCodeword restrict_slice(const LinearCode& code, const TensorCodeword& h, std::size_t x);
Table restrict_slice(std::size_t n, std::size_t m_plus_1, const Table& table, std::size_t x);
// The unique h in C^{⊗(m+1)} whose slices at coords are the given codewords of C^{⊗m}.
TensorCodeword interpolate_slices(const LinearCode& code, std::size_t m_plus_1, const std::vector<std::size_t>& coords,
                                  const std::vector<TensorCodeword>& slices);

std::size_t agreement_count(const Table& a, const Table& b);
double agreement_fraction(const Table& a, const Table& b);
double gamma(std::size_t n, std::size_t d, std::size_t m);

// Index-level slice algebra between C^{⊗m} (slices) and C^{⊗(m+1)}.
class SliceAlgebra {
 public:
  explicit SliceAlgebra(const TensorCode& upper);  // upper has m+1 >= 2 axes, lower has m

  // index of the slice of h at last coordinate x, as an index of C^{⊗m}
  std::uint64_t slice_index(std::uint64_t h_index, std::size_t x) const;
  std::vector<Symbol> slice_coeffs(const std::vector<Symbol>& h_coeffs, std::size_t x) const;
  // coefficients of the unique h with given slice coefficient vectors at coords (|coords| = k)
  std::vector<Symbol> interpolate_coeffs(const std::vector<std::size_t>& coords,
                                         const std::vector<std::vector<Symbol>>& slice_coeffs) const;

  const TensorCode& upper() const { return upper_; }
  const TensorCode& lower() const { return lower_; }

 private:
  TensorCode upper_;
  TensorCode lower_;
};

}  // namespace tcq
