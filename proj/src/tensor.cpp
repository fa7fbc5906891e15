#include "tcq/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace tcq {

std::uint64_t int_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

std::size_t point_index(std::size_t n, const Point& u) {
  std::size_t idx = 0;
  for (auto c : u) {
    if (c >= n) throw std::out_of_range("point coordinate");
    idx = idx * n + c;
  }
  return idx;
}

Point point_coords(std::size_t n, std::size_t m, std::size_t index) {
  Point u(m);
  for (std::size_t j = m; j-- > 0;) {
    u[j] = index % n;
    index /= n;
  }
  return u;
}

Point AxisLine::point(std::size_t i) const {
  Point u;
  u.reserve(intercept.size() + 1);
  u.insert(u.end(), intercept.begin(), intercept.begin() + static_cast<std::ptrdiff_t>(axis));
  u.push_back(i);
  u.insert(u.end(), intercept.begin() + static_cast<std::ptrdiff_t>(axis), intercept.end());
  return u;
}

std::size_t line_index(std::size_t n, std::size_t m, const AxisLine& line) {
  if (line.axis >= m || line.intercept.size() + 1 != m) throw std::out_of_range("axis line");
  return line.axis * static_cast<std::size_t>(int_pow(n, m - 1)) + point_index(n, line.intercept);
}

bool Subcube::contains(const Point& u) const {
  if (tail.size() + 1 != j || u.size() < tail.size()) return false;
  return std::equal(tail.begin(), tail.end(), u.end() - static_cast<std::ptrdiff_t>(tail.size()));
}

std::vector<AxisLine> enumerate_lines(std::size_t n, std::size_t m) {
  std::vector<AxisLine> out;
  const std::size_t per_axis = int_pow(n, m - 1);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < per_axis; ++i) out.push_back({j, point_coords(n, m - 1, i)});
  return out;
}

std::vector<WeightedSubcube> enumerate_subcubes(std::size_t n, std::size_t m) {
  std::vector<WeightedSubcube> out;
  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t tails = int_pow(n, j - 1);
    for (std::size_t i = 0; i < tails; ++i) out.push_back({{j, point_coords(n, j - 1, i)}, 1, m * tails});
  }
  return out;
}

std::vector<Point> enumerate_points(std::size_t n, std::size_t m, const Subcube& cube) {
  if (cube.j < 1 || cube.j > m || cube.tail.size() + 1 != cube.j) throw std::out_of_range("subcube");
  const std::size_t f = cube.free_coords(m);
  std::vector<Point> out;
  const std::size_t cnt = int_pow(n, f);
  out.reserve(cnt);
  for (std::size_t i = 0; i < cnt; ++i) {
    Point u = point_coords(n, f, i);
    u.insert(u.end(), cube.tail.begin(), cube.tail.end());
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Point> enumerate_points(std::size_t n, std::size_t m) { return enumerate_points(n, m, Subcube{1, {}}); }

namespace {

// Mode product: replaces axis `axis` (length in_len) of a tensor with M * (that axis),
// where M is out_len x in_len. Shape given per axis.
std::vector<Symbol> mode_product(const std::vector<Symbol>& x, std::vector<std::size_t>& shape, std::size_t axis,
                                 const FieldMatrix& M) {
  const std::uint32_t q = M.modulus();
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t in_len = shape[axis], out_len = M.rows();
  std::vector<Symbol> y(outer * out_len * inner, 0);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t r = 0; r < out_len; ++r)
      for (std::size_t c = 0; c < in_len; ++c) {
        Symbol g = M.at(r, c);
        if (g == 0) continue;
        const Symbol* src = &x[(o * in_len + c) * inner];
        Symbol* dst = &y[(o * out_len + r) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] = add_mod(dst[i], mul_mod(g, src[i], q), q);
      }
  shape[axis] = out_len;
  return y;
}

}  // namespace

TensorCode::TensorCode(LinearCode base, std::size_t m) : base_(std::move(base)), m_(m) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  points_ = int_pow(base_.n(), m);
  coeff_len_ = int_pow(base_.k(), m);
  std::uint64_t s = 1;
  enumerable_ = true;
  for (std::size_t i = 0; i < coeff_len_; ++i) {
    s *= base_.q();
    if (s > kEnumerationBudget) {
      enumerable_ = false;
      break;
    }
  }
  size_ = enumerable_ ? s : 0;
}

std::uint64_t TensorCode::size() const {
  if (!enumerable_) throw BudgetExceeded("tensor code enumeration budget exceeded");
  return size_;
}

std::vector<Symbol> TensorCode::coeffs_at(std::uint64_t index) const {
  std::vector<Symbol> c(coeff_len_);
  const std::uint32_t q = base_.q();
  for (std::size_t j = coeff_len_; j-- > 0;) {
    c[j] = static_cast<Symbol>(index % q);
    index /= q;
  }
  if (index != 0) throw std::out_of_range("codeword index");
  return c;
}

std::uint64_t TensorCode::index_of_coeffs(const std::vector<Symbol>& coeffs) const {
  if (coeffs.size() != coeff_len_) throw std::invalid_argument("coefficient shape mismatch");
  if (!enumerable_) throw BudgetExceeded("tensor code enumeration budget exceeded");
  std::uint64_t idx = 0;
  for (Symbol s : coeffs) idx = idx * base_.q() + s;
  return idx;
}

Table TensorCode::encode_coeffs(const std::vector<Symbol>& coeffs) const {
  if (coeffs.size() != coeff_len_) throw std::invalid_argument("coefficient shape mismatch");
  std::vector<std::size_t> shape(m_, base_.k());
  std::vector<Symbol> x = coeffs;
  for (auto& v : x) v %= base_.q();
  for (std::size_t a = 0; a < m_; ++a) x = mode_product(x, shape, a, base_.generator());
  return x;
}

std::vector<Symbol> TensorCode::coeffs_of(const Table& table) const {
  if (table.size() != points_) throw std::invalid_argument("table shape mismatch");
  // decode each axis with the message map of the base code
  std::vector<std::size_t> shape(m_, n());
  std::vector<Symbol> x = table;
  for (std::size_t a = 0; a < m_; ++a) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t b = 0; b < a; ++b) outer *= shape[b];
    for (std::size_t b = a + 1; b < m_; ++b) inner *= shape[b];
    std::vector<Symbol> y(outer * base_.k() * inner);
    Codeword line(n());
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        for (std::size_t c = 0; c < n(); ++c) line[c] = x[(o * n() + c) * inner + i];
        auto msg = base_.message_of(line);
        for (std::size_t c = 0; c < base_.k(); ++c) y[(o * base_.k() + c) * inner + i] = msg[c];
      }
    shape[a] = base_.k();
    x = std::move(y);
  }
  return x;
}

Table TensorCode::codeword_at(std::uint64_t index) const { return encode_coeffs(coeffs_at(index)); }

std::uint64_t TensorCode::index_of(const Table& table) const {
  auto c = coeffs_of(table);
  if (encode_coeffs(c) != table) throw std::invalid_argument("table is not a tensor codeword");
  return index_of_coeffs(c);
}

const std::vector<Table>& TensorCode::all_codewords() const {
  if (!cache_) {
    const std::uint64_t total = size();
    auto all = std::make_shared<std::vector<Table>>();
    all->reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) all->push_back(codeword_at(i));
    cache_ = std::move(all);
  }
  return *cache_;
}

TensorCodeword tensor_encode(const LinearCode& code, std::size_t m, const std::vector<Symbol>& coeffs) {
  TensorCode tc(code, m);
  return {m, tc.encode_coeffs(coeffs)};
}

Codeword restrict_line(std::size_t n, std::size_t m, const Table& table, const AxisLine& line) {
  if (table.size() != int_pow(n, m)) throw std::invalid_argument("table shape mismatch");
  if (line.axis >= m || line.intercept.size() + 1 != m) throw std::out_of_range("axis line");
  Codeword g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = table[point_index(n, line.point(i))];
  return g;
}

Codeword restrict_line(const LinearCode& code, const TensorCodeword& c, const AxisLine& line) {
  return restrict_line(code.n(), c.m, c.table, line);
}

bool is_tensor_codeword(const LinearCode& code, std::size_t m, const Table& table) {
  if (table.size() != int_pow(code.n(), m)) throw std::invalid_argument("table shape mismatch");
  for (const auto& line : enumerate_lines(code.n(), m))
    if (!is_codeword(code, restrict_line(code.n(), m, table, line))) return false;
  return true;
}

Table restrict_slice(std::size_t n, std::size_t m_plus_1, const Table& table, std::size_t x) {
  if (m_plus_1 < 2) throw std::invalid_argument("slice needs at least two axes");
  if (x >= n) throw std::out_of_range("slice coordinate");
  if (table.size() != int_pow(n, m_plus_1)) throw std::invalid_argument("table shape mismatch");
  Table out(table.size() / n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = table[i * n + x];
  return out;
}

TensorCodeword restrict_slice(const LinearCode& code, const TensorCodeword& h, std::size_t x) {
  return {h.m - 1, restrict_slice(code.n(), h.m, h.table, x)};
}

TensorCodeword interpolate_slices(const LinearCode& code, std::size_t m_plus_1, const std::vector<std::size_t>& coords,
                                  const std::vector<TensorCodeword>& slices) {
  if (m_plus_1 < 2) throw std::invalid_argument("need at least two axes");
  if (!code.interpolable()) throw std::invalid_argument("code is not interpolable");
  if (coords.size() != code.t() || slices.size() != coords.size())
    throw std::invalid_argument("need exactly t slices");
  std::set<std::size_t> seen(coords.begin(), coords.end());
  if (seen.size() != coords.size()) throw std::invalid_argument("duplicate coordinates");
  const std::size_t m = m_plus_1 - 1;
  const std::size_t lower_points = int_pow(code.n(), m);
  for (const auto& s : slices)
    if (s.m != m || !is_tensor_codeword(code, m, s.table)) throw std::invalid_argument("invalid slice");
  TensorCodeword h{m_plus_1, Table(lower_points * code.n())};
  std::vector<Symbol> vals(coords.size());
  for (std::size_t z = 0; z < lower_points; ++z) {
    for (std::size_t i = 0; i < coords.size(); ++i) vals[i] = slices[i].table[z];
    Codeword col = interpolate(code, coords, vals);
    for (std::size_t x = 0; x < code.n(); ++x) h.table[z * code.n() + x] = col[x];
  }
  return h;
}

std::size_t agreement_count(const Table& a, const Table& b) {
  if (a.size() != b.size()) throw std::invalid_argument("shape mismatch");
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += a[i] == b[i];
  return c;
}

double agreement_fraction(const Table& a, const Table& b) {
  if (a.empty()) throw std::invalid_argument("empty table");
  return static_cast<double>(agreement_count(a, b)) / static_cast<double>(a.size());
}

double gamma(std::size_t n, std::size_t d, std::size_t m) {
  double r = static_cast<double>(d) / static_cast<double>(n);
  double p = 1.0;
  for (std::size_t i = 0; i < m; ++i) p *= r;
  return 1.0 - p;
}

SliceAlgebra::SliceAlgebra(const TensorCode& upper) : upper_(upper), lower_(upper.base(), upper.m() - 1) {
  if (upper.m() < 2) throw std::invalid_argument("slice algebra needs at least two axes");
}

std::vector<Symbol> SliceAlgebra::slice_coeffs(const std::vector<Symbol>& h, std::size_t x) const {
  const auto& G = upper_.base().generator();
  const std::size_t k = G.cols();
  const std::uint32_t q = G.modulus();
  std::vector<Symbol> s(lower_.coeff_len(), 0);
  for (std::size_t z = 0; z < s.size(); ++z) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < k; ++j) acc += static_cast<std::uint64_t>(G.at(x, j)) * h[z * k + j];
    s[z] = static_cast<Symbol>(acc % q);
  }
  return s;
}

std::uint64_t SliceAlgebra::slice_index(std::uint64_t h_index, std::size_t x) const {
  return lower_.index_of_coeffs(slice_coeffs(upper_.coeffs_at(h_index), x));
}

std::vector<Symbol> SliceAlgebra::interpolate_coeffs(const std::vector<std::size_t>& coords,
                                                     const std::vector<std::vector<Symbol>>& slices) const {
  const auto& G = upper_.base().generator();
  const std::size_t k = G.cols();
  if (coords.size() != k || slices.size() != k) throw std::invalid_argument("need exactly k slices");
  FieldMatrix inv = invert(G.select_rows(coords));
  const std::uint32_t q = G.modulus();
  std::vector<Symbol> h(upper_.coeff_len(), 0);
  for (std::size_t z = 0; z < lower_.coeff_len(); ++z)
    for (std::size_t j = 0; j < k; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < k; ++i) acc += static_cast<std::uint64_t>(inv.at(j, i)) * slices[i][z];
      h[z * k + j] = static_cast<Symbol>(acc % q);
    }
  return h;
}

}  // namespace tcq
