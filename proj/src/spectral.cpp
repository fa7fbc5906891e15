#include "tcq/spectral.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <cmath>
#include <stdexcept>

#include "tcq/tensor.hpp"

namespace tcq {

AxisGraph axis_graph(std::size_t n, std::size_t m) {
  if (n < 2 || m == 0) throw std::invalid_argument("axis graph needs n >= 2 and m >= 1");
  const std::uint64_t N = int_pow(n, m);
  if (N > kGraphBudget) throw std::invalid_argument("axis graph exceeds the vertex budget");
  AxisGraph g{n, m, static_cast<std::size_t>(N), Eigen::MatrixXd::Zero(N, N), {}, {}};
  const double per_line = 1.0 / (static_cast<double>(m) * static_cast<double>(int_pow(n, m - 1)) * n * n);
  for (const auto& l : enumerate_lines(n, m))
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        g.K(static_cast<Eigen::Index>(point_index(n, l.point(i))), static_cast<Eigen::Index>(point_index(n, l.point(j)))) +=
            per_line;
  g.L = Eigen::MatrixXd::Identity(N, N) / static_cast<double>(N) - g.K;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.L, Eigen::EigenvaluesOnly);
  g.spectrum = es.eigenvalues();
  return g;
}

std::vector<std::pair<double, std::size_t>> axis_graph_spectrum_closed_form(std::size_t n, std::size_t m) {
  const double N = static_cast<double>(int_pow(n, m));
  std::vector<std::pair<double, std::size_t>> out;
  for (std::size_t w = 0; w <= m; ++w)
    out.emplace_back(static_cast<double>(w) / (static_cast<double>(m) * N),
                     static_cast<std::size_t>(std::llround(boost::math::binomial_coefficient<double>(m, w))) *
                         int_pow(n - 1, w));
  return out;
}

LocalToGlobal local_to_global_check(std::size_t n, std::size_t m, const std::vector<std::vector<Op>>& family,
                                    const Op& W) {
  auto g = axis_graph(n, m);
  if (family.size() != g.N) throw std::invalid_argument("family must be indexed by all points");
  const std::size_t N = g.N;
  auto rho_sq = [&](std::size_t u, std::size_t v) {
    double s = 0;
    for (std::size_t a = 0; a < family[u].size(); ++a) {
      const Op D = family[u][a] - family[v][a];
      s += (W * D.adjoint() * D).trace().real();
    }
    return s;
  };
  LocalToGlobal r;
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t v = 0; v < N; ++v) {
      const double x = rho_sq(u, v);
      r.global += x / static_cast<double>(N * N);
      r.local += g.K(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) * x;
    }
  r.factor = 1.0 / (static_cast<double>(N) * g.lambda2());
  r.bound_ok = r.global <= r.local * r.factor + 1e-9;
  return r;
}

double binomial_tail(std::size_t k, std::size_t t, double x) {
  if (t > k) throw std::invalid_argument("binomial tail needs t <= k");
  if (x < 0 || x > 1) throw std::invalid_argument("binomial tail needs x in [0, 1]");
  if (t == 0) return 1.0;
  if (x == 0) return 0.0;
  if (x == 1) return 1.0;
  // P[Bin(k, x) >= t] = I_x(t, k - t + 1)
  return boost::math::ibeta(static_cast<double>(t), static_cast<double>(k - t + 1), x);
}

ChernoffCheck chernoff_operator_check(const Op& G, std::size_t k, std::size_t t, double theta,
                                      bool enforce_precondition) {
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("theta must lie in (0, 1)");
  const bool pre = static_cast<double>(k) >= 2.0 * static_cast<double>(t) / theta;
  if (!pre && enforce_precondition) throw std::invalid_argument("need k >= 2t/theta");
  if (!is_hermitian(G) || min_eigenvalue(G) < -1e-9 || max_eigenvalue(G) > 1 + 1e-9)
    throw std::invalid_argument("G must satisfy 0 <= G <= I");
  ChernoffCheck c;
  c.precondition = pre;
  c.kappa = 1.0 - trace_state(G).real();
  Op FG = matrix_function(G, [&](double x) { return binomial_tail(k, t, std::clamp(x, 0.0, 1.0)); });
  c.lhs = trace_state(FG).real();
  c.rhs = 1.0 - c.kappa / (1.0 - theta) - std::exp(-theta * theta * static_cast<double>(k) / 2.0);
  c.ok = c.lhs >= c.rhs - 1e-9;
  return c;
}

double tuple_tv_distance(std::size_t n, std::size_t k) {
  if (k > n || k == 0) throw std::invalid_argument("need 1 <= k <= n");
  const std::uint64_t total = int_pow(n, k);
  if (total > kEnumerationBudget) throw BudgetExceeded("tuple enumeration budget exceeded");
  std::uint64_t distinct = 1;
  for (std::size_t i = 0; i < k; ++i) distinct *= n - i;
  const double pu = 1.0 / static_cast<double>(total), pd = 1.0 / static_cast<double>(distinct);
  double tv = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Point x = point_coords(n, k, idx);
    bool all_distinct = true;
    for (std::size_t i = 0; i < k && all_distinct; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (x[i] == x[j]) {
          all_distinct = false;
          break;
        }
    tv += std::abs(pu - (all_distinct ? pd : 0.0));
  }
  return tv / 2;
}

}  // namespace tcq
