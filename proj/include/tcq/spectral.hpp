#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tcq/opalg.hpp"

namespace tcq {

constexpr std::size_t kGraphBudget = 2000;

// Vertices [n]^m; an edge picks a uniform axis, a uniform line along it, and two independent
// uniform points on that line.
struct AxisGraph {
  std::size_t n = 0, m = 0, N = 0;
  Eigen::MatrixXd K;          // E_{(u,v)} |u><v|
  Eigen::MatrixXd L;          // (1/N) I - K
  Eigen::VectorXd spectrum;   // ascending
  double lambda2() const { return spectrum(1); }
};

AxisGraph axis_graph(std::size_t n, std::size_t m);

// Closed form: eigenvalue (1/N)(w/m) with multiplicity C(m,w)(n-1)^w, w = 0..m.
std::vector<std::pair<double, std::size_t>> axis_graph_spectrum_closed_form(std::size_t n, std::size_t m);

struct LocalToGlobal {
  double global = 0;  // E_{u,v} rho((A^u - A^v)^2)
  double local = 0;   // same along graph edges
  double factor = 0;  // 1 / (N lambda2)
  bool bound_ok = false;
};

// family[u] lists operators A^u_a (summed over a); rho(X) = tr(X W).
LocalToGlobal local_to_global_check(std::size_t n, std::size_t m, const std::vector<std::vector<Op>>& family,
                                    const Op& W);

// sum_{i=t}^k C(k,i) x^i (1-x)^{k-i}
double binomial_tail(std::size_t k, std::size_t t, double x);

struct ChernoffCheck {
  double lhs = 0, rhs = 0, kappa = 0;
  bool precondition = false;  // k >= 2t/theta
  bool ok = false;
};

// tau(F(G)) against 1 - kappa/(1-theta) - exp(-theta^2 k / 2). Throws when k < 2t/theta unless
// enforce_precondition is false, in which case the inequality is still evaluated and reported.
ChernoffCheck chernoff_operator_check(const Op& G, std::size_t k, std::size_t t, double theta,
                                      bool enforce_precondition = true);

// Exact total variation distance between uniform [n]^k and uniform distinct k-tuples, by enumeration.
double tuple_tv_distance(std::size_t n, std::size_t k);

}  // namespace tcq
