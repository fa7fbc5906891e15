#include "tcq/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tcq {

const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

cplx trace_state(const Op& X) {
  if (X.rows() != X.cols()) throw std::invalid_argument("operator not square");
  return X.trace() / static_cast<double>(X.rows());
}

double tau_norm(const Op& X) { return X.norm() / std::sqrt(static_cast<double>(X.rows())); }

double one_norm(const Op& X) {
  Eigen::JacobiSVD<Op> svd(X);
  return svd.singularValues().sum() / static_cast<double>(X.rows());
}

double op_norm(const Op& X) {
  if (X.size() == 0) return 0.0;
  Eigen::JacobiSVD<Op> svd(X);
  return svd.singularValues()(0);
}

bool is_hermitian(const Op& X, double tol) {
  if (X.rows() != X.cols()) return false;
  return (X - X.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Op hermitian_part(const Op& X) { return 0.5 * (X + X.adjoint()); }

Op matrix_function(const Op& H, const std::function<double(double)>& f, double tol) {
  if (!is_hermitian(H, tol)) throw std::invalid_argument("matrix_function needs a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(H));
  Eigen::VectorXd vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = f(vals(i));
  Op out = es.eigenvectors() * vals.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(out);
}

Op psd_sqrt(const Op& H) {
  return matrix_function(H, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; }, 1e-7);
}

double min_eigenvalue(const Op& H) {
  Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Op& H) {
  Eigen::SelfAdjointEigenSolver<Op> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Op Submeasurement::total() const {
  if (elements.empty()) throw std::invalid_argument("empty submeasurement");
  Op s = Op::Zero(elements[0].rows(), elements[0].cols());
  for (const auto& e : elements) s += e;
  return s;
}

bool is_zero(const Op& X, double tol) { return X.size() == 0 || X.cwiseAbs().maxCoeff() <= tol; }

Validation validate_submeasurement(const Submeasurement& M, bool projective, const Tolerances& tol) {
  if (M.elements.empty()) return {false, "no outcomes"};
  const auto r = M.elements[0].rows();
  for (std::size_t a = 0; a < M.size(); ++a) {
    const Op& E = M[a];
    if (E.rows() != r || E.cols() != r) return {false, "dimension mismatch at outcome " + std::to_string(a)};
    if (!E.allFinite()) return {false, "non-finite entry"};
    if (!is_hermitian(E, tol.hermitian)) return {false, "non-Hermitian element " + std::to_string(a)};
    if (!is_zero(E) && min_eigenvalue(E) < -tol.psd) return {false, "negative element " + std::to_string(a)};
  }
  Op rest = Op::Identity(r, r) - M.total();
  if (min_eigenvalue(rest) < -tol.complete) return {false, "elements sum above identity"};
  if (projective) {
    for (std::size_t a = 0; a < M.size(); ++a) {
      if (is_zero(M[a])) continue;
      if (op_norm(M[a] * M[a] - M[a]) > tol.idempotent) return {false, "element " + std::to_string(a) + " not idempotent"};
      for (std::size_t b = a + 1; b < M.size(); ++b)
        if (!is_zero(M[b]) && op_norm(M[a] * M[b]) > tol.idempotent)
          return {false, "elements " + std::to_string(a) + "," + std::to_string(b) + " not orthogonal"};
    }
  }
  return {};
}

Validation validate_measurement(const Submeasurement& M, bool projective, const Tolerances& tol) {
  auto v = validate_submeasurement(M, projective, tol);
  if (!v) return v;
  const auto r = M.dim();
  if (op_norm(Op::Identity(r, r) - M.total()) > tol.complete) return {false, "measurement not complete"};
  return {};
}

MeasurementFamily MeasurementFamily::uniform(std::vector<Submeasurement> members) {
  MeasurementFamily F;
  F.weights.assign(members.size(), 1.0 / static_cast<double>(members.size()));
  F.members = std::move(members);
  return F;
}

Validation validate_family(const MeasurementFamily& F, bool projective, bool complete, const Tolerances& tol) {
  if (F.members.size() != F.weights.size()) return {false, "weights and members differ in length"};
  double s = 0;
  for (double w : F.weights) {
    if (w < 0) return {false, "negative weight"};
    s += w;
  }
  if (std::abs(s - 1.0) > 1e-12) return {false, "weights do not sum to 1"};
  std::size_t r = F.members.empty() ? 0 : F.members[0].dim();
  for (const auto& M : F.members) {
    if (M.dim() != r) return {false, "dimension mismatch across questions"};
    auto v = complete ? validate_measurement(M, projective, tol) : validate_submeasurement(M, projective, tol);
    if (!v) return v;
  }
  return {};
}

Submeasurement data_process(const Submeasurement& M, const std::vector<std::size_t>& f, std::size_t outputs) {
  if (f.size() != M.size()) throw std::invalid_argument("label map must be total on outcomes");
  const auto r = static_cast<Eigen::Index>(M.dim());
  Submeasurement out;
  out.elements.assign(outputs, Op::Zero(r, r));
  for (std::size_t a = 0; a < M.size(); ++a) {
    if (f[a] >= outputs) throw std::out_of_range("label map output");
    out.elements[f[a]] += M[a];
  }
  return out;
}

MeasurementFamily data_process(const MeasurementFamily& F, const std::vector<std::size_t>& f, std::size_t outputs) {
  MeasurementFamily out;
  out.weights = F.weights;
  for (const auto& M : F.members) out.members.push_back(data_process(M, f, outputs));
  return out;
}

static void check_shapes(const Submeasurement& M, const Submeasurement& N) {
  if (M.size() != N.size()) throw std::invalid_argument("outcome label mismatch");
  if (M.dim() != N.dim()) throw std::invalid_argument("dimension mismatch");
}

double tau_product(const Op& X, const Op& Y) {
  return (X.transpose().cwiseProduct(Y)).sum().real() / static_cast<double>(X.rows());
}

double inconsistency(const Submeasurement& M, const Submeasurement& N) {
  check_shapes(M, N);
  double s = tau_product(M.total(), N.total());
  for (std::size_t a = 0; a < M.size(); ++a) s -= tau_product(M[a], N[a]);
  return s;
}

static void check_families(const MeasurementFamily& M, const MeasurementFamily& N) {
  if (M.size() != N.size()) throw std::invalid_argument("question set mismatch");
  for (std::size_t x = 0; x < M.size(); ++x)
    if (std::abs(M.weights[x] - N.weights[x]) > 1e-12) throw std::invalid_argument("distribution mismatch");
}

double consistency(const MeasurementFamily& M, const MeasurementFamily& N) {
  check_families(M, N);
  double s = 0;
  for (std::size_t x = 0; x < M.size(); ++x) s += M.weights[x] * inconsistency(M.members[x], N.members[x]);
  return s;
}

double squared_distance(const Submeasurement& M, const Submeasurement& N) {
  check_shapes(M, N);
  double s = 0;
  for (std::size_t a = 0; a < M.size(); ++a) s += (M[a] - N[a]).squaredNorm();
  return s / static_cast<double>(M.dim());
}

double closeness(const MeasurementFamily& M, const MeasurementFamily& N) {
  check_families(M, N);
  double s = 0;
  for (std::size_t x = 0; x < M.size(); ++x) s += M.weights[x] * squared_distance(M.members[x], N.members[x]);
  return std::sqrt(std::max(0.0, s));
}

double projectivity_defect(const Submeasurement& A) {
  double z = 0;
  for (const auto& E : A.elements) z += trace_state(E - E * E).real();
  return z;
}

OrthogonalizeResult orthogonalize(const Submeasurement& A) {
  const auto r = static_cast<Eigen::Index>(A.dim());
  std::vector<std::size_t> order(A.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> mass(A.size());
  for (std::size_t a = 0; a < A.size(); ++a) mass[a] = trace_state(A[a]).real();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });

  OrthogonalizeResult res;
  res.projective.elements.assign(A.size(), Op::Zero(r, r));
  Op Q = Op::Identity(r, r);
  for (std::size_t a : order) {
    if (mass[a] <= 0 || Q.trace().real() < 0.5) continue;
    Op M = hermitian_part(Q * A[a] * Q);
    Eigen::SelfAdjointEigenSolver<Op> es(M);
    Op P = Op::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
      if (es.eigenvalues()(i) >= 0.5) P += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    res.projective[a] = P;
    Q -= P;
  }
  res.zeta = projectivity_defect(A);
  res.distance = std::sqrt(squared_distance(A, res.projective));
  res.bound = std::sqrt(18.0 * std::max(0.0, res.zeta));
  res.bound_ok = res.distance <= res.bound + 1e-12;
  return res;
}

Op random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Op G(rows, cols);
  for (Eigen::Index j = 0; j < G.cols(); ++j)
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      double re = nd(rng);
      double im = nd(rng);
      G(i, j) = cplx(re, im);
    }
  return G;
}

Op random_unitary(std::size_t r, Rng& rng) {
  Op G = random_gaussian(r, r, rng);
  Eigen::HouseholderQR<Op> qr(G);
  Op Q = qr.householderQ();
  Op R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    cplx d = R(j, j);
    if (std::abs(d) > 0) Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

Op random_hermitian(std::size_t r, Rng& rng) {
  Op G = random_gaussian(r, r, rng);
  return 0.5 * (G + G.adjoint());
}

Op random_psd(std::size_t r, Rng& rng, std::size_t rank) {
  if (rank == 0) rank = r;
  Op X = random_gaussian(r, rank, rng);
  return X * X.adjoint();
}

Op random_projector(std::size_t r, std::size_t rank, Rng& rng) {
  Op U = random_unitary(r, rng);
  Op V = U.leftCols(static_cast<Eigen::Index>(rank));
  return V * V.adjoint();
}

Submeasurement random_projective_measurement(std::size_t r, std::size_t outcomes, std::uint64_t seed, bool allow_empty) {
  if (outcomes == 0) throw std::invalid_argument("need at least one outcome");
  if (!allow_empty && outcomes > r) throw std::invalid_argument("more outcomes than dimensions");
  Rng rng(seed);
  Op U = random_unitary(r, rng);
  std::vector<std::size_t> owner(r);
  std::uniform_int_distribution<std::size_t> pick(0, outcomes - 1);
  if (allow_empty) {
    for (auto& o : owner) o = pick(rng);
  } else {
    for (std::size_t i = 0; i < r; ++i) owner[i] = i < outcomes ? i : pick(rng);
    std::shuffle(owner.begin(), owner.end(), rng);
  }
  Submeasurement M;
  const auto rr = static_cast<Eigen::Index>(r);
  M.elements.assign(outcomes, Op::Zero(rr, rr));
  for (std::size_t i = 0; i < r; ++i) {
    auto c = U.col(static_cast<Eigen::Index>(i));
    M.elements[owner[i]] += c * c.adjoint();
  }
  return M;
}

Submeasurement random_submeasurement(std::size_t r, std::size_t outcomes, std::uint64_t seed, double slack) {
  if (slack < 0 || slack > 1) throw std::invalid_argument("slack must lie in [0,1]");
  Rng rng(seed);
  std::vector<Op> B;
  Op S = Op::Zero(r, r);
  for (std::size_t a = 0; a < outcomes; ++a) {
    B.push_back(random_psd(r, rng));
    S += B.back();
  }
  Op Sm = matrix_function(S, [](double x) { return 1.0 / std::sqrt(x); }, 1e-7);
  Submeasurement M;
  for (auto& b : B) M.elements.push_back(hermitian_part((1.0 - slack) * Sm * b * Sm));
  return M;
}

Submeasurement random_near_projective(std::size_t r, std::size_t outcomes, std::uint64_t seed, double max_defect,
                                      double slack) {
  Submeasurement P = random_projective_measurement(r, outcomes, seed, outcomes > r);
  Submeasurement Q = random_projective_measurement(r, outcomes, seed ^ 0x5bd1e995ULL, true);
  Rng rng(seed);
  double s = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
  Submeasurement A;
  for (int tries = 0; tries < 60; ++tries) {
    A.elements.clear();
    for (std::size_t a = 0; a < outcomes; ++a) A.elements.push_back((1 - slack) * ((1 - s) * P[a] + s * Q[a]));
    if (projectivity_defect(A) <= max_defect) break;
    s *= 0.5;
  }
  return A;
}

}  // namespace tcq
