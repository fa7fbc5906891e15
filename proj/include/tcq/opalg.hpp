#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tcq {

using cplx = std::complex<double>;
using Op = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct Tolerances {
  double psd = 1e-9;
  double idempotent = 1e-8;
  double complete = 1e-9;
  double hermitian = 1e-9;
};

const Tolerances& default_tolerances();

// τ(X) = tr(X)/r
cplx trace_state(const Op& X);
double tau_norm(const Op& X);
double one_norm(const Op& X);  // τ(|X|)
// Re τ(XY) without forming the product
double tau_product(const Op& X, const Op& Y);
double op_norm(const Op& X);
bool is_hermitian(const Op& X, double tol = 1e-9);
Op hermitian_part(const Op& X);
// Eigen-decompose a Hermitian operator, apply f to the eigenvalues, recompose.
Op matrix_function(const Op& H, const std::function<double(double)>& f, double tol = 1e-9);
Op psd_sqrt(const Op& H);
double min_eigenvalue(const Op& H);
double max_eigenvalue(const Op& H);

// Outcome-indexed positive operators; outcome labels are 0..size()-1.
struct Submeasurement {
  std::vector<Op> elements;

  std::size_t size() const { return elements.size(); }
  std::size_t dim() const { return elements.empty() ? 0 : static_cast<std::size_t>(elements[0].rows()); }
  Op total() const;
  const Op& operator[](std::size_t a) const { return elements[a]; }
  Op& operator[](std::size_t a) { return elements[a]; }
};

struct Validation {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

Validation validate_submeasurement(const Submeasurement& M, bool projective,
                                   const Tolerances& tol = default_tolerances());
Validation validate_measurement(const Submeasurement& M, bool projective,
                                const Tolerances& tol = default_tolerances());
bool is_zero(const Op& X, double tol = 0.0);

// Questions are 0..size()-1 with a distribution over them.
struct MeasurementFamily {
  std::vector<Submeasurement> members;
  std::vector<double> weights;

  std::size_t size() const { return members.size(); }
  static MeasurementFamily uniform(std::vector<Submeasurement> members);
};

Validation validate_family(const MeasurementFamily& F, bool projective, bool complete,
                           const Tolerances& tol = default_tolerances());

// M_[f|b] = Σ_{f(a)=b} M_a, outcome count `outputs`
Submeasurement data_process(const Submeasurement& M, const std::vector<std::size_t>& f, std::size_t outputs);
MeasurementFamily data_process(const MeasurementFamily& F, const std::vector<std::size_t>& f, std::size_t outputs);

// Σ_{a≠b} τ(M_a N_b)
double inconsistency(const Submeasurement& M, const Submeasurement& N);
// E_x Σ_{a≠b} τ(M^x_a N^x_b)
double consistency(const MeasurementFamily& M, const MeasurementFamily& N);
// Σ_a ‖M_a − N_a‖_τ²
double squared_distance(const Submeasurement& M, const Submeasurement& N);
// sqrt(E_x Σ_a ‖M^x_a − N^x_a‖_τ²)
double closeness(const MeasurementFamily& M, const MeasurementFamily& N);

struct OrthogonalizeResult {
  Submeasurement projective;
  double zeta = 0;      // Σ τ(A_a(1 − A_a))
  double distance = 0;  // sqrt(Σ ‖A_a − P_a‖_τ²)
  double bound = 0;     // sqrt(18 ζ)
  bool bound_ok = true;
};

double projectivity_defect(const Submeasurement& A);
// Greedy spectral rounding to a projective submeasurement on the same labels.
OrthogonalizeResult orthogonalize(const Submeasurement& A);

using Rng = std::mt19937_64;

Op random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);
Op random_unitary(std::size_t r, Rng& rng);
Op random_hermitian(std::size_t r, Rng& rng);
Op random_psd(std::size_t r, Rng& rng, std::size_t rank = 0);
Op random_projector(std::size_t r, std::size_t rank, Rng& rng);

// Complete projective measurement. With allow_empty, each column of a random unitary goes to a
// uniformly random outcome (outcomes may exceed r); otherwise every outcome gets at least one.
Submeasurement random_projective_measurement(std::size_t r, std::size_t outcomes, std::uint64_t seed,
                                             bool allow_empty = false);
// (1 − s)·P + s·Q for random complete projective P, Q with s halved until the projectivity defect is at most
// max_defect; then scaled by (1 − slack) so the result may be incomplete.
Submeasurement random_near_projective(std::size_t r, std::size_t outcomes, std::uint64_t seed, double max_defect,
                                      double slack = 0.0);
// Positive elements summing to (1 − slack)·I.
Submeasurement random_submeasurement(std::size_t r, std::size_t outcomes, std::uint64_t seed, double slack);

}  // namespace tcq
