#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tcq/game.hpp"

namespace tcq {

// Auto solves r = 1 in closed form and otherwise picks Barrier when r <= 32, else ExponentiatedGradient. The gradient solver reaches small gaps only
// when the A_g commute; its gap is always reported.
enum class DualSolver { Auto, Barrier, ExponentiatedGradient };

struct DualityOptions {
  DualSolver solver = DualSolver::Auto;
  double tol = 1e-8;
  std::size_t max_newton = 2000;      // total Newton steps across the barrier path
  std::size_t max_gradient = 20000;   // exponentiated-gradient iterations
  std::uint64_t seed = 0;             // random X for the slackness residual
};

// min tr(W) s.t. W >= A_g / r  versus  max sum_g tr(T_g A_g) / r over complete {T_g}.
struct DualitySolution {
  Op W;
  Submeasurement T;
  double primal = 0;
  double dual = 0;
  double gap = 0;
  double min_slack = 0;              // min_g lambda_min(W - A_g / r)
  double completeness_error = 0;     // ||sum T - I||_op
  double slackness_residual = 0;     // max over random X of |tr(XW) - sum_g tr(T_g X A_g)/r|
  std::size_t iterations = 0;
  bool converged = false;
};

DualitySolution solve_duality(const std::vector<Op>& A, const DualityOptions& opt = {});

// Codeword tables of C^{⊗m}, in canonical order.
const std::vector<Table>& tensor_codewords(const LinearCode& code, std::size_t m);

// E_x sum_{a != b} tau(M_[g -> g(x) | a] A^x_b) for M over codewords of C^{⊗m}.
double points_inconsistency(const SynchronousStrategy& s, const Submeasurement& M);

struct SelfImprovement {
  Submeasurement H;        // projective
  Submeasurement H_raw;    // E_x A^x_{g(x)} T_g A^x_{g(x)}
  DualitySolution duality;
  double nu = 0;                   // inconsistency of G with the points
  double completeness_raw = 0;     // tau(H_raw)
  double completeness = 0;         // tau(H)
  double consistency = 0;          // inconsistency of H with the points
  double psi_deficit = 0;          // psi(1 - H)
  double projectivity_defect = 0;  // sum_g tau(H_raw,g - H_raw,g^2)
  double rounding_distance = 0;
  double rounding_bound = 0;       // sqrt(18 * defect)
  double rounding_loss = 0;        // max(0, tau(H_raw) - tau(H))
  double zeta = 0;                 // max(consistency, psi_deficit, rounding_loss + gap)
  double psi_check_min = 0;        // min over spot checks of psi(X) - E_x tau(X A^x_{h(x)})
  bool completeness_ok = false;    // tau(H) >= 1 - nu - zeta
};

SelfImprovement self_improve(const SynchronousStrategy& s, const Submeasurement& G, const DualityOptions& opt = {});

// Slice of a strategy over [n]^{m+1} at last coordinate x.
SynchronousStrategy restrict_strategy(const SynchronousStrategy& s, std::size_t x);

struct PastingConfig {
  int method = 2;
  std::size_t k = 0;  // Method 2 repetitions; 0 picks min(12 m t, n)
  std::size_t tuple_budget = 10000;
  std::size_t tuple_samples = 2000;
  bool allow_sampling = true;
  std::uint64_t seed = 0;
  double prune = 1e-14;
};

struct PastingResult {
  Submeasurement H;             // completed at the zero codeword
  Submeasurement H_raw;         // before completion
  double completeness_raw = 0;
  double consistency = 0;       // inconsistency of H with the points
  std::size_t k = 0;
  std::size_t tuples = 0;
  bool sampled = false;
  std::size_t pruned = 0;
  double prune_error = 0;       // pruned * prune^2
};

// slices[x] are submeasurements over C^{⊗m}; s is over [n]^{m+1}.
PastingResult paste_method1(const SynchronousStrategy& s, const std::vector<Submeasurement>& slices,
                            const PastingConfig& cfg = {});
PastingResult paste_method2(const SynchronousStrategy& s, const std::vector<Submeasurement>& slices,
                            const PastingConfig& cfg = {});
std::size_t method2_default_k(std::size_t m, std::size_t t, std::size_t n);

// Error parameters evaluated at measured inputs; m is the slice dimension.
struct NuSeries {
  double gamma_m = 0;
  double nu1 = 0, nu2 = 0, nu3 = 0, nu4 = 0, nu5 = 0, nu6 = 0, nu7 = 0;
  double nu2p = 0, nu3pp = 0, nu3p = 0, nu4p = 0, nu5p = 0, nu6p = 0;
  double mu1 = 0;             // kappa + nu4 + nu7
  double mu2 = 0;             // kappa (1 + 1/(3m)) + nu4' + nu5' + nu6' + exp(-k/(72 m^2))
  double completeness2 = 0;   // 1 - kappa (1 + 1/(3m)) - nu5' - nu6' - exp(-k/(72 m^2))
};

NuSeries nu_series(std::size_t m, std::size_t t, std::size_t n, std::size_t d, std::size_t k, double eps, double delta,
                   double zeta, double kappa);

struct CommutatorReport {
  double points = 0;        // sqrt(E_{u,v} sum_{a,b} ||[A^u_a, A^v_b]||^2)
  double points_bound = 0;  // sqrt(32 m delta), delta = 1 - subcube pass
  double subcube_fail = 0;
  bool points_ok = false;
  std::optional<double> slice_points;  // same for G^{u,x}_a = G^x_[g -> g(u) | a]
  std::optional<double> slices;        // sqrt(E_{x,y} sum_{g,h} ||[G^x_g, G^y_h]||^2)
};

CommutatorReport commutator_report(const SynchronousStrategy& s, const GameSpec& g,
                                   const std::vector<Submeasurement>* slices = nullptr);

struct VarianceReport {
  double zeta_local = 0;  // along axis-parallel lines
  double zeta_var = 0;    // uniform x, y
  double eps = 0;
  double gamma = 0;       // 1 - d/n
  double local_bound = 0;
  double var_bound = 0;
  bool local_ok = false;
  bool var_ok = false;
  bool global_le_m_local = false;  // zeta_var^2 <= m zeta_local^2
};

VarianceReport variance_report(const SynchronousStrategy& s, const Submeasurement& T, double eps);

struct LevelRecord {
  std::size_t m = 0;  // dimension of the slice strategy
  std::size_t x = 0;
  double nu = 0;
  double completeness = 0;
  double consistency = 0;
  double psi_deficit = 0;
  double zeta = 0;
  double gap = 0;
  bool completeness_ok = false;
};

struct PastingRecord {
  std::size_t m = 0;  // target dimension
  int method = 0;
  std::size_t k = 0;
  std::size_t tuples = 0;
  bool sampled = false;
  double kappa = 0;
  double zeta = 0;
  double completeness_raw = 0;
  double consistency = 0;
  double commutator_slice_points = 0;
  double commutator_slices = 0;
  NuSeries nu;
  bool completeness_bound_ok = true;  // Method 2 completeness bound at measured inputs
  bool consistency_bound_ok = true;   // measured consistency <= mu
};

struct ExtractionConfig {
  PastingConfig pasting;
  DualityOptions duality;
};

struct ExtractionReport {
  double eps = 0, delta = 0, pass = 0;
  double eta = 0;
  std::vector<LevelRecord> levels;
  std::vector<PastingRecord> pastings;  // innermost first
  bool self_improvement_ok = true;
};

struct Extraction {
  Submeasurement G;  // complete, over C^{⊗m}
  ExtractionReport report;
};

Extraction extract_global(const SynchronousStrategy& s, const ExtractionConfig& cfg = {});

// 1 - E_u sum_c tau(G_c A^u_{c(u)})
double extraction_eta(const SynchronousStrategy& s, const Submeasurement& G);

}  // namespace tcq
