#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "tcq/codes.hpp"
#include "tcq/opalg.hpp"
#include "tcq/tensor.hpp"

namespace tcq {

using Rational = boost::rational<std::int64_t>;

// Points: q outcomes. Lines: one outcome per base codeword (canonical index).
// Pairs (u,v) stored at u*N + v with outcome a*q + b.
struct SynchronousStrategy {
  LinearCode code;
  std::size_t m = 0;
  std::size_t r = 1;
  std::vector<Submeasurement> points;
  std::vector<Submeasurement> lines;
  std::vector<Submeasurement> pairs;

  SynchronousStrategy(LinearCode c, std::size_t m_, std::size_t r_) : code(std::move(c)), m(m_), r(r_) {}

  std::size_t n() const { return code.n(); }
  std::size_t q() const { return code.q(); }
  std::size_t num_points() const { return static_cast<std::size_t>(int_pow(n(), m)); }
  std::size_t num_lines() const { return m * static_cast<std::size_t>(int_pow(n(), m - 1)); }
  std::size_t pair_index(std::size_t u, std::size_t v) const { return u * num_points() + v; }
};

// Shape, completeness, and (optionally) projectivity of every family.
Validation validate_strategy(const SynchronousStrategy& s, bool projective = true,
                             const Tolerances& tol = default_tolerances());

// Two provers on C^{rA} ⊗ C^{rB}; psi index i*rB + j.
struct BipartiteStrategy {
  SynchronousStrategy first;
  SynchronousStrategy second;
  Vec psi;
};

Validation validate_bipartite(const BipartiteStrategy& s, const Tolerances& tol = default_tolerances());

enum class QuestionKind { Point, Line, Pair };

struct Question {
  QuestionKind kind = QuestionKind::Point;
  std::size_t index = 0;
  bool operator==(const Question& o) const { return kind == o.kind && index == o.index; }
};

// LinePoint: g(slot) = a. PairPoint: pair answer coordinate `slot` = a. Equal: identical answers.
// The *Point/Point* variants swap which prover holds which question.
enum class Check { LinePoint, PointLine, PairPoint, PointPair, Equal };

enum class TestKind { Lines, Subcube, Sync };

struct QuestionPair {
  Question first;
  Question second;
  Check check = Check::Equal;
  std::size_t slot = 0;
  TestKind test = TestKind::Lines;
  Rational weight;
  std::size_t subcube_j = 0;  // 1-based axis count of the subcube, 0 when not applicable
};

struct GameSpec {
  LinearCode code;
  std::size_t m = 0;
  bool two_prover = false;
  std::vector<QuestionPair> pairs;
  std::vector<Codeword> base_codewords;

  Rational total_weight() const;
  Rational test_weight(TestKind t) const;
};

GameSpec build_game(const LinearCode& code, std::size_t m);
GameSpec build_two_prover_game(const LinearCode& code, std::size_t m);

std::size_t outcome_count(const SynchronousStrategy& s, const Question& q);
const Submeasurement& measurement_for(const SynchronousStrategy& s, const Question& q);
bool accepts(const GameSpec& g, const QuestionPair& qp, std::size_t a, std::size_t b);

// Probability that the referee accepts on one question pair.
double accept_probability(const SynchronousStrategy& s, const GameSpec& g, const QuestionPair& qp);
double accept_probability(const BipartiteStrategy& s, const GameSpec& g, const QuestionPair& qp);

double evaluate_synchronous(const SynchronousStrategy& s, const GameSpec& g);

struct GoodnessReport {
  double eps = 0;
  double delta = 0;         // max of the two pair/point inconsistencies
  double delta_first = 0;   // P^{u,v} first coordinate vs A^u
  double delta_second = 0;  // P^{u,v} second coordinate vs A^v
  double xi = 0;
  double lines_pass = 0;    // acceptance of each sub-test, conditioned on it being chosen
  double subcube_pass = 0;
  double sync_pass = 0;
  double pass_probability = 0;
};

GoodnessReport goodness_synchronous(const SynchronousStrategy& s, const GameSpec& g);

struct BipartiteResult {
  double pass = 0;
  GoodnessReport goodness;
};

BipartiteResult evaluate_bipartite(const BipartiteStrategy& s, const GameSpec& g2);

// ⟨ψ| X ⊗ Y |ψ⟩
double expectation(const Vec& psi, std::size_t rA, std::size_t rB, const Op& X, const Op& Y);

// Maximally entangled state with the second prover using transposes.
BipartiteStrategy synchronous_embedding(const SynchronousStrategy& s);

// Enlarges the smaller side so rA = rB; padding dimensions go to the first outcome.
BipartiteStrategy pad_to_equal_dims(const BipartiteStrategy& s);

// Symmetric strategy: both provers hold X' = X⊗|0⟩⟨0| + X̃ᵀ⊗|1⟩⟨1| (second prover transposed),
// state (ψ⊗|0⟩|1⟩ + S ψ̄ ⊗|1⟩|0⟩)/√2.
BipartiteStrategy symmetrize(const BipartiteStrategy& s);
// rA = rB, second prover's operators are transposes of the first's, coefficient matrix Hermitian.
Validation validate_symmetric_form(const BipartiteStrategy& s, double tol = 1e-9);

struct MonteCarloResult {
  std::uint64_t rounds = 0;
  std::uint64_t passes = 0;
  double rate = 0;
  double std_error = 0;
};

// Joint answer distribution for one question pair, row-major (first answer major).
std::vector<double> answer_distribution(const SynchronousStrategy& s, const QuestionPair& qp);
std::vector<double> answer_distribution(const BipartiteStrategy& s, const QuestionPair& qp);

MonteCarloResult monte_carlo_play(const SynchronousStrategy& s, const GameSpec& g, std::uint64_t rounds,
                                  std::uint64_t seed);
MonteCarloResult monte_carlo_play(const BipartiteStrategy& s, const GameSpec& g, std::uint64_t rounds,
                                  std::uint64_t seed);

}  // namespace tcq
