#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tcq/game.hpp"

namespace tcq {

// Deterministic provers. Lines hold codewords of the base code, pairs hold (f(u), f(v))-style answers
// indexed by u*N + v.
struct ClassicalStrategy {
  LinearCode code;
  std::size_t m = 0;
  std::vector<Symbol> points;
  std::vector<Codeword> lines;
  std::vector<std::pair<Symbol, Symbol>> pairs;
};

ClassicalStrategy honest_classical(const LinearCode& code, const TensorCodeword& c);
SynchronousStrategy honest_strategy(const LinearCode& code, const TensorCodeword& c);
SynchronousStrategy embed_classical(const ClassicalStrategy& s);

// Every operator replaced by X ⊗ I_D.
SynchronousStrategy tensor_with_identity(const SynchronousStrategy& s, std::size_t D);

// Codeword of C^{⊗m} with seeded uniform coefficients.
TensorCodeword planted_codeword(const LinearCode& code, std::size_t m, std::uint64_t seed);
// Independent random complete projective measurements for every question (outcomes may be empty).
SynchronousStrategy random_projective_strategy(const LinearCode& code, std::size_t m, std::size_t r, std::uint64_t seed);

// Expected score of a deterministic strategy, computed directly from the answer functions.
double classical_value(const ClassicalStrategy& s, const GameSpec& g);
// Pr over the lines-test distribution that the line answer disagrees with the point answer.
double classical_line_miscount(const ClassicalStrategy& s);

constexpr std::size_t kMixtureDimBudget = 4096;

// Block-diagonal mixture; strategy i gets normalized-trace mass weights[i].
SynchronousStrategy mixture(const std::vector<SynchronousStrategy>& parts, const std::vector<Rational>& weights);

enum class CorruptionKind { PointFlips, SliceScramble, MixtureOfCodewords };

struct CorruptionModel {
  CorruptionKind kind = CorruptionKind::PointFlips;
  double rate = 0;
  std::uint64_t seed = 0;
  bool rederive_pairs = false;  // keep pair answers consistent with the corrupted points
};

// Point flips relabel ceil(rate * n^m) seeded points by a nonzero seeded shift. Slice scramble shifts
// ceil(rate * n) last-coordinate slices by a random nonzero codeword of C^{⊗(m-1)}. Mixture of codewords
// plays the strategy shifted by a random global codeword with probability rate (rounded to 1/1000).
// Lines stay honest; pairs too unless rederive_pairs.
SynchronousStrategy corrupt(const SynchronousStrategy& s, const CorruptionModel& model);
ClassicalStrategy corrupt(const ClassicalStrategy& s, const CorruptionModel& model);

// Shifts every answer by the global codeword w (points by w(u), lines by w restricted, pairs by (w(u), w(v))).
SynchronousStrategy shift_by_codeword(const SynchronousStrategy& s, const Table& w);

// r = 4 exhibit on [3]^2 over [3,2,2]: point observables are a 3x3 Pauli grid whose rows and columns
// commute. ±1 eigenvalues map into GF(3) as +1 -> 0, -1 -> 1.
SynchronousStrategy anticommuting_pair_strategy();
// The ±1 observable behind point u of the exhibit.
Op anticommuting_observable(std::size_t u0, std::size_t u1);

}  // namespace tcq
