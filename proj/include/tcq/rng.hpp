#pragma once

#include <cstdint>

namespace tcq {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream keyed by (seed, counter); used for per-round referee randomness.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t counter) : state_(splitmix64(seed ^ splitmix64(counter))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state_);
  }
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Derives an independent seed for a labelled sub-task.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) { return splitmix64(seed * 0x2545f4914f6cdd1dULL + label); }

}  // namespace tcq
