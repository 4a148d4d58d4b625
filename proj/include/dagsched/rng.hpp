#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace dagsched {

// splitmix64 finalizer; used to derive independent seeded streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic RNG wrapper. All randomness in the project flows through
// these helpers so outputs are byte-identical across runs for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1)
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  // (0, 1]
  double uniform_open() { return 1.0 - uniform(); }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    return int(engine_() % std::uint64_t(n));
  }

  Rng fork(std::uint64_t salt) { return Rng(mix_seed(engine_(), salt)); }

 private:
  std::mt19937_64 engine_;
};

// Index drawn from an unnormalized nonnegative weight vector with a single
// uniform variate; weights summing to zero are rejected.
int sample_discrete(const std::vector<double>& weights, double u);

}  // namespace dagsched
