#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace argviz {

// Deterministic random stream.
//
// Every draw is derived from the raw 64-bit output of std::mt19937_64, whose
// sequence is fixed by the C++ standard. The standard distribution classes are
// deliberately avoided because their algorithms are implementation-defined:
//   uniform01()        -> (x >> 11) * 2^-53, in [0, 1)
//   uniform_index(n)   -> rejection sampling on x to remove modulo bias
//   normal()           -> Box-Muller on two uniform01() draws, both outputs used
//   bernoulli(p)       -> uniform01() < p
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal();

  // Independent child stream; consumes one draw from this stream.
  Rng split() { return Rng(mix(engine_())); }

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Per-stage seed: FNV-1a hash of the stage name mixed into the global seed.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stage);

}  // namespace argviz
