#pragma once

// Reproducible random source shared by every stochastic experiment.
//
// Generator: SplitMix64. state += 0x9e3779b97f4a7c15, output is mix64(state)
// where mix64 is the xor-shift-multiply finalizer with constants
// 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb (shifts 30, 27, 31).
//
// Per-trial streams: the generator for (seed, trial) starts from state
// mix64(seed ^ mix64(trial ^ 0xd1b54a32d192ed03)).
//
// Uniform reals take the top 53 bits: (x >> 11) * 2^-53, so u is in [0, 1).

#include <cstdint>

namespace rhlab {

struct Seed {
  std::uint64_t value = 0;
};

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr SplitMix64 for_trial(Seed seed, std::uint64_t trial) {
    return SplitMix64(mix64(seed.value ^ mix64(trial ^ 0xd1b54a32d192ed03ULL)));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  constexpr double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi], unbiased (rejects the low 2^64 mod range values).
  constexpr std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t range = hi - lo + 1;
    if (range == 0) return (*this)();
    const std::uint64_t reject_below = (0 - range) % range;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= reject_below) return lo + x % range;
    }
  }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace rhlab
