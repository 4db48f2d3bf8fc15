#pragma once

#include <cmath>
#include <cstdint>

namespace fqlab {

// Counter-based splittable random stream. Every output is a pure function of
// (seed, stream, counter): stream i draws from the SplitMix64 sequence whose
// initial state is mix(seed ^ mix(i)). Trials that use stream = trial index
// therefore see the same numbers whether they run serially or on a worker
// pool, which is what the reproducibility contract of the experiment runner
// relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // k low-order bits from the bit reservoir, LSB first, 0 <= k <= 64.
  // Matrix entries and packed matrix rows are both drawn through here, so the
  // two code paths consume identical bit sequences.
  std::uint64_t bits(int k) {
    if (k == 0) return 0;
    if (bitcnt_ < k) {
      // never split a draw across reservoir refills: discard the remainder
      bitbuf_ = next_u64();
      bitcnt_ = 64;
    }
    std::uint64_t out = (k == 64) ? bitbuf_ : (bitbuf_ & ((1ULL << k) - 1));
    bitbuf_ >>= k;
    bitcnt_ -= k;
    return out;
  }

  // uniform integer in [0, bound) by rejection on the smallest covering
  // bit-width; for bound a power of two no draw is ever rejected
  std::uint32_t below(std::uint32_t bound) {
    int w = 1;
    while ((1ULL << w) < bound) ++w;
    for (;;) {
      std::uint64_t v = bits(w);
      if (v < bound) return static_cast<std::uint32_t>(v);
    }
  }

  // uniform in (0, 1], 53-bit resolution
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

 private:
  std::uint64_t state_;
  std::uint64_t bitbuf_ = 0;
  int bitcnt_ = 0;
};

}  // namespace fqlab
