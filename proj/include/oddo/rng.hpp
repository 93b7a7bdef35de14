#pragma once

#include <cstdint>

namespace oddo {

// SplitMix64 finalizer: the project's one randomness primitive.  Standard
// library distributions are implementation-defined, so every sampled value
// here is derived from this mix to keep generated instances byte-identical
// across platforms and reruns.
std::uint64_t mix64(std::uint64_t x);

// Order-sensitive key combination for addressing independent streams, e.g.
// stream_key(seed, kNoise, household, day, stage).
std::uint64_t stream_key(std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0, std::uint64_t d = 0,
                         std::uint64_t e = 0);

// Counter-based generator over one stream key.
class HashRng {
 public:
  explicit HashRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  int uniform_int(int lo, int hi);         // inclusive
  double normal();                         // standard Gaussian (Box-Muller)

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace oddo
