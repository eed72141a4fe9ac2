#pragma once

#include <cstdint>
#include <random>

namespace projmc {

/// Deterministic bit source.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so equal seeds give equal bits on every platform. Bits are
/// handed out least-significant first from successive 64-bit outputs.
/// Independent sub-streams are derived from (seed, stream index) with a
/// splitmix64 mix; streams never share generator state.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Sub-stream `index` of `seed`.
  static RandomSource stream(std::uint64_t seed, std::uint64_t index);

  bool next_bit();
  std::uint64_t next_u64();
  /// Uniform integer in [0, bound); bound > 0. Rejection sampling, so the
  /// result does not depend on the standard library's distributions.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  int remaining_ = 0;
};

/// One round of splitmix64; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for sub-stream `index` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace projmc
