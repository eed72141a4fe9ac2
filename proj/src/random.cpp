#include "projmc/random.hpp"

#include "projmc/errors.hpp"

namespace projmc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

RandomSource::RandomSource(std::uint64_t seed) : engine_(splitmix64(seed)) {}

RandomSource RandomSource::stream(std::uint64_t seed, std::uint64_t index) {
  return RandomSource(derive_seed(seed, index));
}

bool RandomSource::next_bit() {
  if (remaining_ == 0) {
    buffer_ = engine_();
    remaining_ = 64;
  }
  bool bit = buffer_ & 1U;
  buffer_ >>= 1;
  --remaining_;
  return bit;
}

std::uint64_t RandomSource::next_u64() { return engine_(); }

std::uint64_t RandomSource::below(std::uint64_t bound) {
  if (bound == 0) throw ContractViolation("RandomSource::below requires a positive bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

}  // namespace projmc
