#include <doctest.h>

#include <cmath>
#include <random>

#include "projmc/errors.hpp"
#include "projmc/hashing.hpp"
#include "projmc/random.hpp"
#include "support.hpp"

using namespace projmc;
using testing::vars;

TEST_CASE("splitmix64 reference values") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(42) == 0xbdd732262feb6e95ULL);
}

TEST_CASE("engine is the standard mt19937_64") {
  std::mt19937_64 reference;  // default seed 5489
  reference.discard(9999);
  CHECK(reference() == 9981545732273789042ULL);
}

TEST_CASE("bits come least significant first from the seeded engine") {
  std::mt19937_64 reference(0xbdd732262feb6e95ULL);
  const std::uint64_t first = reference();
  const std::uint64_t second = reference();
  RandomSource rng(42);
  for (int i = 0; i < 64; ++i) REQUIRE(rng.next_bit() == (((first >> i) & 1) != 0));
  CHECK(rng.next_bit() == ((second & 1) != 0));
}

TEST_CASE("sample order: offset then coefficients, row by row") {
  std::mt19937_64 reference(splitmix64(7));
  const std::uint64_t w = reference();
  auto bit = [&](int i) { return static_cast<std::uint8_t>((w >> i) & 1); };
  RandomSource rng(7);
  XorHashFunction h = sample_hash(4, 2, rng);
  CHECK(h.offset(0) == bit(0));
  for (int j = 0; j < 4; ++j) CHECK(h.coefficient(0, j) == bit(1 + j));
  CHECK(h.offset(1) == bit(5));
  for (int j = 0; j < 4; ++j) CHECK(h.coefficient(1, j) == bit(6 + j));
}

TEST_CASE("sampling is deterministic per seed and stream") {
  RandomSource a(99), b(99);
  CHECK(sample_hash(4, 2, a) == sample_hash(4, 2, b));
  RandomSource s1 = RandomSource::stream(99, 3), s2 = RandomSource::stream(99, 3), s3 = RandomSource::stream(99, 4);
  XorHashFunction h1 = sample_hash(16, 8, s1);
  CHECK(h1 == sample_hash(16, 8, s2));
  CHECK_FALSE(h1 == sample_hash(16, 8, s3));
}

TEST_CASE("degenerate key length") {
  RandomSource rng(1);
  XorHashFunction h = sample_hash(0, 1, rng);
  CHECK(h.offsets().size() == 1);
  CHECK(h.matrix().empty());
  CHECK(apply(h, BitVector{}) == BitVector{h.offset(0)});
  CHECK_THROWS_AS(sample_hash(3, 0, rng), ContractViolation);
}

TEST_CASE("bit means") {
  RandomSource rng(2024);
  std::vector<int> ones(4, 0);
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    XorHashFunction h = sample_hash(3, 1, rng);
    ones[0] += h.offset(0);
    for (int j = 0; j < 3; ++j) ones[1 + j] += h.coefficient(0, j);
  }
  for (int c : ones) {
    CHECK(c / double(n) >= 0.47);
    CHECK(c / double(n) <= 0.53);
  }
}

TEST_CASE("apply examples") {
  XorHashFunction zero(3, 2, {0, 0, 0}, {0, 0, 0, 0, 0, 0});
  CHECK(apply(zero, BitVector{1, 1}) == BitVector{0, 0, 0});
  XorHashFunction ones(3, 2, {1, 1, 1}, {0, 0, 0, 0, 0, 0});
  CHECK(apply(ones, BitVector{0, 1}) == BitVector{1, 1, 1});
  XorHashFunction single(1, 2, {0}, {1, 1});
  CHECK(apply(single, BitVector{1, 0}) == BitVector{1});
  CHECK_THROWS_AS(apply(single, BitVector{1}), ContractViolation);
}

TEST_CASE("XOR constraint rows") {
  XorHashFunction taut(1, 2, {1}, {0, 0});
  CHECK(to_xor_constraints(taut, vars({5, 7})) == std::vector<XorConstraint>{XorConstraint{{}, false}});
  XorHashFunction contra(1, 2, {0}, {0, 0});
  CHECK(to_xor_constraints(contra, vars({5, 7})) == std::vector<XorConstraint>{XorConstraint{{}, true}});
  XorHashFunction row(1, 2, {0}, {1, 1});
  CHECK(to_xor_constraints(row, vars({5, 7})) == std::vector<XorConstraint>{XorConstraint{vars({5, 7}), true}});
}

TEST_CASE("conjoin examples") {
  Formula f = Formula::over(2);
  XorHashFunction h(1, 2, {0}, {1, 0});
  Formula g = conjoin_hash(f, h);
  int models = 0;
  for (std::uint64_t bits = 0; bits < 4; ++bits)
    if (evaluate(g, testing::from_bits(bits, 2))) {
      ++models;
      CHECK((bits & 1) == 1);
    }
  CHECK(models == 2);

  XorHashFunction taut(2, 2, {1, 1}, {0, 0, 0, 0});
  f.clauses = {testing::clause({1, -2})};
  Formula t = conjoin_hash(f, taut);
  CHECK(t.xors.size() == 2);
  for (std::uint64_t bits = 0; bits < 4; ++bits)
    CHECK(evaluate(t, testing::from_bits(bits, 2)) == evaluate(f, testing::from_bits(bits, 2)));

  f.clauses = {Clause{}};
  for (std::uint64_t bits = 0; bits < 4; ++bits) CHECK_FALSE(evaluate(conjoin_hash(f, h), testing::from_bits(bits, 2)));
}

TEST_CASE("conjoin semantic agreement, exhaustively") {
  std::mt19937_64 gen(5);
  RandomSource rng(5);
  testing::RandomFormulaShape shape;
  shape.max_vars = 10;
  shape.max_xors = 2;
  int checked = 0;
  while (checked < 120) {
    Formula f = testing::random_formula(gen, shape);
    if (f.scope.empty() || f.scope.size() > 8) continue;
    ++checked;
    const std::size_t m = 1 + rng.below(4);
    XorHashFunction h = sample_hash(f.scope.size(), m, rng);
    Formula g = conjoin_hash(f, h);
    // Hash rows mention scope variables only.
    for (std::size_t i = f.xors.size(); i < g.xors.size(); ++i)
      for (Variable v : g.xors[i].variables) CHECK(std::binary_search(f.scope.begin(), f.scope.end(), v));
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
      Assignment a = testing::from_bits(bits, f.num_vars);
      BitVector out = apply(h, scope_key(a, f.scope));
      bool in_cell = std::all_of(out.begin(), out.end(), [](std::uint8_t b) { return b == 1; });
      REQUIRE(evaluate(g, a) == (evaluate(f, a) && in_cell));
    }
  }
}

namespace {

BitVector random_key(std::size_t n, std::mt19937_64& gen) {
  BitVector k(n);
  for (auto& b : k) b = static_cast<std::uint8_t>(gen() & 1);
  return k;
}

}  // namespace

TEST_CASE("uniformity of the distinguished cell") {
  std::mt19937_64 keys(77);
  for (std::size_t n : {1u, 4u, 8u})
    for (std::size_t m : {1u, 2u, 3u}) {
      RandomSource rng(1000 + 10 * n + m);
      const BitVector key = random_key(n, keys);
      const int samples = 20000;
      int hits = 0;
      for (int s = 0; s < samples; ++s) {
        BitVector out = apply(sample_hash(n, m, rng), key);
        hits += std::all_of(out.begin(), out.end(), [](std::uint8_t b) { return b == 1; });
      }
      const double p = std::ldexp(1.0, -static_cast<int>(m));
      const double sigma = std::sqrt(p * (1 - p) / samples);
      CAPTURE(n);
      CAPTURE(m);
      CHECK(std::fabs(hits / double(samples) - p) <= 4 * sigma);
    }
}

TEST_CASE("three-wise independence, m = 1") {
  std::mt19937_64 keys(78);
  const std::size_t n = 6;
  for (int triple = 0; triple < 5; ++triple) {
    BitVector k[3];
    do {
      for (auto& key : k) key = random_key(n, keys);
    } while (k[0] == k[1] || k[1] == k[2] || k[0] == k[2]);
    RandomSource rng(500 + triple);
    const int samples = 200000;
    int counts[8] = {};
    for (int s = 0; s < samples; ++s) {
      XorHashFunction h = sample_hash(n, 1, rng);
      int idx = apply(h, k[0])[0] | (apply(h, k[1])[0] << 1) | (apply(h, k[2])[0] << 2);
      ++counts[idx];
    }
    const double q = 1.0 / 8;
    const double sigma = std::sqrt(q * (1 - q) / samples);
    for (int c : counts) CHECK(std::fabs(c / double(samples) - q) <= 4 * sigma);
  }
}
