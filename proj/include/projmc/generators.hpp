#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "projmc/formula.hpp"

namespace projmc {

/// `family:key=value,key=value`, e.g. `free-k:k=20,aux=4`.
struct GeneratorSpec {
  std::string family;
  std::map<std::string, std::string> params;

  std::uint64_t get(const std::string& key, std::uint64_t fallback) const;
  std::string to_string() const;
};

/// Throws ConfigError on malformed text.
GeneratorSpec parse_generator_spec(const std::string& text);

struct GeneratedInstance {
  Formula formula;
  GeneratorSpec spec;
  std::uint64_t seed = 0;
  boost::multiprecision::cpp_int projected_count = 0;
  std::string count_source;  // "construction" or "oracle"
};

/// free-k: scope z1..zk left free, `aux` AND-gate variables defined from
/// scope pairs, `units` fresh non-scope variables forced true. Count 2^k.
GeneratedInstance generate_free_k(std::uint32_t k, std::uint32_t aux, std::uint32_t units, std::uint64_t seed);

/// parity-chain: scope z1..zk, `links` equalities zi = zj routed through a
/// fresh non-scope variable each, chained along a seeded permutation.
/// Each link halves the count: 2^(k - links). Requires links < k or k = 0.
GeneratedInstance generate_parity_chain(std::uint32_t k, std::uint32_t links, std::uint64_t seed);

/// random-3cnf: `clauses` random 3-clauses over `vars` variables, seeded
/// random scope of size `scope`. The count comes from the exact oracle, so
/// vars is limited to its truth-table range.
GeneratedInstance generate_random_3cnf(std::uint32_t vars, std::uint32_t clauses, std::uint32_t scope,
                                       std::uint64_t seed);

/// Dispatches on spec.family. The seed is spec param `seed` if present,
/// else `default_seed`.
GeneratedInstance generate(const GeneratorSpec& spec, std::uint64_t default_seed = 0);

}  // namespace projmc
