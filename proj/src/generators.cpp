#include "projmc/generators.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <vector>

#include "projmc/errors.hpp"
#include "projmc/exact_oracle.hpp"
#include "projmc/random.hpp"

namespace projmc {
namespace {

Clause clause(std::initializer_list<Literal> lits) { return Clause{std::vector<Literal>(lits)}; }

Literal pos(std::uint32_t id) { return Literal::positive(id); }
Literal neg(std::uint32_t id) { return Literal::negative(id); }

std::vector<Variable> range_scope(std::uint32_t k) {
  std::vector<Variable> scope;
  for (std::uint32_t i = 1; i <= k; ++i) scope.push_back(Variable{i});
  return scope;
}

template <typename T>
void shuffle(std::vector<T>& items, RandomSource& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
}

}  // namespace

std::uint64_t GeneratorSpec::get(const std::string& key, std::uint64_t fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::uint64_t value = 0;
  const std::string& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("generator parameter " + key + " must be a non-negative integer, got '" + s + "'");
  return value;
}

std::string GeneratorSpec::to_string() const {
  std::string out = family;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep;
    out += k + "=" + v;
    sep = ',';
  }
  return out;
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  GeneratorSpec spec;
  std::size_t colon = text.find(':');
  spec.family = text.substr(0, colon);
  if (spec.family.empty()) throw ConfigError("generator spec needs a family name: '" + text + "'");
  if (colon == std::string::npos) return spec;
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    std::string item = rest.substr(pos, comma - pos);
    if (!item.empty()) {
      std::size_t eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("generator parameter must be key=value: '" + item + "'");
      spec.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    pos = comma + 1;
  }
  return spec;
}

GeneratedInstance generate_free_k(std::uint32_t k, std::uint32_t aux, std::uint32_t units, std::uint64_t seed) {
  RandomSource rng(seed);
  GeneratedInstance out;
  Formula& f = out.formula;
  f.num_vars = k;
  f.scope = range_scope(k);
  if (k == 0) aux = 0;
  for (std::uint32_t i = 0; i < aux; ++i) {
    std::uint32_t y = ++f.num_vars;
    auto a = static_cast<std::uint32_t>(1 + rng.below(k));
    auto b = static_cast<std::uint32_t>(1 + rng.below(k));
    // y <-> (a & b)
    f.clauses.push_back(clause({neg(y), pos(a)}));
    f.clauses.push_back(clause({neg(y), pos(b)}));
    f.clauses.push_back(clause({pos(y), neg(a), neg(b)}));
  }
  for (std::uint32_t i = 0; i < units; ++i) f.clauses.push_back(clause({pos(++f.num_vars)}));
  f.total_vars = f.num_vars;
  f = normalize(f);
  out.spec = GeneratorSpec{"free-k", {{"k", std::to_string(k)}, {"aux", std::to_string(aux)},
                                      {"units", std::to_string(units)}}};
  out.seed = seed;
  out.projected_count = boost::multiprecision::cpp_int(1) << k;
  out.count_source = "construction";
  return out;
}

GeneratedInstance generate_parity_chain(std::uint32_t k, std::uint32_t links, std::uint64_t seed) {
  if (links > 0 && links >= k)
    throw ConfigError("parity-chain needs fewer links than scope variables (k=" + std::to_string(k) +
                      ", links=" + std::to_string(links) + ")");
  RandomSource rng(seed);
  GeneratedInstance out;
  Formula& f = out.formula;
  f.num_vars = k;
  f.scope = range_scope(k);
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 1u);
  shuffle(order, rng);
  for (std::uint32_t i = 0; i < links; ++i) {
    std::uint32_t a = order[i];
    std::uint32_t b = order[i + 1];
    std::uint32_t y = ++f.num_vars;
    // a <-> y, y <-> b
    f.clauses.push_back(clause({neg(a), pos(y)}));
    f.clauses.push_back(clause({pos(a), neg(y)}));
    f.clauses.push_back(clause({neg(y), pos(b)}));
    f.clauses.push_back(clause({pos(y), neg(b)}));
  }
  f.total_vars = f.num_vars;
  out.spec = GeneratorSpec{"parity-chain", {{"k", std::to_string(k)}, {"links", std::to_string(links)}}};
  out.seed = seed;
  out.projected_count = boost::multiprecision::cpp_int(1) << (k - links);
  out.count_source = "construction";
  return out;
}

GeneratedInstance generate_random_3cnf(std::uint32_t vars, std::uint32_t clauses, std::uint32_t scope,
                                       std::uint64_t seed) {
  if (vars > kTruthTableMaxVars)
    throw ConfigError("random-3cnf counts come from the exact oracle, which is limited to " +
                      std::to_string(kTruthTableMaxVars) + " variables");
  if (vars < 3 && clauses > 0) throw ConfigError("random-3cnf needs at least 3 variables");
  if (scope > vars) throw ConfigError("random-3cnf scope cannot exceed the variable count");
  RandomSource rng(seed);
  GeneratedInstance out;
  Formula& f = out.formula;
  f.num_vars = f.total_vars = vars;
  std::vector<std::uint32_t> ids(vars);
  std::iota(ids.begin(), ids.end(), 1u);
  for (std::uint32_t c = 0; c < clauses; ++c) {
    std::vector<std::uint32_t> pick = ids;
    Clause cl;
    for (std::uint32_t j = 0; j < 3; ++j) {
      std::size_t idx = j + rng.below(pick.size() - j);
      std::swap(pick[j], pick[idx]);
      cl.literals.push_back(Literal{Variable{pick[j]}, rng.next_bit()});
    }
    std::sort(cl.literals.begin(), cl.literals.end());
    f.clauses.push_back(std::move(cl));
  }
  shuffle(ids, rng);
  ids.resize(scope);
  std::sort(ids.begin(), ids.end());
  for (std::uint32_t id : ids) f.scope.push_back(Variable{id});
  out.spec = GeneratorSpec{"random-3cnf", {{"vars", std::to_string(vars)}, {"clauses", std::to_string(clauses)},
                                           {"scope", std::to_string(scope)}}};
  out.seed = seed;
  out.projected_count = truth_table_count(f).value;
  out.count_source = "oracle";
  return out;
}

GeneratedInstance generate(const GeneratorSpec& spec, std::uint64_t default_seed) {
  const std::uint64_t seed = spec.get("seed", default_seed);
  auto narrow = [&](const char* key, std::uint64_t fallback) {
    std::uint64_t v = spec.get(key, fallback);
    if (v > 1'000'000) throw ConfigError(std::string("generator parameter ") + key + " is too large");
    return static_cast<std::uint32_t>(v);
  };
  auto check_keys = [&](std::initializer_list<const char*> known) {
    for (const auto& [key, value] : spec.params)
      if (key != "seed" && std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
        throw ConfigError("unknown parameter '" + key + "' for generator " + spec.family);
  };
  if (spec.family == "free-k") {
    check_keys({"k", "aux", "units"});
    return generate_free_k(narrow("k", 20), narrow("aux", 0), narrow("units", 0), seed);
  }
  if (spec.family == "parity-chain") {
    check_keys({"k", "links"});
    return generate_parity_chain(narrow("k", 16), narrow("links", 4), seed);
  }
  if (spec.family == "random-3cnf") {
    check_keys({"vars", "clauses", "scope"});
    std::uint32_t vars = narrow("vars", 12);
    return generate_random_3cnf(vars, narrow("clauses", vars * 2), narrow("scope", vars), seed);
  }
  throw ConfigError("unknown generator family '" + spec.family + "' (expected free-k, parity-chain, random-3cnf)");
}

}  // namespace projmc
