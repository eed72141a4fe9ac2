#include "projmc/exact_oracle.hpp"

#include <bit>
#include <string>
#include <vector>

#include "projmc/errors.hpp"

namespace projmc {
namespace {

struct MaskClause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

struct MaskXor {
  std::uint32_t vars = 0;
  bool parity = false;
};

std::uint32_t bit_of(Variable v) { return std::uint32_t{1} << (v.id - 1); }

}  // namespace

const char* to_string(ExactCount::Method method) {
  return method == ExactCount::Method::truth_table ? "truth_table" : "scope_sweep";
}

ExactCount truth_table_count(const Formula& f) {
  validate(f);
  if (f.total_vars > kTruthTableMaxVars)
    throw ConfigError("truth-table counting is limited to " + std::to_string(kTruthTableMaxVars) +
                      " variables, formula has " + std::to_string(f.total_vars));

  std::vector<MaskClause> clauses;
  clauses.reserve(f.clauses.size());
  for (const Clause& c : f.clauses) {
    MaskClause m;
    for (const Literal& l : c.literals) (l.negated ? m.neg : m.pos) |= bit_of(l.var);
    clauses.push_back(m);
  }
  std::vector<MaskXor> xors;
  for (const XorConstraint& x : f.xors) {
    MaskXor m{0, x.parity};
    for (Variable v : x.variables) m.vars ^= bit_of(v);
    xors.push_back(m);
  }

  const std::size_t k = f.scope.size();
  std::vector<bool> seen(std::size_t{1} << k, false);
  std::uint64_t distinct = 0;
  const std::uint64_t total = std::uint64_t{1} << f.total_vars;
  for (std::uint64_t word = 0; word < total; ++word) {
    const auto x = static_cast<std::uint32_t>(word);
    bool ok = true;
    for (const MaskClause& c : clauses)
      if (((x & c.pos) | (~x & c.neg)) == 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    for (const MaskXor& m : xors)
      if ((std::popcount(x & m.vars) & 1) != static_cast<int>(m.parity)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::size_t key = 0;
    for (std::size_t j = 0; j < k; ++j)
      if (x & bit_of(f.scope[j])) key |= std::size_t{1} << j;
    if (!seen[key]) {
      seen[key] = true;
      ++distinct;
    }
  }
  return {distinct, ExactCount::Method::truth_table};
}

namespace {

std::uint64_t sweep(const Formula& base, Formula& current, std::size_t depth, const SatOracle& oracle) {
  if (!oracle.open_session(current)->solve()) return 0;
  if (depth == base.scope.size()) return 1;
  std::uint64_t sum = 0;
  for (bool value : {false, true}) {
    current.clauses.push_back(Clause{{Literal{base.scope[depth], !value}}});
    sum += sweep(base, current, depth + 1, oracle);
    current.clauses.pop_back();
  }
  return sum;
}

}  // namespace

ExactCount scope_sweep_count(const Formula& f, const SatOracle& oracle) {
  validate(f);
  if (f.scope.size() > kScopeSweepMaxScope)
    throw ConfigError("scope-sweep counting is limited to " + std::to_string(kScopeSweepMaxScope) +
                      " scope variables, formula has " + std::to_string(f.scope.size()));
  Formula current = f;
  return {sweep(f, current, 0, oracle), ExactCount::Method::scope_sweep};
}

ExactCount exact_projected_count(const Formula& f, const SatOracle* oracle) {
  if (f.total_vars <= kTruthTableMaxVars) return truth_table_count(f);
  if (oracle == nullptr)
    throw ConfigError("formula exceeds the truth-table limit and no SAT oracle was given for a scope sweep");
  return scope_sweep_count(f, *oracle);
}

}  // namespace projmc
