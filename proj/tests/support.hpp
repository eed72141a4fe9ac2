#pragma once

// Helpers shared by the unit tests: seeded random formulas and naive
// reference semantics written without the library's evaluators.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "projmc/formula.hpp"

namespace testing {

using projmc::Assignment;
using projmc::Clause;
using projmc::Formula;
using projmc::Literal;
using projmc::Variable;
using projmc::XorConstraint;

inline Clause clause(std::initializer_list<int> lits) {
  Clause c;
  for (int l : lits) c.literals.push_back(Literal::from_dimacs(l));
  return c;
}

inline std::vector<Variable> vars(std::initializer_list<std::uint32_t> ids) {
  std::vector<Variable> out;
  for (auto id : ids) out.push_back(Variable{id});
  return out;
}

inline Assignment from_bits(std::uint64_t bits, std::uint32_t n) {
  std::vector<bool> values(n);
  for (std::uint32_t i = 0; i < n; ++i) values[i] = (bits >> i) & 1;
  return Assignment::over_range(std::move(values));
}

struct RandomFormulaShape {
  std::uint32_t max_vars = 10;
  std::uint32_t max_clauses = 20;
  std::uint32_t max_width = 4;
  std::uint32_t max_xors = 0;
  std::uint32_t max_xor_width = 5;
  bool allow_repeats = true;  // duplicate literals / tautologies / repeated XOR vars
};

inline Formula random_formula(std::mt19937_64& gen, const RandomFormulaShape& shape) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(gen);
  };
  Formula f;
  f.num_vars = f.total_vars = static_cast<std::uint32_t>(pick(1, shape.max_vars));
  const auto n_clauses = pick(0, shape.max_clauses);
  for (std::uint64_t i = 0; i < n_clauses; ++i) {
    Clause c;
    const auto width = pick(shape.allow_repeats ? 0 : 1, shape.max_width);
    std::set<std::uint32_t> used;
    while (c.literals.size() < width) {
      auto id = static_cast<std::uint32_t>(pick(1, f.num_vars));
      if (!shape.allow_repeats && !used.insert(id).second) {
        if (used.size() == f.num_vars) break;
        continue;
      }
      c.literals.push_back(Literal{Variable{id}, pick(0, 1) == 1});
    }
    f.clauses.push_back(std::move(c));
  }
  const auto n_xors = pick(0, shape.max_xors);
  for (std::uint64_t i = 0; i < n_xors; ++i) {
    XorConstraint x;
    x.parity = pick(0, 1) == 1;
    const auto width = pick(0, shape.max_xor_width);
    std::set<std::uint32_t> used;
    while (x.variables.size() < width) {
      auto id = static_cast<std::uint32_t>(pick(1, f.num_vars));
      if (!shape.allow_repeats && !used.insert(id).second) {
        if (used.size() == f.num_vars) break;
        continue;
      }
      x.variables.push_back(Variable{id});
    }
    f.xors.push_back(std::move(x));
  }
  for (std::uint32_t v = 1; v <= f.num_vars; ++v)
    if (pick(0, 2) != 0) f.scope.push_back(Variable{v});
  return f;
}

// Naive semantics over a bit-packed total assignment (bit i is variable i+1).
inline bool naive_holds(const Formula& f, std::uint64_t bits) {
  auto val = [&](Variable v) { return ((bits >> (v.id - 1)) & 1) != 0; };
  for (const Clause& c : f.clauses) {
    bool sat = false;
    for (const Literal& l : c.literals) sat = sat || (val(l.var) != l.negated);
    if (!sat) return false;
  }
  for (const XorConstraint& x : f.xors) {
    bool acc = false;
    for (Variable v : x.variables) acc = acc != val(v);
    if (acc != x.parity) return false;
  }
  return true;
}

inline std::uint64_t scope_key_bits(const Formula& f, std::uint64_t bits) {
  std::uint64_t key = 0;
  for (std::size_t j = 0; j < f.scope.size(); ++j)
    if ((bits >> (f.scope[j].id - 1)) & 1) key |= std::uint64_t{1} << j;
  return key;
}

// Distinct scope restrictions of the models, by std::set.
inline std::uint64_t naive_projected_count(const Formula& f) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.total_vars); ++bits)
    if (naive_holds(f, bits)) keys.insert(scope_key_bits(f, bits));
  return keys.size();
}

inline bool naive_satisfiable(const Formula& f) {
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.total_vars); ++bits)
    if (naive_holds(f, bits)) return true;
  return false;
}

}  // namespace testing
