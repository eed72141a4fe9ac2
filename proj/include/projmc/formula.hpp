#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace projmc {

/// A propositional variable, 1-based as in DIMACS.
struct Variable {
  std::uint32_t id = 0;

  constexpr auto operator<=>(const Variable&) const = default;
};

struct Literal {
  Variable var;
  bool negated = false;

  static constexpr Literal positive(std::uint32_t id) { return {Variable{id}, false}; }
  static constexpr Literal negative(std::uint32_t id) { return {Variable{id}, true}; }

  /// Converts a non-zero DIMACS integer.
  static Literal from_dimacs(std::int64_t value);
  std::int64_t to_dimacs() const {
    return negated ? -static_cast<std::int64_t>(var.id) : static_cast<std::int64_t>(var.id);
  }

  constexpr Literal operator~() const { return {var, !negated}; }
  constexpr auto operator<=>(const Literal&) const = default;
};

struct Clause {
  std::vector<Literal> literals;

  bool empty() const { return literals.empty(); }
  bool operator==(const Clause&) const = default;
};

/// XOR of the variables' truth values must equal `parity`.
struct XorConstraint {
  std::vector<Variable> variables;
  bool parity = false;

  bool operator==(const XorConstraint&) const = default;
};

/// Total map from a vocabulary (sorted, duplicate-free) to truth values.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::vector<Variable> vocabulary, std::vector<bool> values);

  /// Assignment over {1..values.size()}; values[i] belongs to variable i+1.
  static Assignment over_range(std::vector<bool> values);

  bool contains(Variable v) const;
  /// Throws ContractViolation when `v` is outside the vocabulary.
  bool value(Variable v) const;
  bool operator[](Variable v) const { return value(v); }

  std::span<const Variable> vocabulary() const { return vocabulary_; }
  std::size_t size() const { return vocabulary_.size(); }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Variable> vocabulary_;
  std::vector<bool> values_;
  bool dense_ = true;  // vocabulary is exactly {1..size()}
};

/// CNF clauses plus XOR constraints, with a projection scope.
///
/// `num_vars` is the user vocabulary Σ. Auxiliary variables (Tseitin) live
/// above it, up to `total_vars`. The scope is kept in ascending order; that
/// order is the key-vector order for hashing.
struct Formula {
  std::uint32_t num_vars = 0;
  std::uint32_t total_vars = 0;
  std::vector<Clause> clauses;
  std::vector<XorConstraint> xors;
  std::vector<Variable> scope;

  /// A formula over {1..n} with no constraints and full scope.
  static Formula over(std::uint32_t n);

  bool operator==(const Formula&) const = default;
};

/// True iff every clause has a satisfied literal and every XOR holds.
/// `a` must cover every variable the formula mentions.
bool evaluate(const Formula& f, const Assignment& a);
bool evaluate(const Clause& c, const Assignment& a);
bool evaluate(const XorConstraint& x, const Assignment& a);

/// The Δ-assignment agreeing with `a` on `scope`.
Assignment restrict(const Assignment& a, std::span<const Variable> scope);

/// Deduplicates clause literals, drops tautologies, cancels repeated XOR
/// variables pairwise. The model set is unchanged.
Formula normalize(const Formula& f);

/// Checks structural invariants (ids in range, scope sorted and unique).
/// Throws ContractViolation with a description on failure.
void validate(const Formula& f);

std::string to_string(const Clause& c);

}  // namespace projmc
