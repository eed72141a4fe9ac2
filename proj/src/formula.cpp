#include "projmc/formula.hpp"

#include <algorithm>
#include <sstream>

#include "projmc/errors.hpp"

namespace projmc {

Literal Literal::from_dimacs(std::int64_t value) {
  if (value == 0 || value > UINT32_MAX || value < -static_cast<std::int64_t>(UINT32_MAX))
    throw ContractViolation("literal out of range: " + std::to_string(value));
  return value > 0 ? positive(static_cast<std::uint32_t>(value))
                   : negative(static_cast<std::uint32_t>(-value));
}

Assignment::Assignment(std::vector<Variable> vocabulary, std::vector<bool> values)
    : vocabulary_(std::move(vocabulary)), values_(std::move(values)) {
  if (vocabulary_.size() != values_.size())
    throw ContractViolation("assignment vocabulary and values differ in size");
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (vocabulary_[i].id == 0) throw ContractViolation("variable id 0 in assignment");
    if (i > 0 && !(vocabulary_[i - 1] < vocabulary_[i]))
      throw ContractViolation("assignment vocabulary must be sorted and duplicate-free");
    if (vocabulary_[i].id != i + 1) dense_ = false;
  }
}

Assignment Assignment::over_range(std::vector<bool> values) {
  std::vector<Variable> vocab(values.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) vocab[i] = Variable{static_cast<std::uint32_t>(i + 1)};
  return Assignment(std::move(vocab), std::move(values));
}

bool Assignment::contains(Variable v) const {
  if (dense_) return v.id >= 1 && v.id <= vocabulary_.size();
  return std::binary_search(vocabulary_.begin(), vocabulary_.end(), v);
}

bool Assignment::value(Variable v) const {
  if (dense_) {
    if (v.id >= 1 && v.id <= values_.size()) return values_[v.id - 1];
  } else {
    auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), v);
    if (it != vocabulary_.end() && *it == v) return values_[static_cast<std::size_t>(it - vocabulary_.begin())];
  }
  throw ContractViolation("variable " + std::to_string(v.id) + " is not assigned");
}

Formula Formula::over(std::uint32_t n) {
  Formula f;
  f.num_vars = n;
  f.total_vars = n;
  f.scope.reserve(n);
  for (std::uint32_t v = 1; v <= n; ++v) f.scope.push_back(Variable{v});
  return f;
}

bool evaluate(const Clause& c, const Assignment& a) {
  return std::any_of(c.literals.begin(), c.literals.end(),
                     [&](const Literal& l) { return a.value(l.var) != l.negated; });
}

bool evaluate(const XorConstraint& x, const Assignment& a) {
  bool acc = false;
  for (Variable v : x.variables) acc ^= a.value(v);
  return acc == x.parity;
}

bool evaluate(const Formula& f, const Assignment& a) {
  // Check every constraint so that a partial assignment always trips the
  // contract check, independent of evaluation order.
  bool result = true;
  for (const Clause& c : f.clauses) result &= evaluate(c, a);
  for (const XorConstraint& x : f.xors) result &= evaluate(x, a);
  return result;
}

Assignment restrict(const Assignment& a, std::span<const Variable> scope) {
  std::vector<Variable> vocab(scope.begin(), scope.end());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  std::vector<bool> values;
  values.reserve(vocab.size());
  for (Variable v : vocab) {
    if (!a.contains(v))
      throw ContractViolation("restriction scope variable " + std::to_string(v.id) +
                              " is outside the assignment's vocabulary");
    values.push_back(a.value(v));
  }
  return Assignment(std::move(vocab), std::move(values));
}

Formula normalize(const Formula& f) {
  Formula out;
  out.num_vars = f.num_vars;
  out.total_vars = f.total_vars;
  out.scope = f.scope;
  out.clauses.reserve(f.clauses.size());
  for (const Clause& c : f.clauses) {
    Clause n = c;
    std::sort(n.literals.begin(), n.literals.end());
    n.literals.erase(std::unique(n.literals.begin(), n.literals.end()), n.literals.end());
    bool tautology = false;
    for (std::size_t i = 1; i < n.literals.size(); ++i)
      if (n.literals[i].var == n.literals[i - 1].var) tautology = true;
    if (!tautology) out.clauses.push_back(std::move(n));
  }
  out.xors.reserve(f.xors.size());
  for (const XorConstraint& x : f.xors) {
    std::vector<Variable> vars = x.variables;
    std::sort(vars.begin(), vars.end());
    XorConstraint n{{}, x.parity};
    for (std::size_t i = 0; i < vars.size();) {
      std::size_t j = i;
      while (j < vars.size() && vars[j] == vars[i]) ++j;
      if ((j - i) % 2 == 1) n.variables.push_back(vars[i]);
      i = j;
    }
    out.xors.push_back(std::move(n));
  }
  return out;
}

void validate(const Formula& f) {
  if (f.total_vars < f.num_vars) throw ContractViolation("total_vars below num_vars");
  auto check = [&](Variable v, const char* where) {
    if (v.id == 0 || v.id > f.total_vars)
      throw ContractViolation(std::string("variable ") + std::to_string(v.id) + " out of range in " + where);
  };
  for (const Clause& c : f.clauses)
    for (const Literal& l : c.literals) check(l.var, "clause");
  for (const XorConstraint& x : f.xors)
    for (Variable v : x.variables) check(v, "xor");
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    if (f.scope[i].id == 0 || f.scope[i].id > f.num_vars)
      throw ContractViolation("scope variable " + std::to_string(f.scope[i].id) + " outside 1.." +
                              std::to_string(f.num_vars));
    if (i > 0 && !(f.scope[i - 1] < f.scope[i]))
      throw ContractViolation("scope must be ascending and duplicate-free");
  }
}

std::string to_string(const Clause& c) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out << ' ';
    out << c.literals[i].to_dimacs();
  }
  out << ')';
  return out.str();
}

}  // namespace projmc
