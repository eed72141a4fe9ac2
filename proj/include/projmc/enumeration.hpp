#pragma once

#include <cstdint>
#include <span>

#include "projmc/errors.hpp"
#include "projmc/formula.hpp"
#include "projmc/sat_backend.hpp"

namespace projmc {

struct BoundedCount {
  std::uint64_t value = 0;
  bool hit_bound = false;     // value reached the requested bound
  std::uint64_t sat_queries = 0;

  bool operator==(const BoundedCount&) const = default;
};

/// Raised when the backend fails mid-enumeration; carries the count so far.
class EnumerationAborted : public Error {
 public:
  EnumerationAborted(AbortCause cause, BoundedCount partial, const std::string& what)
      : Error(what), cause_(cause), partial_(partial) {}

  AbortCause cause() const noexcept { return cause_; }
  const BoundedCount& partial() const noexcept { return partial_; }

 private:
  AbortCause cause_;
  BoundedCount partial_;
};

/// One literal per scope variable, each false under `model`: satisfied
/// exactly by assignments that differ from `model` somewhere on the scope.
/// An empty scope yields the empty clause.
Clause blocking_clause(const Assignment& model, std::span<const Variable> scope);

/// min(number of scope-projected models, bound), by iterated SAT calls with
/// scope-only blocking clauses. Never issues a query once the bound is
/// reached: sat_queries = value + 1 below the bound, = bound at it.
BoundedCount bounded_count(SatSession& session, std::span<const Variable> scope, std::uint64_t bound);
BoundedCount bounded_count(const Formula& f, std::uint64_t bound, const SatOracle& oracle);

}  // namespace projmc
