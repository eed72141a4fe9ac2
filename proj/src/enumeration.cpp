#include "projmc/enumeration.hpp"

namespace projmc {

Clause blocking_clause(const Assignment& model, std::span<const Variable> scope) {
  Clause c;
  c.literals.reserve(scope.size());
  for (Variable v : scope) c.literals.push_back(Literal{v, model.value(v)});
  return c;
}

BoundedCount bounded_count(SatSession& session, std::span<const Variable> scope, std::uint64_t bound) {
  BoundedCount count;
  if (bound == 0) {
    count.hit_bound = true;
    return count;
  }
  const std::uint64_t queries_before = session.stats().queries;
  auto progress = [&] {
    BoundedCount partial = count;
    partial.sat_queries = session.stats().queries - queries_before;
    return partial;
  };
  try {
    std::optional<Assignment> model = session.solve();
    while (model && count.value < bound) {
      ++count.value;
      if (count.value == bound) break;
      session.add_clause(blocking_clause(*model, scope));
      model = session.solve();
    }
  } catch (const SolverTimeout& e) {
    throw EnumerationAborted(AbortCause::timeout, progress(), e.what());
  } catch (const BackendError& e) {
    throw EnumerationAborted(AbortCause::backend, progress(), e.what());
  }
  count.hit_bound = count.value == bound;
  count.sat_queries = session.stats().queries - queries_before;
  return count;
}

BoundedCount bounded_count(const Formula& f, std::uint64_t bound, const SatOracle& oracle) {
  if (bound == 0) return BoundedCount{0, true, 0};
  auto session = oracle.open_session(f);
  return bounded_count(*session, f.scope, bound);
}

}  // namespace projmc
