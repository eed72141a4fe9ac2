#include <doctest.h>

#include <random>

#include "projmc/enumeration.hpp"
#include "projmc/errors.hpp"
#include "projmc/exact_oracle.hpp"
#include "support.hpp"

using namespace projmc;
using testing::clause;
using testing::vars;

namespace {

// Records every clause the enumerator adds, on top of a real session.
class RecordingSession final : public SatSession {
 public:
  explicit RecordingSession(std::unique_ptr<SatSession> inner) : inner_(std::move(inner)) {}
  std::optional<Assignment> solve() override { return inner_->solve(); }
  void add_clause(const Clause& c) override {
    added.push_back(c);
    inner_->add_clause(c);
  }
  const SessionStats& stats() const override { return inner_->stats(); }
  std::vector<Clause> added;

 private:
  std::unique_ptr<SatSession> inner_;
};

// Fails after a fixed number of successful queries.
class FlakySession final : public SatSession {
 public:
  FlakySession(std::unique_ptr<SatSession> inner, int ok, bool timeout)
      : inner_(std::move(inner)), ok_(ok), timeout_(timeout) {}
  std::optional<Assignment> solve() override {
    if (ok_-- <= 0) {
      ++stats_.queries;
      if (timeout_) throw SolverTimeout("slow");
      throw BackendError("broken");
    }
    auto m = inner_->solve();
    stats_.queries = inner_->stats().queries;
    return m;
  }
  void add_clause(const Clause& c) override { inner_->add_clause(c); }
  const SessionStats& stats() const override { return stats_; }

 private:
  std::unique_ptr<SatSession> inner_;
  int ok_;
  bool timeout_;
  SessionStats stats_;
};

}  // namespace

TEST_CASE("blocking clause examples") {
  Assignment m(vars({1, 2}), {true, false});
  CHECK(blocking_clause(m, vars({1, 2})) == clause({-1, 2}));
  Assignment five(vars({5}), {false});
  CHECK(blocking_clause(five, vars({5})) == clause({5}));
  CHECK(blocking_clause(m, {}).empty());
}

TEST_CASE("bounded count examples") {
  BuiltinOracle oracle;
  Formula unsat = Formula::over(2);
  unsat.clauses = {clause({1}), clause({-1})};
  CHECK(bounded_count(unsat, 5, oracle) == BoundedCount{0, false, 1});

  Formula f = Formula::over(3);
  f.clauses = {clause({1, 2})};
  f.scope = vars({1, 2});
  CHECK(bounded_count(f, 10, oracle) == BoundedCount{3, false, 4});
  CHECK(bounded_count(f, 2, oracle) == BoundedCount{2, true, 2});
  CHECK(bounded_count(f, 0, oracle) == BoundedCount{0, true, 0});
}

TEST_CASE("blocking clauses mention scope variables only") {
  BuiltinOracle oracle;
  Formula f = Formula::over(6);
  f.scope = vars({2, 4, 5});
  f.xors = {XorConstraint{vars({1, 2, 3, 4, 5, 6}), true}};  // lowered with auxiliaries
  RecordingSession s(oracle.open_session(f));
  BoundedCount c = bounded_count(s, f.scope, 100);
  CHECK(c.value == 8);
  CHECK(s.added.size() == 8);
  for (const Clause& cl : s.added) {
    CHECK(cl.literals.size() == 3);
    for (const Literal& l : cl.literals) CHECK(std::binary_search(f.scope.begin(), f.scope.end(), l.var));
  }
}

TEST_CASE("oracle equivalence, budget and monotonicity on random formulas") {
  BuiltinOracle oracle;
  std::mt19937_64 gen(31);
  testing::RandomFormulaShape shape;
  shape.max_vars = 12;
  shape.max_clauses = 14;
  shape.max_width = 3;
  shape.max_xors = 2;
  for (int i = 0; i < 150; ++i) {
    Formula f = testing::random_formula(gen, shape);
    const std::uint64_t truth = testing::naive_projected_count(f);
    const std::uint64_t full = std::uint64_t{1} << f.scope.size();
    std::uint64_t previous = 0;
    for (std::uint64_t bound : {std::uint64_t{0}, std::uint64_t{1}, truth, truth + 1, full + 1}) {
      BoundedCount c = bounded_count(f, bound, oracle);
      CHECK(c.value == std::min(truth, bound));
      CHECK(c.hit_bound == (c.value == bound));
      CHECK(c.sat_queries == (c.hit_bound ? bound : c.value + 1));
      if (bound >= previous) previous = c.value;
    }
    CHECK(previous == truth);
  }
}

TEST_CASE("backend failures carry the partial count") {
  BuiltinOracle oracle;
  Formula f = Formula::over(4);
  {
    FlakySession s(oracle.open_session(f), 3, true);
    try {
      bounded_count(s, f.scope, 10);
      FAIL("expected EnumerationAborted");
    } catch (const EnumerationAborted& e) {
      CHECK(e.cause() == AbortCause::timeout);
      CHECK(e.partial().value == 3);
      CHECK(e.partial().sat_queries == 4);
    }
  }
  {
    FlakySession s(oracle.open_session(f), 0, false);
    try {
      bounded_count(s, f.scope, 10);
      FAIL("expected EnumerationAborted");
    } catch (const EnumerationAborted& e) {
      CHECK(e.cause() == AbortCause::backend);
      CHECK(e.partial().value == 0);
    }
  }
}
