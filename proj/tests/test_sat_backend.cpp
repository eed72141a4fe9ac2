#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <sys/stat.h>

#include "projmc/cdcl_solver.hpp"
#include "projmc/errors.hpp"
#include "projmc/sat_backend.hpp"
#include "support.hpp"

using namespace projmc;
using testing::clause;
using testing::vars;

namespace {

std::set<std::vector<Literal>> clause_set(const std::vector<Clause>& clauses) {
  std::set<std::vector<Literal>> out;
  for (Clause c : clauses) {
    std::sort(c.literals.begin(), c.literals.end());
    out.insert(c.literals);
  }
  return out;
}

// Original-variable models of f, bit-packed.
std::set<std::uint64_t> models_over(const Formula& f, std::uint32_t original_vars) {
  std::set<std::uint64_t> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.total_vars); ++bits)
    if (testing::naive_holds(f, bits)) out.insert(bits & ((std::uint64_t{1} << original_vars) - 1));
  return out;
}

std::filesystem::path write_script(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("projmc-test-" + name);
  std::ofstream(path) << "#!/bin/sh\n" << body;
  ::chmod(path.c_str(), 0755);
  return path;
}

std::vector<std::unique_ptr<SatOracle>> all_oracles() {
  std::vector<std::unique_ptr<SatOracle>> out;
  out.push_back(std::make_unique<BuiltinOracle>());
  out.push_back(std::make_unique<ExternalOracle>(ExternalOptions{PROJMC_SOLVE_BIN, {}, false}));
  out.push_back(std::make_unique<ExternalOracle>(ExternalOptions{PROJMC_SOLVE_BIN, {}, true}));
  return out;
}

}  // namespace

TEST_CASE("XOR translation examples") {
  std::vector<XorConstraint> xs{XorConstraint{{}, true}};
  CHECK(translate_xors(xs, 10).clauses == std::vector<Clause>{Clause{}});
  xs = {XorConstraint{{}, false}};
  CHECK(translate_xors(xs, 10).clauses.empty());
  xs = {XorConstraint{vars({1}), true}};
  CHECK(translate_xors(xs, 10).clauses == std::vector<Clause>{clause({1})});
  xs = {XorConstraint{vars({1, 2}), false}};
  CHECK(clause_set(translate_xors(xs, 10).clauses) == clause_set({clause({-1, 2}), clause({1, -2})}));
  CHECK_THROWS_AS(translate_xors(xs, 10, 2), ContractViolation);
}

TEST_CASE("XOR translation chunk sizes") {
  for (std::size_t w : {3u, 4u, 5u})
    for (std::uint32_t k = 1; k <= 14; ++k) {
      std::vector<Variable> v;
      for (std::uint32_t i = 1; i <= k; ++i) v.push_back(Variable{i});
      std::vector<XorConstraint> xs{XorConstraint{v, true}};
      XorTranslation t = translate_xors(xs, k + 1, w);
      const std::size_t chunks = k <= w ? 1 : (k - 2 + (w - 2) - 1) / (w - 2);
      CAPTURE(w);
      CAPTURE(k);
      CHECK(t.next_aux_id - (k + 1) == chunks - 1);
      for (const Clause& c : t.clauses) CHECK(c.literals.size() <= w);
      if (k <= w) CHECK(t.clauses.size() == (std::size_t{1} << (k - 1)));
    }
}

TEST_CASE("translate_xors preserves original-variable models, exhaustively") {
  std::mt19937_64 gen(21);
  testing::RandomFormulaShape shape;
  shape.max_vars = 9;
  shape.max_clauses = 4;
  shape.max_xors = 3;
  shape.max_xor_width = 9;
  for (int i = 0; i < 200; ++i) {
    Formula f = testing::random_formula(gen, shape);
    for (std::size_t w : {3u, 4u}) {
      Formula g = lower_xors(f, w);
      CHECK(g.xors.empty());
      CHECK(g.num_vars == f.num_vars);
      CHECK(g.scope == f.scope);
      if (g.total_vars > 18) continue;
      // Auxiliaries are functional: model counts match, not only the sets.
      std::uint64_t full = 0;
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << g.total_vars); ++bits) full += testing::naive_holds(g, bits);
      std::set<std::uint64_t> orig = models_over(f, f.num_vars);
      CHECK(models_over(g, f.num_vars) == orig);
      CHECK(full == orig.size());
    }
  }
}

TEST_CASE("CDCL agrees with truth tables") {
  std::mt19937_64 gen(22);
  testing::RandomFormulaShape shape;
  shape.max_vars = 12;
  shape.max_clauses = 60;
  shape.max_width = 3;
  for (int i = 0; i < 400; ++i) {
    Formula f = testing::random_formula(gen, shape);
    CdclSolver s(f.num_vars);
    for (const Clause& c : f.clauses) s.add_clause(c);
    CdclSolver::Status st = s.solve();
    REQUIRE(st != CdclSolver::Status::timeout);
    CHECK((st == CdclSolver::Status::satisfiable) == testing::naive_satisfiable(f));
    if (st == CdclSolver::Status::satisfiable) {
      std::vector<bool> m = s.model();
      m.resize(f.num_vars);
      CHECK(evaluate(f, Assignment::over_range(m)));
    }
  }
}

TEST_CASE("CDCL on harder instances") {
  SUBCASE("pigeonhole 7 into 6 is unsatisfiable") {
    const int p = 7, h = 6;
    auto var = [&](int i, int j) { return static_cast<int>(i * h + j + 1); };
    CdclSolver s;
    for (int i = 0; i < p; ++i) {
      Clause c;
      for (int j = 0; j < h; ++j) c.literals.push_back(Literal::from_dimacs(var(i, j)));
      s.add_clause(c);
    }
    for (int j = 0; j < h; ++j)
      for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b) s.add_clause(clause({-var(a, j), -var(b, j)}));
    CHECK(s.solve() == CdclSolver::Status::unsatisfiable);
  }
  SUBCASE("random 3-SAT at 150 variables, models verified") {
    std::mt19937_64 gen(23);
    int sat = 0;
    for (int round = 0; round < 20; ++round) {
      Formula f = Formula::over(150);
      std::uniform_int_distribution<int> v(1, 150), sign(0, 1);
      for (int c = 0; c < 600; ++c) {
        Clause cl;
        for (int j = 0; j < 3; ++j) cl.literals.push_back(Literal{Variable{static_cast<std::uint32_t>(v(gen))}, sign(gen) == 1});
        f.clauses.push_back(cl);
      }
      CdclSolver s(150);
      for (const Clause& c : f.clauses) s.add_clause(c);
      if (s.solve() == CdclSolver::Status::satisfiable) {
        ++sat;
        CHECK(evaluate(f, Assignment::over_range(s.model())));
      }
    }
    CHECK(sat > 0);
  }
  SUBCASE("a long parity chain via XOR lowering") {
    Formula f = Formula::over(60);
    std::vector<Variable> all;
    for (std::uint32_t i = 1; i <= 60; ++i) all.push_back(Variable{i});
    f.xors = {XorConstraint{all, true}, XorConstraint{std::vector<Variable>(all.begin(), all.begin() + 30), false}};
    Formula g = lower_xors(f);
    CdclSolver s(g.total_vars);
    for (const Clause& c : g.clauses) s.add_clause(c);
    REQUIRE(s.solve() == CdclSolver::Status::satisfiable);
    std::vector<bool> m = s.model();
    m.resize(60);
    CHECK(evaluate(f, Assignment::over_range(m)));
  }
}

TEST_CASE("CDCL deadline in the past reports a timeout") {
  // Pigeonhole 10 into 9 is far beyond the deadline check interval.
  const int p = 10, h = 9;
  auto var = [&](int i, int j) { return static_cast<int>(i * h + j + 1); };
  CdclSolver s;
  for (int i = 0; i < p; ++i) {
    Clause c;
    for (int j = 0; j < h; ++j) c.literals.push_back(Literal::from_dimacs(var(i, j)));
    s.add_clause(c);
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) s.add_clause(clause({-var(a, j), -var(b, j)}));
  CHECK(s.solve(std::chrono::steady_clock::now() - std::chrono::seconds(1)) == CdclSolver::Status::timeout);
  CHECK(s.solve(std::chrono::steady_clock::now() + std::chrono::milliseconds(50)) == CdclSolver::Status::timeout);
}

TEST_CASE("session examples on every backend") {
  for (const auto& oracle : all_oracles()) {
    CAPTURE(oracle->name());
    CAPTURE(oracle->native_xor());
    {
      auto s = oracle->open_session(Formula::over(3));
      auto m = s->solve();
      REQUIRE(m);
      CHECK(m->size() == 3);
    }
    {
      Formula f = Formula::over(2);
      f.clauses = {Clause{}};
      CHECK_FALSE(oracle->open_session(f)->solve());
    }
    {
      Formula f = Formula::over(2);
      f.clauses = {clause({1, 2}), clause({-1}), clause({-2})};
      CHECK_FALSE(oracle->open_session(f)->solve());
    }
    {
      Formula f = Formula::over(1);
      f.clauses = {clause({1})};
      auto s = oracle->open_session(f);
      auto m = s->solve();
      REQUIRE(m);
      CHECK(m->value(Variable{1}));
      s->add_clause(clause({-1}));
      CHECK_FALSE(s->solve());
    }
    {
      Formula f = Formula::over(2);
      f.xors = {XorConstraint{vars({1, 2}), true}};
      auto s = oracle->open_session(f);
      std::set<std::pair<bool, bool>> seen;
      while (auto m = s->solve()) {
        CHECK(m->value(Variable{1}) != m->value(Variable{2}));
        seen.insert({m->value(Variable{1}), m->value(Variable{2})});
        s->add_clause(Clause{{Literal{Variable{1}, m->value(Variable{1})}, Literal{Variable{2}, m->value(Variable{2})}}});
      }
      CHECK(seen == std::set<std::pair<bool, bool>>{{true, false}, {false, true}});
    }
    {
      Formula f = Formula::over(2);
      auto s = oracle->open_session(f);
      auto first = s->solve();
      REQUIRE(first);
      s->add_clause(clause({1, -1}));
      CHECK(s->solve());
      Literal flip{Variable{1}, first->value(Variable{1})};
      s->add_clause(Clause{{flip}});
      auto next = s->solve();
      REQUIRE(next);
      CHECK(next->value(Variable{1}) != first->value(Variable{1}));
      s->add_clause(Clause{});
      CHECK_FALSE(s->solve());
      CHECK(s->stats().queries == 4);
      CHECK(s->stats().added_clauses == 3);
      CHECK_THROWS_AS(s->add_clause(clause({9})), ContractViolation);
    }
  }
}

TEST_CASE("backends agree on random CNF+XOR queries") {
  auto oracles = all_oracles();
  std::mt19937_64 gen(24);
  testing::RandomFormulaShape shape;
  shape.max_vars = 10;
  shape.max_clauses = 25;
  shape.max_width = 3;
  shape.max_xors = 3;
  shape.max_xor_width = 7;
  for (int i = 0; i < 60; ++i) {
    Formula f = testing::random_formula(gen, shape);
    const bool truth = testing::naive_satisfiable(f);
    for (const auto& oracle : oracles) {
      auto m = oracle->open_session(f)->solve();
      CHECK(m.has_value() == truth);
      if (m) CHECK(evaluate(f, *m));
    }
  }
}

TEST_CASE("backends agree on overdetermined XOR systems") {
  auto oracles = all_oracles();
  std::mt19937_64 gen(25);
  testing::RandomFormulaShape shape;
  shape.max_vars = 8;
  shape.max_clauses = 4;
  shape.max_width = 3;
  shape.max_xors = 12;
  shape.max_xor_width = 8;
  int sat = 0, unsat = 0;
  for (int i = 0; i < 80; ++i) {
    Formula f = testing::random_formula(gen, shape);
    const bool truth = testing::naive_satisfiable(f);
    (truth ? sat : unsat)++;
    for (const auto& oracle : oracles) {
      auto m = oracle->open_session(f)->solve();
      CHECK(m.has_value() == truth);
      if (m) CHECK(evaluate(f, *m));
    }
  }
  CHECK(sat > 5);
  CHECK(unsat > 5);
}

TEST_CASE("solver output parsing") {
  SolverOutput a = parse_solver_output("c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n");
  CHECK(a.verdict == SolverOutput::Verdict::satisfiable);
  CHECK(a.values == std::vector<std::int64_t>{1, -2, 3});
  CHECK(parse_solver_output("s UNSATISFIABLE\r\n").verdict == SolverOutput::Verdict::unsatisfiable);
  CHECK(parse_solver_output("s UNKNOWN\n").verdict == SolverOutput::Verdict::unknown);
  CHECK(parse_solver_output("").verdict == SolverOutput::Verdict::unknown);
}

TEST_CASE("external backend failures") {
  CHECK_THROWS_AS(ExternalOracle(ExternalOptions{"/nonexistent/solver"}), ConfigError);
  CHECK_THROWS_AS(ExternalOracle(ExternalOptions{""}), ConfigError);
  CHECK_THROWS_AS(make_oracle(BackendConfig{"nope"}), ConfigError);
  CHECK(find_executable("sh").has_value());

  Formula f = Formula::over(2);
  SUBCASE("no verdict") {
    ExternalOracle o(ExternalOptions{write_script("silent", "echo oops >&2\nexit 0\n").string()});
    try {
      o.open_session(f)->solve();
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.stderr_text().find("oops") != std::string::npos);
    }
  }
  SUBCASE("wrong model") {
    f.clauses = {clause({1})};
    ExternalOracle o(ExternalOptions{write_script("liar", "echo 's SATISFIABLE'\necho 'v -1 -2 0'\n").string()});
    CHECK_THROWS_AS(o.open_session(f)->solve(), BackendError);
  }
  SUBCASE("crash") {
    ExternalOracle o(ExternalOptions{write_script("crash", "kill -SEGV $$\n").string()});
    CHECK_THROWS_AS(o.open_session(f)->solve(), BackendError);
  }
  SUBCASE("timeout") {
    ExternalOracle o(ExternalOptions{write_script("sleepy", "sleep 5\n").string(), {}, false, 4, 0.2});
    auto start = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(o.open_session(f)->solve(), SolverTimeout);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(3));
  }
  SUBCASE("extra arguments come before the input file") {
    auto script = write_script("args", "[ \"$1\" = \"--flag\" ] && echo 's UNSATISFIABLE' || echo 's SATISFIABLE'\n");
    ExternalOracle with(ExternalOptions{script.string(), {"--flag"}});
    CHECK_FALSE(with.open_session(f)->solve());
  }
}
