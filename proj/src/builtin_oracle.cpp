#include <cassert>
#include <chrono>

#include "projmc/cdcl_solver.hpp"
#include "projmc/errors.hpp"
#include "projmc/sat_backend.hpp"

namespace projmc {
namespace {

class BuiltinSession final : public SatSession {
 public:
  BuiltinSession(const Formula& f, const BuiltinOptions& options) : options_(options) {
    validate(f);
    loaded_ = lower_xors(f, options.xor_chunk_width);
    solver_.ensure_vars(loaded_.total_vars);
    for (const Clause& c : loaded_.clauses) solver_.add_clause(c);
  }

  std::optional<Assignment> solve() override {
    using clock = std::chrono::steady_clock;
    ++stats_.queries;
    CdclSolver::Deadline deadline;
    auto start = clock::now();
    if (options_.timeout_seconds > 0)
      deadline = start + std::chrono::duration_cast<clock::duration>(
                             std::chrono::duration<double>(options_.timeout_seconds));
    CdclSolver::Status status = solver_.solve(deadline);
    stats_.solve_seconds += std::chrono::duration<double>(clock::now() - start).count();
    stats_.conflicts = solver_.stats().conflicts;
    switch (status) {
      case CdclSolver::Status::timeout:
        throw SolverTimeout("built-in solver exceeded " + std::to_string(options_.timeout_seconds) + " s");
      case CdclSolver::Status::unsatisfiable:
        return std::nullopt;
      case CdclSolver::Status::satisfiable:
        break;
    }
    std::vector<bool> values = solver_.model();
    values.resize(loaded_.total_vars, false);
    Assignment model = Assignment::over_range(std::move(values));
    assert(evaluate(loaded_, model));
    return model;
  }

  void add_clause(const Clause& c) override {
    for (const Literal& l : c.literals)
      if (l.var.id == 0 || l.var.id > loaded_.total_vars)
        throw ContractViolation("clause mentions variable " + std::to_string(l.var.id) +
                                " unknown to the session");
    ++stats_.added_clauses;
#ifndef NDEBUG
    loaded_.clauses.push_back(c);
#endif
    solver_.add_clause(c);
  }

  const SessionStats& stats() const override { return stats_; }

 private:
  BuiltinOptions options_;
  Formula loaded_;
  CdclSolver solver_;
  SessionStats stats_;
};

}  // namespace

BuiltinOracle::BuiltinOracle(BuiltinOptions options) : options_(options) {
  if (options_.xor_chunk_width < 3) throw ConfigError("XOR chunk width must be at least 3");
  if (options_.timeout_seconds < 0) throw ConfigError("timeout must be non-negative");
}

std::unique_ptr<SatSession> BuiltinOracle::open_session(const Formula& f) const {
  return std::make_unique<BuiltinSession>(f, options_);
}

}  // namespace projmc
