#pragma once

#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <vector>

#include "projmc/formula.hpp"

namespace projmc {

/// Incremental CDCL solver.
///
/// Two-watched-literal propagation with blockers, first-UIP learning with
/// recursive minimization, VSIDS decisions with phase saving, Luby restarts
/// and LBD-guided learned-clause reduction. Clauses may be added between
/// solve() calls; learned clauses are kept across calls.
class CdclSolver {
 public:
  enum class Status { satisfiable, unsatisfiable, timeout };

  struct Stats {
    std::uint64_t solves = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
  };

  using Deadline = std::optional<std::chrono::steady_clock::time_point>;

  CdclSolver() = default;
  explicit CdclSolver(std::uint32_t num_vars) { ensure_vars(num_vars); }

  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(activity_.size()); }
  void ensure_vars(std::uint32_t n);

  /// Adds a clause over 1-based variables (growing the variable set as
  /// needed). Returns false once the clause set is known unsatisfiable.
  bool add_clause(std::span<const Literal> clause);
  bool add_clause(const Clause& clause) { return add_clause(std::span<const Literal>(clause.literals)); }

  Status solve(Deadline deadline = std::nullopt);

  /// Model of the last satisfiable solve(), indexed by variable id - 1.
  const std::vector<bool>& model() const { return model_; }

  const Stats& stats() const { return stats_; }

 private:
  using Lit = std::uint32_t;  // 2 * var + negated, var 0-based
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = UINT32_MAX;
  static constexpr Lit kNoLit = UINT32_MAX;
  static constexpr std::uint32_t kHeader = 3;  // size, flags|lbd, activity

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  enum class SearchResult { sat, unsat, restart, timeout };

  static Lit encode(const Literal& l) { return 2 * (l.var.id - 1) + (l.negated ? 1U : 0U); }
  static std::uint32_t var_of(Lit l) { return l >> 1; }

  std::int8_t value(Lit l) const { return lit_value_[l]; }
  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  std::uint32_t& clause_size(CRef c) { return arena_[c]; }
  Lit* clause_lits(CRef c) { return &arena_[c + kHeader]; }
  bool is_learnt(CRef c) const { return arena_[c + 1] & 1U; }
  bool is_deleted(CRef c) const { return arena_[c + 1] & 2U; }
  std::uint32_t lbd(CRef c) const { return arena_[c + 1] >> 2; }
  float clause_activity(CRef c) const {
    float a;
    std::memcpy(&a, &arena_[c + 2], sizeof a);
    return a;
  }
  void set_clause_activity(CRef c, float a) { std::memcpy(&arena_[c + 2], &a, sizeof a); }

  CRef allocate(std::span<const Lit> lits, bool learnt, std::uint32_t lbd);
  void attach(CRef c);
  bool locked(CRef c);

  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level, std::uint32_t& lbd);
  bool literal_redundant(Lit p, std::uint32_t abstract_levels);
  std::uint32_t abstract_level(std::uint32_t var) const { return 1U << (level_[var] & 31U); }
  void cancel_until(std::uint32_t level);
  Lit pick_branch();
  SearchResult search(std::uint64_t conflict_budget, const Deadline& deadline);
  void reduce_learnts();
  void collect_garbage();

  void bump_var(std::uint32_t v);
  void bump_clause(CRef c);

  // Indexed binary max-heap over variable activity.
  void heap_insert(std::uint32_t v);
  std::uint32_t heap_pop();
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  bool heap_less(std::uint32_t a, std::uint32_t b) const { return activity_[a] > activity_[b]; }

  bool ok_ = true;
  std::vector<std::uint32_t> arena_;
  std::vector<CRef> originals_;
  std::vector<CRef> learnts_;
  std::size_t wasted_ = 0;
  std::vector<std::vector<Watcher>> watches_;  // watches_[l]: clauses watching l, visited when l turns false

  std::vector<std::int8_t> lit_value_;  // 1 true, -1 false, 0 unassigned
  std::vector<std::uint32_t> level_;
  std::vector<CRef> reason_;
  std::vector<std::uint8_t> phase_;  // saved polarity: 1 = negated
  std::vector<std::uint8_t> seen_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<std::uint32_t> heap_;
  std::vector<std::int64_t> heap_index_;  // -1 when not in heap

  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 4000.0;

  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_clear_;
  std::vector<std::uint64_t> level_stamp_;
  std::uint64_t stamp_ = 0;

  std::vector<bool> model_;
  Stats stats_;
};

}  // namespace projmc
