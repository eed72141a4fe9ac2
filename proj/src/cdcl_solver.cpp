#include "projmc/cdcl_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <unordered_map>

namespace projmc {
namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr std::uint64_t kRestartUnit = 100;
constexpr std::uint32_t kKeepLbd = 2;

// Luby sequence value for index i (0-based): 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return std::uint64_t{1} << seq;
}

}  // namespace

void CdclSolver::ensure_vars(std::uint32_t n) {
  std::uint32_t old = num_vars();
  if (n <= old) return;
  watches_.resize(2 * std::size_t{n});
  lit_value_.resize(2 * std::size_t{n}, 0);
  level_.resize(n, 0);
  reason_.resize(n, kNoReason);
  phase_.resize(n, 1);
  seen_.resize(n, 0);
  activity_.resize(n, 0.0);
  heap_index_.resize(n, -1);
  for (std::uint32_t v = old; v < n; ++v) heap_insert(v);
}

CdclSolver::CRef CdclSolver::allocate(std::span<const Lit> lits, bool learnt, std::uint32_t lbd) {
  CRef c = static_cast<CRef>(arena_.size());
  arena_.push_back(static_cast<std::uint32_t>(lits.size()));
  arena_.push_back((learnt ? 1U : 0U) | (lbd << 2));
  float act = 0.0f;
  std::uint32_t bits;
  std::memcpy(&bits, &act, sizeof bits);
  arena_.push_back(bits);
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  return c;
}

void CdclSolver::attach(CRef c) {
  Lit* lits = clause_lits(c);
  watches_[lits[0]].push_back({c, lits[1]});
  watches_[lits[1]].push_back({c, lits[0]});
}

bool CdclSolver::locked(CRef c) {
  Lit first = clause_lits(c)[0];
  return value(first) == 1 && reason_[var_of(first)] == c;
}

bool CdclSolver::add_clause(std::span<const Literal> clause) {
  if (!ok_) return false;
  assert(decision_level() == 0);
  std::uint32_t max_var = 0;
  for (const Literal& l : clause) max_var = std::max(max_var, l.var.id);
  ensure_vars(max_var);

  std::vector<Lit> lits;
  lits.reserve(clause.size());
  for (const Literal& l : clause) lits.push_back(encode(l));
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::size_t j = 0;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == (lits[i] ^ 1U)) return true;  // tautology
    if (value(lits[i]) == 1) return true;                                  // satisfied at level 0
    if (value(lits[i]) == -1) continue;                                    // false at level 0
    lits[j++] = lits[i];
  }
  lits.resize(j);

  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    enqueue(lits[0], kNoReason);
    return true;
  }
  CRef c = allocate(lits, false, 0);
  originals_.push_back(c);
  attach(c);
  return true;
}

void CdclSolver::enqueue(Lit l, CRef reason) {
  std::uint32_t v = var_of(l);
  lit_value_[l] = 1;
  lit_value_[l ^ 1U] = -1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

CdclSolver::CRef CdclSolver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    Lit false_lit = trail_[qhead_++] ^ 1U;
    std::vector<Watcher>& ws = watches_[false_lit];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    const std::size_t end = ws.size();
    while (i < end) {
      Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      CRef c = w.cref;
      Lit* lits = clause_lits(c);
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      ++i;
      Lit first = lits[0];
      Watcher kept{c, first};
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = kept;
        continue;
      }
      const std::uint32_t size = clause_size(c);
      bool moved = false;
      for (std::uint32_t k = 2; k < size; ++k) {
        if (value(lits[k]) != -1) {
          lits[1] = lits[k];
          lits[k] = false_lit;
          watches_[lits[1]].push_back(kept);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = kept;
      if (value(first) == -1) {
        conflict = c;
        qhead_ = trail_.size();
        while (i < end) ws[j++] = ws[i++];
      } else {
        enqueue(first, c);
      }
    }
    ws.resize(j);
    if (conflict != kNoReason) break;
  }
  return conflict;
}

void CdclSolver::bump_var(std::uint32_t v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void CdclSolver::bump_clause(CRef c) {
  float act = clause_activity(c) + static_cast<float>(clause_inc_);
  set_clause_activity(c, act);
  if (act > 1e20f) {
    for (CRef l : learnts_) set_clause_activity(l, clause_activity(l) * 1e-20f);
    clause_inc_ *= 1e-20;
  }
}

void CdclSolver::analyze(CRef conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level,
                         std::uint32_t& out_lbd) {
  learnt.clear();
  learnt.push_back(kNoLit);
  int path_count = 0;
  Lit p = kNoLit;
  std::size_t index = trail_.size();
  CRef reason = conflict;
  do {
    assert(reason != kNoReason);
    if (is_learnt(reason)) bump_clause(reason);
    Lit* lits = clause_lits(reason);
    const std::uint32_t size = clause_size(reason);
    for (std::uint32_t k = (p == kNoLit ? 0 : 1); k < size; ++k) {
      Lit q = lits[k];
      std::uint32_t v = var_of(q);
      if (!seen_[v] && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          ++path_count;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[--index])]) {
    }
    p = trail_[index];
    reason = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path_count;
  } while (path_count > 0);
  learnt[0] = p ^ 1U;

  analyze_clear_.assign(learnt.begin(), learnt.end());
  std::uint32_t abstract_levels = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k) abstract_levels |= abstract_level(var_of(learnt[k]));
  std::size_t j = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    if (reason_[var_of(learnt[k])] == kNoReason || !literal_redundant(learnt[k], abstract_levels))
      learnt[j++] = learnt[k];
  }
  learnt.resize(j);

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k)
      if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])]) max_i = k;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[var_of(learnt[1])];
  }

  ++stamp_;
  if (level_stamp_.size() < std::size_t{decision_level()} + 1) level_stamp_.resize(decision_level() + 1, 0);
  out_lbd = 0;
  for (Lit l : learnt) {
    std::uint32_t lv = level_[var_of(l)];
    if (level_stamp_[lv] != stamp_) {
      level_stamp_[lv] = stamp_;
      ++out_lbd;
    }
  }

  for (Lit l : analyze_clear_) seen_[var_of(l)] = 0;
}

bool CdclSolver::literal_redundant(Lit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  const std::size_t top = analyze_clear_.size();
  while (!analyze_stack_.empty()) {
    CRef c = reason_[var_of(analyze_stack_.back())];
    analyze_stack_.pop_back();
    Lit* lits = clause_lits(c);
    const std::uint32_t size = clause_size(c);
    for (std::uint32_t k = 1; k < size; ++k) {
      Lit q = lits[k];
      std::uint32_t v = var_of(q);
      if (seen_[v] || level_[v] == 0) continue;
      if (reason_[v] != kNoReason && (abstract_level(v) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(q);
        analyze_clear_.push_back(q);
      } else {
        for (std::size_t i = top; i < analyze_clear_.size(); ++i) seen_[var_of(analyze_clear_[i])] = 0;
        analyze_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void CdclSolver::cancel_until(std::uint32_t level) {
  if (decision_level() <= level) return;
  for (std::size_t c = trail_.size(); c-- > trail_lim_[level];) {
    Lit l = trail_[c];
    std::uint32_t v = var_of(l);
    lit_value_[l] = 0;
    lit_value_[l ^ 1U] = 0;
    reason_[v] = kNoReason;
    phase_[v] = static_cast<std::uint8_t>(l & 1U);
    if (heap_index_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  qhead_ = trail_.size();
  trail_lim_.resize(level);
}

CdclSolver::Lit CdclSolver::pick_branch() {
  while (!heap_.empty()) {
    std::uint32_t v = heap_pop();
    if (lit_value_[2 * v] == 0) return 2 * v + phase_[v];
  }
  return kNoLit;
}

void CdclSolver::reduce_learnts() {
  std::vector<CRef> candidates;
  candidates.reserve(learnts_.size());
  std::vector<CRef> kept;
  for (CRef c : learnts_) {
    if (lbd(c) <= kKeepLbd || locked(c))
      kept.push_back(c);
    else
      candidates.push_back(c);
  }
  std::sort(candidates.begin(), candidates.end(), [&](CRef a, CRef b) {
    if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
    return clause_activity(a) < clause_activity(b);
  });
  std::size_t remove = candidates.size() / 2;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CRef c = candidates[i];
    if (i < remove) {
      arena_[c + 1] |= 2U;
      wasted_ += kHeader + clause_size(c);
    } else {
      kept.push_back(c);
    }
  }
  learnts_ = std::move(kept);
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return is_deleted(w.cref); }),
             ws.end());
  if (wasted_ * 2 > arena_.size()) collect_garbage();
}

void CdclSolver::collect_garbage() {
  std::vector<std::uint32_t> fresh;
  fresh.reserve(arena_.size() - wasted_);
  std::unordered_map<CRef, CRef> moved;
  auto relocate = [&](std::vector<CRef>& list) {
    for (CRef& c : list) {
      CRef n = static_cast<CRef>(fresh.size());
      fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + kHeader + clause_size(c));
      moved.emplace(c, n);
      c = n;
    }
  };
  relocate(originals_);
  relocate(learnts_);
  for (auto& ws : watches_)
    for (Watcher& w : ws) w.cref = moved.at(w.cref);
  for (Lit l : trail_) {
    CRef& r = reason_[var_of(l)];
    if (r != kNoReason) r = moved.at(r);
  }
  arena_ = std::move(fresh);
  wasted_ = 0;
}

CdclSolver::SearchResult CdclSolver::search(std::uint64_t conflict_budget, const Deadline& deadline) {
  std::uint64_t conflicts = 0;
  std::uint64_t ticks = 0;
  std::vector<Lit> learnt;
  for (;;) {
    if (deadline && (++ticks & 255U) == 0 && std::chrono::steady_clock::now() >= *deadline)
      return SearchResult::timeout;
    CRef conflict = propagate();
    if (conflict != kNoReason) {
      ++stats_.conflicts;
      ++conflicts;
      if (decision_level() == 0) return SearchResult::unsat;
      std::uint32_t backtrack_level = 0, learnt_lbd = 0;
      analyze(conflict, learnt, backtrack_level, learnt_lbd);
      cancel_until(backtrack_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        CRef c = allocate(learnt, true, learnt_lbd);
        learnts_.push_back(c);
        attach(c);
        bump_clause(c);
        enqueue(learnt[0], c);
      }
      var_inc_ /= kVarDecay;
      clause_inc_ /= kClauseDecay;
      continue;
    }
    if (conflicts >= conflict_budget) {
      cancel_until(0);
      return SearchResult::restart;
    }
    if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) {
      reduce_learnts();
      max_learnts_ *= 1.1;
    }
    Lit next = pick_branch();
    if (next == kNoLit) return SearchResult::sat;
    ++stats_.decisions;
    trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
    enqueue(next, kNoReason);
  }
}

CdclSolver::Status CdclSolver::solve(Deadline deadline) {
  ++stats_.solves;
  model_.clear();
  if (!ok_) return Status::unsatisfiable;
  for (std::uint64_t restart = 0;; ++restart) {
    SearchResult r = search(luby(restart) * kRestartUnit, deadline);
    if (r == SearchResult::restart) {
      ++stats_.restarts;
      continue;
    }
    if (r == SearchResult::sat) {
      model_.resize(num_vars());
      for (std::uint32_t v = 0; v < num_vars(); ++v) model_[v] = lit_value_[2 * v] == 1;
      cancel_until(0);
      return Status::satisfiable;
    }
    cancel_until(0);
    if (r == SearchResult::unsat) {
      ok_ = false;
      return Status::unsatisfiable;
    }
    return Status::timeout;
  }
}

void CdclSolver::heap_insert(std::uint32_t v) {
  heap_index_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

std::uint32_t CdclSolver::heap_pop() {
  std::uint32_t top = heap_.front();
  heap_index_[top] = -1;
  std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

void CdclSolver::heap_up(std::size_t i) {
  std::uint32_t v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<std::int64_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<std::int64_t>(i);
}

void CdclSolver::heap_down(std::size_t i) {
  std::uint32_t v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<std::int64_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<std::int64_t>(i);
}

}  // namespace projmc
