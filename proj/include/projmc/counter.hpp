#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "projmc/errors.hpp"
#include "projmc/formula.hpp"
#include "projmc/random.hpp"
#include "projmc/sat_backend.hpp"

namespace projmc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct CounterConfig {
  double epsilon = 0.5;  // tolerance, in (0, 1]
  double delta = 0.14;   // 1 - confidence, in (0, 1)
  int r = 3;             // independence degree of the hash family
  std::uint64_t seed = 0;
  std::optional<BigInt> warm_start_lower_bound;  // known L <= projected count
  bool parallel_repetitions = false;
  unsigned max_threads = 0;  // 0: hardware concurrency
};

/// Throws ConfigError unless epsilon ∈ (0,1], delta ∈ (0,1), r = 3 and any
/// lower bound is at least 1.
void validate(const CounterConfig& cfg);

/// One bucket-size probe inside a Core run.
struct CoreStep {
  std::uint32_t m = 0;
  std::uint64_t cell_count = 0;  // min(|cell|, pivot + 1)
  std::uint64_t sat_queries = 0;
};

struct CoreTrace {
  std::uint32_t final_m = 0;
  std::uint64_t cell_count = 0;
  BigInt estimate = 0;  // cell_count * 2^final_m
  bool emergency_stop = false;  // left via the m bound with cell_count > pivot
  std::uint64_t sat_queries = 0;
  std::vector<CoreStep> steps;
  bool aborted = false;  // partial trace of a run cut short by the backend
};

struct CountResult {
  BigInt estimate = 0;
  bool exact = false;
  std::uint64_t pivot = 0;
  std::uint64_t t = 0;
  std::vector<CoreTrace> traces;  // by repetition index; empty when exact
  std::uint64_t seed = 0;
  bool any_emergency_stop = false;
  std::uint64_t exact_gate_queries = 0;
};

/// A count cut short by a timeout or backend failure. Carries the traces of
/// the repetitions that ran (the interrupted one last, marked aborted).
class CountAborted : public Error {
 public:
  CountAborted(AbortCause cause, std::vector<CoreTrace> traces, const std::string& what)
      : Error(what), cause_(cause), traces_(std::move(traces)) {}

  AbortCause cause() const noexcept { return cause_; }
  const std::vector<CoreTrace>& traces() const noexcept { return traces_; }

 private:
  AbortCause cause_;
  std::vector<CoreTrace> traces_;
};

/// ⌈2·r·(1+ε)·∛e / ε²⌉, evaluated with 50 significant digits.
std::uint64_t compute_pivot(double epsilon, int r = 3);

/// Head probability e^⌊−r/2⌋ of a failed Core run, as the fixed 40-digit
/// decimal rational used by compute_t.
Rational core_failure_probability(int r = 3);

/// Σ_{k=⌈n/2⌉}^{n} C(n,k)·p^k·(1−p)^{n−k} with p = core_failure_probability(r), exactly.
Rational median_failure_probability(std::uint64_t n, int r = 3);

/// Smallest n ≥ 1 with δ ≥ median_failure_probability(n). The comparison is
/// exact (δ is taken as the exact binary value of the double).
std::uint64_t compute_t(double delta, int r = 3);

/// Closed-form upper bound on compute_t from the geometric tail estimate.
std::uint64_t t_upper_bound(double delta, int r = 3);

/// Smallest integer k with 2^k ≥ x, for rational x > 0.
std::int64_t ceil_log2(const Rational& x);

/// max(0, ⌈log₂((1+ε)·L/pivot)⌉) for a lower bound L ≥ 1.
std::uint32_t warm_start_m(const BigInt& lower_bound, double epsilon, std::uint64_t pivot);

/// ⌈log₂((1+ε)·2ⁿ/pivot)⌉: Core gives up once m exceeds this.
std::int64_t emergency_m_bound(std::size_t scope_size, double epsilon, std::uint64_t pivot);

/// One Core run: for m = first, first+1, ... sample h with m rows, count the
/// cell h = 1^m up to pivot+1, stop at a count ≤ pivot or past the m bound.
/// The first m is max(1, warm_start_m(L)) with a lower bound, else 1.
/// Requires a non-empty scope.
CoreTrace core_estimate(const Formula& f, const CounterConfig& cfg, RandomSource& rng, const SatOracle& oracle);

/// Exact below the pivot; otherwise the lower median of t Core runs, run i
/// drawing from sub-stream i of cfg.seed.
CountResult main_count(const Formula& f, const CounterConfig& cfg, const SatOracle& oracle);

/// (1−ε)·truth ≤ estimate ≤ (1+ε)·truth, evaluated exactly.
bool within_tolerance(const BigInt& estimate, const BigInt& truth, double epsilon);

/// Exact rational value of a finite double.
Rational exact_rational(double x);

}  // namespace projmc
