#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "projmc/counter.hpp"
#include "projmc/exact_oracle.hpp"
#include "projmc/formula.hpp"
#include "projmc/sat_backend.hpp"

namespace projmc {

struct CalibrationInput {
  std::string name;
  Formula formula;
};

struct CalibrationOptions {
  double epsilon = 0.5;
  double delta = 0.14;
  std::uint64_t trials = 100;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
};

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  BigInt estimate = 0;
  bool exact = false;
  bool aborted = false;
  bool in_tolerance = false;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

struct FormulaCoverage {
  std::string name;
  BigInt true_count = 0;
  ExactCount::Method method = ExactCount::Method::truth_table;
  std::uint64_t trials = 0;
  std::uint64_t in_tolerance = 0;
  double coverage = 0.0;
  Interval interval;
  std::vector<TrialRecord> records;
};

struct SkippedInput {
  std::string name;
  std::string reason;
};

struct CalibrationReport {
  CalibrationOptions options;
  std::uint64_t pivot = 0;
  std::uint64_t t = 0;
  std::vector<FormulaCoverage> formulas;
  std::vector<SkippedInput> skipped;
  std::uint64_t trials = 0;
  std::uint64_t in_tolerance = 0;
  double coverage = 0.0;
  Interval interval;

  double target() const { return 1.0 - options.delta; }
};

/// 95% Wilson score interval for successes/trials.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// Seed of trial `trial` on formula number `formula_index`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t formula_index, std::uint64_t trial);

/// Runs main_count `trials` times per formula against its exact count.
/// Formulas the exact oracle refuses are listed as skipped. The report does
/// not depend on `workers`.
CalibrationReport calibrate(const std::vector<CalibrationInput>& inputs, const CalibrationOptions& options,
                            const SatOracle& oracle);

}  // namespace projmc
