#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "projmc/formula.hpp"
#include "projmc/sat_backend.hpp"

namespace projmc {

/// Brute-force projected model counting, for tests and calibration only.
/// Shares nothing with the counter beyond the formula types.

inline constexpr std::uint32_t kTruthTableMaxVars = 24;
inline constexpr std::size_t kScopeSweepMaxScope = 24;

struct ExactCount {
  enum class Method { truth_table, scope_sweep };

  boost::multiprecision::cpp_int value = 0;
  Method method = Method::truth_table;
};

const char* to_string(ExactCount::Method method);

/// Enumerates all 2^total_vars assignments and counts the distinct scope
/// restrictions of the models. Throws ConfigError above 24 variables.
ExactCount truth_table_count(const Formula& f);

/// Counts the scope assignments that extend to a model, one satisfiability
/// check per scope assignment. Partial assignments found unsatisfiable are
/// not extended further. Throws ConfigError above 24 scope variables.
ExactCount scope_sweep_count(const Formula& f, const SatOracle& oracle);

/// truth_table when it applies, otherwise scope_sweep when an oracle is given.
ExactCount exact_projected_count(const Formula& f, const SatOracle* oracle = nullptr);

}  // namespace projmc
