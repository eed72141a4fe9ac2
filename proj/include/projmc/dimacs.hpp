#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "projmc/formula.hpp"

namespace projmc {

enum class DimacsDialect {
  cnf,           // user input: plain CNF plus `c ind` scope lines
  cnf_with_xor,  // additionally accepts `x` XOR lines (solver-side input)
};

/// Parses DIMACS CNF. The projection scope is the union of all
/// `c ind v1 v2 ... 0` lines; without any such line the scope is every
/// variable. Throws ParseError naming the offending line.
Formula parse_dimacs(std::string_view text, DimacsDialect dialect = DimacsDialect::cnf);
Formula parse_dimacs_file(const std::filesystem::path& path, DimacsDialect dialect = DimacsDialect::cnf);

/// Serializes a formula. XOR constraints are written as `x` lines, whose
/// literals XOR to true; constant XORs become an empty clause or vanish.
/// The scope is always written as a `c ind` line so that re-parsing gives the
/// same scope. The header variable count is `total_vars`.
std::string to_dimacs(const Formula& f);

}  // namespace projmc
