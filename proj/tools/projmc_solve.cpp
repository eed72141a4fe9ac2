// Stand-alone DIMACS solver over the built-in CDCL engine. Accepts `x` XOR
// lines and answers in SAT-competition format (exit 10 sat, 20 unsat).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "projmc/cdcl_solver.hpp"
#include "projmc/dimacs.hpp"
#include "projmc/errors.hpp"
#include "projmc/sat_backend.hpp"

namespace {

// Replaces the XOR system by its reduced row echelon form: equivalent,
// independent and usually much shorter rows before the CNF lowering.
void reduce_xors(projmc::Formula& f) {
  const std::size_t words = (f.total_vars + 64) / 64;
  struct Row {
    std::vector<std::uint64_t> bits;
    bool parity;
  };
  std::vector<Row> rows;
  for (const projmc::XorConstraint& x : f.xors) {
    Row r{std::vector<std::uint64_t>(words, 0), x.parity};
    for (projmc::Variable v : x.variables) r.bits[v.id / 64] ^= std::uint64_t{1} << (v.id % 64);
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (std::uint32_t v = 1; v <= f.total_vars && rank < rows.size(); ++v) {
    const std::size_t w = v / 64;
    const std::uint64_t mask = std::uint64_t{1} << (v % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot].bits[w] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || !(rows[i].bits[w] & mask)) continue;
      for (std::size_t k = 0; k < words; ++k) rows[i].bits[k] ^= rows[rank].bits[k];
      rows[i].parity ^= rows[rank].parity;
    }
    ++rank;
  }
  f.xors.clear();
  for (std::size_t i = 0; i < rank; ++i) {
    projmc::XorConstraint x;
    x.parity = rows[i].parity;
    for (std::uint32_t v = 1; v <= f.total_vars; ++v)
      if (rows[i].bits[v / 64] >> (v % 64) & 1) x.variables.push_back(projmc::Variable{v});
    f.xors.push_back(std::move(x));
  }
  // Rows past the rank are empty; one with parity 1 reads 0 = 1.
  for (std::size_t i = rank; i < rows.size(); ++i)
    if (rows[i].parity) {
      f.xors.push_back(projmc::XorConstraint{{}, true});
      break;
    }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: projmc-solve <file.cnf>\n";
    return 1;
  }
  try {
    projmc::Formula f = projmc::parse_dimacs_file(argv[1], projmc::DimacsDialect::cnf_with_xor);
    reduce_xors(f);
    f = projmc::lower_xors(f);
    projmc::CdclSolver solver;
    solver.ensure_vars(f.total_vars);
    for (const projmc::Clause& c : f.clauses) solver.add_clause(c);
    if (solver.solve() != projmc::CdclSolver::Status::satisfiable) {
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    }
    const auto& model = solver.model();
    std::string line = "v";
    std::cout << "s SATISFIABLE\n";
    for (std::uint32_t v = 1; v <= f.num_vars; ++v) {
      line += ' ';
      line += std::to_string(model[v - 1] ? static_cast<long>(v) : -static_cast<long>(v));
      if (line.size() > 70) {
        std::cout << line << "\n";
        line = "v";
      }
    }
    std::cout << line << " 0\n";
    return 10;
  } catch (const projmc::ParseError& e) {
    std::cerr << "c parse error line " << e.line() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "c error: " << e.what() << "\n";
    return 1;
  }
}
