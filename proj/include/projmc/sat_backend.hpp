#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "projmc/formula.hpp"

namespace projmc {

struct SessionStats {
  std::uint64_t queries = 0;
  std::uint64_t added_clauses = 0;
  std::uint64_t conflicts = 0;
  double solve_seconds = 0.0;
};

/// One incremental solving context. Clauses are only ever added.
/// Single-owner; not safe to share between threads.
class SatSession {
 public:
  virtual ~SatSession() = default;

  /// A model total over {1..total_vars} of the loaded formula (auxiliary
  /// variables included), or nullopt when no model exists.
  /// Throws SolverTimeout or BackendError; neither is ever reported as unsat.
  virtual std::optional<Assignment> solve() = 0;
  virtual void add_clause(const Clause& c) = 0;
  virtual const SessionStats& stats() const = 0;
};

/// A SAT oracle: a factory for sessions. open_session is safe to call
/// concurrently.
class SatOracle {
 public:
  virtual ~SatOracle() = default;

  virtual std::string name() const = 0;
  virtual bool native_xor() const = 0;
  virtual std::unique_ptr<SatSession> open_session(const Formula& f) const = 0;
};

inline constexpr std::size_t kDefaultXorChunkWidth = 4;

struct XorTranslation {
  std::vector<Clause> clauses;
  std::uint32_t next_aux_id = 0;
};

/// Tseitin translation of XOR constraints. Each XOR over more than `width`
/// variables is cut into a chain of XORs of width ≤ width linked by fresh
/// variables numbered from `next_aux_id`; each width-j piece becomes the
/// 2^(j-1) clauses excluding its wrong-parity assignments. The auxiliary
/// variables are functionally determined, so models over the original
/// variables are preserved one-to-one. Requires width ≥ 3.
XorTranslation translate_xors(std::span<const XorConstraint> xors, std::uint32_t next_aux_id,
                              std::size_t width = kDefaultXorChunkWidth);

/// f with its XORs replaced by CNF; total_vars grows to cover the auxiliaries.
Formula lower_xors(const Formula& f, std::size_t width = kDefaultXorChunkWidth);

struct BuiltinOptions {
  std::size_t xor_chunk_width = kDefaultXorChunkWidth;
  double timeout_seconds = 0.0;  // per solve(); 0 disables
};

/// In-process CDCL backend; XORs are translated to CNF when a session opens.
class BuiltinOracle final : public SatOracle {
 public:
  explicit BuiltinOracle(BuiltinOptions options = {});

  std::string name() const override { return "builtin"; }
  bool native_xor() const override { return false; }
  std::unique_ptr<SatSession> open_session(const Formula& f) const override;

 private:
  BuiltinOptions options_;
};

struct ExternalOptions {
  std::string binary;  // path, or a bare name looked up on PATH
  std::vector<std::string> extra_args;
  bool native_xor = false;  // pass XORs as `x` lines instead of translating
  std::size_t xor_chunk_width = kDefaultXorChunkWidth;
  double timeout_seconds = 0.0;
};

/// Runs `<binary> [extra_args...] <dimacs-file>` once per solve() and reads
/// SAT-competition output (`s SATISFIABLE` / `s UNSATISFIABLE`, `v` lines).
class ExternalOracle final : public SatOracle {
 public:
  /// Throws ConfigError when the binary cannot be found or executed.
  explicit ExternalOracle(ExternalOptions options);

  std::string name() const override { return "external"; }
  bool native_xor() const override { return options_.native_xor; }
  std::unique_ptr<SatSession> open_session(const Formula& f) const override;

  const std::filesystem::path& resolved_binary() const { return binary_; }

 private:
  ExternalOptions options_;
  std::filesystem::path binary_;
};

/// Result of parsing SAT-competition solver output.
struct SolverOutput {
  enum class Verdict { satisfiable, unsatisfiable, unknown } verdict = Verdict::unknown;
  std::vector<std::int64_t> values;  // literals from `v` lines, without the 0 terminator
};

SolverOutput parse_solver_output(std::string_view text);

/// Looks up a solver binary: paths containing '/' are checked directly,
/// bare names are searched on PATH. Returns nullopt if not executable.
std::optional<std::filesystem::path> find_executable(const std::string& name);

struct BackendConfig {
  std::string backend = "builtin";  // builtin | external
  std::string solver_binary;        // external only
  std::vector<std::string> solver_args;
  bool native_xor = false;
  double timeout_seconds = 0.0;
  std::size_t xor_chunk_width = kDefaultXorChunkWidth;
};

/// Builds the configured oracle. Throws ConfigError on unknown backends or a
/// missing binary.
std::unique_ptr<SatOracle> make_oracle(const BackendConfig& config);

}  // namespace projmc
