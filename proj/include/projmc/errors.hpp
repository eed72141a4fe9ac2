#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace projmc {

// Base of every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition of a library call. These indicate caller bugs.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid parameters or an unusable backend configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A SAT backend failed to produce an answer (crash, garbage output, ...).
class BackendError : public Error {
 public:
  BackendError(const std::string& what, std::string stderr_text = {})
      : Error(what), stderr_text_(std::move(stderr_text)) {}

  const std::string& stderr_text() const noexcept { return stderr_text_; }

 private:
  std::string stderr_text_;
};

// A SAT query exceeded its time budget. Never means "unsatisfiable".
class SolverTimeout : public Error {
 public:
  using Error::Error;
};

enum class AbortCause { timeout, backend };

inline const char* to_string(AbortCause cause) {
  return cause == AbortCause::timeout ? "timeout" : "backend";
}

}  // namespace projmc
