#include "projmc/dimacs.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "projmc/errors.hpp"

namespace projmc {
namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::int64_t parse_int(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  return value;
}

class Parser {
 public:
  Parser(std::string_view text, DimacsDialect dialect) : text_(text), dialect_(dialect) {}

  Formula run() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos, end - pos);
      ++line_no;
      pos = end + 1;
      if (!handle_line(line, line_no)) break;
      if (end == text_.size()) break;
    }
    if (!header_) throw ParseError(line_no, "missing 'p cnf' header");
    if (!pending_.empty()) throw ParseError(line_no, "clause not terminated by 0");
    finish(line_no);
    return std::move(formula_);
  }

 private:
  // Returns false when parsing should stop (SATLIB '%' end marker).
  bool handle_line(std::string_view line, std::size_t line_no) {
    auto tokens = split_tokens(line);
    if (tokens.empty()) return true;
    std::string_view head = tokens.front();
    if (head.front() == 'c') {
      if (head == "c" && tokens.size() >= 2 && tokens[1] == "ind") scope_line(tokens, line_no);
      return true;
    }
    if (head == "%") return false;
    if (head == "p") {
      header_line(tokens, line_no);
      return true;
    }
    if (head == "x" || (head.front() == 'x' && head.size() > 1)) {
      if (dialect_ != DimacsDialect::cnf_with_xor)
        throw ParseError(line_no, "XOR lines are not accepted in CNF input");
      xor_line(tokens, line_no);
      return true;
    }
    if (!header_) throw ParseError(line_no, "clause before 'p cnf' header");
    for (std::string_view tok : tokens) {
      std::int64_t v = parse_int(tok, line_no);
      if (v == 0) {
        formula_.clauses.push_back(Clause{std::move(pending_)});
        pending_.clear();
      } else {
        pending_.push_back(literal(v, line_no));
      }
    }
    return true;
  }

  void header_line(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    if (header_) throw ParseError(line_no, "duplicate 'p' header");
    if (tokens.size() != 4 || tokens[1] != "cnf")
      throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
    std::int64_t vars = parse_int(tokens[2], line_no);
    std::int64_t clauses = parse_int(tokens[3], line_no);
    if (vars < 0 || vars > UINT32_MAX - 1 || clauses < 0)
      throw ParseError(line_no, "malformed header, negative or oversized counts");
    header_ = true;
    formula_.num_vars = static_cast<std::uint32_t>(vars);
    formula_.total_vars = formula_.num_vars;
    formula_.clauses.reserve(static_cast<std::size_t>(std::min<std::int64_t>(clauses, 1 << 24)));
  }

  void scope_line(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    saw_scope_ = true;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      std::int64_t v = parse_int(tokens[i], line_no);
      if (v == 0) break;
      if (v < 0) throw ParseError(line_no, "negative variable in scope line");
      if (v > UINT32_MAX) throw ParseError(line_no, "variable out of range");
      scope_.emplace_back(static_cast<std::uint32_t>(v), line_no);
    }
  }

  void xor_line(const std::vector<std::string_view>& tokens, std::size_t line_no) {
    if (!header_) throw ParseError(line_no, "XOR before 'p cnf' header");
    XorConstraint x{{}, true};
    std::vector<std::string_view> rest(tokens.begin() + 1, tokens.end());
    if (tokens[0].size() > 1) rest.insert(rest.begin(), tokens[0].substr(1));
    bool terminated = false;
    for (std::string_view tok : rest) {
      std::int64_t v = parse_int(tok, line_no);
      if (v == 0) {
        terminated = true;
        break;
      }
      Literal l = literal(v, line_no);
      if (l.negated) x.parity = !x.parity;
      x.variables.push_back(l.var);
    }
    if (!terminated) throw ParseError(line_no, "XOR line not terminated by 0");
    formula_.xors.push_back(std::move(x));
  }

  Literal literal(std::int64_t v, std::size_t line_no) const {
    std::int64_t id = v < 0 ? -v : v;
    if (id > formula_.num_vars)
      throw ParseError(line_no, "variable " + std::to_string(id) + " out of range 1.." +
                                    std::to_string(formula_.num_vars));
    return Literal::from_dimacs(v);
  }

  void finish(std::size_t) {
    if (!saw_scope_) {
      formula_.scope = Formula::over(formula_.num_vars).scope;
      return;
    }
    for (auto [id, line] : scope_)
      if (id > formula_.num_vars)
        throw ParseError(line, "scope variable " + std::to_string(id) + " out of range 1.." +
                                   std::to_string(formula_.num_vars));
    std::vector<Variable> scope;
    scope.reserve(scope_.size());
    for (auto [id, line] : scope_) scope.push_back(Variable{id});
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    formula_.scope = std::move(scope);
  }

  std::string_view text_;
  DimacsDialect dialect_;
  Formula formula_;
  bool header_ = false;
  bool saw_scope_ = false;
  std::vector<std::pair<std::uint32_t, std::size_t>> scope_;
  std::vector<Literal> pending_;
};

}  // namespace

Formula parse_dimacs(std::string_view text, DimacsDialect dialect) {
  return Parser(text, dialect).run();
}

Formula parse_dimacs_file(const std::filesystem::path& path, DimacsDialect dialect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dimacs(buf.str(), dialect);
}

std::string to_dimacs(const Formula& f) {
  std::size_t constraint_count = f.clauses.size();
  for (const XorConstraint& x : f.xors)
    if (!x.variables.empty() || x.parity) ++constraint_count;
  std::ostringstream out;
  out << "p cnf " << f.total_vars << ' ' << constraint_count << '\n';
  out << "c ind";
  for (Variable v : f.scope) out << ' ' << v.id;
  out << " 0\n";
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c.literals) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
  for (const XorConstraint& x : f.xors) {
    if (x.variables.empty()) {
      if (x.parity) out << "0\n";
      continue;
    }
    out << 'x';
    for (std::size_t i = 0; i < x.variables.size(); ++i) {
      // An even parity is expressed by negating the first literal.
      bool negate = i == 0 && !x.parity;
      out << ' ' << (negate ? "-" : "") << x.variables[i].id;
    }
    out << " 0\n";
  }
  return out.str();
}

}  // namespace projmc
