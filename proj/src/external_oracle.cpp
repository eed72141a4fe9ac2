#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "projmc/dimacs.hpp"
#include "projmc/errors.hpp"
#include "projmc/sat_backend.hpp"

extern char** environ;

namespace projmc {
namespace {

// A mkstemp-created file removed on destruction.
class TempFile {
 public:
  explicit TempFile(const char* suffix) {
    std::string pattern = (std::filesystem::temp_directory_path() / "projmc-XXXXXX").string() + suffix;
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    fd_ = ::mkstemps(buf.data(), static_cast<int>(std::strlen(suffix)));
    if (fd_ < 0) throw BackendError(std::string("cannot create temporary file: ") + std::strerror(errno));
    path_ = buf.data();
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() {
    if (fd_ >= 0) ::close(fd_);
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

  int fd() const { return fd_; }
  const std::string& path() const { return path_; }

  void write_all(std::string_view data) {
    while (!data.empty()) {
      ssize_t n = ::write(fd_, data.data(), data.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        throw BackendError(std::string("cannot write solver input: ") + std::strerror(errno));
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
  }

  std::string read_all() const {
    std::ifstream in(path_, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

 private:
  int fd_ = -1;
  std::string path_;
};

struct ProcessResult {
  int exit_code = -1;
  int signal = 0;
  std::string out;
  std::string err;
};

ProcessResult run_process(const std::filesystem::path& binary, const std::vector<std::string>& args,
                          double timeout_seconds) {
  TempFile out(".out");
  TempFile err(".err");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out.fd(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err.fd(), STDERR_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

  std::vector<std::string> argv_storage;
  argv_storage.push_back(binary.string());
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  int rc = ::posix_spawn(&pid, binary.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw BackendError("cannot start " + binary.string() + ": " + std::strerror(rc));

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto pause = std::chrono::microseconds(20);
  int status = 0;
  for (;;) {
    pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) throw BackendError(std::string("waitpid failed: ") + std::strerror(errno));
    if (timeout_seconds > 0 && std::chrono::duration<double>(clock::now() - start).count() > timeout_seconds) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw SolverTimeout(binary.string() + " exceeded " + std::to_string(timeout_seconds) + " s");
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::microseconds(5000));
  }

  ProcessResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) result.signal = WTERMSIG(status);
  result.out = out.read_all();
  result.err = err.read_all();
  return result;
}

class ExternalSession final : public SatSession {
 public:
  ExternalSession(const Formula& f, const ExternalOptions& options, std::filesystem::path binary)
      : options_(options), binary_(std::move(binary)) {
    validate(f);
    loaded_ = options.native_xor ? normalize(f) : lower_xors(f, options.xor_chunk_width);
  }

  std::optional<Assignment> solve() override {
    ++stats_.queries;
    auto start = std::chrono::steady_clock::now();
    TempFile input(".cnf");
    input.write_all(to_dimacs(loaded_));
    std::vector<std::string> args = options_.extra_args;
    args.push_back(input.path());
    ProcessResult proc = run_process(binary_, args, options_.timeout_seconds);
    stats_.solve_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (proc.signal != 0)
      throw BackendError(binary_.string() + " terminated by signal " + std::to_string(proc.signal), proc.err);
    SolverOutput parsed = parse_solver_output(proc.out);
    if (parsed.verdict == SolverOutput::Verdict::unknown)
      throw BackendError(binary_.string() + " gave no verdict (exit code " + std::to_string(proc.exit_code) + ")",
                         proc.err);
    if (parsed.verdict == SolverOutput::Verdict::unsatisfiable) return std::nullopt;

    std::vector<bool> values(loaded_.total_vars, false);
    for (std::int64_t lit : parsed.values) {
      std::int64_t id = lit < 0 ? -lit : lit;
      if (id >= 1 && id <= loaded_.total_vars) values[static_cast<std::size_t>(id - 1)] = lit > 0;
    }
    Assignment model = Assignment::over_range(std::move(values));
    if (!evaluate(loaded_, model))
      throw BackendError(binary_.string() + " reported a model that violates the formula", proc.err);
    return model;
  }

  void add_clause(const Clause& c) override {
    for (const Literal& l : c.literals)
      if (l.var.id == 0 || l.var.id > loaded_.total_vars)
        throw ContractViolation("clause mentions variable " + std::to_string(l.var.id) +
                                " unknown to the session");
    ++stats_.added_clauses;
    loaded_.clauses.push_back(c);
  }

  const SessionStats& stats() const override { return stats_; }

 private:
  ExternalOptions options_;
  std::filesystem::path binary_;
  Formula loaded_;
  SessionStats stats_;
};

bool is_executable(const std::filesystem::path& p) {
  struct stat st{};
  return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
}

}  // namespace

std::optional<std::filesystem::path> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name.find('/') != std::string::npos) {
    if (is_executable(name)) return std::filesystem::absolute(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::string_view dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
  while (!dirs.empty()) {
    std::size_t colon = dirs.find(':');
    std::string_view dir = dirs.substr(0, colon);
    std::filesystem::path candidate = std::filesystem::path(dir.empty() ? "." : std::string(dir)) / name;
    if (is_executable(candidate)) return candidate;
    if (colon == std::string_view::npos) break;
    dirs.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

SolverOutput parse_solver_output(std::string_view text) {
  SolverOutput out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.size() < 2 || line[1] != ' ') continue;
    if (line[0] == 's') {
      std::string_view verdict = line.substr(2);
      while (!verdict.empty() && verdict.front() == ' ') verdict.remove_prefix(1);
      if (verdict.starts_with("SATISFIABLE"))
        out.verdict = SolverOutput::Verdict::satisfiable;
      else if (verdict.starts_with("UNSATISFIABLE"))
        out.verdict = SolverOutput::Verdict::unsatisfiable;
    } else if (line[0] == 'v') {
      std::string_view rest = line.substr(2);
      while (!rest.empty()) {
        while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
        if (rest.empty()) break;
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
        if (ec != std::errc()) break;
        rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
        if (value != 0) out.values.push_back(value);
      }
    }
  }
  return out;
}

ExternalOracle::ExternalOracle(ExternalOptions options) : options_(std::move(options)) {
  if (options_.binary.empty()) throw ConfigError("external backend needs a solver binary (--solver-bin)");
  auto found = find_executable(options_.binary);
  if (!found) throw ConfigError("solver binary not found or not executable: " + options_.binary);
  if (options_.xor_chunk_width < 3) throw ConfigError("XOR chunk width must be at least 3");
  if (options_.timeout_seconds < 0) throw ConfigError("timeout must be non-negative");
  binary_ = *found;
}

std::unique_ptr<SatSession> ExternalOracle::open_session(const Formula& f) const {
  if (!is_executable(binary_)) throw ConfigError("solver binary not found or not executable: " + binary_.string());
  return std::make_unique<ExternalSession>(f, options_, binary_);
}

std::unique_ptr<SatOracle> make_oracle(const BackendConfig& config) {
  if (config.backend == "builtin")
    return std::make_unique<BuiltinOracle>(BuiltinOptions{config.xor_chunk_width, config.timeout_seconds});
  if (config.backend == "external")
    return std::make_unique<ExternalOracle>(ExternalOptions{config.solver_binary, config.solver_args,
                                                            config.native_xor, config.xor_chunk_width,
                                                            config.timeout_seconds});
  throw ConfigError("unknown backend '" + config.backend + "' (expected builtin or external)");
}

}  // namespace projmc
