#include "projmc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "projmc/calibration.hpp"
#include "projmc/counter.hpp"
#include "projmc/dimacs.hpp"
#include "projmc/errors.hpp"
#include "projmc/generators.hpp"
#include "projmc/reports.hpp"

namespace projmc {
namespace {

namespace fs = std::filesystem;

struct BackendFlags {
  std::string backend = "builtin";
  std::string solver_bin;
  std::vector<std::string> solver_args;
  bool native_xor = false;
  std::size_t xor_width = kDefaultXorChunkWidth;
  double timeout = 0.0;

  void attach(CLI::App& app) {
    app.add_option("--backend", backend, "SAT backend")->check(CLI::IsMember({"builtin", "external"}));
    app.add_option("--solver-bin", solver_bin,
                   std::string("external solver binary (default: $") + kSolverEnvVar + ")");
    app.add_option("--solver-arg", solver_args, "extra argument passed to the external solver (repeatable)");
    app.add_flag("--native-xor", native_xor, "pass XOR constraints to the external solver as x lines");
    app.add_option("--xor-width", xor_width, "chunk width for CNF translation of XORs")->check(CLI::Range(3, 16));
    app.add_option("--timeout", timeout, "per-query solver timeout in seconds (0: none)")
        ->check(CLI::NonNegativeNumber);
  }

  BackendConfig config() const {
    BackendConfig b;
    b.backend = backend;
    b.solver_binary = solver_bin;
    if (b.solver_binary.empty())
      if (const char* env = std::getenv(kSolverEnvVar)) b.solver_binary = env;
    b.solver_args = solver_args;
    b.native_xor = native_xor;
    b.xor_chunk_width = xor_width;
    b.timeout_seconds = timeout;
    return b;
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Variable> parse_scope_list(const std::string& text, std::uint32_t num_vars) {
  std::vector<Variable> scope;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long id = 0;
    try {
      id = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || id == 0 || id > num_vars)
      throw ConfigError("scope entry '" + item + "' is not a variable in 1.." + std::to_string(num_vars));
    scope.push_back(Variable{static_cast<std::uint32_t>(id)});
  }
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  return scope;
}

BigInt parse_big(const std::string& text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ConfigError("lower bound must be a positive decimal integer, got '" + text + "'");
  return BigInt(text);
}

std::string format_log2(const BigInt& x) {
  auto l = log2_of(x);
  if (!l) return "-inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << *l;
  return s.str();
}

// Used only when no --seed is given; the report always echoes the seed.
std::uint64_t fresh_seed() {
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) ^ rd();
}

struct CountFlags {
  std::string input;
  double epsilon = 0.5;
  double delta = 0.14;
  std::optional<std::uint64_t> seed;
  std::string scope;
  std::string lower_bound;
  bool parallel = false;
  unsigned threads = 0;
  bool json = false;
  bool timing = false;
  BackendFlags backend;
};

int run_count(const CountFlags& flags, std::ostream& out, std::ostream& err) {
  RunInfo info;
  info.input_path = flags.input;
  Formula formula;
  try {
    const std::string text = read_file(flags.input);
    info.input_hash = fnv1a64(text);
    formula = parse_dimacs(text);
    if (!flags.scope.empty()) {
      formula.scope = parse_scope_list(flags.scope, formula.num_vars);
      info.scope_overridden = true;
    }
    info.config.epsilon = flags.epsilon;
    info.config.delta = flags.delta;
    info.config.seed = flags.seed ? *flags.seed : fresh_seed();
    info.config.parallel_repetitions = flags.parallel;
    info.config.max_threads = flags.threads;
    if (!flags.lower_bound.empty()) info.config.warm_start_lower_bound = parse_big(flags.lower_bound);
    validate(info.config);
  } catch (const ParseError& e) {
    err << "projmc: " << flags.input << ":" << e.line() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "projmc: " << e.what() << "\n";
    return kExitUsage;
  }
  info.formula = &formula;
  info.backend = flags.backend.config();

  std::unique_ptr<SatOracle> oracle;
  try {
    oracle = make_oracle(info.backend);
  } catch (const ConfigError& e) {
    err << "projmc: backend error: " << e.what() << "\n";
    return kExitBackend;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    info.result = main_count(formula, info.config, *oracle);
  } catch (const CountAborted& e) {
    info.partial_traces = e.traces();
    info.error = e.what();
    if (e.cause() == AbortCause::timeout) {
      info.status = "timeout";
      code = kExitTimeout;
    } else {
      info.status = "backend_error";
      code = kExitBackend;
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (flags.timing) info.wall_seconds = wall;

  if (flags.json) out << run_report_json(info).dump(2) << "\n";
  if (code != kExitOk) {
    err << "projmc: " << info.status << ": " << info.error << "\n";
    return code;
  }
  if (!flags.json) {
    const CountResult& r = *info.result;
    out << (r.exact ? "exact " : "approx ") << r.estimate.str() << "\n";
    out << "log2 " << format_log2(r.estimate) << "\n";
    out << "pivot " << r.pivot << " t " << r.t << " seed " << r.seed << "\n";
    if (r.any_emergency_stop) out << "warning: a repetition stopped at the m bound; tolerance not guaranteed\n";
    out << "time " << std::fixed << std::setprecision(3) << wall << " s\n";
  }
  return kExitOk;
}

struct CalibrateFlags {
  std::string corpus;
  std::vector<std::string> gen;
  std::uint64_t trials = 100;
  double epsilon = 0.5;
  double delta = 0.14;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double fail_below = -1.0;
  bool json = false;
  BackendFlags backend;
};

int run_calibrate(const CalibrateFlags& flags, std::ostream& out, std::ostream& err) {
  std::vector<CalibrationInput> inputs;
  std::vector<SkippedInput> unreadable;
  try {
    if (!flags.corpus.empty()) {
      if (!fs::is_directory(flags.corpus)) throw ConfigError("corpus is not a directory: " + flags.corpus);
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(flags.corpus))
        if (entry.is_regular_file() && entry.path().extension() == ".cnf") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const fs::path& p : files) {
        try {
          inputs.push_back({p.filename().string(), parse_dimacs_file(p)});
        } catch (const Error& e) {
          unreadable.push_back({p.filename().string(), e.what()});
        }
      }
    }
    for (const std::string& text : flags.gen) {
      GeneratorSpec spec = parse_generator_spec(text);
      std::uint64_t copies = spec.get("n", 1);
      spec.params.erase("n");
      const std::uint64_t first_seed = spec.get("seed", flags.seed);
      spec.params.erase("seed");
      for (std::uint64_t i = 0; i < copies; ++i) {
        GeneratedInstance inst = generate(spec, first_seed + i);
        inputs.push_back({inst.spec.to_string() + "#seed=" + std::to_string(inst.seed), std::move(inst.formula)});
      }
    }
    if (inputs.empty()) throw ConfigError("calibrate needs --corpus or --gen");
  } catch (const ConfigError& e) {
    err << "projmc: " << e.what() << "\n";
    return kExitUsage;
  }

  BackendConfig backend = flags.backend.config();
  std::unique_ptr<SatOracle> oracle;
  try {
    oracle = make_oracle(backend);
  } catch (const ConfigError& e) {
    err << "projmc: backend error: " << e.what() << "\n";
    return kExitBackend;
  }

  CalibrationOptions options;
  options.epsilon = flags.epsilon;
  options.delta = flags.delta;
  options.trials = flags.trials;
  options.master_seed = flags.seed;
  options.workers = flags.workers;
  CalibrationReport report;
  try {
    report = calibrate(inputs, options, *oracle);
  } catch (const ConfigError& e) {
    err << "projmc: " << e.what() << "\n";
    return kExitUsage;
  }
  report.skipped.insert(report.skipped.begin(), unreadable.begin(), unreadable.end());
  for (const SkippedInput& s : report.skipped) err << "warning: skipped " << s.name << ": " << s.reason << "\n";

  if (flags.json) {
    out << calibration_report_json(report, backend).dump(2) << "\n";
  } else {
    out << std::fixed << std::setprecision(4);
    for (const FormulaCoverage& f : report.formulas)
      out << f.name << "  count " << f.true_count.str() << "  coverage " << f.coverage << " (" << f.in_tolerance
          << "/" << f.trials << ")\n";
    out << "aggregate coverage " << report.coverage << " (" << report.in_tolerance << "/" << report.trials
        << "), 95% CI [" << report.interval.low << ", " << report.interval.high << "], target " << report.target()
        << "\n";
  }
  if (flags.fail_below >= 0 && report.coverage < flags.fail_below) {
    err << "projmc: aggregate coverage " << report.coverage << " is below " << flags.fail_below << "\n";
    return kExitBelowThreshold;
  }
  return kExitOk;
}

struct GenFlags {
  std::string spec;
  std::string out;
  std::string manifest;
  std::uint64_t seed = 0;
};

int run_gen(const GenFlags& flags, std::ostream& out, std::ostream& err) {
  GeneratedInstance inst;
  try {
    inst = generate(parse_generator_spec(flags.spec), flags.seed);
  } catch (const ConfigError& e) {
    err << "projmc: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string text = to_dimacs(inst.formula);
  if (flags.out.empty()) {
    out << text;
    return kExitOk;
  }
  fs::path cnf(flags.out);
  fs::path manifest = flags.manifest.empty() ? fs::path(cnf).replace_extension(".json") : fs::path(flags.manifest);
  std::ofstream(cnf, std::ios::binary) << text;
  std::ofstream(manifest, std::ios::binary) << manifest_json(inst, fnv1a64(text)).dump(2) << "\n";
  if (!fs::exists(cnf) || !fs::exists(manifest)) {
    err << "projmc: cannot write " << cnf.string() << "\n";
    return kExitUsage;
  }
  out << "wrote " << cnf.string() << " (projected count " << inst.projected_count.str() << ")\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate projected model counting with XOR hashing", "projmc"};
  app.require_subcommand(1);

  CountFlags count;
  CLI::App* count_cmd = app.add_subcommand("count", "estimate the projected model count of a DIMACS file");
  count_cmd->add_option("input", count.input, "DIMACS CNF file with optional c ind lines")->required();
  count_cmd->add_option("--epsilon", count.epsilon, "tolerance in (0, 1]");
  count_cmd->add_option("--delta", count.delta, "1 - confidence, in (0, 1)");
  count_cmd->add_option("--seed", count.seed, "random seed (default: fresh, reported)");
  count_cmd->add_option("--scope", count.scope, "projection scope override, e.g. 1,2,5");
  count_cmd->add_option("--lower-bound", count.lower_bound, "known lower bound on the count (warm start)");
  count_cmd->add_flag("--parallel", count.parallel, "run repetitions on several threads");
  count_cmd->add_option("--threads", count.threads, "thread cap for --parallel (0: all cores)");
  count_cmd->add_flag("--json", count.json, "print the run report as JSON");
  count_cmd->add_flag("--timing", count.timing, "include wall time in the JSON report");
  count.backend.attach(*count_cmd);

  CalibrateFlags cal;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "measure empirical coverage against exact counts");
  cal_cmd->add_option("--corpus", cal.corpus, "directory of .cnf files");
  cal_cmd->add_option("--gen", cal.gen, "generator spec family:key=val,... (repeatable; n=<copies>)");
  cal_cmd->add_option("--trials", cal.trials, "trials per formula")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--epsilon", cal.epsilon, "tolerance in (0, 1]");
  cal_cmd->add_option("--delta", cal.delta, "1 - confidence, in (0, 1)");
  cal_cmd->add_option("--seed", cal.seed, "master seed");
  cal_cmd->add_option("--workers", cal.workers, "threads for trials")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--fail-below", cal.fail_below, "exit 4 if aggregate coverage is below this");
  cal_cmd->add_flag("--json", cal.json, "print the calibration report as JSON");
  cal.backend.attach(*cal_cmd);

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a benchmark with a known projected count");
  gen_cmd->add_option("spec", gen.spec, "free-k:k=..,aux=..,units=.. | parity-chain:k=..,links=.. | "
                                        "random-3cnf:vars=..,clauses=..,scope=..")
      ->required();
  gen_cmd->add_option("--out,-o", gen.out, "output .cnf path (stdout if omitted)");
  gen_cmd->add_option("--manifest", gen.manifest, "manifest path (default: output with .json)");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (count_cmd->parsed()) return run_count(count, out, err);
    if (cal_cmd->parsed()) return run_calibrate(cal, out, err);
    return run_gen(gen, out, err);
  } catch (const Error& e) {
    err << "projmc: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace projmc
