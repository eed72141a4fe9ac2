#include "projmc/reports.hpp"

#include <cmath>
#include <cstdio>

namespace projmc {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::optional<double> log2_of(const BigInt& x) {
  if (x <= 0) return std::nullopt;
  const auto top = static_cast<long>(boost::multiprecision::msb(x));
  const long shift = std::max(0L, top - 62);
  const auto head = static_cast<std::uint64_t>(x >> static_cast<unsigned>(shift));
  return std::log2(static_cast<double>(head)) + static_cast<double>(shift);
}

namespace {

std::string big(const BigInt& x) { return x.str(); }

Json formula_json(const Formula& f) {
  Json j;
  j["num_vars"] = f.num_vars;
  j["clauses"] = f.clauses.size();
  j["scope_size"] = f.scope.size();
  return j;
}

Json backend_json(const BackendConfig& b) {
  Json j;
  j["name"] = b.backend;
  if (b.backend == "external") {
    j["solver_bin"] = b.solver_binary;
    j["solver_args"] = b.solver_args;
    j["native_xor"] = b.native_xor;
  }
  j["xor_chunk_width"] = b.xor_chunk_width;
  j["timeout_seconds"] = b.timeout_seconds;
  return j;
}

}  // namespace

Json trace_json(std::size_t index, const CoreTrace& trace) {
  Json j;
  j["index"] = index;
  j["final_m"] = trace.final_m;
  j["cell_count"] = trace.cell_count;
  j["estimate"] = big(trace.estimate);
  j["emergency_stop"] = trace.emergency_stop;
  j["sat_queries"] = trace.sat_queries;
  j["aborted"] = trace.aborted;
  Json steps = Json::array();
  for (const CoreStep& s : trace.steps) steps.push_back(Json::array({s.m, s.cell_count, s.sat_queries}));
  j["steps"] = std::move(steps);
  return j;
}

Json run_report_json(const RunInfo& info) {
  Json j;
  j["report"] = "projmc.count";
  j["version"] = 1;

  Json input;
  input["path"] = info.input_path;
  input["fnv1a64"] = hex64(info.input_hash);
  if (info.formula) {
    input.update(formula_json(*info.formula));
    if (info.scope_overridden) {
      Json scope = Json::array();
      for (Variable v : info.formula->scope) scope.push_back(v.id);
      input["scope"] = std::move(scope);
    }
  }
  j["input"] = std::move(input);

  Json config;
  config["epsilon"] = info.config.epsilon;
  config["delta"] = info.config.delta;
  config["r"] = info.config.r;
  config["seed"] = info.config.seed;
  config["lower_bound"] = info.config.warm_start_lower_bound ? Json(big(*info.config.warm_start_lower_bound)) : Json();
  config["backend"] = backend_json(info.backend);
  j["config"] = std::move(config);

  j["status"] = info.status;
  if (!info.error.empty()) j["error"] = info.error;

  if (info.result) {
    const CountResult& r = *info.result;
    Json res;
    res["estimate"] = big(r.estimate);
    res["exact"] = r.exact;
    auto l2 = log2_of(r.estimate);
    res["log2_estimate"] = l2 ? Json(*l2) : Json();
    res["pivot"] = r.pivot;
    res["t"] = r.t;
    res["exact_gate_queries"] = r.exact_gate_queries;
    res["any_emergency_stop"] = r.any_emergency_stop;
    std::uint64_t total = r.exact_gate_queries;
    for (const CoreTrace& tr : r.traces) total += tr.sat_queries;
    res["total_sat_queries"] = total;
    j["result"] = std::move(res);
  }
  Json reps = Json::array();
  const auto& traces = info.result ? info.result->traces : info.partial_traces;
  for (std::size_t i = 0; i < traces.size(); ++i) reps.push_back(trace_json(i, traces[i]));
  j["repetitions"] = std::move(reps);
  if (info.wall_seconds) j["wall_seconds"] = *info.wall_seconds;
  return j;
}

Json calibration_report_json(const CalibrationReport& report, const BackendConfig& backend) {
  Json j;
  j["report"] = "projmc.calibrate";
  j["version"] = 1;
  Json config;
  config["epsilon"] = report.options.epsilon;
  config["delta"] = report.options.delta;
  config["trials"] = report.options.trials;
  config["master_seed"] = report.options.master_seed;
  config["backend"] = backend_json(backend);
  j["config"] = std::move(config);
  j["pivot"] = report.pivot;
  j["t"] = report.t;
  j["target_coverage"] = report.target();

  Json formulas = Json::array();
  for (const FormulaCoverage& f : report.formulas) {
    Json fj;
    fj["name"] = f.name;
    fj["true_count"] = big(f.true_count);
    fj["oracle_method"] = to_string(f.method);
    fj["trials"] = f.trials;
    fj["in_tolerance"] = f.in_tolerance;
    fj["coverage"] = f.coverage;
    fj["wilson95"] = Json::array({f.interval.low, f.interval.high});
    Json records = Json::array();
    for (const TrialRecord& r : f.records) {
      Json rj;
      rj["trial"] = r.trial;
      rj["seed"] = r.seed;
      rj["estimate"] = r.aborted ? Json() : Json(big(r.estimate));
      rj["exact"] = r.exact;
      rj["aborted"] = r.aborted;
      rj["in_tolerance"] = r.in_tolerance;
      records.push_back(std::move(rj));
    }
    fj["records"] = std::move(records);
    formulas.push_back(std::move(fj));
  }
  j["formulas"] = std::move(formulas);
  Json skipped = Json::array();
  for (const SkippedInput& s : report.skipped) skipped.push_back(Json{{"name", s.name}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped);

  Json agg;
  agg["trials"] = report.trials;
  agg["in_tolerance"] = report.in_tolerance;
  agg["coverage"] = report.coverage;
  agg["wilson95"] = Json::array({report.interval.low, report.interval.high});
  j["aggregate"] = std::move(agg);
  return j;
}

Json manifest_json(const GeneratedInstance& instance, std::uint64_t file_hash) {
  Json j;
  j["family"] = instance.spec.family;
  Json params = Json::object();
  for (const auto& [k, v] : instance.spec.params) params[k] = instance.spec.get(k, 0);
  j["params"] = std::move(params);
  j["seed"] = instance.seed;
  j["num_vars"] = instance.formula.num_vars;
  j["clauses"] = instance.formula.clauses.size();
  j["scope_size"] = instance.formula.scope.size();
  j["projected_count"] = big(instance.projected_count);
  j["count_source"] = instance.count_source;
  j["fnv1a64"] = hex64(file_hash);
  return j;
}

}  // namespace projmc
