#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "projmc/calibration.hpp"
#include "projmc/counter.hpp"
#include "projmc/generators.hpp"
#include "projmc/sat_backend.hpp"

namespace projmc {

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// log2(x) for x ≥ 1, correct to double precision; nullopt for 0.
std::optional<double> log2_of(const BigInt& x);

struct RunInfo {
  std::string input_path;
  std::uint64_t input_hash = 0;
  const Formula* formula = nullptr;
  bool scope_overridden = false;
  CounterConfig config;
  BackendConfig backend;
  std::string status = "ok";  // ok | timeout | backend_error
  std::string error;
  std::optional<CountResult> result;
  std::vector<CoreTrace> partial_traces;  // when aborted
  std::optional<double> wall_seconds;     // only echoed when requested
};

/// Keys appear in a fixed order. Big integers are decimal strings.
Json run_report_json(const RunInfo& info);
Json trace_json(std::size_t index, const CoreTrace& trace);
Json calibration_report_json(const CalibrationReport& report, const BackendConfig& backend);
Json manifest_json(const GeneratedInstance& instance, std::uint64_t file_hash);

}  // namespace projmc
