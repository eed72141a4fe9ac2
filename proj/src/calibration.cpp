#include "projmc/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "projmc/errors.hpp"
#include "projmc/random.hpp"

namespace projmc {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t formula_index, std::uint64_t trial) {
  return derive_seed(derive_seed(master_seed, formula_index), trial);
}

CalibrationReport calibrate(const std::vector<CalibrationInput>& inputs, const CalibrationOptions& options,
                            const SatOracle& oracle) {
  CounterConfig base;
  base.epsilon = options.epsilon;
  base.delta = options.delta;
  validate(base);

  CalibrationReport report;
  report.options = options;
  report.pivot = compute_pivot(options.epsilon);
  report.t = compute_t(options.delta);

  for (std::size_t fi = 0; fi < inputs.size(); ++fi) {
    const CalibrationInput& input = inputs[fi];
    ExactCount truth;
    try {
      truth = exact_projected_count(input.formula, &oracle);
    } catch (const ConfigError& e) {
      report.skipped.push_back({input.name, e.what()});
      continue;
    }

    FormulaCoverage cov;
    cov.name = input.name;
    cov.true_count = truth.value;
    cov.method = truth.method;
    cov.trials = options.trials;
    cov.records.resize(options.trials);

    auto run = [&](std::uint64_t trial) {
      CounterConfig cfg = base;
      cfg.seed = trial_seed(options.master_seed, fi, trial);
      TrialRecord rec;
      rec.trial = trial;
      rec.seed = cfg.seed;
      try {
        CountResult r = main_count(input.formula, cfg, oracle);
        rec.estimate = r.estimate;
        rec.exact = r.exact;
        rec.in_tolerance = within_tolerance(r.estimate, truth.value, options.epsilon);
      } catch (const CountAborted&) {
        rec.aborted = true;
      }
      cov.records[trial] = std::move(rec);
    };

    const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(options.workers, 1, options.trials));
    if (workers <= 1) {
      for (std::uint64_t i = 0; i < options.trials; ++i) run(i);
    } else {
      std::atomic<std::uint64_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::uint64_t i; (i = next.fetch_add(1)) < options.trials;) run(i);
        });
      for (auto& th : pool) th.join();
    }

    cov.in_tolerance = static_cast<std::uint64_t>(
        std::count_if(cov.records.begin(), cov.records.end(), [](const TrialRecord& r) { return r.in_tolerance; }));
    cov.coverage = cov.trials ? static_cast<double>(cov.in_tolerance) / static_cast<double>(cov.trials) : 0.0;
    cov.interval = wilson_interval(cov.in_tolerance, cov.trials);
    report.trials += cov.trials;
    report.in_tolerance += cov.in_tolerance;
    report.formulas.push_back(std::move(cov));
  }
  report.coverage =
      report.trials ? static_cast<double>(report.in_tolerance) / static_cast<double>(report.trials) : 0.0;
  report.interval = wilson_interval(report.in_tolerance, report.trials);
  return report;
}

}  // namespace projmc
