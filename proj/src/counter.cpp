#include "projmc/counter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "projmc/enumeration.hpp"
#include "projmc/hashing.hpp"

namespace projmc {
namespace {

using Decimal = boost::multiprecision::cpp_dec_float_50;

constexpr unsigned kFailureProbabilityDigits = 40;

// ⌊−r/2⌋ for integer r ≥ 1.
int failure_exponent(int r) { return -((r + 1) / 2); }

BigInt pow2(std::uint64_t k) { return BigInt(1) << static_cast<unsigned>(k); }

}  // namespace

void validate(const CounterConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0))
    throw ConfigError("epsilon must lie in (0, 1], got " + std::to_string(cfg.epsilon));
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw ConfigError("delta must lie in (0, 1), got " + std::to_string(cfg.delta));
  if (cfg.r != 3)
    throw ConfigError("only the 3-universal XOR family is available; r must be 3, got " + std::to_string(cfg.r));
  if (cfg.warm_start_lower_bound && *cfg.warm_start_lower_bound < 1)
    throw ConfigError("a warm-start lower bound must be at least 1");
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw ContractViolation("exact_rational needs a finite value");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(std::fabs(x), &exponent);  // x = mantissa * 2^exponent, mantissa in [0.5, 1)
  auto scaled = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num(scaled);
  BigInt den(1);
  if (exponent >= 0)
    num <<= static_cast<unsigned>(exponent);
  else
    den <<= static_cast<unsigned>(-exponent);
  Rational out(num, den);
  return x < 0 ? Rational(-out) : out;
}

std::uint64_t compute_pivot(double epsilon, int r) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw ConfigError("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  if (r < 1) throw ConfigError("r must be positive");
  const Decimal eps(epsilon);
  const Decimal cbrt_e = boost::multiprecision::exp(Decimal(1) / 3);
  const Decimal value = 2 * Decimal(r) * (1 + eps) * cbrt_e / (eps * eps);
  return boost::multiprecision::ceil(value).convert_to<std::uint64_t>();
}

Rational core_failure_probability(int r) {
  if (r < 1) throw ConfigError("r must be positive");
  const Decimal p = boost::multiprecision::exp(Decimal(failure_exponent(r)));
  BigInt scale = boost::multiprecision::pow(BigInt(10), kFailureProbabilityDigits);
  BigInt num = boost::multiprecision::round(p * Decimal(scale)).convert_to<BigInt>();
  return Rational(num, scale);
}

namespace {

// Numerator over (denominator of p)^n of the median failure probability.
BigInt median_failure_numerator(std::uint64_t n, const BigInt& a, const BigInt& b) {
  BigInt sum = 0;
  BigInt binom = 1;  // C(n, k), updated incrementally from k = 0
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    if (2 * k >= n) sum += binom * boost::multiprecision::pow(a, static_cast<unsigned>(k)) *
                           boost::multiprecision::pow(b, static_cast<unsigned>(n - k));
  }
  return sum;
}

}  // namespace

Rational median_failure_probability(std::uint64_t n, int r) {
  const Rational p = core_failure_probability(r);
  const BigInt a = boost::multiprecision::numerator(p);
  const BigInt d = boost::multiprecision::denominator(p);
  return Rational(median_failure_numerator(n, a, d - a), boost::multiprecision::pow(d, static_cast<unsigned>(n)));
}

std::uint64_t t_upper_bound(double delta, int r) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  const long double p = std::exp(static_cast<long double>(failure_exponent(r)));
  const long double base = std::sqrt(4 * p * (1 - p));
  const long double arg = static_cast<long double>(delta) * (1 - 2 * p) / (1 - p);
  const long double exponent = std::ceil(std::log(arg) / std::log(base));
  return static_cast<std::uint64_t>(std::max<long double>(1, exponent));
}

std::uint64_t compute_t(double delta, int r) {
  if (!(delta > 0.0 && delta < 1.0))
    throw ConfigError("delta must lie in (0, 1), got " + std::to_string(delta));
  const Rational p = core_failure_probability(r);
  const BigInt a = boost::multiprecision::numerator(p);
  const BigInt d = boost::multiprecision::denominator(p);
  const Rational target = exact_rational(delta);
  const BigInt dn = boost::multiprecision::numerator(target);
  const BigInt dd = boost::multiprecision::denominator(target);
  // The closed-form bound guarantees termination; the slack covers the
  // rounding of p.
  const std::uint64_t limit = t_upper_bound(delta, r) + 16;
  BigInt d_pow = 1;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    d_pow *= d;
    if (dn * d_pow >= median_failure_numerator(n, a, d - a) * dd) return n;
  }
  throw ConfigError("no repetition count found for delta " + std::to_string(delta));
}

std::int64_t ceil_log2(const Rational& x) {
  if (x <= 0) throw ContractViolation("ceil_log2 needs a positive argument");
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  const auto guess = static_cast<std::int64_t>(boost::multiprecision::msb(num)) -
                     static_cast<std::int64_t>(boost::multiprecision::msb(den));
  // 2^(guess-1) < x < 2^(guess+1), so the answer is guess or guess + 1.
  for (std::int64_t k = guess - 1;; ++k) {
    bool reached = k >= 0 ? num <= (den << static_cast<unsigned>(k)) : (num << static_cast<unsigned>(-k)) <= den;
    if (reached) return k;
  }
}

std::uint32_t warm_start_m(const BigInt& lower_bound, double epsilon, std::uint64_t pivot) {
  if (lower_bound < 1) throw ContractViolation("warm start needs a lower bound of at least 1");
  if (pivot == 0) throw ContractViolation("pivot must be positive");
  Rational x = (1 + exact_rational(epsilon)) * Rational(lower_bound) / Rational(BigInt(pivot));
  return static_cast<std::uint32_t>(std::max<std::int64_t>(0, ceil_log2(x)));
}

std::int64_t emergency_m_bound(std::size_t scope_size, double epsilon, std::uint64_t pivot) {
  Rational x = (1 + exact_rational(epsilon)) * Rational(pow2(scope_size)) / Rational(BigInt(pivot));
  return ceil_log2(x);
}

CoreTrace core_estimate(const Formula& f, const CounterConfig& cfg, RandomSource& rng, const SatOracle& oracle) {
  validate(cfg);
  if (f.scope.empty()) throw ContractViolation("core_estimate requires a non-empty projection scope");
  const std::size_t n = f.scope.size();
  const std::uint64_t pivot = compute_pivot(cfg.epsilon, cfg.r);
  const std::int64_t m_bound = emergency_m_bound(n, cfg.epsilon, pivot);

  std::uint32_t m = 0;
  if (cfg.warm_start_lower_bound)
    m = std::max<std::uint32_t>(1, warm_start_m(*cfg.warm_start_lower_bound, cfg.epsilon, pivot)) - 1;

  CoreTrace trace;
  std::uint64_t c = 0;
  do {
    ++m;
    XorHashFunction h = sample_hash(n, m, rng);
    BoundedCount cell;
    try {
      cell = bounded_count(conjoin_hash(f, h), pivot + 1, oracle);
    } catch (const EnumerationAborted& e) {
      trace.final_m = m;
      trace.cell_count = e.partial().value;
      trace.sat_queries += e.partial().sat_queries;
      trace.steps.push_back({m, e.partial().value, e.partial().sat_queries});
      trace.aborted = true;
      throw CountAborted(e.cause(), {trace}, e.what());
    }
    c = cell.value;
    trace.sat_queries += cell.sat_queries;
    trace.steps.push_back({m, c, cell.sat_queries});
  } while (!(c <= pivot || static_cast<std::int64_t>(m) > m_bound));

  trace.final_m = m;
  trace.cell_count = c;
  trace.estimate = BigInt(c) << m;
  trace.emergency_stop = c > pivot;
  return trace;
}

CountResult main_count(const Formula& f, const CounterConfig& cfg, const SatOracle& oracle) {
  validate(cfg);
  validate(f);
  CountResult result;
  result.pivot = compute_pivot(cfg.epsilon, cfg.r);
  result.t = compute_t(cfg.delta, cfg.r);
  result.seed = cfg.seed;

  BoundedCount gate;
  try {
    gate = bounded_count(f, result.pivot + 1, oracle);
  } catch (const EnumerationAborted& e) {
    throw CountAborted(e.cause(), {}, e.what());
  }
  result.exact_gate_queries = gate.sat_queries;
  if (gate.value <= result.pivot) {
    result.estimate = gate.value;
    result.exact = true;
    return result;
  }

  const std::size_t t = result.t;
  std::vector<CoreTrace> traces(t);
  std::vector<std::optional<CountAborted>> failures(t);
  std::vector<bool> ran(t, false);
  auto run = [&](std::size_t i) {
    RandomSource rng = RandomSource::stream(cfg.seed, i);
    try {
      traces[i] = core_estimate(f, cfg, rng, oracle);
    } catch (const CountAborted& e) {
      failures[i] = e;
    }
    ran[i] = true;
  };

  unsigned workers = 1;
  if (cfg.parallel_repetitions) {
    unsigned hw = cfg.max_threads ? cfg.max_threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(hw, t));
  }
  if (workers <= 1) {
    for (std::size_t i = 0; i < t; ++i) {
      run(i);
      if (failures[i]) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; !stop && (i = next.fetch_add(1)) < t;) {
          run(i);
          if (failures[i]) stop = true;
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  if (auto first = std::find_if(failures.begin(), failures.end(), [](const auto& e) { return e.has_value(); });
      first != failures.end()) {
    std::vector<CoreTrace> collected;
    for (std::size_t i = 0; i < t; ++i) {
      if (failures[i])
        collected.insert(collected.end(), failures[i]->traces().begin(), failures[i]->traces().end());
      else if (ran[i])
        collected.push_back(traces[i]);
    }
    throw CountAborted((*first)->cause(), std::move(collected), (*first)->what());
  }

  std::vector<BigInt> estimates;
  estimates.reserve(t);
  for (const CoreTrace& tr : traces) {
    estimates.push_back(tr.estimate);
    result.any_emergency_stop |= tr.emergency_stop;
  }
  std::sort(estimates.begin(), estimates.end());
  result.estimate = estimates[(t - 1) / 2];
  result.traces = std::move(traces);
  return result;
}

bool within_tolerance(const BigInt& estimate, const BigInt& truth, double epsilon) {
  const Rational eps = exact_rational(epsilon);
  const Rational est(estimate);
  const Rational tr(truth);
  return (1 - eps) * tr <= est && est <= (1 + eps) * tr;
}

}  // namespace projmc
