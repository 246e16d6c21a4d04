#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "consol/model.hpp"

namespace consol {

/// Required throughput per consolidation interval for one application.
struct TraceSeries {
  std::string app_id;
  std::size_t interval_seconds = 900;
  std::vector<double> demands;

  friend bool operator==(const TraceSeries&, const TraceSeries&) = default;
};

/// mt_i = 2/5 * sum_k max_l mu_{i,k,l}: the peak a trace is scaled to.
double peak_target(const ConsolidationProblem& problem, std::size_t app);

/// Rescales `raw` so its maximum equals peak_target(problem, app).
/// Throws InputError when the trace has no positive value.
TraceSeries scale_trace(const TraceSeries& raw, const ConsolidationProblem& problem,
                        std::size_t app);

/// CSV `app_id,interval_index,demand`, one row per (app, interval), intervals
/// dense from 0. Returned in the order apps first appear.
std::vector<TraceSeries> parse_trace_csv(std::string_view text, std::size_t interval_seconds = 900);
std::string write_trace_csv(const std::vector<TraceSeries>& traces);
std::vector<TraceSeries> load_traces(const std::filesystem::path& path,
                                     std::size_t interval_seconds = 900);

/// Reorders traces to match the problem's application order; every app needs
/// exactly one trace and all traces must have equal length. Throws InputError.
std::vector<TraceSeries> align_traces(const ConsolidationProblem& problem,
                                      std::vector<TraceSeries> traces);

/// Uniform double strictly inside (0, 1) from 53 random bits.
double unit_open(std::mt19937_64& rng);

/// Inverse-CDF exponential draws; strictly positive. Deterministic per seed.
class ExponentialStream {
 public:
  explicit ExponentialStream(std::uint64_t seed) : rng_(seed) {}
  double next(double rate) { return -std::log(unit_open(rng_)) / rate; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// n inter-arrival samples from Exponential(rate). Throws std::invalid_argument
/// when rate <= 0 or n == 0.
std::vector<double> gen_exponential(double rate, std::size_t n, std::uint64_t seed);

}  // namespace consol
