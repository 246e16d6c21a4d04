#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "consol/detector.hpp"
#include "consol/ilp.hpp"
#include "consol/model.hpp"
#include "consol/workload.hpp"

namespace consol {

enum class Algorithm { ThreeMax, Exact };

Algorithm parse_algorithm(const std::string& name);
const char* to_string(Algorithm algorithm);

struct SimConfig {
  std::size_t period_seconds = 900;
  Algorithm algorithm = Algorithm::ThreeMax;
  std::uint64_t node_limit = kDefaultNodeLimit;
  /// Empty: the trace value is the evaluated demand. Otherwise each period
  /// feeds exponential inter-arrivals at the trace rate to a per-app detector
  /// and consolidates on its estimate.
  std::optional<DetectorConfig> detector;
  /// Samples per app per period in detector mode; 0 means two windows.
  std::size_t detector_samples = 0;
  std::size_t f_pm = 1;
  std::size_t f_app = 1;
  std::uint64_t seed = 1;
};

/// Throws InputError unless period_seconds > 0 and both factors are >= 1.
void validate_sim_config(const SimConfig& cfg);

struct RunMetrics {
  std::vector<std::vector<double>> required;  // [step][app]
  std::vector<std::vector<double>> provided;  // [step][app]
  std::vector<std::vector<double>> rd;        // [step][app]; NaN where required == 0
  double ord = 0.0;
  std::vector<std::size_t> pm_counts;  // [step]
  std::size_t count_e = 0;
  std::size_t count_t = 0;
  std::size_t count_cnt = 0;
  std::size_t invocations = 0;
  std::vector<double> timings_ms;  // per invocation

  /// Mean VMs per used PM over the steps with at least one PM.
  double mean_vms_per_pm = 0.0;
};

/// (1/A') * sum_i mean_t |rd_i(t)| over the apps with at least one defined
/// value (A' of them); NaN entries are skipped. 0 when nothing is defined.
double compute_ord(const std::vector<std::vector<double>>& rd);

/// Per-step mean of used PMs.
double mean_pm_count(const RunMetrics& metrics);

struct SimRun {
  RunMetrics metrics;
  std::vector<DeploymentPlan> plans;  // one per period
};

/// Plan-level outcome of one consolidation call.
struct Decision {
  DeploymentPlan plan;
  double elapsed_ms = 0.0;
};

Decision consolidate(const ConsolidationProblem& problem, Algorithm algorithm,
                     std::uint64_t node_limit = kDefaultNodeLimit);

/// Replays aligned traces period by period. Throws InputError when the traces
/// do not cover every app or differ in length.
SimRun run_sim(const ConsolidationProblem& problem, const std::vector<TraceSeries>& traces,
               const SimConfig& cfg);

struct SensitivityConfig {
  std::size_t combinations = 20;
  double combination_seconds = 100.0;
  /// Each app's rate is drawn uniformly from [rate_low, rate_high] times its
  /// peak target, then expressed in requests per second relative to peak_rate.
  double rate_low = 0.15;
  double rate_high = 0.6;
  double peak_rate = 2000.0;
  /// Empty: oracle mode, the estimates switch exactly at combination borders.
  std::optional<DetectorConfig> detector;
  double sample_seconds = 1.0;
  Algorithm algorithm = Algorithm::ThreeMax;
  std::uint64_t seed = 1;
  /// On an estimate change, keep the current plan (counted in count_cnt) when
  /// it still provides every new evaluated demand and each demand is within
  /// this relative distance of the one the plan was deployed for. 0 disables.
  double reuse_tolerance = 0.1;
};

struct SensitivityRun {
  RunMetrics metrics;  // sampled every sample_seconds against the true rates
  double detector_ord = 0.0;
  std::size_t true_changes = 0;
  std::vector<std::vector<double>> rates;  // [combination][app], requests per second
};

SensitivityRun run_sensitivity(const ConsolidationProblem& problem, const SensitivityConfig& cfg);

struct ScalabilityConfig {
  std::vector<std::size_t> f_pm{1};
  std::vector<std::size_t> f_app{1};
  std::size_t periods = 96;
  /// Evaluate only every n-th period of the day.
  std::size_t period_stride = 1;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct ScalabilityRow {
  std::size_t f_pm = 1;
  std::size_t f_app = 1;
  std::size_t p = 0;
  std::size_t a = 0;
  double mean_time_ms = 0.0;
  double max_time_ms = 0.0;
  double ord = 0.0;
};

/// Rows in (f_pm, f_app) order, whatever the job count.
std::vector<ScalabilityRow> run_scalability(const ScalabilityConfig& cfg);

// CSV writers. Numbers use the shortest round-trip form.
std::string format_number(double value);
std::string metrics_csv(const ConsolidationProblem& problem, const RunMetrics& metrics);
std::string summary_csv(const RunMetrics& metrics);
std::string scalability_csv(const std::vector<ScalabilityRow>& rows);
std::string sensitivity_csv(const std::string& detector, const SensitivityRun& run);
std::string plans_jsonl(const std::vector<DeploymentPlan>& plans);

}  // namespace consol
