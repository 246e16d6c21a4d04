#include "consol/sim.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "consol/heuristic.hpp"
#include "consol/replication.hpp"

namespace consol {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "3max") return Algorithm::ThreeMax;
  if (name == "exact") return Algorithm::Exact;
  throw InputError("unknown algorithm '" + name + "' (expected 3max or exact)");
}

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::ThreeMax ? "3max" : "exact";
}

void validate_sim_config(const SimConfig& cfg) {
  if (cfg.period_seconds == 0) throw InputError("period_seconds must be positive");
  if (cfg.f_pm < 1 || cfg.f_app < 1) throw InputError("scaling factors must be >= 1");
  if (cfg.node_limit == 0) throw InputError("node_limit must be positive");
}

double compute_ord(const std::vector<std::vector<double>>& rd) {
  if (rd.empty()) return 0.0;
  const std::size_t apps = rd.front().size();
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < apps; ++i) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& step : rd) {
      if (std::isnan(step[i])) continue;
      sum += std::abs(step[i]);
      ++n;
    }
    if (n == 0) continue;
    total += sum / static_cast<double>(n);
    ++counted;
  }
  return counted ? total / static_cast<double>(counted) : 0.0;
}

double mean_pm_count(const RunMetrics& metrics) {
  if (metrics.pm_counts.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t c : metrics.pm_counts) sum += static_cast<double>(c);
  return sum / static_cast<double>(metrics.pm_counts.size());
}

Decision consolidate(const ConsolidationProblem& problem, Algorithm algorithm,
                     std::uint64_t node_limit) {
  const auto start = std::chrono::steady_clock::now();
  Decision decision;
  if (algorithm == Algorithm::ThreeMax) {
    decision.plan = three_max(problem).plan;
  } else {
    auto solution = solve_exact(build_ilp(problem), node_limit);
    decision.plan = solution.objective_value ? std::move(solution.plan) : make_plan(problem, {});
  }
  const auto stop = std::chrono::steady_clock::now();
  decision.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return decision;
}

namespace {

std::vector<double> step_rd(const std::vector<double>& required,
                            const std::vector<double>& provided) {
  std::vector<double> rd(required.size());
  for (std::size_t i = 0; i < required.size(); ++i) {
    rd[i] = required[i] > 0.0 ? (provided[i] - required[i]) / required[i] : std::nan("");
  }
  return rd;
}

}  // namespace

SimRun run_sim(const ConsolidationProblem& problem, const std::vector<TraceSeries>& traces,
               const SimConfig& cfg) {
  validate_sim_config(cfg);
  const auto aligned = align_traces(problem, traces);
  const std::size_t apps = problem.num_apps();
  const std::size_t periods = aligned.empty() ? 0 : aligned.front().demands.size();

  std::vector<DetectorState> detectors;
  std::vector<ExponentialStream> arrivals;
  std::size_t samples = 0;
  if (cfg.detector) {
    samples = cfg.detector_samples ? cfg.detector_samples : 2 * cfg.detector->window_size;
    for (std::size_t i = 0; i < apps; ++i) {
      detectors.emplace_back(*cfg.detector);
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                        static_cast<std::uint32_t>(cfg.seed >> 32), static_cast<std::uint32_t>(i)};
      std::mt19937_64 seeder(seq);
      arrivals.emplace_back(seeder());
    }
  }

  SimRun run;
  RunMetrics& m = run.metrics;
  DeploymentPlan previous = make_plan(problem, {});
  std::vector<double> previous_eval;
  double vms = 0.0;
  double pms = 0.0;

  for (std::size_t t = 0; t < periods; ++t) {
    std::vector<double> actual(apps);
    std::vector<double> evaluated(apps);
    for (std::size_t i = 0; i < apps; ++i) {
      actual[i] = aligned[i].demands[t];
      evaluated[i] = actual[i];
      if (!cfg.detector) continue;
      if (actual[i] <= 0.0) {
        evaluated[i] = 0.0;
        continue;
      }
      for (std::size_t n = 0; n < samples; ++n) {
        update_estimate(detectors[i], arrivals[i].next(actual[i]));
      }
      if (detectors[i].lambda_hat() > 0.0) evaluated[i] = detectors[i].lambda_hat();
    }
    if (t > 0 && evaluated != previous_eval) ++m.count_e;
    previous_eval = evaluated;

    Decision decision = consolidate(with_demands(problem, evaluated), cfg.algorithm, cfg.node_limit);
    ++m.invocations;
    m.timings_ms.push_back(decision.elapsed_ms);
    if (decision.plan.placements != previous.placements) {
      ++m.count_t;
    } else {
      ++m.count_cnt;
    }

    m.required.push_back(actual);
    m.provided.push_back(decision.plan.provided);
    m.rd.push_back(step_rd(actual, decision.plan.provided));
    m.pm_counts.push_back(plan_pm_count(decision.plan));
    vms += static_cast<double>(plan_vm_count(decision.plan));
    pms += static_cast<double>(plan_pm_count(decision.plan));

    previous = decision.plan;
    run.plans.push_back(std::move(decision.plan));
  }
  m.ord = compute_ord(m.rd);
  m.mean_vms_per_pm = pms > 0.0 ? vms / pms : 0.0;
  return run;
}

}  // namespace consol
