#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include "consol/replication.hpp"
#include "consol/sim.hpp"

namespace consol {
namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

std::mt19937_64 seeded(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
  return std::mt19937_64(seq);
}

// Piecewise-constant Poisson arrivals: a draw that crosses a segment border is
// discarded and redrawn from the border at the new rate (memorylessness makes
// this exact).
class ArrivalProcess {
 public:
  ArrivalProcess(const std::vector<std::vector<double>>& rates, std::size_t app, double segment,
                 std::uint64_t seed)
      : rates_(rates), app_(app), segment_(segment), stream_(seed) {}

  double next_after(double from) {
    std::size_t seg = static_cast<std::size_t>(from / segment_);
    while (seg < rates_.size()) {
      const double t = from + stream_.next(rates_[seg][app_]);
      const double border = static_cast<double>(seg + 1) * segment_;
      if (t < border) return t;
      from = border;
      ++seg;
    }
    return kNever;
  }

 private:
  const std::vector<std::vector<double>>& rates_;
  std::size_t app_;
  double segment_;
  ExponentialStream stream_;
};

}  // namespace

SensitivityRun run_sensitivity(const ConsolidationProblem& problem, const SensitivityConfig& cfg) {
  if (cfg.combinations == 0 || !(cfg.combination_seconds > 0.0) || !(cfg.sample_seconds > 0.0) ||
      !(cfg.peak_rate > 0.0) || !(cfg.rate_low > 0.0) || cfg.rate_high < cfg.rate_low ||
      !(cfg.reuse_tolerance >= 0.0)) {
    throw InputError("invalid sensitivity configuration");
  }
  require_valid(problem);
  const std::size_t apps = problem.num_apps();

  SensitivityRun run;
  run.true_changes = cfg.combinations - 1;
  auto rate_rng = seeded(cfg.seed, 7);
  run.rates.assign(cfg.combinations, std::vector<double>(apps));
  for (auto& combo : run.rates) {
    for (double& r : combo) {
      r = cfg.peak_rate * (cfg.rate_low + (cfg.rate_high - cfg.rate_low) * unit_open(rate_rng));
    }
  }

  // Request rate -> required throughput: peak_rate corresponds to the app's
  // peak target.
  std::vector<double> to_demand(apps);
  for (std::size_t i = 0; i < apps; ++i) to_demand[i] = peak_target(problem, i) / cfg.peak_rate;

  RunMetrics& m = run.metrics;
  const double horizon = static_cast<double>(cfg.combinations) * cfg.combination_seconds;
  std::vector<double> estimate(apps, 0.0);
  std::vector<bool> ready(apps, !cfg.detector.has_value());
  std::size_t ready_count = cfg.detector ? 0 : apps;
  std::optional<DeploymentPlan> plan;
  std::vector<double> deployed(apps, 0.0);
  std::vector<std::vector<double>> estimate_error;
  double vms = 0.0;
  double pms = 0.0;

  auto redeploy = [&] {
    std::vector<double> demands(apps);
    for (std::size_t i = 0; i < apps; ++i) demands[i] = estimate[i] * to_demand[i];
    if (plan && cfg.reuse_tolerance > 0.0) {
      bool keep = true;
      for (std::size_t i = 0; i < apps && keep; ++i) {
        keep = meets(plan->provided[i], demands[i]) &&
               std::abs(demands[i] - deployed[i]) <= cfg.reuse_tolerance * deployed[i];
      }
      if (keep) {
        ++m.invocations;
        ++m.count_cnt;
        return;
      }
    }
    Decision d = consolidate(with_demands(problem, demands), cfg.algorithm);
    deployed = demands;
    ++m.invocations;
    m.timings_ms.push_back(d.elapsed_ms);
    const bool changed = plan ? d.plan.placements != plan->placements : !d.plan.placements.empty();
    changed ? ++m.count_t : ++m.count_cnt;
    plan = std::move(d.plan);
  };

  auto segment_at = [&](double t) {
    return std::min(static_cast<std::size_t>(t / cfg.combination_seconds), cfg.combinations - 1);
  };

  auto sample = [&](double t) {
    if (!plan) return;
    const auto& rate = run.rates[segment_at(t)];
    std::vector<double> required(apps);
    std::vector<double> err(apps);
    for (std::size_t i = 0; i < apps; ++i) {
      required[i] = rate[i] * to_demand[i];
      err[i] = std::abs(estimate[i] - rate[i]) / rate[i];
    }
    m.required.push_back(required);
    m.provided.push_back(plan->provided);
    std::vector<double> rd(apps);
    for (std::size_t i = 0; i < apps; ++i) {
      rd[i] = required[i] > 0.0 ? (plan->provided[i] - required[i]) / required[i] : std::nan("");
    }
    m.rd.push_back(std::move(rd));
    m.pm_counts.push_back(plan_pm_count(*plan));
    vms += static_cast<double>(plan_vm_count(*plan));
    pms += static_cast<double>(plan_pm_count(*plan));
    estimate_error.push_back(std::move(err));
  };

  const std::size_t samples = static_cast<std::size_t>(std::floor(horizon / cfg.sample_seconds));
  auto sample_time = [&](std::size_t n) { return (static_cast<double>(n) + 0.5) * cfg.sample_seconds; };

  if (!cfg.detector) {
    std::size_t combo = 0;
    estimate = run.rates[0];
    redeploy();
    for (std::size_t n = 0; n < samples; ++n) {
      const double t = sample_time(n);
      while (segment_at(t) > combo) {
        ++combo;
        estimate = run.rates[combo];
        ++m.count_e;
        redeploy();
      }
      sample(t);
    }
  } else {
    std::vector<DetectorState> detectors(apps, DetectorState(*cfg.detector));
    std::vector<ArrivalProcess> arrivals;
    std::vector<double> last(apps, 0.0);
    std::vector<double> next(apps);
    for (std::size_t i = 0; i < apps; ++i) {
      auto seeder = seeded(cfg.seed, static_cast<std::uint32_t>(1000 + i));
      arrivals.emplace_back(run.rates, i, cfg.combination_seconds, seeder());
      next[i] = arrivals[i].next_after(0.0);
    }
    for (std::size_t n = 0; n < samples; ++n) {
      const double t = sample_time(n);
      while (apps > 0) {
        std::size_t i = 0;
        for (std::size_t j = 1; j < apps; ++j) {
          if (next[j] < next[i]) i = j;
        }
        if (!(next[i] <= t)) break;
        const double now = next[i];
        const auto est = update_estimate(detectors[i], now - last[i]);
        last[i] = now;
        next[i] = arrivals[i].next_after(now);
        if (!est) continue;
        estimate[i] = *est;
        if (!ready[i]) {
          ready[i] = true;
          if (++ready_count == apps) redeploy();
          continue;
        }
        ++m.count_e;
        if (ready_count == apps) redeploy();
      }
      sample(t);
    }
  }

  m.ord = compute_ord(m.rd);
  m.mean_vms_per_pm = pms > 0.0 ? vms / pms : 0.0;
  run.detector_ord = compute_ord(estimate_error);
  return run;
}

}  // namespace consol
