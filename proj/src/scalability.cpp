#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "consol/replication.hpp"
#include "consol/sim.hpp"

namespace consol {
namespace {

ScalabilityRow run_scale(const ScalabilityConfig& cfg, std::size_t f_pm, std::size_t f_app) {
  const Scenario scenario = make_replication_scenario(cfg.seed, f_pm, f_app, cfg.periods);
  const auto& problem = scenario.problem;
  ScalabilityRow row{f_pm, f_app, problem.num_pms(), problem.num_apps(), 0.0, 0.0, 0.0};

  std::vector<std::vector<double>> rd;
  double total_ms = 0.0;
  std::size_t runs = 0;
  for (std::size_t t = 0; t < cfg.periods; t += cfg.period_stride) {
    std::vector<double> demands(problem.num_apps());
    for (std::size_t i = 0; i < demands.size(); ++i) demands[i] = scenario.traces[i].demands[t];
    const Decision d = consolidate(with_demands(problem, demands), Algorithm::ThreeMax);
    total_ms += d.elapsed_ms;
    row.max_time_ms = std::max(row.max_time_ms, d.elapsed_ms);
    ++runs;
    std::vector<double> step(demands.size());
    for (std::size_t i = 0; i < demands.size(); ++i) {
      step[i] = demands[i] > 0.0 ? (d.plan.provided[i] - demands[i]) / demands[i] : std::nan("");
    }
    rd.push_back(std::move(step));
  }
  row.mean_time_ms = runs ? total_ms / static_cast<double>(runs) : 0.0;
  row.ord = compute_ord(rd);
  return row;
}

}  // namespace

std::vector<ScalabilityRow> run_scalability(const ScalabilityConfig& cfg) {
  if (cfg.period_stride == 0 || cfg.periods == 0) throw InputError("periods and stride must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> scales;
  for (std::size_t p : cfg.f_pm) {
    for (std::size_t a : cfg.f_app) {
      if (p < 1 || a < 1) throw InputError("scaling factors must be >= 1");
      scales.emplace_back(p, a);
    }
  }

  std::vector<ScalabilityRow> rows(scales.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t n = next++; n < scales.size(); n = next++) {
      try {
        rows[n] = run_scale(cfg, scales[n].first, scales[n].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, std::max<std::size_t>(scales.size(), 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace consol
