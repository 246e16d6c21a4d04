#include "consol/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace consol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Picks among candidate PMs given a per-PM score; applies the C4 fallbacks.
template <typename Score>
std::optional<std::size_t> choose_pm(const GreedyState& state, const ResourceVector& max_cap,
                                     Score&& score) {
  if (state.candidates_left == 0) return std::nullopt;
  const std::size_t P = state.candidate.size();

  double best = -kInf;
  bool seen = false;
  std::vector<std::size_t> tied;
  for (std::size_t k = 0; k < P; ++k) {
    if (!state.candidate[k]) continue;
    const double s = score(k);
    if (!seen || s > best) {
      best = s;
      seen = true;
      tied.assign(1, k);
    } else if (s == best) {
      tied.push_back(k);
    }
  }
  if (tied.size() == 1) return tied.front();

  const auto& rem = state.remaining;
  std::size_t top = tied.front();
  for (std::size_t k : tied) {
    if (rem[k].dominates(rem[top])) top = k;
  }
  const bool dominant = std::all_of(tied.begin(), tied.end(),
                                    [&](std::size_t k) { return rem[top].dominates(rem[k]); });
  if (dominant) {
    for (std::size_t k : tied) {
      if (rem[k] == rem[top]) return k;
    }
  }

  std::size_t pick = tied.front();
  double pick_sum = -kInf;
  for (std::size_t k : tied) {
    double sum = 0.0;
    for (std::size_t j = 0; j < max_cap.size(); ++j) {
      if (max_cap[j] > 0.0) sum += rem[k][j] / max_cap[j];
    }
    if (sum > pick_sum) {
      pick_sum = sum;
      pick = k;
    }
  }
  return pick;
}

bool lexicographically_less(const ResourceVector& a, const ResourceVector& b) {
  auto x = a.amounts();
  auto y = b.amounts();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

// C1 uses the exact comparison so a satisfied app never falls short of its
// requirement by rounding.
bool unsatisfied(double provided, double required) { return provided < required; }

}  // namespace

double rpr(double required, double provided) {
  if (required <= 0.0) return 0.0;
  if (provided <= 0.0) return kInf;
  return required / provided;
}

GreedyState GreedyState::initial(const ConsolidationProblem& problem) {
  GreedyState s;
  s.remaining.reserve(problem.num_pms());
  for (const auto& pm : problem.pms) s.remaining.push_back(pm.capacity);
  s.candidate.assign(problem.num_pms(), true);
  s.candidates_left = problem.num_pms();
  s.provided.assign(problem.num_apps(), 0.0);
  return s;
}

std::optional<std::size_t> select_app(const GreedyState& state,
                                      std::span<const Application> apps) {
  std::optional<std::size_t> pick;
  double pick_ratio = 0.0;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    const double required = apps[i].required_throughput;
    if (!unsatisfied(state.provided[i], required)) continue;
    const double ratio = rpr(required, state.provided[i]);
    if (!pick || ratio > pick_ratio ||
        (ratio == pick_ratio && required > apps[*pick].required_throughput)) {
      pick = i;
      pick_ratio = ratio;
    }
  }
  return pick;
}

double r2p(const ConsolidationProblem& problem, std::size_t app, std::size_t pm,
           const ResourceVector& residual) {
  double best = -kInf;
  const auto row = problem.profile.row(app, pm);
  for (std::size_t l = 0; l < problem.num_types(); ++l) {
    const auto& config = problem.vm_types[l].config;
    for (std::size_t j = 0; j < config.size(); ++j) {
      if (config[j] <= 0.0) continue;
      best = std::max(best, row[l] * residual[j] / config[j]);
    }
  }
  return best;
}

std::optional<std::size_t> select_pm(const GreedyState& state, std::size_t app,
                                     const ConsolidationProblem& problem) {
  const ResourceVector max_cap = max_capacity(problem.pms, problem.num_resources());
  return choose_pm(state, max_cap,
                   [&](std::size_t k) { return r2p(problem, app, k, state.remaining[k]); });
}

std::optional<std::size_t> select_vm_type(const ConsolidationProblem& problem, std::size_t app,
                                          std::size_t pm, const ResourceVector& residual) {
  const auto row = problem.profile.row(app, pm);
  double best = -kInf;
  std::vector<std::size_t> tied;
  for (std::size_t l = 0; l < problem.num_types(); ++l) {
    if (!problem.vm_types[l].config.fits_within(residual)) continue;
    if (tied.empty() || row[l] > best) {
      best = row[l];
      tied.assign(1, l);
    } else if (row[l] == best) {
      tied.push_back(l);
    }
  }
  if (tied.empty() || best <= 0.0) return std::nullopt;
  if (tied.size() == 1) return tied.front();

  const auto& types = problem.vm_types;
  std::size_t low = tied.front();
  for (std::size_t l : tied) {
    if (types[low].config.dominates(types[l].config)) low = l;
  }
  const bool minimal = std::all_of(tied.begin(), tied.end(), [&](std::size_t l) {
    return types[l].config.dominates(types[low].config);
  });
  if (minimal) {
    for (std::size_t l : tied) {
      if (types[l].config == types[low].config) return l;
    }
  }
  std::size_t pick = tied.front();
  for (std::size_t l : tied) {
    if (lexicographically_less(types[l].config, types[pick].config)) pick = l;
  }
  return pick;
}

HeuristicResult three_max(const ConsolidationProblem& problem) {
  require_valid(problem);

  GreedyState state = GreedyState::initial(problem);
  HeuristicStats stats;
  const ResourceVector max_cap = max_capacity(problem.pms, problem.num_resources());

  // Candidate PMs are never partially filled (a PM leaves the candidate set
  // before it receives VMs), so each app's R2P score per candidate is fixed for
  // the whole run and computed once.
  std::vector<std::vector<double>> scores(problem.num_apps());
  auto score_of = [&](std::size_t app) {
    auto& s = scores[app];
    if (s.empty()) {
      s.resize(problem.num_pms());
      for (std::size_t k = 0; k < problem.num_pms(); ++k) {
        s[k] = r2p(problem, app, k, problem.pms[k].capacity);
      }
    }
    return [&s](std::size_t k) { return s[k]; };
  };

  while (state.candidates_left > 0) {
    const auto app = select_app(state, problem.applications);
    if (!app) break;
    const auto pm = choose_pm(state, max_cap, score_of(*app));
    state.candidate[*pm] = false;
    --state.candidates_left;
    ++stats.iterations;
    ++stats.pms_consumed;

    while (true) {
      const auto next = select_app(state, problem.applications);
      if (!next) break;
      const auto type = select_vm_type(problem, *next, *pm, state.remaining[*pm]);
      if (!type) break;
      auto& residual = state.remaining[*pm];
      residual -= problem.vm_types[*type].config;
      for (std::size_t j = 0; j < residual.size(); ++j) residual[j] = std::max(0.0, residual[j]);
      state.provided[*next] += problem.profile.at(*next, *pm, *type);
      state.placements.push_back({*next, *pm, *type, 1});
      ++stats.vms_placed;
    }
  }

  HeuristicResult result;
  result.plan = make_plan(problem, std::move(state.placements));
  result.stats = stats;
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    const double required = problem.applications[i].required_throughput;
    if (unsatisfied(state.provided[i], required)) {
      result.unmet.push_back({i, required - state.provided[i]});
    }
  }
  result.all_satisfied = result.unmet.empty();
  return result;
}

}  // namespace consol
