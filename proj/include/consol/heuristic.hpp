#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "consol/model.hpp"

namespace consol {

/// Ratio of required to provided throughput. +inf when nothing is provided
/// yet for a positive requirement, 0 when the requirement is 0.
double rpr(double required, double provided);

/// Mutable state of one 3MAX run.
struct GreedyState {
  std::vector<ResourceVector> remaining;  // residual per PM
  std::vector<bool> candidate;            // PM still selectable
  std::size_t candidates_left = 0;
  std::vector<double> provided;           // running throughput per app
  std::vector<Placement> placements;      // one entry per placed VM, count 1

  static GreedyState initial(const ConsolidationProblem& problem);
};

/// C1/C2: the unsatisfied app with the largest RPR; ties go to the larger
/// requirement, then to the lower index. Empty when every app is satisfied.
std::optional<std::size_t> select_app(const GreedyState& state,
                                      std::span<const Application> apps);

/// Best performance-per-resource-share over all types and resource dimensions:
/// max_{l,j} mu_{i,k,l} * residual_j / v_{j,l}. Dimensions with v_{j,l} = 0 are
/// skipped; -inf when no (l, j) term exists at all. Types that do not fit the
/// residual still count.
double r2p(const ConsolidationProblem& problem, std::size_t app, std::size_t pm,
           const ResourceVector& residual);

/// C3/C4 over the candidate PMs. Ratio ties resolve to a PM whose residual
/// dominates every other tied PM; failing that, to the largest sum of residuals
/// normalized by the data center's per-dimension maximum capacity; then to the
/// lower index.
std::optional<std::size_t> select_pm(const GreedyState& state, std::size_t app,
                                     const ConsolidationProblem& problem);

/// C5-C7: among types fitting `residual`, the one with the best throughput for
/// (app, pm); ties go to a type dominated by every other tied type, else the
/// lexicographically smallest config, then the lower index. Empty when nothing
/// fits or the best fitting type yields zero throughput.
std::optional<std::size_t> select_vm_type(const ConsolidationProblem& problem, std::size_t app,
                                          std::size_t pm, const ResourceVector& residual);

struct Shortfall {
  std::size_t app = 0;
  double amount = 0.0;  // required - provided
};

struct HeuristicStats {
  std::size_t iterations = 0;    // outer-loop passes (PMs consumed)
  std::size_t pms_consumed = 0;
  std::size_t vms_placed = 0;
};

struct HeuristicResult {
  DeploymentPlan plan;
  bool all_satisfied = false;
  std::vector<Shortfall> unmet;
  HeuristicStats stats;
};

/// 3MAX. Throws InputError on an invalid problem.
HeuristicResult three_max(const ConsolidationProblem& problem);

}  // namespace consol
