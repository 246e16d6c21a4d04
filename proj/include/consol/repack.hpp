#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "consol/model.hpp"

namespace consol {

struct VmInstance {
  std::size_t id = 0;
  ResourceVector demand;
  std::size_t origin_app = 0;
};

struct RepackResult {
  std::vector<std::optional<std::size_t>> assignment;  // per VM (input order): index into pms
  std::size_t pm_count = 0;
  std::vector<std::size_t> failed;  // VM ids that fit nowhere
};

/// One VmInstance per deployed VM, ids 0..n-1 in plan order.
std::vector<VmInstance> vms_from_plan(const ConsolidationProblem& problem,
                                      const DeploymentPlan& plan);

/// Sum of demands, each dimension normalized by `max_cap` (dimensions with a
/// zero maximum are ignored). Used to rank both VMs and PMs.
double normalized_size(const ResourceVector& amounts, const ResourceVector& max_cap);

/// Stable sort of PMs by normalized total capacity, largest first.
std::vector<PhysicalMachine> sort_pms_for_repack(std::span<const PhysicalMachine> pms);

/// First Fit Decreasing: VMs by normalized size descending, each onto the first
/// opened PM with room in every dimension, else the next unopened PM in order.
RepackResult ffd(std::span<const VmInstance> vms, std::span<const PhysicalMachine> pms);

/// Least Loaded: same VM order as ffd; each VM onto the fitting opened PM with
/// the smallest bottleneck utilization (max_j used_j / cap_j), else the next
/// unopened PM.
RepackResult ll(std::span<const VmInstance> vms, std::span<const PhysicalMachine> pms);

}  // namespace consol
