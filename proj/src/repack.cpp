#include "consol/repack.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

namespace consol {

namespace {

std::vector<std::size_t> decreasing_order(std::span<const VmInstance> vms,
                                          std::span<const PhysicalMachine> pms) {
  const std::size_t dims = vms.empty() ? 0 : vms.front().demand.size();
  const ResourceVector max_cap = max_capacity(pms, dims);
  std::vector<double> size(vms.size());
  for (std::size_t n = 0; n < vms.size(); ++n) size[n] = normalized_size(vms[n].demand, max_cap);
  std::vector<std::size_t> order(vms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return size[a] > size[b]; });
  return order;
}

double load_of(const ResourceVector& used, const ResourceVector& cap) {
  double load = 0.0;
  for (std::size_t j = 0; j < cap.size(); ++j) {
    if (cap[j] > 0.0) load = std::max(load, used[j] / cap[j]);
  }
  return load;
}

// Shared driver: `pick` chooses among opened PMs that fit; otherwise the next
// unopened PM that fits is opened.
template <typename Pick>
RepackResult pack(std::span<const VmInstance> vms, std::span<const PhysicalMachine> pms,
                  Pick&& pick) {
  RepackResult result;
  result.assignment.assign(vms.size(), std::nullopt);
  const std::size_t dims = vms.empty() ? 0 : vms.front().demand.size();
  std::vector<ResourceVector> used(pms.size(), ResourceVector(dims));
  std::vector<bool> opened(pms.size(), false);
  std::vector<std::size_t> open_list;

  auto fits = [&](std::size_t k, const ResourceVector& demand) {
    ResourceVector after = used[k];
    after += demand;
    return after.fits_within(pms[k].capacity);
  };

  for (std::size_t n : decreasing_order(vms, pms)) {
    const auto& demand = vms[n].demand;
    std::optional<std::size_t> target = pick(open_list, used, demand, fits);
    if (!target) {
      for (std::size_t k = 0; k < pms.size(); ++k) {
        if (!opened[k] && fits(k, demand)) {
          target = k;
          opened[k] = true;
          open_list.push_back(k);
          break;
        }
      }
    }
    if (!target) {
      result.failed.push_back(vms[n].id);
      continue;
    }
    used[*target] += demand;
    result.assignment[n] = *target;
  }
  result.pm_count = open_list.size();
  return result;
}

}  // namespace

std::vector<VmInstance> vms_from_plan(const ConsolidationProblem& problem,
                                      const DeploymentPlan& plan) {
  std::vector<VmInstance> out;
  for (const auto& p : plan.placements) {
    for (std::size_t c = 0; c < p.count; ++c) {
      out.push_back({out.size(), problem.vm_types[p.type].config, p.app});
    }
  }
  return out;
}

double normalized_size(const ResourceVector& amounts, const ResourceVector& max_cap) {
  double size = 0.0;
  for (std::size_t j = 0; j < amounts.size(); ++j) {
    if (max_cap[j] > 0.0) size += amounts[j] / max_cap[j];
  }
  return size;
}

std::vector<PhysicalMachine> sort_pms_for_repack(std::span<const PhysicalMachine> pms) {
  std::vector<PhysicalMachine> out(pms.begin(), pms.end());
  if (out.empty()) return out;
  const ResourceVector max_cap = max_capacity(pms, out.front().capacity.size());
  std::stable_sort(out.begin(), out.end(), [&](const PhysicalMachine& a, const PhysicalMachine& b) {
    return normalized_size(a.capacity, max_cap) > normalized_size(b.capacity, max_cap);
  });
  return out;
}

RepackResult ffd(std::span<const VmInstance> vms, std::span<const PhysicalMachine> pms) {
  return pack(vms, pms,
              [](const std::vector<std::size_t>& open, const std::vector<ResourceVector>&,
                 const ResourceVector& demand, auto&& fits) -> std::optional<std::size_t> {
                for (std::size_t k : open) {
                  if (fits(k, demand)) return k;
                }
                return std::nullopt;
              });
}

RepackResult ll(std::span<const VmInstance> vms, std::span<const PhysicalMachine> pms) {
  return pack(vms, pms,
              [&pms](const std::vector<std::size_t>& open, const std::vector<ResourceVector>& used,
                     const ResourceVector& demand, auto&& fits) -> std::optional<std::size_t> {
                std::optional<std::size_t> best;
                double best_load = std::numeric_limits<double>::infinity();
                for (std::size_t k : open) {
                  if (!fits(k, demand)) continue;
                  const double load = load_of(used[k], pms[k].capacity);
                  if (load < best_load) {
                    best_load = load;
                    best = k;
                  }
                }
                return best;
              });
}

}  // namespace consol
