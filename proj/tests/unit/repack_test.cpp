#include <gtest/gtest.h>

#include <random>

#include "consol/heuristic.hpp"
#include "consol/repack.hpp"
#include "consol/replication.hpp"
#include "oracles.hpp"

namespace consol {
namespace {

std::vector<VmInstance> vms_1d(const std::vector<double>& sizes) {
  std::vector<VmInstance> out;
  for (std::size_t n = 0; n < sizes.size(); ++n) out.push_back({n, {sizes[n]}, 0});
  return out;
}

std::vector<PhysicalMachine> pms_1d(std::size_t count, double cap) {
  std::vector<PhysicalMachine> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back({"p" + std::to_string(k), {cap}});
  return out;
}

using Assignment = std::vector<std::optional<std::size_t>>;

TEST(Ffd, ClassicOneDimensionalExample) {
  const auto r = ffd(vms_1d({0.5, 0.7, 0.3, 0.4}), pms_1d(4, 1.0));
  EXPECT_EQ(r.pm_count, 2u);
  // 0.7 and 0.3 share the first PM, 0.5 and 0.4 the second.
  EXPECT_EQ(r.assignment, (Assignment{1, 0, 0, 1}));
  EXPECT_TRUE(r.failed.empty());
}

TEST(Ffd, EmptyInput) {
  const auto r = ffd({}, pms_1d(2, 1.0));
  EXPECT_EQ(r.pm_count, 0u);
  EXPECT_TRUE(r.assignment.empty());
}

TEST(Ffd, OversizedVmFailsOthersPlaced) {
  const auto r = ffd(vms_1d({0.4, 2.0, 0.5}), pms_1d(2, 1.0));
  EXPECT_EQ(r.failed, std::vector<std::size_t>{1});
  EXPECT_FALSE(r.assignment[1]);
  EXPECT_TRUE(r.assignment[0] && r.assignment[2]);
  EXPECT_EQ(r.pm_count, 1u);
}

TEST(Ll, PrefersLeastLoadedOpenedPm) {
  // After 6 and 5 open two PMs (loads 0.6 and 0.5), the 2 goes to the
  // lighter one; first fit would take the first.
  const auto vms = vms_1d({6, 5, 2});
  const auto pms = pms_1d(3, 10);
  EXPECT_EQ(ll(vms, pms).assignment, (Assignment{0, 1, 1}));
  EXPECT_EQ(ffd(vms, pms).assignment, (Assignment{0, 1, 0}));
}

TEST(Ll, OpensNewPmWhenNothingFits) {
  const auto r = ll(vms_1d({6, 6, 6}), pms_1d(3, 10));
  EXPECT_EQ(r.pm_count, 3u);
}

TEST(Repack, MultiDimensionalCapacityRespected) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  for (int n = 0; n < 200; ++n) {
    std::vector<VmInstance> vms;
    for (std::size_t v = 0; v < 12; ++v) vms.push_back({v, {u(rng), u(rng), u(rng)}, 0});
    std::vector<PhysicalMachine> pms;
    for (int k = 0; k < 12; ++k) pms.push_back({"p" + std::to_string(k), {u(rng) + 3, u(rng) + 3, u(rng) + 3}});
    for (const auto& r : {ffd(vms, pms), ll(vms, pms)}) {
      std::vector<ResourceVector> used(pms.size(), ResourceVector(3));
      for (std::size_t v = 0; v < vms.size(); ++v) {
        if (r.assignment[v]) used[*r.assignment[v]] += vms[v].demand;
      }
      for (std::size_t k = 0; k < pms.size(); ++k) {
        for (std::size_t j = 0; j < 3; ++j) ASSERT_TRUE(within(used[k][j], pms[k].capacity[j]));
      }
    }
  }
}

TEST(Repack, WithinFirstFitDecreasingBoundOfOptimum) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> count(1, 9);
  std::uniform_int_distribution<int> size(1, 10);
  for (int n = 0; n < 300; ++n) {
    std::vector<int> sizes(count(rng));
    for (int& s : sizes) s = size(rng);
    const double opt = static_cast<double>(testing::optimal_bins_1d(sizes, 10));
    const auto vms = vms_1d(std::vector<double>(sizes.begin(), sizes.end()));
    const auto pms = pms_1d(sizes.size(), 10);
    EXPECT_LE(static_cast<double>(ffd(vms, pms).pm_count), 11.0 / 9.0 * opt + 6.0 / 9.0);
    EXPECT_LE(static_cast<double>(ll(vms, pms).pm_count), 11.0 / 9.0 * opt + 6.0 / 9.0);
  }
}

TEST(Repack, Deterministic) {
  const auto p = make_replication_problem(3);
  const auto plan = three_max(p).plan;
  const auto vms = vms_from_plan(p, plan);
  const auto pms = sort_pms_for_repack(p.pms);
  EXPECT_EQ(ffd(vms, pms).assignment, ffd(vms, pms).assignment);
  EXPECT_EQ(ll(vms, pms).assignment, ll(vms, pms).assignment);
}

TEST(Repack, VmsFromPlanExpandsCounts) {
  const auto p = make_replication_problem(3);
  auto plan = make_plan(p, {{0, 0, 5, 2}, {1, 3, 7, 1}});
  const auto vms = vms_from_plan(p, plan);
  ASSERT_EQ(vms.size(), 3u);
  EXPECT_EQ(vms[2].origin_app, 1u);
  EXPECT_EQ(vms[0].demand, p.vm_types[5].config);
}

TEST(Repack, PmsSortedLargestFirst) {
  const auto sorted = sort_pms_for_repack(make_replication_problem(1).pms);
  EXPECT_EQ(sorted.front().capacity, (ResourceVector{8, 8192, 2000}));
  EXPECT_EQ(sorted.back().capacity, (ResourceVector{4, 4096, 2000}));
}

}  // namespace
}  // namespace consol
