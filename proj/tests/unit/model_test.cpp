#include <gtest/gtest.h>

#include <cmath>

#include "consol/model.hpp"
#include "fixtures.hpp"

namespace consol {
namespace {

using testing::two_pm_problem;
using testing::uniform_problem;

bool has_violation_at(const std::vector<Violation>& v, const std::string& fragment) {
  for (const auto& x : v) {
    if (x.path.find(fragment) != std::string::npos) return true;
  }
  return false;
}

TEST(ValidateProblem, WellFormedHasNoViolations) {
  EXPECT_TRUE(validate_problem(uniform_problem(2, 3, 2, 2)).empty());
}

TEST(ValidateProblem, MissingProfileEntryIsReported) {
  auto p = uniform_problem(2, 3, 2, 2);
  p.profile = PerformanceProfile::dense(2, 3, 1, std::vector<double>(6, 1.0));
  EXPECT_FALSE(validate_problem(p).empty());
}

TEST(ValidateProblem, NegativeCapacityIsReported) {
  auto p = uniform_problem(2, 3, 2, 2);
  p.pms[1].capacity[0] = -1.0;
  const auto v = validate_problem(p);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(has_violation_at(v, "pms"));
}

TEST(ValidateProblem, RequireValidThrows) {
  auto p = uniform_problem(1, 1, 1, 1);
  p.applications[0].required_throughput = -2.0;
  EXPECT_THROW(require_valid(p), InputError);
}

TEST(CheckPlan, EmptyPlanWithZeroDemandIsFeasible) {
  const auto p = two_pm_problem(0.0);
  const auto report = check_plan(p, make_plan(p, {}));
  EXPECT_TRUE(report.resource_feasible);
  EXPECT_TRUE(report.performance_satisfied);
}

TEST(CheckPlan, TwoVmsFillCpuExactly) {
  const auto p = two_pm_problem();
  const auto report = check_plan(p, make_plan(p, {{0, 0, 0, 2}}));
  EXPECT_TRUE(report.resource_feasible);
  EXPECT_DOUBLE_EQ(report.slack[0][0], 0.0);
  EXPECT_DOUBLE_EQ(report.surplus[0], 2.0);
}

TEST(CheckPlan, MemoryOverloadIsFlagged) {
  auto p = two_pm_problem();
  p.pms[1].capacity = {8, 4096};
  const auto report = check_plan(p, make_plan(p, {{0, 1, 0, 3}}));
  EXPECT_FALSE(report.resource_feasible);
  ASSERT_EQ(report.overloaded.size(), 1u);
  EXPECT_EQ(report.overloaded[0], (ResourceFlag{1, 1}));
}

TEST(CheckPlan, DanglingIndexThrows) {
  const auto p = two_pm_problem();
  EXPECT_THROW(make_plan(p, {{0, 5, 0, 1}}), InputError);
  EXPECT_THROW(make_plan(p, {{1, 0, 0, 1}}), InputError);
}

TEST(MakePlan, MergesDuplicatesAndDropsZeros) {
  const auto p = two_pm_problem();
  const auto plan = make_plan(p, {{0, 1, 0, 1}, {0, 0, 0, 0}, {0, 1, 0, 1}});
  ASSERT_EQ(plan.placements.size(), 1u);
  EXPECT_EQ(plan.placements[0], (Placement{0, 1, 0, 2}));
  EXPECT_EQ(plan.used_pms, std::vector<std::size_t>{1});
  EXPECT_DOUBLE_EQ(plan.provided[0], 12.0);
  EXPECT_TRUE(plan.satisfied[0]);
}

TEST(PlanPmCount, CountsDistinctUsedPms) {
  const auto p = uniform_problem(1, 4, 1, 1);
  EXPECT_EQ(plan_pm_count(make_plan(p, {})), 0u);
  EXPECT_EQ(plan_pm_count(make_plan(p, {{0, 1, 0, 1}, {0, 3, 0, 2}})), 2u);
  EXPECT_EQ(plan_vm_count(make_plan(p, {{0, 1, 0, 1}, {0, 3, 0, 2}})), 3u);
}

TEST(RelativeDifferences, NanForZeroDemand) {
  auto p = uniform_problem(2, 1, 1, 1);
  p.applications[1].required_throughput = 0.0;
  const auto rd = relative_differences(p, make_plan(p, {{0, 0, 0, 2}}));
  EXPECT_DOUBLE_EQ(rd[0], 1.0);
  EXPECT_TRUE(std::isnan(rd[1]));
}

TEST(PerformanceProfile, ClassedEqualsDense) {
  const auto dense = PerformanceProfile::dense(1, 3, 2, {1, 2, 1, 2, 5, 6});
  const auto classed = PerformanceProfile::classed(1, {0, 0, 1}, 2, 2, {1, 2, 5, 6});
  EXPECT_EQ(dense, classed);
  EXPECT_DOUBLE_EQ(classed.at(0, 2, 1), 6.0);
}

TEST(Tolerance, MeetsAndWithinAbsorbRounding) {
  EXPECT_TRUE(meets(0.1 + 0.2, 0.3));
  EXPECT_FALSE(meets(0.29, 0.3));
  EXPECT_TRUE(within(0.1 + 0.2, 0.3));
  EXPECT_FALSE(within(0.31, 0.3));
}

}  // namespace
}  // namespace consol
