#include <gtest/gtest.h>

#include <random>
#include <string>

#include "consol/problem_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace consol {
namespace {

TEST(ProblemIo, RoundTripPreservesProblem) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 50; ++n) {
    const auto p = testing::random_feasible_problem(rng);
    EXPECT_EQ(parse_problem(serialize_problem(p)), p);
  }
}

TEST(ProblemIo, PlanRoundTrip) {
  const auto p = testing::two_pm_problem();
  const auto plan = make_plan(p, {{0, 1, 0, 2}});
  EXPECT_EQ(parse_plan(p, serialize_plan(plan)), plan);
}

TEST(ProblemIo, SyntaxErrorReportsLine) {
  try {
    parse_problem("{\n  \"resources\": [\n  oops\n}");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ProblemIo, MissingFieldIsNamed) {
  try {
    parse_problem(R"({"resources": [], "applications": [], "pms": [], "vm_types": []})");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("profile"), std::string::npos) << e.what();
  }
}

TEST(ProblemIo, PlanWithDanglingPmIsRejected) {
  const auto p = testing::two_pm_problem();
  EXPECT_THROW(parse_plan(p, R"({"placements": [{"app": 0, "pm": 7, "type": 0, "count": 1}], "used_pms": [7]})"),
               InputError);
}

TEST(ProblemIo, PlanUsedPmsMustMatchPlacements) {
  const auto p = testing::two_pm_problem();
  EXPECT_THROW(parse_plan(p, R"({"placements": [{"app": 0, "pm": 0, "type": 0, "count": 1}]})"), InputError);
  EXPECT_THROW(parse_plan(p, R"({"placements": [{"app": 0, "pm": 0, "type": 0, "count": 1}], "used_pms": [1]})"),
               InputError);
}

}  // namespace
}  // namespace consol
