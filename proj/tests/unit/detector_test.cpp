#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "consol/detector.hpp"
#include "consol/workload.hpp"

namespace consol {
namespace {

DetectorConfig config(DetectorTest test, std::size_t window = 1000) {
  DetectorConfig c;
  c.test = test;
  c.window_size = window;
  c.alpha = 0.01;
  return c;
}

// Returns whether the second window triggered a change.
bool trial(DetectorTest test, double rate_after, std::uint64_t seed) {
  DetectorState s(config(test));
  ExponentialStream stream(seed);
  for (int n = 0; n < 1000; ++n) update_estimate(s, stream.next(5.0));
  bool changed = false;
  for (int n = 0; n < 1000; ++n) changed = update_estimate(s, stream.next(rate_after)).has_value() || changed;
  return changed;
}

double frequency(DetectorTest test, double rate_after, std::uint64_t base) {
  int hits = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) hits += trial(test, rate_after, base + t);
  return hits / 1000.0;
}

TEST(DetectorConfig, InvalidSettingsThrow) {
  DetectorConfig c;
  c.alpha = 0.0;
  EXPECT_THROW(DetectorState{c}, std::invalid_argument);
  c.alpha = 0.01;
  c.window_size = 1;
  EXPECT_THROW(DetectorState{c}, std::invalid_argument);
}

TEST(Chi2, PerfectFitHasZeroStatistic) {
  auto c = config(DetectorTest::Chi2, 100);
  c.chi2_reference = Chi2Reference::Fitted;
  DetectorState s(c);
  const double rate = 2.0;
  for (int b = 0; b < 10; ++b) {
    const double mid = -std::log(1.0 - (b + 0.5) / 10.0) / rate;
    for (int n = 0; n < 10; ++n) s.push(mid);
  }
  s.set_lambda_hat(rate);
  const auto out = chi2_changed(s);
  ASSERT_TRUE(out);
  EXPECT_DOUBLE_EQ(out->statistic, 0.0);
  EXPECT_FALSE(out->changed);
}

TEST(Chi2, IdenticalReferenceHasZeroStatistic) {
  DetectorState s(config(DetectorTest::Chi2, 50));
  for (double x : gen_exponential(3.0, 50, 1)) s.push(x);
  s.accept_window();
  const auto out = chi2_changed(s);
  ASSERT_TRUE(out);
  EXPECT_DOUBLE_EQ(out->statistic, 0.0);
}

TEST(Chi2, NotReadyBeforeFullWindow) {
  DetectorState s(config(DetectorTest::Chi2, 10));
  s.push(1.0);
  s.set_lambda_hat(1.0);
  EXPECT_FALSE(chi2_changed(s));
}

TEST(Chi2, SizeCloseToAlpha) {
  EXPECT_NEAR(frequency(DetectorTest::Chi2, 5.0, 10'000), 0.01, 0.01);
}

TEST(Chi2, PowerForDoubledRate) {
  EXPECT_GT(frequency(DetectorTest::Chi2, 10.0, 20'000), 0.99);
}

TEST(F, IdenticalWindowsGiveUnitStatistic) {
  DetectorState s(config(DetectorTest::F, 50));
  for (double x : gen_exponential(3.0, 50, 1)) s.push(x);
  s.accept_window();
  const auto out = f_changed(s);
  ASSERT_TRUE(out);
  EXPECT_DOUBLE_EQ(out->statistic, 1.0);
  EXPECT_FALSE(out->changed);
}

TEST(F, NotReadyWithoutReference) {
  DetectorState s(config(DetectorTest::F, 10));
  for (int n = 0; n < 10; ++n) s.push(1.0);
  EXPECT_FALSE(f_changed(s));
}

TEST(F, SizeCloseToAlpha) {
  EXPECT_NEAR(frequency(DetectorTest::F, 5.0, 30'000), 0.01, 0.01);
}

TEST(F, PowerForHalvedRate) {
  EXPECT_GT(frequency(DetectorTest::F, 2.5, 40'000), 0.99);
}

TEST(UpdateEstimate, SilentDuringWarmUp) {
  for (auto test : {DetectorTest::Chi2, DetectorTest::F}) {
    DetectorState s(config(test, 100));
    const auto xs = gen_exponential(4.0, 100, 5);
    for (int n = 0; n < 99; ++n) EXPECT_FALSE(update_estimate(s, xs[n]));
    const auto first = update_estimate(s, xs[99]);
    ASSERT_TRUE(first);
    EXPECT_DOUBLE_EQ(*first, 1.0 / s.window_mean());
  }
}

TEST(UpdateEstimate, StepResponse) {
  for (auto test : {DetectorTest::Chi2, DetectorTest::F}) {
    DetectorState s(config(test));
    ExponentialStream stream(99);
    for (int n = 0; n < 3000; ++n) update_estimate(s, stream.next(5.0));
    std::optional<double> est;
    int taken = 0;
    while (!est && taken < 3000) {
      est = update_estimate(s, stream.next(10.0));
      ++taken;
    }
    ASSERT_TRUE(est) << to_string(test);
    EXPECT_LE(taken, 2000) << to_string(test);
    EXPECT_NEAR(*est, 10.0, 1.0) << to_string(test);
  }
}

TEST(UpdateEstimate, DeterministicGivenSamples) {
  const auto xs = gen_exponential(5.0, 5000, 3);
  for (auto test : {DetectorTest::Chi2, DetectorTest::F}) {
    DetectorState a(config(test, 200));
    DetectorState b(config(test, 200));
    for (double x : xs) EXPECT_EQ(update_estimate(a, x), update_estimate(b, x));
  }
}

}  // namespace
}  // namespace consol
