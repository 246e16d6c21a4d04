#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace consol {

enum class DetectorTest { Chi2, F };

/// What the chi-square test compares the window with. Both use bins of equal
/// probability under Exponential(lambda_hat).
///  - Window: two-sample homogeneity test against the reference window's bin
///    counts. Accounts for lambda_hat being estimated.
///  - Fitted: goodness of fit against the expected W/B per bin. Exact only
///    when lambda_hat is known; with an estimated rate its size is inflated.
enum class Chi2Reference { Window, Fitted };

DetectorTest parse_detector_test(const std::string& name);
const char* to_string(DetectorTest test);
Chi2Reference parse_chi2_reference(const std::string& name);

struct DetectorConfig {
  std::size_t window_size = 1000;
  double alpha = 0.01;
  DetectorTest test = DetectorTest::F;
  /// New samples between consecutive tests; 0 means window_size (disjoint windows).
  std::size_t test_stride = 0;
  std::size_t chi2_bins = 10;
  Chi2Reference chi2_reference = Chi2Reference::Window;
};

/// Sliding window of inter-arrival times plus the rate estimate it backs.
///
/// The reference is the window frozen at the last accepted change and
/// lambda_hat = 1 / mean(reference). Both stay empty until the first full
/// window arrives.
class DetectorState {
 public:
  /// Throws std::invalid_argument unless 0 < alpha < 1, window_size >= 2 and
  /// chi2_bins >= 2.
  explicit DetectorState(DetectorConfig config);

  const DetectorConfig& config() const { return config_; }
  std::size_t window_size() const { return config_.window_size; }
  std::size_t stride() const { return config_.test_stride ? config_.test_stride : config_.window_size; }

  void push(double sample);
  bool window_full() const { return count_ == config_.window_size; }
  /// Oldest first.
  std::vector<double> window() const;
  double window_mean() const;

  bool has_reference() const { return !reference_.empty(); }
  const std::vector<double>& reference() const { return reference_; }
  double lambda_hat() const { return lambda_hat_; }

  /// reference := window, lambda_hat := 1 / mean(window). Requires a full window.
  void accept_window();
  /// Overrides the rate the chi-square test checks against.
  void set_lambda_hat(double rate) { lambda_hat_ = rate; }

  double chi2_critical() const { return chi2_critical_; }
  double f_lower() const { return f_lower_; }
  double f_upper() const { return f_upper_; }

  std::size_t samples_since_test = 0;

 private:
  DetectorConfig config_;
  std::vector<double> ring_;
  std::size_t head_ = 0;  // next write position
  std::size_t count_ = 0;
  std::vector<double> reference_;
  double lambda_hat_ = 0.0;
  double chi2_critical_ = 0.0;
  double f_lower_ = 0.0;
  double f_upper_ = 0.0;
};

struct TestOutcome {
  bool changed = false;
  double statistic = 0.0;
};

/// Pearson chi-square over equal-probability bins of Exponential(lambda_hat),
/// df = bins - 1. Uses the Fitted form whenever no full reference window
/// exists. Empty (not ready) until the window is full and lambda_hat > 0.
std::optional<TestOutcome> chi2_changed(const DetectorState& state);

/// Two-sided F test on mean(window) / mean(reference) with (2W, 2W) degrees of
/// freedom. Empty until both buffers are full.
std::optional<TestOutcome> f_changed(const DetectorState& state);

/// Pushes one sample. The first full window initializes the estimate, which is
/// returned. Afterwards the configured test runs every stride() samples; on a
/// detected change the window becomes the new reference and its rate is
/// returned.
std::optional<double> update_estimate(DetectorState& state, double sample);

}  // namespace consol
