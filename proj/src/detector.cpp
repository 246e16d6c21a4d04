#include "consol/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

#include "consol/model.hpp"

namespace consol {

DetectorTest parse_detector_test(const std::string& name) {
  if (name == "chi2") return DetectorTest::Chi2;
  if (name == "f") return DetectorTest::F;
  throw InputError("unknown detector test '" + name + "' (expected chi2 or f)");
}

const char* to_string(DetectorTest test) { return test == DetectorTest::Chi2 ? "chi2" : "f"; }

Chi2Reference parse_chi2_reference(const std::string& name) {
  if (name == "window") return Chi2Reference::Window;
  if (name == "fitted") return Chi2Reference::Fitted;
  throw InputError("unknown chi2 reference '" + name + "' (expected window or fitted)");
}

DetectorState::DetectorState(DetectorConfig config) : config_(config) {
  if (!(config_.alpha > 0.0 && config_.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (config_.window_size < 2) throw std::invalid_argument("window_size must be >= 2");
  if (config_.chi2_bins < 2) throw std::invalid_argument("chi2_bins must be >= 2");
  ring_.assign(config_.window_size, 0.0);

  const double alpha = config_.alpha;
  boost::math::chi_squared_distribution<double> chi2(static_cast<double>(config_.chi2_bins - 1));
  chi2_critical_ = boost::math::quantile(boost::math::complement(chi2, alpha));
  const double df = 2.0 * static_cast<double>(config_.window_size);
  boost::math::fisher_f_distribution<double> f(df, df);
  f_lower_ = boost::math::quantile(f, alpha / 2.0);
  f_upper_ = boost::math::quantile(boost::math::complement(f, alpha / 2.0));
}

void DetectorState::push(double sample) {
  ring_[head_] = sample;
  head_ = (head_ + 1) % ring_.size();
  count_ = std::min(count_ + 1, ring_.size());
}

std::vector<double> DetectorState::window() const {
  std::vector<double> out;
  out.reserve(count_);
  const std::size_t start = (head_ + ring_.size() - count_) % ring_.size();
  for (std::size_t n = 0; n < count_; ++n) out.push_back(ring_[(start + n) % ring_.size()]);
  return out;
}

double DetectorState::window_mean() const {
  if (count_ == 0) return 0.0;
  const auto w = window();
  return std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
}

void DetectorState::accept_window() {
  if (!window_full()) throw std::logic_error("accept_window needs a full window");
  reference_ = window();
  const double mean = std::accumulate(reference_.begin(), reference_.end(), 0.0) /
                      static_cast<double>(reference_.size());
  lambda_hat_ = 1.0 / mean;
}

std::optional<TestOutcome> chi2_changed(const DetectorState& state) {
  if (!state.window_full() || !(state.lambda_hat() > 0.0)) return std::nullopt;
  const std::size_t bins = state.config().chi2_bins;
  const double b = static_cast<double>(bins);
  auto counts = [&](const std::vector<double>& samples) {
    std::vector<double> c(bins, 0.0);
    for (double x : samples) {
      // CDF value under Exponential(lambda_hat) selects the equal-probability bin.
      const double cdf = -std::expm1(-state.lambda_hat() * x);
      const auto idx = static_cast<std::size_t>(std::floor(b * cdf));
      c[std::min(idx, bins - 1)] += 1.0;
    }
    return c;
  };
  const auto observed = counts(state.window());
  double stat = 0.0;
  if (state.config().chi2_reference == Chi2Reference::Window &&
      state.reference().size() == state.window_size()) {
    const auto ref = counts(state.reference());
    for (std::size_t k = 0; k < bins; ++k) {
      const double expected = (observed[k] + ref[k]) / 2.0;
      if (expected <= 0.0) continue;
      stat += ((observed[k] - expected) * (observed[k] - expected) +
               (ref[k] - expected) * (ref[k] - expected)) / expected;
    }
  } else {
    const double expected = static_cast<double>(state.window_size()) / b;
    for (double o : observed) stat += (o - expected) * (o - expected) / expected;
  }
  return TestOutcome{stat > state.chi2_critical(), stat};
}

std::optional<TestOutcome> f_changed(const DetectorState& state) {
  if (!state.window_full() || state.reference().size() != state.window_size()) return std::nullopt;
  const auto& ref = state.reference();
  const double ref_mean = std::accumulate(ref.begin(), ref.end(), 0.0) /
                          static_cast<double>(ref.size());
  const double stat = state.window_mean() / ref_mean;
  return TestOutcome{stat < state.f_lower() || stat > state.f_upper(), stat};
}

std::optional<double> update_estimate(DetectorState& state, double sample) {
  state.push(sample);
  if (!state.window_full()) return std::nullopt;
  if (!state.has_reference()) {
    state.accept_window();
    state.samples_since_test = 0;
    return state.lambda_hat();
  }
  if (++state.samples_since_test < state.stride()) return std::nullopt;
  state.samples_since_test = 0;
  const auto outcome = state.config().test == DetectorTest::Chi2 ? chi2_changed(state)
                                                                 : f_changed(state);
  if (!outcome || !outcome->changed) return std::nullopt;
  state.accept_window();
  return state.lambda_hat();
}

}  // namespace consol
