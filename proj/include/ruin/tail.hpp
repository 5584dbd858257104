#pragma once

#include <vector>

#include "ruin/simulate.hpp"

namespace ruin {

struct EmptyWindowError : ModelError {
  using ModelError::ModelError;
};
struct ZeroTailError : ModelError {
  using ModelError::ModelError;
};
struct TooFewSamplesError : ModelError {
  using ModelError::ModelError;
};

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// OLS of log gbar against log u over grid points inside [window_lo, window_hi].
SlopeFit log_log_slope(const std::vector<double>& u_grid,
                       const std::vector<double>& gbar_hat, double window_lo,
                       double window_hi);

// Hill tail-index estimate from the k largest of the positive samples.
double hill_estimator(const std::vector<double>& samples, long k);

struct KsResult {
  double d_stat = 0.0;
  long n1 = 0;
  long n2 = 0;
  double threshold_1pct = 0.0;
};

KsResult two_sample_ks(std::vector<double> a, std::vector<double> b);

// Distributional test of Y_inf = Q + M * Y_inf': compares fresh Y_inf draws
// against one-step reconstructions from independent cycles.
KsResult fixed_point_check(const ModelSpec& spec, const DerivedParams& d,
                           int i, const SimConfig& cfg);

// Default slope window: the 90th to 99.5th percentile of the positive samples.
std::pair<double, double> default_slope_window(std::vector<double> positive);

struct GammaCrossRow {
  int state = 0;
  double gamma_analytic = 0.0;
  double slope = 0.0;
  double hill = 0.0;
};

// Analytic gamma, log-log slope and Hill estimate for every initial state.
std::vector<GammaCrossRow> gamma_cross_check(const ModelSpec& spec,
                                             const SimConfig& cfg);

}  // namespace ruin
