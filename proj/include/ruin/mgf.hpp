#pragma once

#include <cstddef>

#include "ruin/ext_real.hpp"
#include "ruin/model.hpp"

namespace ruin {

struct NotPowerTailError : ModelError {
  using ModelError::ModelError;
};
struct NoBracketError : ModelError {
  using ModelError::ModelError;
};
struct BadDeltaError : ModelError {
  using ModelError::ModelError;
};
struct DivergentError : ModelError {
  using ModelError::ModelError;
};

// E[exp(s * Z_tau)] for Z_t = sigma W_t + (1/2) sigma^2 beta t and an
// independent Exp(lambda) horizon: lambda / (lambda - (1/2) sigma^2 s (s+beta))
// when the denominator is positive, +inf otherwise.
ExtReal laplace_factor(double lambda, double sigma, double beta, double s);

// Per-segment factor f_j(q) = E[exp(-q Z_tau)]; finite exactly on [0, r_j).
ExtReal segment_factor(const DerivedParams& d, const ModelSpec& spec, int j,
                       double q);

// E[exp(s V_{ups_1})] for the excursion of theta from state i back to i,
// evaluated by the memoized subset recursion over first-entered states.
// If cells is non-null it receives the number of distinct (subset, source,
// target) cells touched.
ExtReal excursion_mgf(const ModelSpec& spec, int i, double s,
                      std::size_t* cells = nullptr);

// Upsilon_i(q) = E[M_1^q] with M_1 = exp(-V_{ups_1}).
ExtReal upsilon(const ModelSpec& spec, int i, double q);

struct GammaResult {
  double gamma = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  ExtReal upsilon_at_gamma;
  int iterations = 0;
  double epsilon_margin = 0.0;  // largest probed eps with Upsilon(gamma+eps) finite
};

// Unique root of Upsilon_i(q) = 1 in [beta_*, r_*), located by bisection.
GammaResult find_gamma(const ModelSpec& spec, int i, double tol = 1e-10);

// E[A_1^delta] = E[exp(delta V_{ups_1})], the contraction factor of the
// certain-ruin recursion; requires 0 < delta < min(|max_j beta_j|, 1).
ExtReal expected_A_delta(const ModelSpec& spec, int i, double delta);

struct PathSumBound {
  double lower = 0.0;       // exact sum over excursion paths of length <= max_len
  double tail_bound = 0.0;  // +inf when no contraction certificate holds
};

// Independent oracle for Upsilon: direct dynamic-programming sum over
// embedded-chain excursion paths, with an operator-norm bound on the
// truncated mass.
PathSumBound brute_force_upsilon(const ModelSpec& spec, int i, double q,
                                 int max_len);

enum class ExtremumSide { Inf, Sup };

// Closed-form Laplace transforms of the running extrema of a drifted Wiener
// process over an independent exponential horizon:
//   Inf: E[exp(-coeff inf_{s<=tau} W^{(sigma beta/2)}_s)] = r/(r - coeff/sigma)
//   Sup: E[exp( coeff sup_{s<=tau} W^{(sigma beta/2)}_s)] = rt/(rt - coeff/sigma)
// with r = beta/2 + sqrt(beta^2/4 + 2 lambda/sigma^2) and rt the same with
// |beta|; +inf past the pole.
ExtReal wiener_extremum_laplace(double lambda, double sigma, double beta,
                                double coeff, ExtremumSide side);

}  // namespace ruin
