#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ruin/mgf.hpp"
#include "ruin/model.hpp"
#include "ruin/rng.hpp"

namespace ruin {

struct ExcursionOverflowError : ModelError {
  using ModelError::ModelError;
};
struct BadStepError : ModelError {
  using ModelError::ModelError;
};
struct BadHorizonError : ModelError {
  using ModelError::ModelError;
};
struct NotRuinCertainError : ModelError {
  using ModelError::ModelError;
};
struct DegenerateTailError : ModelError {
  using ModelError::ModelError;
};

struct Segment {
  int state;
  double duration;
};

struct ClaimEvent {
  double time;  // global time within the excursion
  double size;  // signed; downward claims are negative
};

// One excursion of theta from state i to its first return: the visited
// segments, the claim events laid down along them, and the return time.
struct Excursion {
  std::vector<Segment> segments;
  std::vector<ClaimEvent> claims;
  double total_duration = 0.0;
};

struct SimConfig {
  long n_paths = 10000;
  double quad_step = 0.0;  // 0 selects 0.01 / max_j lambda_j
  int max_cycles = 10000;
  double product_cutoff = 1e-6;
  double horizon = 100.0;
  std::uint64_t seed = 1;
  int workers = 1;
};

// One draw of the (M, Q) pair of the excursion recurrence.  M is exact in
// law; the jump part of Q is exact (claim times sit on the grid before the
// Gaussian increments are drawn) and only the premium integral carries O(h)
// bias from its left-endpoint Riemann sum.
struct CycleSample {
  double M = 1.0;
  double Q = 0.0;
  double quad_step = 0.0;
  double duration = 0.0;
  double max_partial_q = 0.0;  // running max of the partial Q over the grid
};

// Grid trace of the running partial Q, for finite-horizon ruin detection.
struct CyclePath {
  std::vector<double> times;
  std::vector<double> partial_q;
};

struct YDraw {
  double value = 0.0;
  bool cap_hit = false;
  int cycles = 0;
};

struct TailReport {
  std::vector<double> u_grid;
  std::vector<double> gbar_hat;
  std::vector<double> ci_halfwidth;
  std::vector<double> psi_lower;
  std::vector<double> psi_upper;
  std::vector<double> gbar0_by_state;
  long n_samples = 0;
  double cap_hit_fraction = 0.0;
  double runtime_seconds = 0.0;
};

struct RuinEstimate {
  double psi_hat = 0.0;
  double ci_halfwidth = 0.0;
  long n_paths = 0;
};

double default_quad_step(const DerivedParams& d);

Excursion sample_excursion(const ModelSpec& spec, const DerivedParams& d,
                           int i, RngStream& rng);

CycleSample sample_cycle(const ModelSpec& spec, const Excursion& exc,
                         RngStream& rng, double h, CyclePath* path = nullptr);

YDraw sample_Y_inf(const ModelSpec& spec, const DerivedParams& d, int i,
                   RngStream& rng, const SimConfig& cfg);

// Convenience batch: cfg.n_paths draws of Y_inf for initial state i, using
// disjoint stream ids offset by `domain` so independent batches never share
// streams.  Parallel over cfg.workers; results are worker-count invariant.
std::vector<YDraw> sample_Y_inf_batch(const ModelSpec& spec,
                                      const DerivedParams& d, int i,
                                      const SimConfig& cfg,
                                      std::uint64_t domain = 0);

TailReport estimate_tail(const ModelSpec& spec, const DerivedParams& d, int i,
                         const std::vector<double>& u_grid,
                         const SimConfig& cfg);

RuinEstimate estimate_ruin_finite_horizon(const ModelSpec& spec,
                                          const DerivedParams& d, int i,
                                          double u, const SimConfig& cfg);

// Iterates the return-time reserve recursion X_n = A_n X_{n-1} + B_n and
// reports the fraction of paths going negative within cfg.max_cycles cycles.
// Ruin is observed only at return times, complementing the finite-horizon
// estimator.
double simulate_ruin_certain_recursion(const ModelSpec& spec,
                                       const DerivedParams& d, int i, double u,
                                       const SimConfig& cfg);

// Mean of Q at steps (h, h/2, h/4) computed from common paths on nested
// grids, so successive differences expose the first-order quadrature bias.
std::array<double, 3> quadrature_refinement(const ModelSpec& spec,
                                            const DerivedParams& d, int i,
                                            double h, long n,
                                            std::uint64_t seed,
                                            int workers = 1);

// 99% half-width: normal approximation with a Wilson fallback for counts
// below 30.
double binomial_ci_halfwidth(double p_hat, long n);

}  // namespace ruin
