#pragma once

#include <random>

#include "ruin/model.hpp"

namespace ruin::testing {

// Two-state model with unit switching rates; drifts chosen to hit the given
// betas at sigma = 1.  Downward Exp(1) claims keep the premium process
// non-monotone.
inline ModelSpec two_state(double beta0, double beta1, double c = 1.0,
                           double alpha1 = 1.0) {
  ModelSpec spec;
  spec.Lambda.resize(2, 2);
  spec.Lambda << -1.0, 1.0, 1.0, -1.0;
  spec.a.resize(2);
  spec.a << 0.5 * (beta0 + 1.0), 0.5 * (beta1 + 1.0);
  spec.sigma = Eigen::VectorXd::Ones(2);
  spec.c = c;
  spec.alpha1 = alpha1;
  spec.f1 = ClaimDist::exponential(1.0);
  spec.initial_state = 0;
  return spec;
}

// Three-state model with distinct rates and betas; r_* > 2 so M has a finite
// second moment at q = 1.
inline ModelSpec three_state() {
  ModelSpec spec;
  spec.Lambda.resize(3, 3);
  spec.Lambda << -2.0, 1.5, 0.5,  //
      1.0, -2.0, 1.0,             //
      0.5, 0.5, -1.0;
  spec.a.resize(3);
  spec.a << 1.0, 1.1, 1.25;  // beta = (1, 1.2, 1.5)
  spec.sigma = Eigen::VectorXd::Ones(3);
  spec.c = 1.0;
  spec.alpha1 = 1.0;
  spec.f1 = ClaimDist::exponential(1.0);
  spec.initial_state = 0;
  return spec;
}

// Fully connected random spec with betas in (0.2, 2).
inline ModelSpec random_power_tail(std::mt19937_64& gen, int K) {
  std::uniform_real_distribution<double> rate(0.2, 2.0);
  std::uniform_real_distribution<double> beta(0.2, 2.0);
  ModelSpec spec;
  spec.Lambda = Eigen::MatrixXd::Zero(K, K);
  for (int j = 0; j < K; ++j) {
    double off = 0.0;
    for (int k = 0; k < K; ++k) {
      if (k == j) continue;
      spec.Lambda(j, k) = rate(gen);
      off += spec.Lambda(j, k);
    }
    spec.Lambda(j, j) = -off;
  }
  spec.a.resize(K);
  spec.sigma = Eigen::VectorXd::Ones(K);
  for (int j = 0; j < K; ++j) spec.a(j) = 0.5 * (beta(gen) + 1.0);
  spec.c = 1.0;
  spec.alpha1 = 1.0;
  spec.f1 = ClaimDist::exponential(1.0);
  spec.initial_state = 0;
  return spec;
}

}  // namespace ruin::testing
