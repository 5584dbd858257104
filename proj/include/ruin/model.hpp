#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "ruin/ext_real.hpp"

namespace ruin {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RowSumError : ModelError {
  using ModelError::ModelError;
};
struct NegativeOffDiagonalError : ModelError {
  using ModelError::ModelError;
};
struct NonIrreducibleError : ModelError {
  using ModelError::ModelError;
};
struct MonotonePremiumError : ModelError {
  using ModelError::ModelError;
};
struct NonPositiveVolatilityError : ModelError {
  using ModelError::ModelError;
};
struct NonPositiveExponentError : ModelError {
  using ModelError::ModelError;
};

enum class ClaimKind { Exponential, Pareto, Deterministic, Empirical };

// Distribution of the absolute claim size, supported on (0, inf).  Restricted
// to a closed set of families with analytic q-moments so that the moment
// condition checks are exact.
class ClaimDist {
 public:
  static ClaimDist exponential(double mean);
  static ClaimDist pareto(double shape, double scale);
  static ClaimDist deterministic(double value);
  static ClaimDist empirical(std::vector<double> sample);

  ClaimKind kind() const { return kind_; }
  double mean_param() const { return p1_; }
  double shape() const { return p1_; }
  double scale() const { return p2_; }
  double fixed_value() const { return p1_; }
  const std::vector<double>& sample() const { return sample_; }

  // E[X^q], q > 0; +inf when the moment diverges.
  ExtReal abs_moment(double q) const;

  // Inverse CDF at u in (0,1); drives simulation.
  double quantile(double u) const;

 private:
  ClaimDist() = default;
  ClaimKind kind_ = ClaimKind::Exponential;
  double p1_ = 1.0;
  double p2_ = 0.0;
  std::vector<double> sample_;
};

struct ModelSpec {
  Eigen::MatrixXd Lambda;  // KxK transition intensity matrix
  Eigen::VectorXd a;       // per-regime drift
  Eigen::VectorXd sigma;   // per-regime volatility, > 0
  double c = 0.0;          // premium rate (sign-free)
  double alpha1 = 0.0;     // intensity of downward jumps
  double alpha2 = 0.0;     // intensity of upward jumps
  ClaimDist f1 = ClaimDist::exponential(1.0);  // |downward jump| law
  ClaimDist f2 = ClaimDist::exponential(1.0);  // upward jump law
  int initial_state = 0;

  int num_states() const { return static_cast<int>(Lambda.rows()); }
};

struct DerivedParams {
  Eigen::VectorXd beta;        // beta_j = 2 a_j / sigma_j^2 - 1
  Eigen::VectorXd r;           // critical exponent per regime
  Eigen::VectorXd lambda_vec;  // lambda_j = -Lambda(j,j)
  Eigen::MatrixXd embedded;    // embedded jump chain, zero diagonal
  double beta_star = 0.0;      // min_j beta_j
  double beta_upper = 0.0;     // max_j beta_j
  double r_star = 0.0;         // min_j r_j
};

enum class RegimeClass { PowerTail, RuinCertain, Unsupported };

// Checks all ModelSpec invariants and computes the derived per-regime
// parameters.  Generator rows off by at most 1e-12 are repaired by resetting
// the diagonal; larger discrepancies are rejected.
DerivedParams validate(const ModelSpec& spec);

// Positive root of q^2 - beta q - 2 lambda / sigma^2 = 0.
double critical_exponent(double lambda, double beta, double sigma);

// Pi(|x|^q) = alpha1 E[xi1^q] + alpha2 E[xi2^q].
ExtReal claim_abs_moment(const ModelSpec& spec, double q);

// PowerTail when every beta_j > 0; RuinCertain when every beta_j < 0, there
// are genuine downward jumps and some delta in the probe grid has a finite
// claim moment; anything else is Unsupported.
RegimeClass classify_regime(const ModelSpec& spec,
                            const std::vector<double>& delta_probe);
RegimeClass classify_regime(const ModelSpec& spec);

// Log-spaced probe grid in (0, min(|beta_upper|, 1)) used by the
// certain-ruin moment condition.
std::vector<double> default_delta_probe(const DerivedParams& d);

std::string to_string(RegimeClass rc);

}  // namespace ruin
