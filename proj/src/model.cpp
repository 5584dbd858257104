#include "ruin/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ruin {

ClaimDist ClaimDist::exponential(double mean) {
  if (mean <= 0.0) throw ModelError("exponential claim mean must be > 0");
  ClaimDist d;
  d.kind_ = ClaimKind::Exponential;
  d.p1_ = mean;
  return d;
}

ClaimDist ClaimDist::pareto(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0)
    throw ModelError("pareto shape and scale must be > 0");
  ClaimDist d;
  d.kind_ = ClaimKind::Pareto;
  d.p1_ = shape;
  d.p2_ = scale;
  return d;
}

ClaimDist ClaimDist::deterministic(double value) {
  if (value <= 0.0) throw ModelError("deterministic claim value must be > 0");
  ClaimDist d;
  d.kind_ = ClaimKind::Deterministic;
  d.p1_ = value;
  return d;
}

ClaimDist ClaimDist::empirical(std::vector<double> sample) {
  if (sample.empty()) throw ModelError("empirical claim sample is empty");
  for (double x : sample)
    if (x <= 0.0) throw ModelError("empirical claim sample must be positive");
  ClaimDist d;
  d.kind_ = ClaimKind::Empirical;
  std::sort(sample.begin(), sample.end());
  d.sample_ = std::move(sample);
  return d;
}

ExtReal ClaimDist::abs_moment(double q) const {
  if (q <= 0.0) throw NonPositiveExponentError("moment exponent must be > 0");
  switch (kind_) {
    case ClaimKind::Exponential:
      return ExtReal(std::pow(p1_, q) * std::tgamma(q + 1.0));
    case ClaimKind::Pareto:
      if (q >= p1_) return ExtReal::infinity();
      return ExtReal(p1_ * std::pow(p2_, q) / (p1_ - q));
    case ClaimKind::Deterministic:
      return ExtReal(std::pow(p1_, q));
    case ClaimKind::Empirical: {
      double s = 0.0;
      for (double x : sample_) s += std::pow(x, q);
      return ExtReal(s / static_cast<double>(sample_.size()));
    }
  }
  return ExtReal(0.0);
}

double ClaimDist::quantile(double u) const {
  switch (kind_) {
    case ClaimKind::Exponential:
      return -p1_ * std::log1p(-u);
    case ClaimKind::Pareto:
      return p2_ * std::pow(1.0 - u, -1.0 / p1_);
    case ClaimKind::Deterministic:
      return p1_;
    case ClaimKind::Empirical: {
      auto n = sample_.size();
      auto idx = static_cast<std::size_t>(u * static_cast<double>(n));
      if (idx >= n) idx = n - 1;
      return sample_[idx];
    }
  }
  return 0.0;
}

double critical_exponent(double lambda, double beta, double sigma) {
  return 0.5 * beta +
         std::sqrt(0.25 * beta * beta + 2.0 * lambda / (sigma * sigma));
}

namespace {

constexpr double kRowSumTol = 1e-12;

void check_irreducible(const Eigen::MatrixXd& Lambda) {
  const int K = static_cast<int>(Lambda.rows());
  // boolean reachability closure on the off-diagonal support
  std::vector<std::vector<bool>> reach(K, std::vector<bool>(K, false));
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      if (j != k && Lambda(j, k) > 0.0) reach[j][k] = true;
  for (int m = 0; m < K; ++m)
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k)
        if (reach[j][m] && reach[m][k]) reach[j][k] = true;
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      if (j != k && !reach[j][k])
        throw NonIrreducibleError("state " + std::to_string(k) +
                                  " is unreachable from state " +
                                  std::to_string(j));
}

}  // namespace

DerivedParams validate(const ModelSpec& spec) {
  const int K = spec.num_states();
  if (K < 2) throw ModelError("model needs at least 2 regimes");
  if (spec.Lambda.rows() != spec.Lambda.cols())
    throw ModelError("intensity matrix must be square");
  if (spec.a.size() != K || spec.sigma.size() != K)
    throw ModelError("drift/volatility vectors must have length K");
  if (spec.initial_state < 0 || spec.initial_state >= K)
    throw ModelError("initial state out of range");
  if (spec.alpha1 < 0.0 || spec.alpha2 < 0.0)
    throw ModelError("jump intensities must be >= 0");
  if (spec.c >= 0.0 && spec.alpha1 == 0.0)
    throw MonotonePremiumError(
        "premium process is nondecreasing: c >= 0 with no downward jumps");

  Eigen::MatrixXd Lambda = spec.Lambda;
  for (int j = 0; j < K; ++j) {
    double off = 0.0;
    for (int k = 0; k < K; ++k) {
      if (k == j) continue;
      if (Lambda(j, k) < 0.0)
        throw NegativeOffDiagonalError("negative off-diagonal intensity at (" +
                                       std::to_string(j) + "," +
                                       std::to_string(k) + ")");
      off += Lambda(j, k);
    }
    if (std::abs(Lambda(j, j) + off) > kRowSumTol)
      throw RowSumError("generator row " + std::to_string(j) +
                        " does not sum to zero");
    Lambda(j, j) = -off;  // repair within tolerance
    if (off <= 0.0)
      throw ModelError("state " + std::to_string(j) + " is absorbing");
  }
  check_irreducible(Lambda);

  DerivedParams d;
  d.beta.resize(K);
  d.r.resize(K);
  d.lambda_vec.resize(K);
  d.embedded = Eigen::MatrixXd::Zero(K, K);
  for (int j = 0; j < K; ++j) {
    if (spec.sigma(j) <= 0.0)
      throw NonPositiveVolatilityError("sigma must be > 0 in state " +
                                       std::to_string(j));
    d.lambda_vec(j) = -Lambda(j, j);
    d.beta(j) = 2.0 * spec.a(j) / (spec.sigma(j) * spec.sigma(j)) - 1.0;
    d.r(j) = critical_exponent(d.lambda_vec(j), d.beta(j), spec.sigma(j));
    for (int k = 0; k < K; ++k)
      if (k != j) d.embedded(j, k) = Lambda(j, k) / d.lambda_vec(j);
  }
  d.beta_star = d.beta.minCoeff();
  d.beta_upper = d.beta.maxCoeff();
  d.r_star = d.r.minCoeff();
  return d;
}

ExtReal claim_abs_moment(const ModelSpec& spec, double q) {
  ExtReal total(0.0);
  if (spec.alpha1 > 0.0) total += ExtReal(spec.alpha1) * spec.f1.abs_moment(q);
  if (spec.alpha2 > 0.0) total += ExtReal(spec.alpha2) * spec.f2.abs_moment(q);
  return total;
}

std::vector<double> default_delta_probe(const DerivedParams& d) {
  const double m = std::min(std::abs(d.beta_upper), 1.0);
  std::vector<double> grid;
  grid.reserve(32);
  for (int k = 0; k < 32; ++k)
    grid.push_back(m * std::pow(10.0, -3.0 * (k + 1) / 32.0));
  return grid;
}

RegimeClass classify_regime(const ModelSpec& spec,
                            const std::vector<double>& delta_probe) {
  DerivedParams d = validate(spec);
  if (d.beta_star > 0.0) return RegimeClass::PowerTail;
  if (d.beta_upper < 0.0 && spec.alpha1 > 0.0) {
    const double cap = std::min(std::abs(d.beta_upper), 1.0);
    for (double delta : delta_probe) {
      if (delta <= 0.0 || delta >= cap) continue;
      if (claim_abs_moment(spec, delta).finite())
        return RegimeClass::RuinCertain;
    }
  }
  return RegimeClass::Unsupported;
}

RegimeClass classify_regime(const ModelSpec& spec) {
  return classify_regime(spec, default_delta_probe(validate(spec)));
}

std::string to_string(RegimeClass rc) {
  switch (rc) {
    case RegimeClass::PowerTail:
      return "power_tail";
    case RegimeClass::RuinCertain:
      return "ruin_certain";
    case RegimeClass::Unsupported:
      return "unsupported";
  }
  return "?";
}

}  // namespace ruin
