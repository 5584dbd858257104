#include "ruin/mgf.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

namespace ruin {

ExtReal laplace_factor(double lambda, double sigma, double beta, double s) {
  const double half_var = 0.5 * sigma * sigma * s * (s + beta);
  const double denom = lambda - half_var;
  // At the pole the subtraction cancels exactly in reals but only to rounding
  // in doubles; treat anything below a few ulps of the operands as divergent.
  const double guard =
      8.0 * std::numeric_limits<double>::epsilon() * (lambda + std::abs(half_var));
  if (denom > guard) return ExtReal(lambda / denom);
  return ExtReal::infinity();
}

ExtReal segment_factor(const DerivedParams& d, const ModelSpec& spec, int j,
                       double q) {
  return laplace_factor(d.lambda_vec(j), spec.sigma(j), d.beta(j), -q);
}

namespace {

// Memoized evaluation of U^A_{from,to}(s): the sum over embedded-chain path
// cuts entering A from `from`, evolving inside A, and leaving to `to`, each
// path weighted by the product of h_{j,k} = P_{jk} * laplace_factor_j(s).
class SubsetRecursion {
 public:
  SubsetRecursion(const ModelSpec& spec, const DerivedParams& d, double s)
      : K_(spec.num_states()), h_(K_, std::vector<ExtReal>(K_, ExtReal(0.0))) {
    for (int j = 0; j < K_; ++j) {
      const ExtReal fj =
          laplace_factor(d.lambda_vec(j), spec.sigma(j), d.beta(j), s);
      for (int k = 0; k < K_; ++k)
        if (k != j) h_[j][k] = ExtReal(d.embedded(j, k)) * fj;
    }
    memo_.assign(static_cast<std::size_t>(1u << K_) * K_ * K_,
                 {ExtReal(0.0), false});
  }

  ExtReal eval(unsigned mask, int from, int to) {
    auto& cell = memo_[(static_cast<std::size_t>(mask) * K_ + from) * K_ + to];
    if (cell.second) return cell.first;
    ExtReal sum = h_[from][to];  // direct transition, no intermediate state
    for (int i1 = 0; i1 < K_; ++i1) {
      if (!(mask & (1u << i1))) continue;
      const unsigned sub = mask & ~(1u << i1);
      sum += h_[from][i1] * geometric_series(eval(sub, i1, i1)) *
             eval(sub, i1, to);
    }
    cell = {sum, true};
    ++cells_;
    return sum;
  }

  std::size_t cells() const { return cells_; }

 private:
  int K_;
  std::vector<std::vector<ExtReal>> h_;
  std::vector<std::pair<ExtReal, bool>> memo_;
  std::size_t cells_ = 0;
};

}  // namespace

ExtReal excursion_mgf(const ModelSpec& spec, int i, double s,
                      std::size_t* cells) {
  const DerivedParams d = validate(spec);
  SubsetRecursion rec(spec, d, s);
  const unsigned full = (1u << spec.num_states()) - 1u;
  const ExtReal result = rec.eval(full & ~(1u << i), i, i);
  if (cells) *cells = rec.cells();
  return result;
}

ExtReal upsilon(const ModelSpec& spec, int i, double q) {
  return excursion_mgf(spec, i, -q);
}

GammaResult find_gamma(const ModelSpec& spec, int i, double tol) {
  if (tol <= 0.0) throw ModelError("tolerance must be > 0");
  const DerivedParams d = validate(spec);
  if (classify_regime(spec) != RegimeClass::PowerTail)
    throw NotPowerTailError("find_gamma requires all beta_j > 0");

  GammaResult res;
  double lo = d.beta_star;
  double hi = d.r_star;

  const ExtReal at_lo = upsilon(spec, i, lo);
  if (at_lo > ExtReal(1.0 + tol))
    throw NoBracketError("Upsilon(beta_*) > 1: arithmetic inconsistency");
  if (at_lo.finite() && std::abs(at_lo.value() - 1.0) <= tol) {
    res.gamma = lo;
    res.bracket_lo = lo;
    res.bracket_hi = lo;
    res.upsilon_at_gamma = at_lo;
  } else {
    // invariant: Upsilon(lo) < 1 <= Upsilon(hi) (with +inf counting as >= 1)
    int it = 0;
    for (; it < 200 && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const ExtReal v = upsilon(spec, i, mid);
      if (!v.finite() || v >= ExtReal(1.0)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    res.iterations = it;
    res.gamma = 0.5 * (lo + hi);
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.upsilon_at_gamma = upsilon(spec, i, res.gamma);
  }

  res.epsilon_margin = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double eps = std::ldexp(d.r_star - res.gamma, -k);
    if (eps <= 0.0) break;
    if (upsilon(spec, i, res.gamma + eps).finite()) {
      res.epsilon_margin = eps;
      break;
    }
  }
  return res;
}

ExtReal expected_A_delta(const ModelSpec& spec, int i, double delta) {
  const DerivedParams d = validate(spec);
  const double cap = std::min(std::abs(d.beta_upper), 1.0);
  if (delta <= 0.0 || delta >= cap)
    throw BadDeltaError("delta must lie in (0, min(|beta^*|, 1))");
  return excursion_mgf(spec, i, delta);
}

PathSumBound brute_force_upsilon(const ModelSpec& spec, int i, double q,
                                 int max_len) {
  const DerivedParams d = validate(spec);
  const int K = spec.num_states();

  Eigen::VectorXd f(K);
  for (int j = 0; j < K; ++j) {
    const ExtReal fj = segment_factor(d, spec, j, q);
    if (!fj.finite())
      throw DivergentError("segment factor diverges in state " +
                           std::to_string(j));
    f(j) = fj.value();
  }

  // D: one embedded step among non-i states weighted by the source factor;
  // ret: weighted absorption into i.
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd ret = Eigen::VectorXd::Zero(K);
  for (int j = 0; j < K; ++j) {
    if (j == i) continue;
    ret(j) = d.embedded(j, i) * f(j);
    for (int k = 0; k < K; ++k)
      if (k != i) D(j, k) = d.embedded(j, k) * f(j);
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(K);
  for (int k = 0; k < K; ++k)
    if (k != i) w(k) = d.embedded(i, k) * f(i);

  PathSumBound out;
  for (int len = 2; len <= max_len; ++len) {
    out.lower += w.dot(ret);
    w = D.transpose() * w;
  }

  double contraction = 0.0;
  for (int j = 0; j < K; ++j)
    if (j != i) contraction = std::max(contraction, D.row(j).sum());
  if (contraction < 1.0) {
    out.tail_bound = w.sum() * ret.maxCoeff() / (1.0 - contraction);
  } else {
    out.tail_bound = std::numeric_limits<double>::infinity();
  }
  return out;
}

ExtReal wiener_extremum_laplace(double lambda, double sigma, double beta,
                                double coeff, ExtremumSide side) {
  if (lambda <= 0.0 || sigma <= 0.0 || coeff <= 0.0)
    throw ModelError("wiener_extremum_laplace needs positive parameters");
  const double disc = std::sqrt(0.25 * beta * beta + 2.0 * lambda / (sigma * sigma));
  const double root =
      side == ExtremumSide::Inf ? 0.5 * beta + disc : 0.5 * std::abs(beta) + disc;
  const double x = coeff / sigma;
  if (x >= root) return ExtReal::infinity();
  return ExtReal(root / (root - x));
}

}  // namespace ruin
