#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ruin/model.hpp"

using namespace ruin;
using namespace ruin::testing;

TEST_CASE("derived parameters of the symmetric two-state model") {
  // K=2, unit rates and volatilities, a = 1 everywhere
  const ModelSpec spec = two_state(1.0, 1.0);
  const DerivedParams d = validate(spec);
  CHECK(d.beta(0) == doctest::Approx(1.0));
  CHECK(d.beta(1) == doctest::Approx(1.0));
  CHECK(d.r(0) == doctest::Approx(2.0));  // 0.5 + sqrt(0.25 + 2)
  CHECK(d.r(1) == doctest::Approx(2.0));
  CHECK(d.r_star == doctest::Approx(2.0));
  CHECK(d.embedded(0, 1) == doctest::Approx(1.0));
  CHECK(d.embedded(0, 0) == 0.0);
}

TEST_CASE("generator rows must sum to zero") {
  ModelSpec spec = two_state(1.0, 1.0);
  spec.Lambda(0, 1) = 0.5;  // row sums to -0.5
  CHECK_THROWS_AS(validate(spec), RowSumError);
}

TEST_CASE("negative off-diagonal intensity rejected") {
  ModelSpec spec = two_state(1.0, 1.0);
  spec.Lambda(0, 1) = -1.0;
  CHECK_THROWS_AS(validate(spec), NegativeOffDiagonalError);
}

TEST_CASE("monotone premium process rejected") {
  ModelSpec spec = two_state(1.0, 1.0);
  spec.alpha1 = 0.0;
  spec.alpha2 = 1.0;
  spec.f2 = ClaimDist::exponential(1.0);
  CHECK_THROWS_AS(validate(spec), MonotonePremiumError);
  spec.c = -1.0;  // annuity model: decreasing premium is fine
  CHECK_NOTHROW(validate(spec));
}

TEST_CASE("non-positive volatility rejected") {
  ModelSpec spec = two_state(1.0, 1.0);
  spec.sigma(1) = 0.0;
  CHECK_THROWS_AS(validate(spec), NonPositiveVolatilityError);
}

TEST_CASE("disconnected chain rejected") {
  ModelSpec spec;
  spec.Lambda.resize(4, 4);
  spec.Lambda << -1, 1, 0, 0,  //
      1, -1, 0, 0,             //
      0, 0, -1, 1,             //
      0, 0, 1, -1;
  spec.a = Eigen::VectorXd::Ones(4);
  spec.sigma = Eigen::VectorXd::Ones(4);
  spec.c = 1.0;
  spec.alpha1 = 1.0;
  spec.f1 = ClaimDist::exponential(1.0);
  CHECK_THROWS_AS(validate(spec), NonIrreducibleError);
}

TEST_CASE("critical exponent solves its quadratic") {
  std::mt19937_64 gen(42);
  for (int rep = 0; rep < 50; ++rep) {
    const int K = 2 + static_cast<int>(gen() % 4);
    const ModelSpec spec = random_power_tail(gen, K);
    const DerivedParams d = validate(spec);
    for (int j = 0; j < K; ++j) {
      const double r = d.r(j);
      const double resid = r * r - d.beta(j) * r -
                           2.0 * d.lambda_vec(j) /
                               (spec.sigma(j) * spec.sigma(j));
      CHECK(std::abs(resid) <= 1e-10 * (1.0 + r * r));
      CHECK(r > std::max(d.beta(j), 0.0));
    }
    // embedded chain rows sum to 1 with zero diagonal
    for (int j = 0; j < K; ++j) {
      CHECK(d.embedded(j, j) == 0.0);
      CHECK(d.embedded.row(j).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(two_state(1.0, 2.0)) == RegimeClass::PowerTail);
  CHECK(classify_regime(two_state(-1.0, -0.5)) == RegimeClass::RuinCertain);
  CHECK(classify_regime(two_state(1.0, -1.0)) == RegimeClass::Unsupported);

  // PowerTail iff beta_* > 0 on random specs
  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 30; ++rep) {
    const ModelSpec spec = random_power_tail(gen, 3);
    const DerivedParams d = validate(spec);
    CHECK((classify_regime(spec) == RegimeClass::PowerTail) ==
          (d.beta_star > 0.0));
  }
}

TEST_CASE("certain-ruin regime needs a finite delta moment") {
  ModelSpec spec = two_state(-1.0, -0.5);
  // Pareto shape below the smallest probed delta: every probe diverges
  spec.f1 = ClaimDist::pareto(1e-4, 1.0);
  CHECK(classify_regime(spec) == RegimeClass::Unsupported);
}

TEST_CASE("claim absolute moments") {
  ModelSpec spec = two_state(1.0, 1.0);

  SUBCASE("exponential mean") {
    CHECK(claim_abs_moment(spec, 1.0).value() == doctest::Approx(1.0));
  }
  SUBCASE("pareto divergence at q >= shape") {
    spec.f1 = ClaimDist::pareto(1.5, 1.0);
    CHECK_FALSE(claim_abs_moment(spec, 2.0).finite());
    CHECK(claim_abs_moment(spec, 1.0).value() == doctest::Approx(3.0));
  }
  SUBCASE("deterministic with weight 0.5") {
    spec.alpha1 = 0.5;
    spec.f1 = ClaimDist::deterministic(2.0);
    CHECK(claim_abs_moment(spec, 3.0).value() == doctest::Approx(4.0));
  }
  SUBCASE("empirical equals the sample mean of |x|^q") {
    const std::vector<double> sample{1.0, 2.0, 3.5, 0.25};
    spec.f1 = ClaimDist::empirical(sample);
    for (double q : {0.5, 1.0, 2.0}) {
      double brute = 0.0;
      for (double x : sample) brute += std::pow(x, q);
      brute /= sample.size();
      CHECK(claim_abs_moment(spec, q).value() == doctest::Approx(brute));
    }
  }
  SUBCASE("nondecreasing in q for distributions on [1, inf)") {
    spec.f1 = ClaimDist::pareto(3.0, 1.0);
    double prev = 0.0;
    for (double q : {0.25, 0.5, 1.0, 1.5, 2.0}) {
      const double cur = claim_abs_moment(spec, q).value();
      CHECK(cur >= prev);
      prev = cur;
    }
  }
  SUBCASE("exponent must be positive") {
    CHECK_THROWS_AS(claim_abs_moment(spec, 0.0), NonPositiveExponentError);
  }
}

TEST_CASE("ext real convention") {
  const ExtReal inf = ExtReal::infinity();
  CHECK((ExtReal(0.0) * inf).value() == 0.0);
  CHECK_FALSE((ExtReal(2.0) * inf).finite());
  CHECK(geometric_series(ExtReal(0.5)).value() == doctest::Approx(2.0));
  CHECK_FALSE(geometric_series(ExtReal(1.0)).finite());
}
