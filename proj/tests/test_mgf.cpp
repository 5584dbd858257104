#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "ruin/mgf.hpp"

using namespace ruin;
using namespace ruin::testing;

TEST_CASE("laplace factor closed form") {
  CHECK(laplace_factor(1.0, 1.0, 1.0, 0.0).value() == doctest::Approx(1.0));
  // lambda=1, sigma^2=2, beta=1, s=-0.5: 1/(1 + 0.5*0.5) = 0.8
  CHECK(laplace_factor(1.0, std::sqrt(2.0), 1.0, -0.5).value() ==
        doctest::Approx(0.8));
  // s = -r_j hits the pole exactly
  CHECK_FALSE(laplace_factor(1.0, 1.0, 1.0, -2.0).finite());
}

TEST_CASE("segment factor f_j") {
  const ModelSpec spec = two_state(1.0, 1.0);
  const DerivedParams d = validate(spec);
  CHECK(segment_factor(d, spec, 0, 0.0).value() == doctest::Approx(1.0));
  // f_j(beta_j) = 1 since q(beta_j - q) vanishes
  CHECK(segment_factor(d, spec, 0, d.beta(0)).value() == doctest::Approx(1.0));
  // finite exactly on [0, r_j)
  CHECK(segment_factor(d, spec, 0, d.r(0) - 1e-6).finite());
  CHECK_FALSE(segment_factor(d, spec, 0, d.r(0)).finite());
}

TEST_CASE("two-state excursion MGF is the product of the two factors") {
  const ModelSpec spec = two_state(1.0, 2.0);
  const DerivedParams d = validate(spec);
  for (double q : {0.0, 0.3, 0.9, 1.4, 1.9}) {
    const ExtReal lhs = upsilon(spec, 0, q);
    const ExtReal rhs =
        segment_factor(d, spec, 0, q) * segment_factor(d, spec, 1, q);
    REQUIRE(lhs.finite() == rhs.finite());
    if (lhs.finite()) CHECK(lhs.value() == doctest::Approx(rhs.value()));
  }
}

TEST_CASE("asymmetric two-state values at sqrt(2)") {
  // beta = (1,2): f0(sqrt 2) = sqrt 2, f1(sqrt 2) = 1/sqrt 2
  const ModelSpec spec = two_state(1.0, 2.0);
  const DerivedParams d = validate(spec);
  const double q = std::sqrt(2.0);
  CHECK(segment_factor(d, spec, 0, q).value() ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(segment_factor(d, spec, 1, q).value() ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(upsilon(spec, 0, q).value() == doctest::Approx(1.0));
}

namespace {

// Closed form for K=3 transcribed from the four exit/return path pairs over
// the geometric series of 1<->2 oscillations.
double three_state_closed_form(const ModelSpec& spec, double q) {
  const DerivedParams d = validate(spec);
  const auto f = [&](int j) { return segment_factor(d, spec, j, q).value(); };
  const auto& P = d.embedded;
  const double osc = P(1, 2) * f(1) * P(2, 1) * f(2);
  REQUIRE(osc < 1.0);
  const double paths = P(0, 1) * f(0) * P(1, 0) * f(1) +
                       P(0, 2) * f(0) * P(2, 0) * f(2) +
                       P(0, 1) * P(1, 2) * P(2, 0) * f(0) * f(1) * f(2) +
                       P(0, 2) * P(2, 1) * P(1, 0) * f(0) * f(2) * f(1);
  return paths / (1.0 - osc);
}

}  // namespace

TEST_CASE("three-state recursion matches the closed form") {
  const ModelSpec spec = three_state();
  for (double q : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    CHECK(upsilon(spec, 0, q).value() ==
          doctest::Approx(three_state_closed_form(spec, q)).epsilon(1e-12));
  }
}

TEST_CASE("upsilon at zero is one for random irreducible specs") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 40; ++rep) {
    const int K = 2 + static_cast<int>(gen() % 5);
    const ModelSpec spec = random_power_tail(gen, K);
    const ExtReal v = upsilon(spec, 0, 0.0);
    REQUIRE(v.finite());
    CHECK(std::abs(v.value() - 1.0) <= 1e-10);
  }
}

TEST_CASE("upsilon domain and convexity properties") {
  std::mt19937_64 gen(13);
  for (int rep = 0; rep < 20; ++rep) {
    const ModelSpec spec = random_power_tail(gen, 4);
    const DerivedParams d = validate(spec);
    CHECK(upsilon(spec, 0, 0.5 * d.beta_star).value() < 1.0);
    CHECK_FALSE(upsilon(spec, 0, d.r_star).finite());
    CHECK_FALSE(upsilon(spec, 0, d.r_star + 0.5).finite());
    // midpoint convexity where finite
    const double q1 = 0.2 * d.beta_star, q2 = d.beta_star;
    const ExtReal v1 = upsilon(spec, 0, q1);
    const ExtReal v2 = upsilon(spec, 0, q2);
    const ExtReal vm = upsilon(spec, 0, 0.5 * (q1 + q2));
    if (v1.finite() && v2.finite() && vm.finite())
      CHECK(vm.value() <= 0.5 * (v1.value() + v2.value()) + 1e-12);
  }
}

TEST_CASE("memo table stays within the subset bound") {
  const ModelSpec spec = three_state();
  std::size_t cells = 0;
  excursion_mgf(spec, 0, -0.5, &cells);
  const std::size_t K = 3;
  CHECK(cells <= (std::size_t(1) << (K - 1)) * K * K);
}

TEST_CASE("find_gamma on the asymmetric two-state model") {
  const GammaResult g = find_gamma(two_state(1.0, 2.0), 0, 1e-12);
  CHECK(std::abs(g.gamma - std::sqrt(2.0)) <= 1e-9);
  CHECK(g.epsilon_margin > 0.0);
  CHECK(g.bracket_lo >= 1.0);
  CHECK(g.bracket_hi <= 2.0);
}

TEST_CASE("find_gamma degenerate single-regime case") {
  const GammaResult g = find_gamma(two_state(1.0, 1.0), 0);
  CHECK(g.gamma == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("find_gamma bracketing certificate on random specs") {
  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 10; ++rep) {
    const ModelSpec spec = random_power_tail(gen, 3);
    const DerivedParams d = validate(spec);
    const double tol = 1e-10;
    const GammaResult g = find_gamma(spec, 0, tol);
    CHECK(g.gamma >= d.beta_star);
    CHECK(g.gamma < d.r_star);
    const ExtReal below = upsilon(spec, 0, g.gamma - tol);
    const ExtReal above = upsilon(spec, 0, g.gamma + tol);
    CHECK(below.value() <= 1.0 + 1e-9);
    CHECK((!above.finite() || above.value() >= 1.0 - 1e-9));
  }
}

TEST_CASE("find_gamma refuses non power-tail regimes") {
  CHECK_THROWS_AS(find_gamma(two_state(-1.0, -0.5), 0), NotPowerTailError);
}

TEST_CASE("expected A^delta below one in the certain-ruin regime") {
  const ModelSpec spec = two_state(-1.0, -1.0);
  // per-state factor 1/(1 + 0.5*0.5*0.5) = 0.888..., squared
  const double per_state = 1.0 / (1.0 + 0.125);
  CHECK(expected_A_delta(spec, 0, 0.5).value() ==
        doctest::Approx(per_state * per_state));
  CHECK(expected_A_delta(spec, 0, 0.5).value() < 1.0);
  CHECK_THROWS_AS(expected_A_delta(spec, 0, 1.5), BadDeltaError);
  CHECK_THROWS_AS(expected_A_delta(spec, 0, 0.0), BadDeltaError);
}

TEST_CASE("path-sum oracle") {
  SUBCASE("K=2 has a single excursion path") {
    const ModelSpec spec = two_state(1.0, 2.0);
    const DerivedParams d = validate(spec);
    const PathSumBound b = brute_force_upsilon(spec, 0, 0.5, 10);
    CHECK(b.tail_bound == 0.0);
    CHECK(b.lower == doctest::Approx(segment_factor(d, spec, 0, 0.5).value() *
                                     segment_factor(d, spec, 1, 0.5).value()));
  }
  SUBCASE("return probability sums to one at q=0") {
    std::mt19937_64 gen(23);
    const ModelSpec spec = random_power_tail(gen, 4);
    const PathSumBound b = brute_force_upsilon(spec, 0, 0.0, 200);
    CHECK(b.lower <= 1.0 + 1e-12);
    CHECK(b.lower + b.tail_bound >= 1.0 - 1e-9);
    CHECK(b.tail_bound < 1e-6);
  }
  SUBCASE("recursion agrees within the truncation bound") {
    std::mt19937_64 gen(29);
    for (int rep = 0; rep < 10; ++rep) {
      const ModelSpec spec = random_power_tail(gen, 3 + static_cast<int>(gen() % 3));
      const DerivedParams d = validate(spec);
      for (double frac : {0.0, 0.5, 1.0}) {
        const double q = frac * d.beta_star;
        const PathSumBound b = brute_force_upsilon(spec, 0, q, 300);
        if (!std::isfinite(b.tail_bound)) continue;
        const double rec = upsilon(spec, 0, q).value();
        CHECK(std::abs(rec - b.lower) <= b.tail_bound + 1e-12);
      }
    }
  }
  SUBCASE("diverging factor raises") {
    const ModelSpec spec = two_state(1.0, 1.0);
    CHECK_THROWS_AS(brute_force_upsilon(spec, 0, 5.0, 10), DivergentError);
  }
}

TEST_CASE("wiener extremum laplace closed forms") {
  CHECK(wiener_extremum_laplace(1.0, 1.0, 1.0, 1e-12, ExtremumSide::Inf)
            .value() == doctest::Approx(1.0));
  // inf side at (1,1,1,1): r = 2, value 2/(2-1)
  CHECK(wiener_extremum_laplace(1.0, 1.0, 1.0, 1.0, ExtremumSide::Inf)
            .value() == doctest::Approx(2.0));
  CHECK_FALSE(wiener_extremum_laplace(1.0, 1.0, 1.0, 2.0, ExtremumSide::Inf)
                  .finite());
  // sup side uses |beta|: same pole structure for beta = -1
  CHECK(wiener_extremum_laplace(1.0, 1.0, -1.0, 1.0, ExtremumSide::Sup)
            .value() == doctest::Approx(2.0));
}
