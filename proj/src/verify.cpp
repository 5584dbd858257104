#include "ruin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ruin {

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.passed; });
}

std::string VerifyReport::to_text() const {
  std::ostringstream out;
  for (const VerifyCheck& c : checks)
    out << (c.passed ? "pass" : "fail") << " " << c.name << " " << c.detail
        << "\n";
  return out.str();
}

namespace {

VerifyCheck check_recursion_vs_oracle(const ModelSpec& spec,
                                      const DerivedParams& d) {
  const int i = spec.initial_state;
  VerifyCheck c{"recursion_vs_oracle", true, ""};
  std::ostringstream detail;
  const double qs[] = {0.0, 0.25 * d.beta_star, 0.5 * d.beta_star,
                       d.beta_star};
  for (double q : qs) {
    const PathSumBound oracle = brute_force_upsilon(spec, i, q, 400);
    if (!std::isfinite(oracle.tail_bound)) continue;
    const ExtReal rec = upsilon(spec, i, q);
    const double gap = std::abs(rec.value() - oracle.lower);
    if (gap > oracle.tail_bound + 1e-12) c.passed = false;
    detail << " q=" << format_double(q) << " gap=" << format_double(gap)
           << " bound=" << format_double(oracle.tail_bound);
  }
  c.detail = detail.str();
  return c;
}

VerifyCheck check_moment_match(const ModelSpec& spec, const DerivedParams& d,
                               const SimConfig& cfg) {
  const int i = spec.initial_state;
  VerifyCheck c{"m_moment_ci", true, ""};
  std::ostringstream detail;
  const long n = std::max<long>(1000, cfg.n_paths);
  // M is exact in law at any step size; a coarse grid keeps this cheap
  const double qs[] = {0.5, 1.0};
  std::vector<double> m_draws(n);
  for (long idx = 0; idx < n; ++idx) {
    RngStream rng(cfg.seed, (std::uint64_t(300) << 40) + idx);
    const Excursion exc = sample_excursion(spec, d, i, rng);
    m_draws[idx] = sample_cycle(spec, exc, rng, 1e9).M;
  }
  for (double q : qs) {
    const ExtReal target = upsilon(spec, i, q);
    if (!target.finite()) continue;
    double mean = 0.0, m2 = 0.0;
    for (double m : m_draws) {
      const double x = std::pow(m, q);
      mean += x;
      m2 += x * x;
    }
    mean /= n;
    const double var = std::max(0.0, m2 / n - mean * mean);
    const double hw = 2.5758293035489004 * std::sqrt(var / n);
    if (std::abs(mean - target.value()) > hw) c.passed = false;
    detail << " q=" << format_double(q) << " mc=" << format_double(mean)
           << " exact=" << format_double(target.value())
           << " hw=" << format_double(hw);
  }
  c.detail = detail.str();
  return c;
}

VerifyCheck check_fixed_point(const ModelSpec& spec, const DerivedParams& d,
                              SimConfig cfg) {
  cfg.n_paths = std::min<long>(cfg.n_paths, 10000);
  const KsResult ks = fixed_point_check(spec, d, spec.initial_state, cfg);
  VerifyCheck c{"fixed_point_ks", ks.d_stat <= ks.threshold_1pct, ""};
  std::ostringstream detail;
  detail << "d=" << format_double(ks.d_stat)
         << " threshold=" << format_double(ks.threshold_1pct);
  c.detail = detail.str();
  return c;
}

VerifyCheck check_slope(const ModelSpec& spec, const DerivedParams& d,
                        const SimConfig& cfg) {
  const int i = spec.initial_state;
  const double gamma = find_gamma(spec, i).gamma;
  const std::vector<YDraw> draws = sample_Y_inf_batch(spec, d, i, cfg, 310);
  std::vector<double> vals, pos;
  for (const YDraw& y : draws) {
    vals.push_back(y.value);
    if (y.value > 0.0) pos.push_back(y.value);
  }
  const auto [wlo, whi] = default_slope_window(pos);
  std::vector<double> u_grid, gbar;
  for (int k = 0; k < 12; ++k) {
    const double u = wlo * std::pow(whi / wlo, k / 11.0);
    long over = 0;
    for (double v : vals) over += v > u ? 1 : 0;
    u_grid.push_back(u);
    gbar.push_back(static_cast<double>(over) / vals.size());
  }
  const SlopeFit fit = log_log_slope(u_grid, gbar, wlo, whi);
  VerifyCheck c{"slope_vs_gamma", std::abs(fit.slope + gamma) <= 0.15 * gamma,
                ""};
  std::ostringstream detail;
  detail << "slope=" << format_double(fit.slope)
         << " gamma=" << format_double(gamma)
         << " r2=" << format_double(fit.r_squared);
  c.detail = detail.str();
  return c;
}

}  // namespace

VerifyReport run_verify(const RunConfig& cfg) {
  const DerivedParams d = validate(cfg.model);
  VerifyReport rep;
  rep.checks.push_back(check_recursion_vs_oracle(cfg.model, d));
  rep.checks.push_back(check_moment_match(cfg.model, d, cfg.sim));
  rep.checks.push_back(check_fixed_point(cfg.model, d, cfg.sim));
  rep.checks.push_back(check_slope(cfg.model, d, cfg.sim));
  return rep;
}

}  // namespace ruin
