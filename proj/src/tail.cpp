#include "ruin/tail.hpp"

#include <algorithm>
#include <cmath>

namespace ruin {

SlopeFit log_log_slope(const std::vector<double>& u_grid,
                       const std::vector<double>& gbar_hat, double window_lo,
                       double window_hi) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < u_grid.size(); ++k) {
    if (u_grid[k] < window_lo || u_grid[k] > window_hi) continue;
    if (gbar_hat[k] <= 0.0)
      throw ZeroTailError("zero tail estimate inside the fit window");
    xs.push_back(std::log(u_grid[k]));
    ys.push_back(std::log(gbar_hat[k]));
  }
  const std::size_t n = xs.size();
  if (n < 4) throw EmptyWindowError("need at least 4 grid points in window");

  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }

  SlopeFit fit;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.slope = sxy / sxx;
  const double ss_res = syy - fit.slope * sxy;
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.stderr_ =
      n > 2 ? std::sqrt(std::max(0.0, ss_res / (n - 2)) / sxx) : 0.0;
  return fit;
}

double hill_estimator(const std::vector<double>& samples, long k) {
  std::vector<double> pos;
  for (double x : samples)
    if (x > 0.0) pos.push_back(x);
  if (k < 10 || k >= static_cast<long>(pos.size()))
    throw TooFewSamplesError("need 10 <= k < #positive samples");
  std::sort(pos.begin(), pos.end(), std::greater<double>());
  const double x_k = pos[k];  // (k+1)-th largest, the threshold statistic
  double s = 0.0;
  for (long j = 0; j < k; ++j) s += std::log(pos[j] / x_k);
  if (s <= 0.0) throw TooFewSamplesError("degenerate order statistics");
  return static_cast<double>(k) / s;
}

KsResult two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  KsResult res;
  res.n1 = static_cast<long>(a.size());
  res.n2 = static_cast<long>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    // step past the whole tie group before comparing the empirical CDFs
    const double v = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] == v) ++ia;
    while (ib < b.size() && b[ib] == v) ++ib;
    const double fa = static_cast<double>(ia) / a.size();
    const double fb = static_cast<double>(ib) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  res.d_stat = d;
  res.threshold_1pct =
      1.628 * std::sqrt(static_cast<double>(res.n1 + res.n2) /
                        (static_cast<double>(res.n1) * res.n2));
  return res;
}

KsResult fixed_point_check(const ModelSpec& spec, const DerivedParams& d,
                           int i, const SimConfig& cfg) {
  const double h = cfg.quad_step > 0.0 ? cfg.quad_step : default_quad_step(d);

  const std::vector<YDraw> direct = sample_Y_inf_batch(spec, d, i, cfg, 100);
  const std::vector<YDraw> inner = sample_Y_inf_batch(spec, d, i, cfg, 101);

  std::vector<double> a(cfg.n_paths), b(cfg.n_paths);
  for (long idx = 0; idx < cfg.n_paths; ++idx) {
    a[idx] = direct[idx].value;
    RngStream rng(cfg.seed, (static_cast<std::uint64_t>(102) << 40) +
                                static_cast<std::uint64_t>(idx));
    const Excursion exc = sample_excursion(spec, d, i, rng);
    const CycleSample cs = sample_cycle(spec, exc, rng, h);
    b[idx] = cs.Q + cs.M * inner[idx].value;
  }
  return two_sample_ks(std::move(a), std::move(b));
}

std::pair<double, double> default_slope_window(std::vector<double> positive) {
  std::sort(positive.begin(), positive.end());
  const std::size_t n = positive.size();
  if (n < 20) throw TooFewSamplesError("too few positive samples for window");
  const double lo = positive[static_cast<std::size_t>(0.90 * n)];
  const double hi = positive[std::min(n - 1, static_cast<std::size_t>(0.995 * n))];
  return {lo, hi};
}

std::vector<GammaCrossRow> gamma_cross_check(const ModelSpec& spec,
                                             const SimConfig& cfg) {
  const DerivedParams d = validate(spec);
  const int K = spec.num_states();
  std::vector<GammaCrossRow> rows;
  for (int i = 0; i < K; ++i) {
    GammaCrossRow row;
    row.state = i;
    row.gamma_analytic = find_gamma(spec, i).gamma;

    const std::vector<YDraw> draws =
        sample_Y_inf_batch(spec, d, i, cfg, static_cast<std::uint64_t>(200 + i));
    std::vector<double> vals, pos;
    vals.reserve(draws.size());
    for (const YDraw& y : draws) {
      vals.push_back(y.value);
      if (y.value > 0.0) pos.push_back(y.value);
    }

    const auto [wlo, whi] = default_slope_window(pos);
    std::vector<double> u_grid, gbar;
    const int n_pts = 12;
    for (int k = 0; k < n_pts; ++k) {
      const double u = wlo * std::pow(whi / wlo, static_cast<double>(k) /
                                                     (n_pts - 1));
      long over = 0;
      for (double v : vals) over += v > u ? 1 : 0;
      u_grid.push_back(u);
      gbar.push_back(static_cast<double>(over) / vals.size());
    }
    row.slope = log_log_slope(u_grid, gbar, wlo, whi).slope;
    row.hill = hill_estimator(vals, static_cast<long>(vals.size() / 20));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ruin
