#include "ruin/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

namespace ruin {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile
constexpr long kJumpCap = 10'000'000;

// Strided index loop over `workers` threads.  Each index writes only its own
// slot, so the result is identical for any worker count.
void parallel_for(long n, int workers, const std::function<void(long)>& body) {
  if (workers <= 1) {
    for (long idx = 0; idx < n; ++idx) body(idx);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long idx = w; idx < n; idx += workers) body(idx);
    });
  }
  for (auto& t : pool) t.join();
}

int sample_discrete(const Eigen::MatrixXd& P, int row, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  const int K = static_cast<int>(P.cols());
  for (int k = 0; k < K; ++k) {
    acc += P(row, k);
    if (u <= acc) return k;
  }
  // round-off fallthrough: last state with positive mass
  for (int k = K - 1; k >= 0; --k)
    if (P(row, k) > 0.0) return k;
  return row;
}

void lay_claims(const ModelSpec& spec, double t0, double d, RngStream& rng,
                std::vector<ClaimEvent>& out) {
  if (spec.alpha1 > 0.0) {
    const long n = rng.poisson(spec.alpha1 * d);
    for (long k = 0; k < n; ++k) {
      const double t = t0 + d * rng.uniform();
      out.push_back({t, -spec.f1.quantile(rng.uniform())});
    }
  }
  if (spec.alpha2 > 0.0) {
    const long n = rng.poisson(spec.alpha2 * d);
    for (long k = 0; k < n; ++k) {
      const double t = t0 + d * rng.uniform();
      out.push_back({t, spec.f2.quantile(rng.uniform())});
    }
  }
}

}  // namespace

double default_quad_step(const DerivedParams& d) {
  return 0.01 / d.lambda_vec.maxCoeff();
}

Excursion sample_excursion(const ModelSpec& spec, const DerivedParams& d,
                           int i, RngStream& rng) {
  Excursion exc;
  double t = 0.0;
  int state = i;
  long jumps = 0;
  while (true) {
    const double dur = rng.exponential(d.lambda_vec(state));
    exc.segments.push_back({state, dur});
    lay_claims(spec, t, dur, rng, exc.claims);
    t += dur;
    const int next = sample_discrete(d.embedded, state, rng);
    if (++jumps > kJumpCap)
      throw ExcursionOverflowError("excursion exceeded jump cap");
    if (next == i && jumps >= 2) break;
    state = next;
  }
  exc.total_duration = t;
  std::sort(exc.claims.begin(), exc.claims.end(),
            [](const ClaimEvent& a, const ClaimEvent& b) {
              return a.time < b.time;
            });
  return exc;
}

CycleSample sample_cycle(const ModelSpec& spec, const Excursion& exc,
                         RngStream& rng, double h, CyclePath* path) {
  if (h <= 0.0) throw BadStepError("quadrature step must be > 0");

  double t = 0.0;      // current grid time
  double v = 0.0;      // V_t
  double ev = 1.0;     // exp(-V_t)
  double integ = 0.0;  // left-endpoint Riemann sum of exp(-V)
  double jumpsum = 0.0;
  double max_pq = 0.0;
  double seg_start = 0.0;
  std::size_t claim_idx = 0;

  if (path) {
    path->times.clear();
    path->partial_q.clear();
  }

  auto advance_to = [&](double te, int state) {
    const double dt = te - t;
    if (dt > 0.0) {
      const double sig = spec.sigma(state);
      const double drift =
          0.5 * sig * sig * (2.0 * spec.a(state) / (sig * sig) - 1.0);
      integ += ev * dt;
      v += rng.normal(drift * dt, sig * std::sqrt(dt));
      ev = std::exp(-v);
      t = te;
    }
  };
  auto record = [&] {
    const double pq = -spec.c * integ - jumpsum;
    if (pq > max_pq) max_pq = pq;
    if (path) {
      path->times.push_back(t);
      path->partial_q.push_back(pq);
    }
  };

  for (const Segment& seg : exc.segments) {
    const double seg_end = seg_start + seg.duration;
    const long m = std::max<long>(1, static_cast<long>(
                                         std::ceil(seg.duration / h)));
    for (long k = 1; k <= m; ++k) {
      const double te = (k == m) ? seg_end
                                 : seg_start + seg.duration *
                                       (static_cast<double>(k) /
                                        static_cast<double>(m));
      // claims strictly before the next uniform point
      while (claim_idx < exc.claims.size() &&
             exc.claims[claim_idx].time <= te) {
        advance_to(exc.claims[claim_idx].time, seg.state);
        jumpsum += ev * exc.claims[claim_idx].size;
        record();
        ++claim_idx;
      }
      advance_to(te, seg.state);
      record();
    }
    seg_start = seg_end;
  }

  CycleSample cs;
  cs.M = std::exp(-v);
  cs.Q = -spec.c * integ - jumpsum;
  cs.quad_step = h;
  cs.duration = exc.total_duration;
  cs.max_partial_q = max_pq;
  return cs;
}

YDraw sample_Y_inf(const ModelSpec& spec, const DerivedParams& d, int i,
                   RngStream& rng, const SimConfig& cfg) {
  const double h = cfg.quad_step > 0.0 ? cfg.quad_step : default_quad_step(d);
  YDraw out;
  double prod = 1.0;
  while (out.cycles < cfg.max_cycles) {
    const Excursion exc = sample_excursion(spec, d, i, rng);
    const CycleSample cs = sample_cycle(spec, exc, rng, h);
    out.value += prod * cs.Q;
    prod *= cs.M;
    ++out.cycles;
    if (prod < cfg.product_cutoff) return out;
  }
  out.cap_hit = true;
  return out;
}

std::vector<YDraw> sample_Y_inf_batch(const ModelSpec& spec,
                                      const DerivedParams& d, int i,
                                      const SimConfig& cfg,
                                      std::uint64_t domain) {
  std::vector<YDraw> draws(cfg.n_paths);
  parallel_for(cfg.n_paths, cfg.workers, [&](long idx) {
    RngStream rng(cfg.seed, (domain << 40) + static_cast<std::uint64_t>(idx));
    draws[idx] = sample_Y_inf(spec, d, i, rng, cfg);
  });
  return draws;
}

double binomial_ci_halfwidth(double p_hat, long n) {
  const double nn = static_cast<double>(n);
  const double succ = p_hat * nn;
  if (succ < 30.0 || nn - succ < 30.0) {
    const double z2 = kZ99 * kZ99;
    return kZ99 *
           std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) /
           (1.0 + z2 / nn);
  }
  return kZ99 * std::sqrt(p_hat * (1.0 - p_hat) / nn);
}

TailReport estimate_tail(const ModelSpec& spec, const DerivedParams& d, int i,
                         const std::vector<double>& u_grid,
                         const SimConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const int K = spec.num_states();

  TailReport rep;
  rep.u_grid = u_grid;
  rep.n_samples = cfg.n_paths;

  const std::vector<YDraw> draws = sample_Y_inf_batch(spec, d, i, cfg, 0);
  long caps = 0;
  for (const YDraw& y : draws) caps += y.cap_hit ? 1 : 0;
  rep.cap_hit_fraction =
      static_cast<double>(caps) / static_cast<double>(cfg.n_paths);

  rep.gbar0_by_state.resize(K);
  for (int j = 0; j < K; ++j) {
    const std::vector<YDraw> dj =
        sample_Y_inf_batch(spec, d, j, cfg, static_cast<std::uint64_t>(j + 1));
    long over = 0;
    for (const YDraw& y : dj) over += y.value > 0.0 ? 1 : 0;
    rep.gbar0_by_state[j] =
        static_cast<double>(over) / static_cast<double>(cfg.n_paths);
  }
  const double gbar0_min =
      *std::min_element(rep.gbar0_by_state.begin(), rep.gbar0_by_state.end());

  for (double u : u_grid) {
    long over = 0;
    for (const YDraw& y : draws) over += y.value > u ? 1 : 0;
    const double p = static_cast<double>(over) / static_cast<double>(cfg.n_paths);
    rep.gbar_hat.push_back(p);
    rep.ci_halfwidth.push_back(binomial_ci_halfwidth(p, cfg.n_paths));
    rep.psi_lower.push_back(p);
    rep.psi_upper.push_back(
        gbar0_min > 0.0 ? std::min(1.0, p / gbar0_min) : 1.0);
  }
  if (!rep.gbar_hat.empty() && rep.gbar_hat.front() == 0.0)
    throw DegenerateTailError("no Y samples above the lowest grid point");

  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

RuinEstimate estimate_ruin_finite_horizon(const ModelSpec& spec,
                                          const DerivedParams& d, int i,
                                          double u, const SimConfig& cfg) {
  if (u <= 0.0) throw ModelError("initial capital must be > 0");
  if (cfg.horizon <= 0.0) throw BadHorizonError("horizon must be > 0");
  const double h = cfg.quad_step > 0.0 ? cfg.quad_step : default_quad_step(d);

  std::vector<char> ruined(cfg.n_paths, 0);
  parallel_for(cfg.n_paths, cfg.workers, [&](long idx) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(idx));
    double t = 0.0;
    double offset = 0.0;
    double prod = 1.0;
    CyclePath path;
    long cycles = 0;
    while (t < cfg.horizon && ++cycles <= kJumpCap) {
      const Excursion exc = sample_excursion(spec, d, i, rng);
      const CycleSample cs = sample_cycle(spec, exc, rng, h, &path);
      for (std::size_t k = 0; k < path.times.size(); ++k) {
        if (t + path.times[k] > cfg.horizon) break;
        if (offset + prod * path.partial_q[k] >= u) {
          ruined[idx] = 1;
          break;
        }
      }
      if (ruined[idx]) break;
      offset += prod * cs.Q;
      prod *= cs.M;
      t += cs.duration;
      if (prod == 0.0) break;
    }
  });

  RuinEstimate est;
  est.n_paths = cfg.n_paths;
  long hits = 0;
  for (char r : ruined) hits += r;
  est.psi_hat = static_cast<double>(hits) / static_cast<double>(cfg.n_paths);
  est.ci_halfwidth = binomial_ci_halfwidth(est.psi_hat, cfg.n_paths);
  return est;
}

double simulate_ruin_certain_recursion(const ModelSpec& spec,
                                       const DerivedParams& d, int i, double u,
                                       const SimConfig& cfg) {
  if (classify_regime(spec) != RegimeClass::RuinCertain)
    throw NotRuinCertainError("recursion applies to the certain-ruin regime");
  const double h = cfg.quad_step > 0.0 ? cfg.quad_step : default_quad_step(d);

  std::vector<char> hit(cfg.n_paths, 0);
  parallel_for(cfg.n_paths, cfg.workers, [&](long idx) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(idx));
    double x = u;
    for (int n = 0; n < cfg.max_cycles; ++n) {
      const Excursion exc = sample_excursion(spec, d, i, rng);
      const CycleSample cs = sample_cycle(spec, exc, rng, h);
      x = x / cs.M - cs.Q / cs.M;
      if (x < 0.0) {
        hit[idx] = 1;
        break;
      }
    }
  });
  long hits = 0;
  for (char r : hit) hits += r;
  return static_cast<double>(hits) / static_cast<double>(cfg.n_paths);
}

std::array<double, 3> quadrature_refinement(const ModelSpec& spec,
                                            const DerivedParams& d, int i,
                                            double h, long n,
                                            std::uint64_t seed, int workers) {
  if (h <= 0.0) throw BadStepError("quadrature step must be > 0");

  std::vector<std::array<double, 3>> qs(n);
  parallel_for(n, workers, [&](long idx) {
    RngStream rng(seed, static_cast<std::uint64_t>(idx));
    const Excursion exc = sample_excursion(spec, d, i, rng);

    double t = 0.0, v = 0.0, jumpsum = 0.0;
    double integ[3] = {0.0, 0.0, 0.0};
    double last_t[3] = {0.0, 0.0, 0.0};
    double last_ev[3] = {1.0, 1.0, 1.0};
    double seg_start = 0.0;
    std::size_t claim_idx = 0;

    auto advance_to = [&](double te, int state) {
      const double dt = te - t;
      if (dt > 0.0) {
        const double sig = spec.sigma(state);
        const double drift =
            0.5 * sig * sig * (2.0 * spec.a(state) / (sig * sig) - 1.0);
        v += rng.normal(drift * dt, sig * std::sqrt(dt));
        t = te;
      }
    };
    // close the pending interval of each marked level with its left endpoint
    auto absorb = [&](bool lv0, bool lv1, bool lv2) {
      const double ev = std::exp(-v);
      const bool lv[3] = {lv0, lv1, lv2};
      for (int l = 0; l < 3; ++l) {
        if (!lv[l]) continue;
        integ[l] += last_ev[l] * (t - last_t[l]);
        last_t[l] = t;
        last_ev[l] = ev;
      }
    };

    for (const Segment& seg : exc.segments) {
      const double seg_end = seg_start + seg.duration;
      // nested grids: 4m fine intervals; level strides 4, 2, 1
      const long m = std::max<long>(
          1, static_cast<long>(std::ceil(seg.duration / h)));
      const long fine = 4 * m;
      for (long k = 1; k <= fine; ++k) {
        const double te = (k == fine)
                              ? seg_end
                              : seg_start + seg.duration *
                                    (static_cast<double>(k) /
                                     static_cast<double>(fine));
        while (claim_idx < exc.claims.size() &&
               exc.claims[claim_idx].time <= te) {
          advance_to(exc.claims[claim_idx].time, seg.state);
          absorb(true, true, true);
          jumpsum += std::exp(-v) * exc.claims[claim_idx].size;
          ++claim_idx;
        }
        advance_to(te, seg.state);
        absorb(k % 4 == 0, k % 2 == 0, true);
      }
      seg_start = seg_end;
    }
    for (int l = 0; l < 3; ++l)
      qs[idx][l] = -spec.c * integ[l] - jumpsum;
  });

  std::array<double, 3> mean = {0.0, 0.0, 0.0};
  for (const auto& q : qs)
    for (int l = 0; l < 3; ++l) mean[l] += q[l];
  for (int l = 0; l < 3; ++l) mean[l] /= static_cast<double>(n);
  return mean;
}

}  // namespace ruin
