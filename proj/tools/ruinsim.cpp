#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <sstream>

#include "ruin/config.hpp"
#include "ruin/verify.hpp"

namespace {

using namespace ruin;

struct GridSpec {
  double lo = 1.0;
  double hi = 10.0;
  int n = 10;
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' ||
      g.n < 1 || g.lo <= 0.0 || g.hi < g.lo)
    throw ParseError("grid must be lo:hi:n with 0 < lo <= hi, n >= 1");
  return g;
}

std::vector<double> log_grid(const GridSpec& g) {
  std::vector<double> out;
  for (int k = 0; k < g.n; ++k)
    out.push_back(g.n == 1 ? g.lo
                           : g.lo * std::pow(g.hi / g.lo,
                                             static_cast<double>(k) /
                                                 (g.n - 1)));
  return out;
}

void emit(const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::string gamma_report(const ModelSpec& spec, double tol,
                         const std::string& format) {
  const int K = spec.num_states();
  std::ostringstream out;
  if (format == "json") {
    out << "[\n";
    for (int i = 0; i < K; ++i) {
      const GammaResult g = find_gamma(spec, i, tol);
      out << "  {\"state\": " << i << ", \"gamma\": " << format_double(g.gamma)
          << ", \"bracket_lo\": " << format_double(g.bracket_lo)
          << ", \"bracket_hi\": " << format_double(g.bracket_hi)
          << ", \"iterations\": " << g.iterations
          << ", \"epsilon_margin\": " << format_double(g.epsilon_margin) << "}"
          << (i + 1 < K ? "," : "") << "\n";
    }
    out << "]\n";
  } else {
    out << "state,gamma,upsilon_at_gamma,iterations,epsilon_margin\n";
    for (int i = 0; i < K; ++i) {
      const GammaResult g = find_gamma(spec, i, tol);
      out << i << "," << format_double(g.gamma) << ","
          << format_double(g.upsilon_at_gamma.value()) << "," << g.iterations
          << "," << format_double(g.epsilon_margin) << "\n";
    }
  }
  return out.str();
}

std::string upsilon_report(const ModelSpec& spec, const GridSpec& g,
                           const std::string& format) {
  std::ostringstream out;
  std::vector<double> qs;
  for (int k = 0; k < g.n; ++k)
    qs.push_back(g.n == 1
                     ? g.lo
                     : g.lo + (g.hi - g.lo) * static_cast<double>(k) / (g.n - 1));
  if (format == "json") {
    out << "[\n";
    for (std::size_t k = 0; k < qs.size(); ++k) {
      const ExtReal v = upsilon(spec, spec.initial_state, qs[k]);
      out << "  {\"q\": " << format_double(qs[k]) << ", \"value\": "
          << (v.finite() ? format_double(v.value()) : "null")
          << ", \"finite\": " << (v.finite() ? "true" : "false") << "}"
          << (k + 1 < qs.size() ? "," : "") << "\n";
    }
    out << "]\n";
  } else {
    out << "q,value,finite\n";
    for (double q : qs) {
      const ExtReal v = upsilon(spec, spec.initial_state, q);
      out << format_double(q) << ","
          << (v.finite() ? format_double(v.value()) : "inf") << ","
          << (v.finite() ? 1 : 0) << "\n";
    }
  }
  return out.str();
}

std::string tail_report_text(const TailReport& rep, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    out << "{\n  \"rows\": [\n";
    for (std::size_t k = 0; k < rep.u_grid.size(); ++k) {
      out << "    {\"u\": " << format_double(rep.u_grid[k])
          << ", \"gbar\": " << format_double(rep.gbar_hat[k])
          << ", \"ci_halfwidth\": " << format_double(rep.ci_halfwidth[k])
          << ", \"psi_lower\": " << format_double(rep.psi_lower[k])
          << ", \"psi_upper\": " << format_double(rep.psi_upper[k]) << "}"
          << (k + 1 < rep.u_grid.size() ? "," : "") << "\n";
    }
    out << "  ],\n  \"gbar0_by_state\": [";
    for (std::size_t j = 0; j < rep.gbar0_by_state.size(); ++j)
      out << (j ? ", " : "") << format_double(rep.gbar0_by_state[j]);
    out << "],\n  \"n_samples\": " << rep.n_samples
        << ",\n  \"cap_hit_fraction\": " << format_double(rep.cap_hit_fraction)
        << "\n}\n";
  } else {
    out << "u,gbar,ci_halfwidth,psi_lower,psi_upper\n";
    for (std::size_t k = 0; k < rep.u_grid.size(); ++k)
      out << format_double(rep.u_grid[k]) << ","
          << format_double(rep.gbar_hat[k]) << ","
          << format_double(rep.ci_halfwidth[k]) << ","
          << format_double(rep.psi_lower[k]) << ","
          << format_double(rep.psi_upper[k]) << "\n";
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ruin-probability tail exponents for Markov-modulated "
               "geometric-Brownian-motion investments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::string format = "csv";
  double tol = 1e-10;
  long seed_override = -1;
  int workers_override = -1;
  app.add_option("--config", config_path, "model/sim config file")
      ->required();
  app.add_option("--output", output_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol", tol, "root solver tolerance");
  app.add_option("--seed", seed_override, "override [sim] seed");
  app.add_option("--workers", workers_override, "override [sim] workers");

  auto* cmd_validate = app.add_subcommand("validate", "check the model file");
  auto* cmd_gamma = app.add_subcommand("gamma", "tail exponent per state");
  auto* cmd_upsilon = app.add_subcommand("upsilon", "excursion MGF on a grid");
  auto* cmd_tail = app.add_subcommand("tail", "Monte Carlo tail of Y with bounds");
  auto* cmd_verify = app.add_subcommand("verify", "run the verification battery");
  auto* cmd_ruin = app.add_subcommand("ruin", "finite-horizon ruin frequency");

  std::string q_grid = "0.1:2:20";
  std::string u_grid = "1:100:12";
  double ruin_u = 1.0;
  double ruin_horizon = 0.0;
  cmd_upsilon->add_option("--q-grid", q_grid, "lo:hi:n (linear)");
  cmd_tail->add_option("--u-grid", u_grid, "lo:hi:n (log-spaced)");
  cmd_ruin->add_option("--u", ruin_u, "initial capital");
  cmd_ruin->add_option("--horizon", ruin_horizon, "time horizon (default [sim])");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = parse_config(config_path);
    if (seed_override >= 0) cfg.sim.seed = static_cast<std::uint64_t>(seed_override);
    if (workers_override > 0) cfg.sim.workers = workers_override;
    const DerivedParams d = validate(cfg.model);

    if (cmd_validate->parsed()) {
      std::ostringstream out;
      out << "regime," << to_string(classify_regime(cfg.model)) << "\n";
      out << "state,beta,r,lambda\n";
      for (int j = 0; j < cfg.model.num_states(); ++j)
        out << j << "," << format_double(d.beta(j)) << ","
            << format_double(d.r(j)) << "," << format_double(d.lambda_vec(j))
            << "\n";
      out << "beta_star," << format_double(d.beta_star) << "\n";
      out << "r_star," << format_double(d.r_star) << "\n";
      emit(out.str(), output_path);
      return 0;
    }
    if (cmd_gamma->parsed()) {
      emit(gamma_report(cfg.model, tol, format), output_path);
      return 0;
    }
    if (cmd_upsilon->parsed()) {
      emit(upsilon_report(cfg.model, parse_grid(q_grid), format), output_path);
      return 0;
    }
    if (cmd_tail->parsed()) {
      const TailReport rep = estimate_tail(
          cfg.model, d, cfg.model.initial_state, log_grid(parse_grid(u_grid)),
          cfg.sim);
      emit(tail_report_text(rep, format), output_path);
      return 0;
    }
    if (cmd_verify->parsed()) {
      const VerifyReport rep = run_verify(cfg);
      emit(rep.to_text(), output_path);
      return rep.all_passed() ? 0 : 2;
    }
    if (cmd_ruin->parsed()) {
      if (ruin_horizon > 0.0) cfg.sim.horizon = ruin_horizon;
      const RuinEstimate est = estimate_ruin_finite_horizon(
          cfg.model, d, cfg.model.initial_state, ruin_u, cfg.sim);
      std::ostringstream out;
      out << "u,horizon,psi_hat,ci_halfwidth,n_paths\n";
      out << format_double(ruin_u) << "," << format_double(cfg.sim.horizon)
          << "," << format_double(est.psi_hat) << ","
          << format_double(est.ci_halfwidth) << "," << est.n_paths << "\n";
      emit(out.str(), output_path);
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
