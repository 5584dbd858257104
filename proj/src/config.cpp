#include "ruin/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ruin {

namespace {

struct KeyValue {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, KeyValue>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& raw, int line) {
  std::string cleaned = raw;
  for (char& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream in(cleaned);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof())
    throw ParseError("line " + std::to_string(line) + ": malformed number list");
  return out;
}

double parse_num(const std::string& raw, int line) {
  const auto list = parse_list(raw, line);
  if (list.size() != 1)
    throw ParseError("line " + std::to_string(line) + ": expected one number");
  return list[0];
}

long parse_int(const std::string& raw, int line) {
  const double v = parse_num(raw, line);
  const long n = static_cast<long>(v);
  if (static_cast<double>(n) != v)
    throw ParseError("line " + std::to_string(line) + ": expected an integer");
  return n;
}

ClaimDist parse_claim(const std::string& kind, const std::vector<double>& p,
                      int line) {
  try {
    if (kind == "exponential") {
      if (p.size() != 1) throw ModelError("exponential takes 1 parameter");
      return ClaimDist::exponential(p[0]);
    }
    if (kind == "pareto") {
      if (p.size() != 2) throw ModelError("pareto takes 2 parameters");
      return ClaimDist::pareto(p[0], p[1]);
    }
    if (kind == "deterministic") {
      if (p.size() != 1) throw ModelError("deterministic takes 1 parameter");
      return ClaimDist::deterministic(p[0]);
    }
    if (kind == "empirical") return ClaimDist::empirical(p);
  } catch (const ModelError& e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
  throw ParseError("line " + std::to_string(line) + ": unknown claim kind '" +
                   kind + "'");
}

class SectionReader {
 public:
  SectionReader(Section& s, std::string name) : s_(s), name_(std::move(name)) {}

  bool has(const std::string& key) const { return s_.count(key) > 0; }

  KeyValue& require(const std::string& key) {
    auto it = s_.find(key);
    if (it == s_.end())
      throw ParseError("missing key '" + key + "' in [" + name_ + "]");
    it->second.used = true;
    return it->second;
  }

  KeyValue* optional(const std::string& key) {
    auto it = s_.find(key);
    if (it == s_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  void check_all_used() const {
    for (const auto& [key, kv] : s_)
      if (!kv.used)
        throw ParseError("line " + std::to_string(kv.line) + ": unknown key '" +
                         key + "' in [" + name_ + "]");
  }

 private:
  Section& s_;
  std::string name_;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ParseError("line " + std::to_string(line) + ": bad section header");
      current = trim(s.substr(1, s.size() - 2));
      if (current != "model" && current != "claims" && current != "sim")
        throw ParseError("line " + std::to_string(line) + ": unknown section [" +
                         current + "]");
      sections[current];
      section_lines[current] = line;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos || current.empty())
      throw ParseError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (sections[current].count(key))
      throw ParseError("line " + std::to_string(line) + ": duplicate key '" +
                       key + "'");
    sections[current][key] = {trim(s.substr(eq + 1)), line, false};
  }
  if (!sections.count("model")) throw ParseError("missing [model] section");
  if (!sections.count("claims")) throw ParseError("missing [claims] section");

  RunConfig cfg;
  {
    SectionReader model(sections["model"], "model");
    const long K = parse_int(model.require("K").value, model.require("K").line);
    if (K < 2) throw ParseError("K must be >= 2");
    auto& lam = model.require("lambda");
    const auto lam_list = parse_list(lam.value, lam.line);
    if (static_cast<long>(lam_list.size()) != K * K)
      throw ParseError("line " + std::to_string(lam.line) +
                       ": lambda needs K*K entries");
    cfg.model.Lambda.resize(K, K);
    for (long j = 0; j < K; ++j)
      for (long k = 0; k < K; ++k)
        cfg.model.Lambda(j, k) = lam_list[j * K + k];

    auto read_vec = [&](const char* key) {
      auto& kv = model.require(key);
      const auto list = parse_list(kv.value, kv.line);
      if (static_cast<long>(list.size()) != K)
        throw ParseError("line " + std::to_string(kv.line) + ": '" +
                         std::string(key) + "' needs K entries");
      Eigen::VectorXd v(K);
      for (long j = 0; j < K; ++j) v(j) = list[j];
      return v;
    };
    cfg.model.a = read_vec("a");
    cfg.model.sigma = read_vec("sigma");
    auto& c = model.require("c");
    cfg.model.c = parse_num(c.value, c.line);
    auto& is = model.require("initial_state");
    cfg.model.initial_state = static_cast<int>(parse_int(is.value, is.line));
    model.check_all_used();
  }
  {
    SectionReader claims(sections["claims"], "claims");
    auto& a1 = claims.require("alpha1");
    cfg.model.alpha1 = parse_num(a1.value, a1.line);
    auto& a2 = claims.require("alpha2");
    cfg.model.alpha2 = parse_num(a2.value, a2.line);
    if (cfg.model.alpha1 > 0.0) {
      auto& kind = claims.require("f1_kind");
      auto& params = claims.require("f1_params");
      cfg.model.f1 = parse_claim(kind.value, parse_list(params.value, params.line),
                                 kind.line);
    } else {
      claims.optional("f1_kind");
      claims.optional("f1_params");
    }
    if (cfg.model.alpha2 > 0.0) {
      auto& kind = claims.require("f2_kind");
      auto& params = claims.require("f2_params");
      cfg.model.f2 = parse_claim(kind.value, parse_list(params.value, params.line),
                                 kind.line);
    } else {
      claims.optional("f2_kind");
      claims.optional("f2_params");
    }
    claims.check_all_used();
  }
  if (sections.count("sim")) {
    SectionReader sim(sections["sim"], "sim");
    if (auto* kv = sim.optional("n_paths"))
      cfg.sim.n_paths = parse_int(kv->value, kv->line);
    if (auto* kv = sim.optional("quad_step"))
      cfg.sim.quad_step = parse_num(kv->value, kv->line);
    if (auto* kv = sim.optional("max_cycles"))
      cfg.sim.max_cycles = static_cast<int>(parse_int(kv->value, kv->line));
    if (auto* kv = sim.optional("product_cutoff"))
      cfg.sim.product_cutoff = parse_num(kv->value, kv->line);
    if (auto* kv = sim.optional("horizon"))
      cfg.sim.horizon = parse_num(kv->value, kv->line);
    if (auto* kv = sim.optional("seed"))
      cfg.sim.seed = static_cast<std::uint64_t>(parse_int(kv->value, kv->line));
    if (auto* kv = sim.optional("workers"))
      cfg.sim.workers = static_cast<int>(parse_int(kv->value, kv->line));
    sim.check_all_used();
  }

  try {
    validate(cfg.model);
  } catch (const ModelError& e) {
    throw ValidationError(e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream out;
  const int K = cfg.model.num_states();
  out << "[model]\n";
  out << "K = " << K << "\n";
  out << "lambda =";
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      out << " " << format_double(cfg.model.Lambda(j, k));
  out << "\n";
  out << "a =";
  for (int j = 0; j < K; ++j) out << " " << format_double(cfg.model.a(j));
  out << "\n";
  out << "sigma =";
  for (int j = 0; j < K; ++j) out << " " << format_double(cfg.model.sigma(j));
  out << "\n";
  out << "c = " << format_double(cfg.model.c) << "\n";
  out << "initial_state = " << cfg.model.initial_state << "\n";

  auto claim_line = [&](const char* tag, const ClaimDist& cd) {
    out << tag << "_kind = ";
    switch (cd.kind()) {
      case ClaimKind::Exponential:
        out << "exponential\n"
            << tag << "_params = " << format_double(cd.mean_param()) << "\n";
        break;
      case ClaimKind::Pareto:
        out << "pareto\n"
            << tag << "_params = " << format_double(cd.shape()) << " "
            << format_double(cd.scale()) << "\n";
        break;
      case ClaimKind::Deterministic:
        out << "deterministic\n"
            << tag << "_params = " << format_double(cd.fixed_value()) << "\n";
        break;
      case ClaimKind::Empirical:
        out << "empirical\n" << tag << "_params =";
        for (double x : cd.sample()) out << " " << format_double(x);
        out << "\n";
        break;
    }
  };
  out << "\n[claims]\n";
  out << "alpha1 = " << format_double(cfg.model.alpha1) << "\n";
  if (cfg.model.alpha1 > 0.0) claim_line("f1", cfg.model.f1);
  out << "alpha2 = " << format_double(cfg.model.alpha2) << "\n";
  if (cfg.model.alpha2 > 0.0) claim_line("f2", cfg.model.f2);

  out << "\n[sim]\n";
  out << "n_paths = " << cfg.sim.n_paths << "\n";
  out << "quad_step = " << format_double(cfg.sim.quad_step) << "\n";
  out << "max_cycles = " << cfg.sim.max_cycles << "\n";
  out << "product_cutoff = " << format_double(cfg.sim.product_cutoff) << "\n";
  out << "horizon = " << format_double(cfg.sim.horizon) << "\n";
  out << "seed = " << cfg.sim.seed << "\n";
  out << "workers = " << cfg.sim.workers << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace ruin
