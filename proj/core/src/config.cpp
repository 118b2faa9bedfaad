#include "sturm_uniq/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sturm_uniq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConfigError::ConfigError(Kind kind, int line, std::string message)
    : Error("config " +
            std::string(kind == Kind::Syntax ? "syntax" : "semantic") +
            " error at line " + std::to_string(line) + ": " + message),
      kind_(kind),
      line_(line) {}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Classify: return "classify";
    case Mode::Report: return "report";
    case Mode::Sweep: return "sweep";
    case Mode::Compare: return "compare";
    case Mode::Reduce: return "reduce";
    case Mode::Bracket: return "bracket";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "classify") return Mode::Classify;
  if (s == "report") return Mode::Report;
  if (s == "sweep") return Mode::Sweep;
  if (s == "compare") return Mode::Compare;
  if (s == "reduce") return Mode::Reduce;
  if (s == "bracket") return Mode::Bracket;
  throw Error("unknown mode '" + s + "'");
}

std::string to_string(Budget b) {
  switch (b) {
    case Budget::Quick: return "quick";
    case Budget::Default: return "default";
    case Budget::Deep: return "deep";
  }
  return "?";
}

Budget budget_from_string(const std::string& s) {
  if (s == "quick") return Budget::Quick;
  if (s == "default") return Budget::Default;
  if (s == "deep") return Budget::Deep;
  throw Error("unknown budget '" + s + "'");
}

// ---------------------------------------------------------------------------
// low-level parsing helpers

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& raw, int line) {
  std::string s = trim(raw);
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return kInf;
  if (lower == "-inf" || lower == "-infinity") return -kInf;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(ConfigError::Kind::Syntax, line,
                      "expected a number, got '" + s + "'");
  }
  return v;
}

std::vector<double> parse_number_list(const std::string& raw, int line) {
  std::vector<double> out;
  std::string cur;
  std::stringstream ss(raw);
  while (std::getline(ss, cur, ',')) {
    if (trim(cur).empty()) {
      throw ConfigError(ConfigError::Kind::Syntax, line, "empty list entry");
    }
    out.push_back(parse_number(cur, line));
  }
  if (out.empty()) {
    throw ConfigError(ConfigError::Kind::Syntax, line, "empty list");
  }
  return out;
}

std::string parse_string(const std::string& raw, int line) {
  std::string s = trim(raw);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  if (!s.empty() && (s.front() == '"' || s.back() == '"')) {
    throw ConfigError(ConfigError::Kind::Syntax, line, "unbalanced quotes");
  }
  return s;
}

// "(lo, hi)", "[lo, hi)" or "(lo, hi]"
Interval parse_interval(const std::string& raw, int line) {
  std::string s = trim(raw);
  if (s.size() < 5) {
    throw ConfigError(ConfigError::Kind::Syntax, line,
                      "interval must look like (lo, hi)");
  }
  char open = s.front(), close = s.back();
  if ((open != '(' && open != '[') || (close != ')' && close != ']')) {
    throw ConfigError(ConfigError::Kind::Syntax, line,
                      "interval must be delimited by ( [ and ) ]");
  }
  if (open == '[' && close == ']') {
    throw ConfigError(ConfigError::Kind::Semantic, line,
                      "compact closed intervals are not supported; one end "
                      "must be open");
  }
  std::string body = s.substr(1, s.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string::npos) {
    throw ConfigError(ConfigError::Kind::Syntax, line,
                      "interval needs two comma-separated endpoints");
  }
  Interval iv;
  iv.lo = parse_number(body.substr(0, comma), line);
  iv.hi = parse_number(body.substr(comma + 1), line);
  iv.closure = open == '[' ? Closure::ClosedLeft
                           : (close == ']' ? Closure::ClosedRight
                                           : Closure::Open);
  try {
    iv.validate();
  } catch (const Error& e) {
    throw ConfigError(ConfigError::Kind::Semantic, line, e.what());
  }
  return iv;
}

Side side_from_string(const std::string& s, int line) {
  if (s == "lower") return Side::Lower;
  if (s == "upper") return Side::Upper;
  throw ConfigError(ConfigError::Kind::Semantic, line,
                    "side must be lower or upper");
}

struct RawEntry {
  std::string value;
  int line;
};

using Section = std::map<std::string, RawEntry>;

}  // namespace

// ---------------------------------------------------------------------------
// spec builders

Operator1D OperatorSpec::build(
    const std::map<std::string, double>& params) const {
  std::set<std::string> names;
  for (const auto& [k, v] : params) names.insert(k);
  auto make_expr = [&](const std::string& src) {
    return CoefficientExpr::parse(src, names).bind(params);
  };
  Operator1D op = Operator1D::make(interval, make_expr(a_src),
                                   make_expr(b_src), make_expr(v_src), c, bc);
  if (!family.empty() && family != "none" && family != "auto") {
    auto get = [&](const char* key, double fallback,
                   bool required) -> double {
      auto it = params.find(key);
      if (it != params.end()) return it->second;
      if (required) {
        throw Error("family '" + family + "' needs parameter '" + key + "'");
      }
      return fallback;
    };
    ExactFamilyHint hint;
    if (family == "weil_bessel") {
      hint.kind = ExactFamilyHint::Kind::PowerLaw;
      hint.gamma = get("gamma", 0.0, false);
      hint.c = get("C", 0.0, false);
      hint.kappa = get("kappa", 0.0, false);
    } else if (family == "exp_drift") {
      hint.kind = ExactFamilyHint::Kind::ExpDrift;
      hint.gamma = get("gamma", 0.0, true);
      hint.alpha = get("alpha", 0.0, true);
      hint.beta = get("beta", 0.0, false);
      hint.c = get("C", 0.0, false);
    } else {
      throw Error("unknown family hint '" + family + "'");
    }
    op = op.with_family_hint(hint);
  }
  return op;
}

RadialProfile ProfileSpec::build(
    const std::map<std::string, double>& params) const {
  if (is_preset) {
    return preset(preset_name, preset_params);
  }
  std::set<std::string> names;
  for (const auto& [k, v] : params) names.insert(k);
  auto make_expr = [&](const std::string& src) {
    return CoefficientExpr::parse(src, names).bind(params);
  };
  RadialProfile p;
  p.interval = interval;
  p.alpha = make_expr(alpha_src);
  p.beta = make_expr(beta_src);
  p.q = make_expr(q_src);
  p.two_sided = two_sided;
  p.classified_end = classified_end;
  p.c = c.value_or(default_reference_point(interval));
  p.c1 = c1;
  p.c2 = c2;
  p.provenance = provenance;
  p.name = "explicit";
  return p;
}

// ---------------------------------------------------------------------------
// config text parsing

namespace {

void reject_unknown_keys(const std::string& section, const Section& sec,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, entry] : sec) {
    if (!allowed.count(key)) {
      throw ConfigError(ConfigError::Kind::Semantic, entry.line,
                        "unknown key '" + key + "' in section [" + section +
                            "]");
    }
  }
}

OperatorSpec parse_operator_section(const Section& sec,
                                    const std::string& name) {
  reject_unknown_keys(name, sec,
                      {"a", "b", "v", "interval", "c", "boundary_condition",
                       "family"});
  OperatorSpec spec;
  for (const auto& [key, entry] : sec) {
    if (key == "a") spec.a_src = parse_string(entry.value, entry.line);
    else if (key == "b") spec.b_src = parse_string(entry.value, entry.line);
    else if (key == "v") spec.v_src = parse_string(entry.value, entry.line);
    else if (key == "interval")
      spec.interval = parse_interval(entry.value, entry.line);
    else if (key == "c") spec.c = parse_number(entry.value, entry.line);
    else if (key == "family")
      spec.family = parse_string(entry.value, entry.line);
    else if (key == "boundary_condition") {
      std::string v = parse_string(entry.value, entry.line);
      if (v == "none") spec.bc = BoundaryCondition::None;
      else if (v == "dirichlet") spec.bc = BoundaryCondition::Dirichlet;
      else if (v == "neumann") spec.bc = BoundaryCondition::Neumann;
      else
        throw ConfigError(ConfigError::Kind::Semantic, entry.line,
                          "boundary_condition must be none|dirichlet|neumann");
    }
  }
  return spec;
}

double positive(double v, const char* what, int line) {
  if (!(v > 0.0)) {
    throw ConfigError(ConfigError::Kind::Semantic, line,
                      std::string(what) + " must be positive");
  }
  return v;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;
  {
    std::istringstream in(text);
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      // strip comments outside quotes
      bool in_quote = false;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quote = !in_quote;
        else if (line[i] == '#' && !in_quote) {
          line = line.substr(0, i);
          break;
        }
      }
      std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') {
          throw ConfigError(ConfigError::Kind::Syntax, lineno,
                            "unterminated section header");
        }
        current = trim(t.substr(1, t.size() - 2));
        if (current.empty()) {
          throw ConfigError(ConfigError::Kind::Syntax, lineno,
                            "empty section name");
        }
        sections[current];  // create
        section_lines.emplace(current, lineno);
        continue;
      }
      auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(ConfigError::Kind::Syntax, lineno,
                          "expected 'key = value'");
      }
      if (current.empty()) {
        throw ConfigError(ConfigError::Kind::Syntax, lineno,
                          "key outside any [section]");
      }
      std::string key = trim(t.substr(0, eq));
      std::transform(key.begin(), key.end(), key.begin(), ::tolower);
      std::string value = trim(t.substr(eq + 1));
      if (key.empty() || value.empty()) {
        throw ConfigError(ConfigError::Kind::Syntax, lineno,
                          "empty key or value");
      }
      if (sections[current].count(key)) {
        throw ConfigError(ConfigError::Kind::Semantic, lineno,
                          "duplicate key '" + key + "'");
      }
      sections[current][key] = {value, lineno};
    }
  }

  static const std::set<std::string> kKnownSections = {
      "run",     "operator", "operator2", "params",  "classify",
      "report",  "sweep",    "bracket",   "compare", "reduce",
      "numerics", "output"};
  for (const auto& [name, sec] : sections) {
    if (!kKnownSections.count(name)) {
      throw ConfigError(ConfigError::Kind::Semantic, section_lines[name],
                        "unknown section [" + name + "]");
    }
  }

  RunConfig cfg;

  if (auto it = sections.find("run"); it != sections.end()) {
    reject_unknown_keys("run", it->second, {"mode", "seed", "budget"});
    for (const auto& [key, e] : it->second) {
      try {
        if (key == "mode") cfg.mode = mode_from_string(parse_string(e.value, e.line));
        else if (key == "seed")
          cfg.seed = static_cast<std::uint64_t>(parse_number(e.value, e.line));
        else if (key == "budget")
          cfg.budget = budget_from_string(parse_string(e.value, e.line));
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& err) {
        throw ConfigError(ConfigError::Kind::Semantic, e.line, err.what());
      }
    }
  }

  if (auto it = sections.find("params"); it != sections.end()) {
    for (const auto& [key, e] : it->second) {
      cfg.params[key] = parse_number(e.value, e.line);
    }
  }

  if (auto it = sections.find("operator"); it != sections.end()) {
    cfg.op = parse_operator_section(it->second, "operator");
    cfg.has_op = true;
  }
  if (auto it = sections.find("operator2"); it != sections.end()) {
    cfg.op2 = parse_operator_section(it->second, "operator2");
    cfg.has_op2 = true;
  }

  if (auto it = sections.find("classify"); it != sections.end()) {
    reject_unknown_keys("classify", it->second, {"side", "q", "strategy"});
    for (const auto& [key, e] : it->second) {
      if (key == "side") cfg.side = side_from_string(parse_string(e.value, e.line), e.line);
      else if (key == "q") {
        cfg.q = parse_number(e.value, e.line);
        if (!(cfg.q >= 1.0)) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "q must be >= 1");
        }
      } else if (key == "strategy") {
        try {
          cfg.strategy = strategy_from_string(parse_string(e.value, e.line));
        } catch (const Error& err) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line, err.what());
        }
      }
    }
  }

  if (auto it = sections.find("report"); it != sections.end()) {
    reject_unknown_keys("report", it->second, {"p", "strategy"});
    for (const auto& [key, e] : it->second) {
      if (key == "p") {
        cfg.p_list = parse_number_list(e.value, e.line);
        for (double p : cfg.p_list) {
          if (!(p >= 1.0)) {
            throw ConfigError(ConfigError::Kind::Semantic, e.line,
                              "exponents must satisfy p >= 1");
          }
        }
      } else if (key == "strategy") {
        try {
          cfg.strategy = strategy_from_string(parse_string(e.value, e.line));
        } catch (const Error& err) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line, err.what());
        }
      }
    }
  }

  if (auto it = sections.find("sweep"); it != sections.end()) {
    reject_unknown_keys("sweep", it->second,
                        {"param", "values", "lo", "hi", "count", "task"});
    cfg.has_sweep = true;
    std::optional<double> lo, hi;
    int count = 0;
    for (const auto& [key, e] : it->second) {
      if (key == "param") cfg.sweep.param = parse_string(e.value, e.line);
      else if (key == "values")
        cfg.sweep.values = parse_number_list(e.value, e.line);
      else if (key == "lo") lo = parse_number(e.value, e.line);
      else if (key == "hi") hi = parse_number(e.value, e.line);
      else if (key == "count")
        count = static_cast<int>(parse_number(e.value, e.line));
      else if (key == "task") {
        cfg.sweep.task = parse_string(e.value, e.line);
        if (cfg.sweep.task != "classify" && cfg.sweep.task != "report") {
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "sweep task must be classify or report");
        }
      }
    }
    if (cfg.sweep.values.empty()) {
      if (!lo || !hi || count < 2) {
        throw ConfigError(ConfigError::Kind::Semantic,
                          section_lines["sweep"],
                          "sweep needs values or lo/hi/count");
      }
      for (int i = 0; i < count; ++i) {
        cfg.sweep.values.push_back(*lo + (*hi - *lo) * i / (count - 1));
      }
    }
    if (cfg.sweep.param.empty()) {
      throw ConfigError(ConfigError::Kind::Semantic, section_lines["sweep"],
                        "sweep needs a param name");
    }
  }

  if (auto it = sections.find("bracket"); it != sections.end()) {
    reject_unknown_keys("bracket", it->second, {"param", "lo", "hi", "width"});
    cfg.has_bracket = true;
    for (const auto& [key, e] : it->second) {
      if (key == "param") cfg.bracket.param = parse_string(e.value, e.line);
      else if (key == "lo") cfg.bracket.lo = parse_number(e.value, e.line);
      else if (key == "hi") cfg.bracket.hi = parse_number(e.value, e.line);
      else if (key == "width")
        cfg.bracket.width = positive(parse_number(e.value, e.line), "width",
                                     e.line);
    }
    if (cfg.bracket.param.empty()) {
      throw ConfigError(ConfigError::Kind::Semantic, section_lines["bracket"],
                        "bracket needs a param name");
    }
    if (!(cfg.bracket.lo < cfg.bracket.hi)) {
      throw ConfigError(ConfigError::Kind::Semantic, section_lines["bracket"],
                        "bracket needs lo < hi");
    }
  }

  if (auto it = sections.find("compare"); it != sections.end()) {
    reject_unknown_keys("compare", it->second, {"side", "strategy"});
    for (const auto& [key, e] : it->second) {
      if (key == "side") cfg.side = side_from_string(parse_string(e.value, e.line), e.line);
      else if (key == "strategy") {
        try {
          cfg.strategy = strategy_from_string(parse_string(e.value, e.line));
        } catch (const Error& err) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line, err.what());
        }
      }
    }
  }

  if (auto it = sections.find("reduce"); it != sections.end()) {
    reject_unknown_keys("reduce", it->second,
                        {"preset", "params", "alpha", "beta", "q", "interval",
                         "end", "c", "two_sided", "c1", "c2", "provenance"});
    cfg.has_profile = true;
    ProfileSpec& pr = cfg.profile;
    for (const auto& [key, e] : it->second) {
      if (key == "preset") {
        pr.is_preset = true;
        pr.preset_name = parse_string(e.value, e.line);
      } else if (key == "params") {
        pr.preset_params = parse_number_list(e.value, e.line);
      } else if (key == "alpha") pr.alpha_src = parse_string(e.value, e.line);
      else if (key == "beta") pr.beta_src = parse_string(e.value, e.line);
      else if (key == "q") pr.q_src = parse_string(e.value, e.line);
      else if (key == "interval")
        pr.interval = parse_interval(e.value, e.line);
      else if (key == "end")
        pr.classified_end = side_from_string(parse_string(e.value, e.line), e.line);
      else if (key == "c") pr.c = parse_number(e.value, e.line);
      else if (key == "c1") pr.c1 = parse_number(e.value, e.line);
      else if (key == "c2") pr.c2 = parse_number(e.value, e.line);
      else if (key == "provenance")
        pr.provenance = parse_string(e.value, e.line);
      else if (key == "two_sided") {
        std::string v = parse_string(e.value, e.line);
        if (v == "true") pr.two_sided = true;
        else if (v == "false") pr.two_sided = false;
        else
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "two_sided must be true or false");
      }
    }
  }

  if (auto it = sections.find("numerics"); it != sections.end()) {
    reject_unknown_keys(
        "numerics", it->second,
        {"tol", "delta", "m_big", "depth", "n_max", "nodes_per_panel", "rtol",
         "eps_conv", "inc_floor", "slope_min", "curvature_max", "windows",
         "l_max", "max_steps"});
    NumericsOptions& n = cfg.numerics;
    for (const auto& [key, e] : it->second) {
      const double v = parse_number(e.value, e.line);
      if (key == "tol") {
        n.series.tol = positive(v, "tol", e.line);
      } else if (key == "delta") {
        n.series.delta = positive(v, "delta", e.line);
      } else if (key == "m_big") {
        n.series.probe.m_big = positive(v, "m_big", e.line);
        n.ode.probe.m_big = n.series.probe.m_big;
      } else if (key == "depth") {
        if (v < 8 || v > 200) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "depth must be in [8, 200]");
        }
        n.series.probe.depth = static_cast<int>(v);
        n.ode.probe.depth = static_cast<int>(v);
      } else if (key == "n_max") {
        if (v < 2 || v > 512) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "n_max must be in [2, 512]");
        }
        n.series.n_max = static_cast<int>(v);
      } else if (key == "nodes_per_panel") {
        if (v < 4 || v > 512) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "nodes_per_panel must be in [4, 512]");
        }
        n.series.nodes_per_panel = static_cast<int>(v);
      } else if (key == "rtol") {
        n.ode.rtol = positive(v, "rtol", e.line);
      } else if (key == "eps_conv") {
        n.series.probe.eps_conv = positive(v, "eps_conv", e.line);
        n.ode.probe.eps_conv = n.series.probe.eps_conv;
      } else if (key == "inc_floor") {
        n.series.probe.inc_floor = positive(v, "inc_floor", e.line);
        n.ode.probe.inc_floor = n.series.probe.inc_floor;
      } else if (key == "slope_min") {
        n.series.probe.slope_min = positive(v, "slope_min", e.line);
        n.ode.probe.slope_min = n.series.probe.slope_min;
      } else if (key == "curvature_max") {
        n.series.probe.curvature_max = positive(v, "curvature_max", e.line);
        n.ode.probe.curvature_max = n.series.probe.curvature_max;
      } else if (key == "windows") {
        if (v < 3 || v > 40) {
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "windows must be in [3, 40]");
        }
        n.series.probe.windows = static_cast<int>(v);
        n.ode.probe.windows = n.series.probe.windows;
      } else if (key == "l_max") {
        n.ode.L_max = positive(v, "l_max", e.line);
      } else if (key == "max_steps") {
        n.ode.max_steps = static_cast<long>(positive(v, "max_steps", e.line));
      }
    }
  }

  if (auto it = sections.find("output"); it != sections.end()) {
    reject_unknown_keys("output", it->second, {"path", "format"});
    for (const auto& [key, e] : it->second) {
      if (key == "path") cfg.out_path = parse_string(e.value, e.line);
      else if (key == "format") {
        cfg.format = parse_string(e.value, e.line);
        if (cfg.format != "json" && cfg.format != "text") {
          throw ConfigError(ConfigError::Kind::Semantic, e.line,
                            "format must be json or text");
        }
      }
    }
  }

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_budget(RunConfig& config, Budget budget) {
  config.budget = budget;
  NumericsOptions& n = config.numerics;
  switch (budget) {
    case Budget::Quick:
      n.series.probe.depth = std::min(n.series.probe.depth, 40);
      n.ode.probe.depth = n.series.probe.depth;
      n.series.nodes_per_panel = std::min(n.series.nodes_per_panel, 16);
      n.series.n_max = std::min(n.series.n_max, 48);
      n.ode.rtol = std::max(n.ode.rtol, 1e-7);
      break;
    case Budget::Default:
      break;
    case Budget::Deep:
      n.series.nodes_per_panel = std::max(n.series.nodes_per_panel, 64);
      n.series.tol = std::min(n.series.tol, 1e-12);
      n.ode.rtol = std::min(n.ode.rtol, 1e-10);
      break;
  }
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os.precision(17);
  if (mode) os << "mode=" << to_string(*mode) << "\n";
  os << "budget=" << to_string(budget) << " seed=" << seed << "\n";
  if (has_op) {
    os << "operator: a=\"" << op.a_src << "\" b=\"" << op.b_src << "\" V=\""
       << op.v_src << "\" interval=(" << op.interval.lo << ","
       << op.interval.hi << ") " << to_string(op.interval.closure);
    if (op.c) os << " c=" << *op.c;
    if (!op.family.empty()) os << " family=" << op.family;
    os << "\n";
  }
  if (has_op2) {
    os << "operator2: a=\"" << op2.a_src << "\" b=\"" << op2.b_src
       << "\" V=\"" << op2.v_src << "\"\n";
  }
  for (const auto& [k, v] : params) os << "param " << k << "=" << v << "\n";
  if (has_profile) {
    if (profile.is_preset) {
      os << "profile: preset=" << profile.preset_name << " params=";
      for (std::size_t i = 0; i < profile.preset_params.size(); ++i) {
        if (i) os << ",";
        os << profile.preset_params[i];
      }
      os << "\n";
    } else {
      os << "profile: alpha=\"" << profile.alpha_src << "\" beta=\""
         << profile.beta_src << "\" q=\"" << profile.q_src << "\"\n";
    }
  }
  return os.str();
}

}  // namespace sturm_uniq
