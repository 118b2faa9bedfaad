#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sturm_uniq/classifier.hpp"
#include "sturm_uniq/manifold.hpp"
#include "sturm_uniq/operator_model.hpp"

namespace sturm_uniq {

/// Config-file problem, anchored to a 1-based line number (0 = file level).
class ConfigError : public Error {
 public:
  enum class Kind { Syntax, Semantic };
  ConfigError(Kind kind, int line, std::string message);
  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

enum class Mode { Classify, Report, Sweep, Compare, Reduce, Bracket };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

enum class Budget { Quick, Default, Deep };
std::string to_string(Budget b);
Budget budget_from_string(const std::string& s);

/// Textual operator description; expressions may reference names from the
/// [params] section, substituted at build time.
struct OperatorSpec {
  std::string a_src = "1";
  std::string b_src = "0";
  std::string v_src = "0";
  Interval interval = Interval::open(-std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::infinity());
  std::optional<double> c;
  BoundaryCondition bc = BoundaryCondition::None;
  // optional named family hints: "weil_bessel" (gamma, c, kappa from params
  // gamma/C/kappa) or "exp_drift" (gamma, alpha, beta, C)
  std::string family;

  Operator1D build(const std::map<std::string, double>& params) const;
};

struct ProfileSpec {
  bool is_preset = false;
  std::string preset_name;
  std::vector<double> preset_params;
  // explicit profile
  std::string alpha_src = "1", beta_src = "0", q_src = "0";
  Interval interval = Interval::open(0.0, 1.0);
  bool two_sided = false;
  Side classified_end = Side::Upper;
  std::optional<double> c;
  double c1 = 0.0, c2 = 0.0;
  std::string provenance;

  RadialProfile build(const std::map<std::string, double>& params) const;
};

struct SweepSpec {
  std::string param;            // name in [params], or "delta"
  std::vector<double> values;
  std::string task = "classify";  // classify | report
};

struct BracketSpec {
  std::string param;
  double lo = 0.0, hi = 1.0;
  double width = 0.01;
};

struct RunConfig {
  std::optional<Mode> mode;  // may be set by the config or by the caller
  OperatorSpec op;
  bool has_op = false;
  OperatorSpec op2;
  bool has_op2 = false;
  ProfileSpec profile;
  bool has_profile = false;
  std::map<std::string, double> params;

  Side side = Side::Lower;
  double q = 1.0;
  Strategy strategy = Strategy::Auto;
  std::vector<double> p_list{1.0, 2.0,
                             std::numeric_limits<double>::infinity()};

  SweepSpec sweep;
  bool has_sweep = false;
  BracketSpec bracket;
  bool has_bracket = false;

  NumericsOptions numerics;
  Budget budget = Budget::Default;
  std::uint64_t seed = 0;

  std::string out_path;
  std::string format = "json";

  /// Canonical text echo of the parsed configuration.
  std::string echo() const;
};

/// Parse the sectioned key-value config format (see docs/config-format.md).
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Scale the numeric knobs for a budget tier; Default leaves them as given.
void apply_budget(RunConfig& config, Budget budget);

}  // namespace sturm_uniq
