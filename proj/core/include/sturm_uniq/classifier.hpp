#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sturm_uniq/feller_series.hpp"
#include "sturm_uniq/ode_oracle.hpp"
#include "sturm_uniq/operator_model.hpp"

namespace sturm_uniq {

enum class BoundaryClass { NoEntrance, Entrance, Inconclusive };
enum class Uniq { Unique, NotUnique, Inconclusive };

std::string to_string(BoundaryClass c);
std::string to_string(Uniq u);

enum class MethodKind {
  ExactCriterion,
  V0FastPath,
  SeriesProbe,
  OdeOracle,
  ComparisonTransfer,
};
std::string to_string(MethodKind m);

/// Which machinery classify_boundary may use.
enum class Strategy { Auto, ExactOnly, NumericOnly, SeriesOnly, OdeOnly };
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct MethodOutcome {
  MethodKind kind;
  std::string name;  // e.g. "power-law criterion", "series probe q=2"
  BoundaryClass verdict = BoundaryClass::Inconclusive;
  std::optional<DivergenceVerdict> details;
  std::string note;
};

struct BoundaryVerdict {
  Side side = Side::Upper;
  double q = 1.0;
  BoundaryClass verdict = BoundaryClass::Inconclusive;
  std::string decided_by;
  std::vector<MethodOutcome> attempts;
  /// Classical-sense entrance certificate (q = 1 only): set when the
  /// classical integral test was conclusive; true means entrance in
  /// Feller's classical sense (a sufficient condition).
  std::optional<bool> feller_classical;

  bool no_entrance() const { return verdict == BoundaryClass::NoEntrance; }
};

struct NumericsOptions {
  SeriesOptions series;
  OdeOptions ode;
};

/// Boundary classification at exponent q >= 1 (q = p/(p-1); q = 1 is the
/// plain no-entrance notion). Runs exact criteria, the zero-potential fast
/// path, then the series probe cross-checked against the ODE oracle,
/// stopping at the first conclusive method; all attempts are recorded.
BoundaryVerdict classify_boundary(const Operator1D& op, Side side, double q,
                                  Strategy strategy = Strategy::Auto,
                                  const NumericsOptions& numerics = {});

/// Closed-form criterion for x^kappa (f'' + (gamma/x) f' - (c/x^2) f);
/// `gamma`, `c`, `kappa` are the family parameters in the boundary-local
/// coordinate. nullopt = the criterion does not cover this configuration.
struct PowerLawFamily {
  double gamma = 0.0;
  double c = 0.0;
  double kappa = 0.0;
};
std::optional<BoundaryClass> exact_power_law_criterion(
    const PowerLawFamily& family, Side side_of_origin, double q);

/// Critical killing strength c_cr(q, gamma) at which the origin flips to
/// no-entrance for the kappa = 0 family.
double power_law_critical_c(double q, double gamma);

/// Probe the coefficients toward the boundary of `side` and return the
/// power-law family parameters when they match one to high accuracy.
std::optional<PowerLawFamily> recognize_power_law(const Operator1D& op,
                                                  Side side);

/// First-order uniqueness test: unique iff the first iterated integral with
/// unit killing diverges at every open end.
struct L1Result {
  Uniq verdict = Uniq::Inconclusive;
  std::vector<BoundaryVerdict> sides;
  std::string method;
};
L1Result l1_uniqueness_test(const Operator1D& op,
                            Strategy strategy = Strategy::Auto,
                            const NumericsOptions& numerics = {});

class HypothesisFailed : public Error {
 public:
  HypothesisFailed(double x, std::string which);
  double x() const { return x_; }
  const std::string& which() const { return which_; }

 private:
  double x_;
  std::string which_;
};

/// Transfer a no-entrance verdict from op1 to op2 under the comparison
/// hypotheses a1 >= a2, V2 >= V1 and the one-sided drift inequality,
/// verified on a dense probe grid. Throws HypothesisFailed on violation.
BoundaryVerdict compare_transfer(const Operator1D& op1, const Operator1D& op2,
                                 Side side, const BoundaryVerdict& verdict1,
                                 int probe_points = 512);

struct UniquenessEntry {
  double p = 2.0;  // +inf for the L^infinity entry
  Uniq verdict = Uniq::Inconclusive;
  std::optional<BoundaryVerdict> lower;
  std::optional<BoundaryVerdict> upper;
  std::string method;
  std::string liouville_note;  // set for p = inf Unique verdicts
};

struct UniquenessReport {
  std::string operator_summary;
  int probes_validated = 0;
  std::vector<UniquenessEntry> entries;

  const UniquenessEntry* entry_for(double p) const;
};

/// Per-exponent uniqueness verdicts. p = 1 uses the first-order test;
/// p in (1, inf] classifies both open ends at q = p/(p-1); half-line
/// operators test only their open end.
UniquenessReport uniqueness_report(const Operator1D& op,
                                   const std::vector<double>& p_list,
                                   Strategy strategy = Strategy::Auto,
                                   const NumericsOptions& numerics = {});

}  // namespace sturm_uniq
