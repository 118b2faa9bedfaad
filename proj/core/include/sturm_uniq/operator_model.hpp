#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sturm_uniq/expr.hpp"

namespace sturm_uniq {

enum class Closure { Open, ClosedLeft, ClosedRight };
enum class BoundaryCondition { None, Dirichlet, Neumann };
enum class Side { Lower, Upper };

inline Side opposite(Side s) { return s == Side::Lower ? Side::Upper : Side::Lower; }
std::string to_string(Side s);
std::string to_string(Closure c);
std::string to_string(BoundaryCondition b);

/// Interval (x0, y0) with -inf <= x0 < y0 <= +inf; a closed end marks the
/// half-line variants and must be finite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  Closure closure = Closure::Open;

  static Interval open(double lo, double hi) { return {lo, hi, Closure::Open}; }
  static Interval closed_left(double lo, double hi) {
    return {lo, hi, Closure::ClosedLeft};
  }
  static Interval closed_right(double lo, double hi) {
    return {lo, hi, Closure::ClosedRight};
  }

  bool lo_infinite() const { return std::isinf(lo); }
  bool hi_infinite() const { return std::isinf(hi); }
  double endpoint(Side s) const { return s == Side::Lower ? lo : hi; }
  /// The end a boundary classification applies to is open; a closed end is
  /// governed by its boundary condition instead.
  bool end_open(Side s) const {
    if (s == Side::Lower) return closure != Closure::ClosedLeft;
    return closure != Closure::ClosedRight;
  }
  void validate() const;  // throws Error on malformed intervals
};

class ValidationError : public Error {
 public:
  enum class Kind {
    NonpositiveDiffusion,
    NegativePotential,
    ReferencePointOutOfRange,
    CoefficientNotEvaluable,
    BoundaryConditionMismatch,
  };
  ValidationError(Kind kind, double at, std::string detail);
  Kind kind() const { return kind_; }
  double at() const { return at_; }

 private:
  Kind kind_;
  double at_;
};

/// Hints that let the classifier use a closed-form criterion for operators
/// constructed from a known family (set by the named constructors and the
/// manifold presets, not inferred).
struct ExactFamilyHint {
  enum class Kind {
    PowerLaw,   // x^kappa (f'' + (gamma/x) f' - (c/x^2) f) on (0, inf)
    ExpDrift,   // f'' + gamma*alpha*sgn(x)|x|^(alpha-1) f' - c|x|^beta f on R
    IterLog,    // Li-Schoen iterated-log geometry on (0, delta)
  };
  Kind kind;
  double gamma = 0.0;   // PowerLaw / ExpDrift drift strength
  double c = 0.0;       // killing strength
  double kappa = 0.0;   // PowerLaw scaling exponent
  double alpha = 0.0;   // ExpDrift drift exponent / IterLog exponent
  double beta = 0.0;    // ExpDrift potential exponent
};

/// The Sturm-Liouville operator a f'' + b f' - V f on an interval, with a
/// reference point c strictly inside. Immutable after construction.
class Operator1D {
 public:
  /// Validates the coefficient conditions on a finite probe grid (at least
  /// 64 points per dyadic compact) and throws ValidationError on failure.
  static Operator1D make(Interval interval, CoefficientExpr a,
                         CoefficientExpr b, CoefficientExpr V,
                         std::optional<double> c = std::nullopt,
                         BoundaryCondition bc = BoundaryCondition::None);

  // -- named constructors for the closed-form families -----------------

  /// f'' + (gamma/x) f' - (c/x^2) f on (0, inf). gamma=0 is the
  /// inverse-square (Weil) example, c=0 the Bessel process of dimension
  /// gamma+1.
  static Operator1D weil_bessel(double gamma, double c_killing,
                                double kappa = 0.0, double c_ref = 1.0);

  /// f'' + gamma*alpha*sgn(x)|x|^(alpha-1) f' - c|x|^beta f on R, the
  /// coefficients extended continuously through the origin.
  static Operator1D exp_drift(double gamma, double alpha, double beta,
                              double c_killing);

  /// Brownian motion a=1, b=0, V=0 on R.
  static Operator1D brownian();

  const Interval& interval() const { return interval_; }
  const CoefficientExpr& a() const { return a_; }
  const CoefficientExpr& b() const { return b_; }
  const CoefficientExpr& V() const { return V_; }
  double c() const { return c_; }
  BoundaryCondition boundary_condition() const { return bc_; }
  int probes_validated() const { return probes_validated_; }

  const std::optional<ExactFamilyHint>& family_hint() const { return hint_; }
  Operator1D with_family_hint(ExactFamilyHint hint) const;
  Operator1D with_reference_point(double c) const;

  /// True when V folds to 0 or evaluates to exactly 0 at every validation
  /// probe between c and the given boundary.
  bool potential_zero_on(Side side) const;

  /// Probe positions used for validation on the given side (geometric
  /// ladder from c toward the boundary).
  std::vector<double> side_probes(Side side, int count) const;

  std::string summary() const;

 private:
  Operator1D(Interval interval, CoefficientExpr a, CoefficientExpr b,
             CoefficientExpr V, double c, BoundaryCondition bc);
  void validate();

  Interval interval_;
  CoefficientExpr a_, b_, V_;
  double c_;
  BoundaryCondition bc_;
  int probes_validated_ = 0;
  std::optional<ExactFamilyHint> hint_;
};

/// Default reference point: midpoint for finite intervals, 0 on the full
/// line, one unit inside a semi-infinite interval.
double default_reference_point(const Interval& iv);

/// Evaluable scale density s'(x) = exp(-D(x)) and speed density
/// m'(x) = exp(D(x))/a(x), D(x) = \int_c^x b/a. The drift antiderivative is
/// cached on a monotone dyadic checkpoint ladder anchored at c so queries
/// cost one short local quadrature; refinement is internally synchronized
/// and query results do not depend on evaluation order.
class ScaleSpeedCache {
 public:
  explicit ScaleSpeedCache(Operator1D op, double quad_rel_tol = 1e-12);

  const Operator1D& op() const { return op_; }

  double drift_integral(double x) const;  // D(x)
  double log_sprime(double x) const { return -drift_integral(x); }
  double log_mprime(double x) const;
  double sprime(double x) const;
  double mprime(double x) const;

  /// \int_{x1}^{x2} s'(t) dt (resp. m') with x0 < x1 <= x2 < y0.
  double scale_integral(double x1, double x2, double rel_tol = 1e-10) const;
  double speed_integral(double x1, double x2, double rel_tol = 1e-10) const;
  double log_scale_integral(double x1, double x2, double rel_tol = 1e-10) const;
  double log_speed_integral(double x1, double x2, double rel_tol = 1e-10) const;

 private:
  double checkpoint_position(Side side, int j) const;
  double checkpoint_value(Side side, int j) const;

  Operator1D op_;
  double tol_;
  mutable std::mutex mutex_;
  mutable std::vector<double> upper_;  // D at the upper ladder, index j-1
  mutable std::vector<double> lower_;
};

}  // namespace sturm_uniq
