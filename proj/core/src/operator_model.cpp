#include "sturm_uniq/operator_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sturm_uniq/quadrature.hpp"

namespace sturm_uniq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(Side s) { return s == Side::Lower ? "lower" : "upper"; }

std::string to_string(Closure c) {
  switch (c) {
    case Closure::Open: return "open";
    case Closure::ClosedLeft: return "closed_left";
    case Closure::ClosedRight: return "closed_right";
  }
  return "?";
}

std::string to_string(BoundaryCondition b) {
  switch (b) {
    case BoundaryCondition::None: return "none";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
  }
  return "?";
}

void Interval::validate() const {
  if (!(lo < hi)) throw Error("interval requires x0 < y0");
  if (std::isnan(lo) || std::isnan(hi)) throw Error("interval endpoint is NaN");
  if (closure == Closure::ClosedLeft && lo_infinite()) {
    throw Error("closed_left requires a finite lower endpoint");
  }
  if (closure == Closure::ClosedRight && hi_infinite()) {
    throw Error("closed_right requires a finite upper endpoint");
  }
}

namespace {
std::string kind_name(ValidationError::Kind k) {
  using Kind = ValidationError::Kind;
  switch (k) {
    case Kind::NonpositiveDiffusion: return "nonpositive diffusion";
    case Kind::NegativePotential: return "negative potential";
    case Kind::ReferencePointOutOfRange: return "reference point out of range";
    case Kind::CoefficientNotEvaluable: return "coefficient not evaluable";
    case Kind::BoundaryConditionMismatch: return "boundary condition mismatch";
  }
  return "?";
}
}  // namespace

ValidationError::ValidationError(Kind kind, double at, std::string detail)
    : Error(kind_name(kind) + " at x=" + std::to_string(at) +
            (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      at_(at) {}

double default_reference_point(const Interval& iv) {
  if (!iv.lo_infinite() && !iv.hi_infinite()) return 0.5 * (iv.lo + iv.hi);
  if (iv.lo_infinite() && iv.hi_infinite()) return 0.0;
  if (iv.lo_infinite()) return iv.hi - 1.0;
  return iv.lo + 1.0;
}

Operator1D::Operator1D(Interval interval, CoefficientExpr a, CoefficientExpr b,
                       CoefficientExpr V, double c, BoundaryCondition bc)
    : interval_(interval),
      a_(std::move(a)),
      b_(std::move(b)),
      V_(std::move(V)),
      c_(c),
      bc_(bc) {}

std::vector<double> Operator1D::side_probes(Side side, int count) const {
  // geometric ladder from c toward the boundary, never touching it
  std::vector<double> xs;
  xs.reserve(count);
  const double e = interval_.endpoint(side);
  if (std::isinf(e)) {
    const double sign = side == Side::Upper ? 1.0 : -1.0;
    for (int i = 1; i <= count; ++i) {
      const double t = 40.0 * i / count;  // out to c +/- 2^40
      xs.push_back(c_ + sign * (std::exp2(t) - 1.0));
    }
  } else {
    const double span = e - c_;
    for (int i = 1; i <= count; ++i) {
      const double t = 40.0 * i / count;  // down to distance span*2^-40
      xs.push_back(e - span * std::exp2(-t));
    }
  }
  return xs;
}

void Operator1D::validate() {
  interval_.validate();
  if (bc_ != BoundaryCondition::None && interval_.closure == Closure::Open) {
    throw ValidationError(ValidationError::Kind::BoundaryConditionMismatch,
                          c_, "boundary condition given on an open interval");
  }
  if (!(interval_.lo < c_ && c_ < interval_.hi)) {
    throw ValidationError(ValidationError::Kind::ReferencePointOutOfRange, c_,
                          "need x0 < c < y0");
  }
  int n = 0;
  auto check_at = [&](double x) {
    double av, bv, vv;
    try {
      av = a_.eval(x);
      bv = b_.eval(x);
      vv = V_.eval(x);
      (void)bv;
    } catch (const EvalError& e) {
      throw ValidationError(ValidationError::Kind::CoefficientNotEvaluable, x,
                            e.what());
    }
    if (!(av > 0.0)) {
      throw ValidationError(ValidationError::Kind::NonpositiveDiffusion, x,
                            "a(x) = " + std::to_string(av));
    }
    if (vv < 0.0) {
      throw ValidationError(ValidationError::Kind::NegativePotential, x,
                            "V(x) = " + std::to_string(vv));
    }
    ++n;
  };
  check_at(c_);
  for (Side side : {Side::Lower, Side::Upper}) {
    for (double x : side_probes(side, 64)) check_at(x);
  }
  probes_validated_ = n;
}

Operator1D Operator1D::make(Interval interval, CoefficientExpr a,
                            CoefficientExpr b, CoefficientExpr V,
                            std::optional<double> c, BoundaryCondition bc) {
  interval.validate();
  double cref = c.value_or(default_reference_point(interval));
  Operator1D op(interval, std::move(a), std::move(b), std::move(V), cref, bc);
  op.validate();
  return op;
}

Operator1D Operator1D::weil_bessel(double gamma, double c_killing,
                                   double kappa, double c_ref) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  std::string scale = kappa == 0.0 ? std::string("1")
                                   : "pow(x," + num(kappa) + ")";
  std::string a_src = scale;
  std::string b_src = gamma == 0.0
                          ? std::string("0")
                          : scale + "*(" + num(gamma) + "/x)";
  std::string v_src = c_killing == 0.0
                          ? std::string("0")
                          : scale + "*(" + num(c_killing) + "/pow(x,2))";
  Operator1D op = make(Interval::open(0.0, kInf), CoefficientExpr::parse(a_src),
                       CoefficientExpr::parse(b_src),
                       CoefficientExpr::parse(v_src), c_ref);
  ExactFamilyHint hint;
  hint.kind = ExactFamilyHint::Kind::PowerLaw;
  hint.gamma = gamma;
  hint.c = c_killing;
  hint.kappa = kappa;
  return op.with_family_hint(hint);
}

Operator1D Operator1D::exp_drift(double gamma, double alpha, double beta,
                                 double c_killing) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  // gamma*alpha*sgn(x)*|x|^(alpha-1), continuous through 0 for alpha > 1
  std::string b_src = "(" + num(gamma * alpha) + ")*sgn(x)*pow(abs(x)," +
                      num(alpha - 1.0) + ")";
  std::string v_src =
      c_killing == 0.0
          ? std::string("0")
          : "(" + num(c_killing) + ")*pow(abs(x)," + num(beta) + ")";
  Operator1D op =
      make(Interval::open(-kInf, kInf), CoefficientExpr::parse("1"),
           CoefficientExpr::parse(b_src), CoefficientExpr::parse(v_src), 0.0);
  ExactFamilyHint hint;
  hint.kind = ExactFamilyHint::Kind::ExpDrift;
  hint.gamma = gamma;
  hint.alpha = alpha;
  hint.beta = beta;
  hint.c = c_killing;
  return op.with_family_hint(hint);
}

Operator1D Operator1D::brownian() {
  return make(Interval::open(-kInf, kInf), CoefficientExpr::parse("1"),
              CoefficientExpr::parse("0"), CoefficientExpr::parse("0"), 0.0);
}

Operator1D Operator1D::with_family_hint(ExactFamilyHint hint) const {
  Operator1D copy = *this;
  copy.hint_ = hint;
  return copy;
}

Operator1D Operator1D::with_reference_point(double c) const {
  Operator1D copy = *this;
  copy.c_ = c;
  copy.validate();
  return copy;
}

bool Operator1D::potential_zero_on(Side side) const {
  if (V_.is_constant_zero()) return true;
  for (double x : side_probes(side, 64)) {
    double v;
    try {
      v = V_.eval(x);
    } catch (const EvalError&) {
      return false;
    }
    if (v != 0.0) return false;
  }
  return true;
}

std::string Operator1D::summary() const {
  std::ostringstream os;
  os << "a=" << a_.pretty() << "; b=" << b_.pretty() << "; V=" << V_.pretty()
     << "; interval=(" << interval_.lo << ", " << interval_.hi << ") "
     << to_string(interval_.closure) << "; c=" << c_;
  if (bc_ != BoundaryCondition::None) os << "; bc=" << to_string(bc_);
  return os.str();
}

// ---------------------------------------------------------------------------
// ScaleSpeedCache

ScaleSpeedCache::ScaleSpeedCache(Operator1D op, double quad_rel_tol)
    : op_(std::move(op)), tol_(quad_rel_tol) {}

double ScaleSpeedCache::checkpoint_position(Side side, int j) const {
  // j = 0 is the anchor c itself
  if (j == 0) return op_.c();
  const double e = op_.interval().endpoint(side);
  if (std::isinf(e)) {
    const double sign = side == Side::Upper ? 1.0 : -1.0;
    return op_.c() + sign * std::ldexp(1.0, j - 1);  // c +/- 2^(j-1)
  }
  const double span = e - op_.c();
  return e - span * std::ldexp(1.0, -j);  // halves the remaining gap
}

double ScaleSpeedCache::checkpoint_value(Side side, int j) const {
  if (j == 0) return 0.0;
  std::vector<double>& ladder = side == Side::Upper ? upper_ : lower_;
  std::lock_guard<std::mutex> lock(mutex_);
  auto drift = [this](double t) { return op_.b().eval(t) / op_.a().eval(t); };
  while (static_cast<int>(ladder.size()) < j) {
    const int next = static_cast<int>(ladder.size()) + 1;
    const double prev_pos = checkpoint_position(side, next - 1);
    const double pos = checkpoint_position(side, next);
    const double base = next == 1 ? 0.0 : ladder[next - 2];
    const double seg =
        integrate(drift, prev_pos, pos, tol_, 1e-305).value;
    ladder.push_back(base + seg);
  }
  return ladder[j - 1];
}

double ScaleSpeedCache::drift_integral(double x) const {
  const double c = op_.c();
  if (x == c) return 0.0;
  const Side side = x > c ? Side::Upper : Side::Lower;
  const double e = op_.interval().endpoint(side);

  // deepest checkpoint at or before x along the ladder
  int j = 0;
  if (std::isinf(e)) {
    const double d = std::abs(x - c);
    if (d >= 1.0) j = 1 + static_cast<int>(std::floor(std::log2(d)));
  } else {
    const double span = std::abs(e - c);
    const double gap = std::abs(e - x);
    if (gap > 0.0 && gap < span) {
      j = static_cast<int>(std::floor(std::log2(span / gap)));
    }
    j = std::max(0, j);
  }
  // make sure the checkpoint is on the near side of x
  while (j > 0) {
    const double p = checkpoint_position(side, j);
    if ((side == Side::Upper && p <= x) || (side == Side::Lower && p >= x)) break;
    --j;
  }
  const double anchor_pos = checkpoint_position(side, j);
  const double anchor_val = checkpoint_value(side, j);
  auto drift = [this](double t) { return op_.b().eval(t) / op_.a().eval(t); };
  return anchor_val + integrate(drift, anchor_pos, x, tol_, 1e-305).value;
}

double ScaleSpeedCache::log_mprime(double x) const {
  return drift_integral(x) - std::log(op_.a().eval(x));
}

double ScaleSpeedCache::sprime(double x) const {
  return std::exp(log_sprime(x));
}

double ScaleSpeedCache::mprime(double x) const {
  return std::exp(log_mprime(x));
}

double ScaleSpeedCache::scale_integral(double x1, double x2,
                                       double rel_tol) const {
  if (x1 == x2) return 0.0;
  return std::exp(log_scale_integral(x1, x2, rel_tol));
}

double ScaleSpeedCache::speed_integral(double x1, double x2,
                                       double rel_tol) const {
  if (x1 == x2) return 0.0;
  return std::exp(log_speed_integral(x1, x2, rel_tol));
}

double ScaleSpeedCache::log_scale_integral(double x1, double x2,
                                           double rel_tol) const {
  if (x1 > x2) throw QuadratureFailure("reversed bounds", x1, x2);
  return log_integrate([this](double t) { return log_sprime(t); }, x1, x2,
                       rel_tol);
}

double ScaleSpeedCache::log_speed_integral(double x1, double x2,
                                           double rel_tol) const {
  if (x1 > x2) throw QuadratureFailure("reversed bounds", x1, x2);
  return log_integrate([this](double t) { return log_mprime(t); }, x1, x2,
                       rel_tol);
}

}  // namespace sturm_uniq
