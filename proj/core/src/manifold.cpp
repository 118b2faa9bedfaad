#include "sturm_uniq/manifold.hpp"

#include <cmath>
#include <sstream>

namespace sturm_uniq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Operator1D profile_operator(const RadialProfile& profile) {
  std::optional<double> c;
  if (profile.two_sided) {
    c = 0.5 * (profile.c1 + profile.c2);
  } else {
    c = profile.c;
  }
  BoundaryCondition bc = profile.interval.closure == Closure::Open
                             ? BoundaryCondition::None
                             : BoundaryCondition::Neumann;
  Operator1D op = Operator1D::make(profile.interval, profile.alpha,
                                   profile.beta, profile.q, c, bc);
  if (profile.hint) op = op.with_family_hint(*profile.hint);
  return op;
}

ReduceResult reduce_impl(const RadialProfile& profile,
                         const std::vector<Side>& sides, Strategy strategy,
                         const NumericsOptions& numerics) {
  Operator1D op = profile_operator(profile);
  UniquenessReport report;
  report.operator_summary = op.summary();
  report.probes_validated = op.probes_validated();

  UniquenessEntry entry;
  entry.p = kInf;
  bool all_no_entrance = true;
  bool any_entrance = false;
  for (Side s : sides) {
    BoundaryVerdict bv = classify_boundary(op, s, 1.0, strategy, numerics);
    if (bv.verdict != BoundaryClass::NoEntrance) all_no_entrance = false;
    if (bv.verdict == BoundaryClass::Entrance) any_entrance = true;
    if (!bv.decided_by.empty()) {
      entry.method += entry.method.empty() ? bv.decided_by : " + " + bv.decided_by;
    }
    if (s == Side::Lower) entry.lower = std::move(bv);
    else entry.upper = std::move(bv);
  }
  entry.verdict = all_no_entrance
                      ? Uniq::Unique
                      : (any_entrance ? Uniq::NotUnique : Uniq::Inconclusive);
  // the verdict above concerns the 1-D model; the manifold claim is weaker
  ReduceResult out{std::move(op), std::move(report),
                   ManifoldClaim::Undetermined, "", profile.provenance};
  if (all_no_entrance) {
    out.claim = ManifoldClaim::LInftyUniqueOnM;
    out.claim_note =
        "every tested boundary of the radial model is no entrance; the "
        "operator on the manifold is L-infinity unique (and the "
        "integrable-harmonic alternative holds)";
  } else if (any_entrance) {
    out.claim = ManifoldClaim::TheoremInapplicable;
    out.claim_note =
        "the radial model has an entrance boundary; the comparison test is "
        "one-directional, so no conclusion about the manifold follows";
  } else {
    out.claim = ManifoldClaim::Undetermined;
    out.claim_note = "the radial boundary classification was inconclusive";
  }
  out.report.entries.push_back(std::move(entry));
  return out;
}

}  // namespace

UnknownPreset::UnknownPreset(const std::string& name)
    : Error("unknown preset '" + name + "'") {}

ParamOutOfRange::ParamOutOfRange(const std::string& preset,
                                 const std::string& message)
    : Error("preset '" + preset + "': " + message) {}

std::string to_string(ManifoldClaim c) {
  switch (c) {
    case ManifoldClaim::LInftyUniqueOnM: return "linf_unique_on_manifold";
    case ManifoldClaim::TheoremInapplicable: return "theorem_inapplicable";
    case ManifoldClaim::Undetermined: return "undetermined";
  }
  return "?";
}

ReduceResult reduce_radial(const RadialProfile& profile, Strategy strategy,
                           const NumericsOptions& numerics) {
  if (profile.two_sided) {
    throw Error("one-sided reduction called with a two-sided profile");
  }
  return reduce_impl(profile, {profile.classified_end}, strategy, numerics);
}

ReduceResult reduce_two_sided(const RadialProfile& profile, Strategy strategy,
                              const NumericsOptions& numerics) {
  if (!profile.two_sided) {
    throw Error("two-sided reduction called with a one-sided profile");
  }
  if (!(profile.c1 < profile.c2)) {
    throw Error("two-sided profile requires c1 < c2");
  }
  return reduce_impl(profile, {Side::Lower, Side::Upper}, strategy, numerics);
}

std::vector<std::string> preset_names() {
  return {"cartan_hadamard_drift", "cartan_hadamard_killing", "li_schoen",
          "unit_ball", "punctured_space"};
}

RadialProfile preset(const std::string& name,
                     const std::vector<double>& params) {
  auto want = [&](std::size_t n, const char* sig) {
    if (params.size() != n) {
      throw ParamOutOfRange(name, std::string("expected parameters ") + sig);
    }
  };

  RadialProfile p;
  p.name = name;

  if (name == "cartan_hadamard_drift") {
    want(1, "(L)");
    const double L = params[0];
    if (!(L > 0)) throw ParamOutOfRange(name, "L must be positive");
    p.interval = Interval::closed_left(0.0, kInf);
    p.alpha = CoefficientExpr::parse("1");
    // inward drift bound -(L+1) r^2; see Example-3.3-type models for why
    // this quadratic bound leaves the far boundary an entrance point
    p.beta = CoefficientExpr::parse("-" + num(L + 1.0) + "*pow(x,2)");
    p.q = CoefficientExpr::parse("0");
    p.classified_end = Side::Upper;
    p.c = 1.0;
    ExactFamilyHint hint;
    hint.kind = ExactFamilyHint::Kind::ExpDrift;
    hint.alpha = 3.0;
    hint.gamma = -(L + 1.0) / 3.0;  // drift = gamma*alpha*r^(alpha-1)
    hint.beta = 0.0;
    hint.c = 0.0;
    p.hint = hint;
    p.provenance =
        "Cartan-Hadamard distance proxy rho = d(x, o); Laplacian comparison "
        "gives (Laplacian d) >= (d-1)/d >= 0 and the drift bound "
        "b.grad(d) >= -L(1 + d^2) dominates the radial drift from below";
    return p;
  }

  if (name == "cartan_hadamard_killing") {
    want(3, "(L, alpha_exp, c)");
    const double L = params[0], alpha_exp = params[1], c = params[2];
    if (!(L > 0)) throw ParamOutOfRange(name, "L must be positive");
    if (!(alpha_exp > 2.0)) {
      throw ParamOutOfRange(name, "drift exponent must exceed 2");
    }
    if (!(c >= 0)) throw ParamOutOfRange(name, "killing strength must be >= 0");
    p.interval = Interval::closed_left(0.0, kInf);
    p.alpha = CoefficientExpr::parse("1");
    // drift written as gamma*alpha_exp*r^(alpha_exp-1) with gamma = -L, so
    // the critical killing constant is L*alpha_exp*(alpha_exp-2)
    p.beta = CoefficientExpr::parse("-" + num(L * alpha_exp) + "*pow(x," +
                                    num(alpha_exp - 1.0) + ")");
    p.q = CoefficientExpr::parse(num(c) + "*pow(x," + num(alpha_exp - 2.0) + ")");
    p.classified_end = Side::Upper;
    p.c = 1.0;
    ExactFamilyHint hint;
    hint.kind = ExactFamilyHint::Kind::ExpDrift;
    hint.gamma = -L;
    hint.alpha = alpha_exp;
    hint.beta = alpha_exp - 2.0;
    hint.c = c;
    p.hint = hint;
    p.provenance =
        "Cartan-Hadamard distance proxy rho = d(x, o); drift bound "
        "b.grad(d) >= -L(1 + d^alpha) with killing V >= c d^(alpha-2); the "
        "radial model is supercritical when c > L*alpha*(alpha-2)";
    return p;
  }

  if (name == "li_schoen") {
    want(2, "(alpha_ls, delta)");
    const double a = params[0], delta = params[1];
    if (!(a > 0.0 && a <= 1.0)) {
      throw ParamOutOfRange(name, "alpha_ls must lie in (0, 1]");
    }
    if (!(delta > 0.0 && delta < std::exp(-2.0))) {
      throw ParamOutOfRange(name, "delta must lie in (0, e^-2)");
    }
    // conformal factor rho(r) = r^-1 (-log r)^-1 (log(-log r))^-alpha;
    // model alpha(r) = 1/rho^2, beta(r) = 1/(r rho^2), q = 0
    const std::string rho2 = "(pow(x,-2)*pow(0-log(x),-2)*pow(log(0-log(x)),-" +
                             num(2.0 * a) + "))";
    p.interval = Interval::closed_right(0.0, delta);
    p.alpha = CoefficientExpr::parse("1/" + rho2);
    p.beta = CoefficientExpr::parse("1/(x*" + rho2 + ")");
    p.q = CoefficientExpr::parse("0");
    p.classified_end = Side::Lower;
    p.c = 0.5 * delta;
    ExactFamilyHint hint;
    hint.kind = ExactFamilyHint::Kind::IterLog;
    hint.alpha = a;
    p.hint = hint;
    p.provenance =
        "flat metric near the puncture rescaled by the conformal factor "
        "rho(r) = r^-1(-log r)^-1(log(-log r))^-alpha; radial part of the "
        "Laplace-Beltrami operator on the punctured surface";
    return p;
  }

  if (name == "unit_ball") {
    want(2, "(d, c)");
    const double d = params[0], c = params[1];
    if (!(d >= 2.0)) throw ParamOutOfRange(name, "dimension must be >= 2");
    if (!(c >= 0.0)) throw ParamOutOfRange(name, "killing strength must be >= 0");
    p.interval = Interval::closed_left(0.0, 1.0);
    p.alpha = CoefficientExpr::parse("1");
    p.beta = CoefficientExpr::parse("0");
    p.q = CoefficientExpr::parse(num(c) + "/pow(1-x,2)");
    p.classified_end = Side::Upper;
    p.c = 0.5;
    p.provenance =
        "rho(x) = |x| on the unit ball; |grad rho| = 1 and "
        "(Laplacian rho) = (d-1)/r >= 0, killing V >= c/(1-|x|)^2 near the "
        "sphere";
    return p;
  }

  if (name == "punctured_space") {
    want(3, "(d, c, delta)");
    const double d = params[0], c = params[1], delta = params[2];
    if (!(d >= 2.0)) throw ParamOutOfRange(name, "dimension must be >= 2");
    if (!(c >= 0.0)) throw ParamOutOfRange(name, "killing strength must be >= 0");
    if (!(delta > 0.0)) throw ParamOutOfRange(name, "delta must be positive");
    p.interval = Interval::open(0.0, kInf);
    p.alpha = CoefficientExpr::parse("1");
    p.beta = CoefficientExpr::parse(num(d - 1.0) + "/x");
    p.q = CoefficientExpr::parse("piecewise(" + num(delta) + "," + num(c) +
                                 "/pow(x,2),0)");
    p.two_sided = true;
    p.c1 = 0.5 * delta;
    p.c2 = std::max(1.0, 2.0 * delta);
    p.provenance =
        "rho(x) = |x| on R^d minus the origin; |grad rho| = 1, "
        "(Laplacian rho) = (d-1)/r, killing V >= c/|x|^2 inside radius delta";
    return p;
  }

  throw UnknownPreset(name);
}

}  // namespace sturm_uniq
