#include "sturm_uniq/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sturm_uniq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::NoEntrance: return "no_entrance";
    case BoundaryClass::Entrance: return "entrance";
    case BoundaryClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Uniq u) {
  switch (u) {
    case Uniq::Unique: return "unique";
    case Uniq::NotUnique: return "not_unique";
    case Uniq::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(MethodKind m) {
  switch (m) {
    case MethodKind::ExactCriterion: return "exact_criterion";
    case MethodKind::V0FastPath: return "v0_fast_path";
    case MethodKind::SeriesProbe: return "series_probe";
    case MethodKind::OdeOracle: return "ode_oracle";
    case MethodKind::ComparisonTransfer: return "comparison_transfer";
  }
  return "?";
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::ExactOnly: return "exact_only";
    case Strategy::NumericOnly: return "numeric_only";
    case Strategy::SeriesOnly: return "series_only";
    case Strategy::OdeOnly: return "ode_only";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "auto") return Strategy::Auto;
  if (s == "exact_only" || s == "exact") return Strategy::ExactOnly;
  if (s == "numeric_only" || s == "numeric") return Strategy::NumericOnly;
  if (s == "series_only" || s == "series") return Strategy::SeriesOnly;
  if (s == "ode_only" || s == "ode") return Strategy::OdeOnly;
  throw Error("unknown strategy '" + s + "'");
}

// ---------------------------------------------------------------------------
// Exact power-law criterion

double power_law_critical_c(double q, double gamma) {
  return (gamma + 1.0) * (gamma + 1.0) / (q * q) -
         (gamma * gamma - 1.0) / q;
}

std::optional<BoundaryClass> exact_power_law_criterion(
    const PowerLawFamily& f, Side side_of_origin, double q) {
  if (!(q >= 1.0)) return std::nullopt;
  const double g = f.gamma, c = f.c, k = f.kappa;
  if (c < 0.0) return std::nullopt;

  if (side_of_origin == Side::Lower) {
    // boundary at the origin of the local coordinate
    if (c > 0.0) {
      if (k > 2.0) return std::nullopt;  // killing no longer dominates delta
      const double alpha =
          (-(g - 1.0) - std::sqrt((g - 1.0) * (g - 1.0) + 4.0 * c)) / 2.0;
      return alpha * q + g - k <= -1.0 ? BoundaryClass::NoEntrance
                                       : BoundaryClass::Entrance;
    }
    // zero potential on the side
    if (g > 1.0) {
      return (1.0 - g) * q + g - k <= -1.0 ? BoundaryClass::NoEntrance
                                           : BoundaryClass::Entrance;
    }
    if (g == 1.0) {
      return k >= 2.0 ? BoundaryClass::NoEntrance : BoundaryClass::Entrance;
    }
    return g - k <= -1.0 ? BoundaryClass::NoEntrance : BoundaryClass::Entrance;
  }

  // boundary at +infinity of the local coordinate
  if (g - k >= -1.0) return BoundaryClass::NoEntrance;  // infinite speed measure
  if (c == 0.0) {
    if (g > 1.0) return BoundaryClass::Entrance;  // g - k < -1 here
    if (g == 1.0) {
      return k <= 2.0 ? BoundaryClass::NoEntrance : BoundaryClass::Entrance;
    }
    return (1.0 - g) * q + g - k >= -1.0 ? BoundaryClass::NoEntrance
                                         : BoundaryClass::Entrance;
  }
  if (k < 2.0) {
    // sub-quadratic diffusion: the shifted series outgrows every power
    // while m' stays polynomial
    return BoundaryClass::NoEntrance;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Numeric recognition of the power-law family toward one boundary

std::optional<PowerLawFamily> recognize_power_law(const Operator1D& op,
                                                  Side side) {
  const Interval& iv = op.interval();
  const double e = iv.endpoint(side);
  const bool finite = std::isfinite(e);

  // local coordinate u > 0: u = |y - e| toward a finite endpoint (u -> 0),
  // u = |y| toward an infinite one (u -> inf)
  std::vector<double> us, ys;
  double du_dy;
  if (finite) {
    const double span0 = 0.5 * std::min(1.0, std::abs(op.c() - e));
    du_dy = side == Side::Lower ? 1.0 : -1.0;
    for (int j = 6; j <= 26; j += 2) {
      const double u = span0 * std::ldexp(1.0, -j);
      us.push_back(u);
      ys.push_back(e + (side == Side::Lower ? u : -u));
    }
  } else {
    const double sign = side == Side::Upper ? 1.0 : -1.0;
    du_dy = sign;
    const double base = std::max(1.0, std::abs(op.c()) + 1.0);
    for (int j = 3; j <= 23; j += 2) {
      const double y = sign * base * std::ldexp(1.0, j);
      us.push_back(std::abs(y));
      ys.push_back(y);
    }
  }

  const std::size_t n = us.size();
  std::vector<double> av(n), gv(n), cv(n);
  for (std::size_t i = 0; i < n; ++i) {
    double aa, bb, vv;
    try {
      aa = op.a().eval(ys[i]);
      bb = op.b().eval(ys[i]);
      vv = op.V().eval(ys[i]);
    } catch (const EvalError&) {
      return std::nullopt;
    }
    if (!(aa > 0.0)) return std::nullopt;
    av[i] = aa;
    gv[i] = du_dy * bb * us[i] / aa;
    cv[i] = vv * us[i] * us[i] / aa;
  }

  // kappa from successive log ratios of a
  double kappa = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double k_i = std::log(av[i + 1] / av[i]) / std::log(us[i + 1] / us[i]);
    if (i == 0) {
      kappa = k_i;
    } else if (std::abs(k_i - kappa) > 1e-9 * (1.0 + std::abs(kappa))) {
      return std::nullopt;
    }
  }
  if (std::abs(kappa) < 1e-9) kappa = 0.0;
  const double A = av[0] / std::pow(us[0], kappa);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(av[i] - A * std::pow(us[i], kappa)) > 1e-9 * av[i]) {
      return std::nullopt;
    }
  }

  auto fit_const = [&](const std::vector<double>& vals, double& out) -> bool {
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    for (double v : vals) {
      if (std::abs(v - mean) > 1e-9 * (1.0 + std::abs(mean))) return false;
    }
    out = std::abs(mean) < 1e-9 ? 0.0 : mean;
    return true;
  };

  PowerLawFamily fam;
  fam.kappa = kappa;
  if (!fit_const(gv, fam.gamma)) return std::nullopt;
  if (!fit_const(cv, fam.c)) return std::nullopt;
  if (fam.c < 0.0) return std::nullopt;
  return fam;
}

// ---------------------------------------------------------------------------
// Exact registry (hints first, then numeric recognition)

namespace {

struct ExactDecision {
  BoundaryClass verdict;
  std::string name;
};

std::optional<BoundaryClass> exp_drift_criterion(const ExactFamilyHint& h,
                                                 double q) {
  // both infinite ends behave identically by the |x| symmetry of the family
  if (q > 1.0) return BoundaryClass::NoEntrance;
  if (h.gamma >= 0.0) return BoundaryClass::NoEntrance;
  if (h.alpha <= 2.0) return BoundaryClass::NoEntrance;
  if (h.c == 0.0) return BoundaryClass::Entrance;
  if (h.beta > h.alpha - 2.0) return BoundaryClass::NoEntrance;
  if (h.beta < h.alpha - 2.0) return BoundaryClass::Entrance;
  const double c_cr = std::abs(h.gamma) * h.alpha * (h.alpha - 2.0);
  return h.c >= c_cr ? BoundaryClass::NoEntrance : BoundaryClass::Entrance;
}

std::optional<ExactDecision> exact_lookup(const Operator1D& op, Side side,
                                          double q) {
  if (const auto& hint = op.family_hint()) {
    switch (hint->kind) {
      case ExactFamilyHint::Kind::PowerLaw: {
        PowerLawFamily fam{hint->gamma, hint->c, hint->kappa};
        const Side origin_side =
            std::isfinite(op.interval().endpoint(side)) ? Side::Lower
                                                        : Side::Upper;
        if (auto v = exact_power_law_criterion(fam, origin_side, q)) {
          return ExactDecision{*v, "power-law criterion"};
        }
        break;
      }
      case ExactFamilyHint::Kind::ExpDrift: {
        if (auto v = exp_drift_criterion(*hint, q)) {
          return ExactDecision{*v, "exponential-drift criterion"};
        }
        break;
      }
      case ExactFamilyHint::Kind::IterLog: {
        if (std::isfinite(op.interval().endpoint(side))) {
          if (q > 1.0) {
            return ExactDecision{BoundaryClass::NoEntrance,
                                 "iterated-log criterion"};
          }
          return ExactDecision{2.0 * hint->alpha <= 1.0
                                   ? BoundaryClass::NoEntrance
                                   : BoundaryClass::Entrance,
                               "iterated-log criterion"};
        }
        break;
      }
    }
  }
  if (auto fam = recognize_power_law(op, side)) {
    const Side origin_side = std::isfinite(op.interval().endpoint(side))
                                 ? Side::Lower
                                 : Side::Upper;
    if (auto v = exact_power_law_criterion(*fam, origin_side, q)) {
      std::ostringstream os;
      os << "power-law criterion (recognized: gamma=" << fam->gamma
         << ", c=" << fam->c << ", kappa=" << fam->kappa << ")";
      return ExactDecision{*v, os.str()};
    }
  }
  return std::nullopt;
}

BoundaryClass from_probe(const DivergenceVerdict& v) {
  switch (v.outcome) {
    case Outcome::Diverges: return BoundaryClass::NoEntrance;
    case Outcome::Converges: return BoundaryClass::Entrance;
    case Outcome::Inconclusive: return BoundaryClass::Inconclusive;
  }
  return BoundaryClass::Inconclusive;
}

}  // namespace

BoundaryVerdict classify_boundary(const Operator1D& op, Side side, double q,
                                  Strategy strategy,
                                  const NumericsOptions& numerics) {
  if (!(q >= 1.0)) throw Error("exponent q must be >= 1");
  if (!op.interval().end_open(side)) {
    throw Error("cannot classify the closed end of a half-line operator");
  }
  BoundaryVerdict out;
  out.side = side;
  out.q = q;

  auto decide = [&](MethodOutcome mo) {
    out.verdict = mo.verdict;
    out.decided_by = mo.name;
    out.attempts.push_back(std::move(mo));
  };

  // classical entrance certificate, informative at q = 1
  if (q == 1.0 && strategy != Strategy::ExactOnly) {
    MethodOutcome mo;
    mo.kind = MethodKind::SeriesProbe;
    mo.name = "classical entrance integral";
    try {
      DivergenceVerdict cv =
          feller_classical_entrance(op, side, numerics.series);
      if (cv.converges()) out.feller_classical = true;
      if (cv.diverges()) out.feller_classical = false;
      mo.note = cv.converges()
                    ? "finite: entrance in the classical sense"
                    : (cv.diverges() ? "infinite: classical test silent"
                                     : "inconclusive");
      mo.details = std::move(cv);
    } catch (const Error& e) {
      mo.note = e.what();
    }
    out.attempts.push_back(std::move(mo));
  }

  if (strategy == Strategy::Auto || strategy == Strategy::ExactOnly) {
    if (auto ex = exact_lookup(op, side, q)) {
      MethodOutcome mo;
      mo.kind = MethodKind::ExactCriterion;
      mo.name = ex->name;
      mo.verdict = ex->verdict;
      decide(std::move(mo));
      return out;
    }
    if (strategy == Strategy::ExactOnly) {
      MethodOutcome mo;
      mo.kind = MethodKind::ExactCriterion;
      mo.name = "exact criterion";
      mo.note = "no registered criterion matches this operator";
      out.attempts.push_back(std::move(mo));
      return out;
    }
  }

  const SeriesOptions& sopts = numerics.series;

  // zero-potential fast path (exact equivalence, probed numerically)
  const bool v0_applicable =
      strategy != Strategy::OdeOnly && op.potential_zero_on(side);
  if (v0_applicable) {
    MethodOutcome mo;
    mo.kind = MethodKind::V0FastPath;
    mo.name = "zero-potential criterion";
    try {
      DivergenceVerdict v = v0_fast_test(op, side, sopts, q);
      mo.verdict = from_probe(v);
      mo.details = std::move(v);
    } catch (const Error& e) {
      mo.note = e.what();
    }
    if (mo.verdict != BoundaryClass::Inconclusive) {
      decide(std::move(mo));
      return out;
    }
    out.attempts.push_back(std::move(mo));
  }

  std::optional<MethodOutcome> series_mo, ode_mo;
  if (strategy != Strategy::OdeOnly) {
    MethodOutcome mo;
    mo.kind = MethodKind::SeriesProbe;
    std::ostringstream os;
    os << "series probe q=" << q;
    mo.name = os.str();
    try {
      DivergenceVerdict v = lq_no_entrance_probe(op, side, q, sopts);
      mo.verdict = from_probe(v);
      mo.note = v.note;
      mo.details = std::move(v);
    } catch (const Error& e) {
      mo.note = e.what();
    }
    series_mo = std::move(mo);
  }
  if (strategy != Strategy::SeriesOnly) {
    MethodOutcome mo;
    mo.kind = MethodKind::OdeOracle;
    std::ostringstream os;
    os << "ode oracle q=" << q;
    mo.name = os.str();
    try {
      SolutionTrace trace =
          feller_solution(op, sopts.delta, side, numerics.ode);
      DivergenceVerdict v = l1m_integrability(trace, q);
      mo.verdict = from_probe(v);
      mo.note = v.note;
      mo.details = std::move(v);
    } catch (const Error& e) {
      mo.note = e.what();
    }
    ode_mo = std::move(mo);
  }

  const BoundaryClass sv =
      series_mo ? series_mo->verdict : BoundaryClass::Inconclusive;
  const BoundaryClass ov =
      ode_mo ? ode_mo->verdict : BoundaryClass::Inconclusive;
  std::string series_name = series_mo ? series_mo->name : "";
  std::string ode_name = ode_mo ? ode_mo->name : "";
  if (series_mo) out.attempts.push_back(std::move(*series_mo));
  if (ode_mo) out.attempts.push_back(std::move(*ode_mo));

  if (sv != BoundaryClass::Inconclusive && ov != BoundaryClass::Inconclusive) {
    if (sv == ov) {
      out.verdict = sv;
      out.decided_by = "series probe + ode oracle (agree)";
    } else {
      out.verdict = BoundaryClass::Inconclusive;
      out.attempts.back().note +=
          "; independent routes disagree, demoted to inconclusive";
    }
  } else if (sv != BoundaryClass::Inconclusive) {
    out.verdict = sv;
    out.decided_by = series_name;
  } else if (ov != BoundaryClass::Inconclusive) {
    out.verdict = ov;
    out.decided_by = ode_name;
  }
  return out;
}

// ---------------------------------------------------------------------------
// First-order (p = 1) test

namespace {

std::optional<bool> exact_first_order_diverges(const Operator1D& op,
                                               Side side) {
  const auto& hint = op.family_hint();
  if (!hint) return std::nullopt;
  switch (hint->kind) {
    case ExactFamilyHint::Kind::PowerLaw: {
      if (hint->kappa != 0.0) return std::nullopt;
      if (std::isfinite(op.interval().endpoint(side))) {
        return hint->c > 0.0 || hint->gamma >= 1.0;
      }
      return true;  // the far first-order integral always diverges (kappa=0)
    }
    case ExactFamilyHint::Kind::ExpDrift: {
      if (hint->gamma <= 0.0) return true;
      if (hint->c > 0.0) return hint->beta >= hint->alpha - 2.0;
      return hint->alpha <= 2.0;
    }
    case ExactFamilyHint::Kind::IterLog: {
      // m near 0 is finite but the scale integral is not
      if (std::isfinite(op.interval().endpoint(side))) return true;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

L1Result l1_uniqueness_test(const Operator1D& op, Strategy strategy,
                            const NumericsOptions& numerics) {
  L1Result result;
  std::vector<Side> open_sides;
  for (Side s : {Side::Lower, Side::Upper}) {
    if (op.interval().end_open(s)) open_sides.push_back(s);
  }

  bool any_inconclusive = false;
  bool any_converges = false;
  std::vector<std::string> methods;
  for (Side s : open_sides) {
    BoundaryVerdict bv;
    bv.side = s;
    bv.q = kInf;  // marker: first-order test, not an L^q classification
    std::optional<bool> exact;
    if (strategy == Strategy::Auto || strategy == Strategy::ExactOnly) {
      exact = exact_first_order_diverges(op, s);
    }
    if (exact) {
      MethodOutcome mo;
      mo.kind = MethodKind::ExactCriterion;
      mo.name = "first-order criterion";
      mo.verdict = *exact ? BoundaryClass::NoEntrance : BoundaryClass::Entrance;
      bv.verdict = mo.verdict;
      bv.decided_by = mo.name;
      bv.attempts.push_back(std::move(mo));
    } else if (strategy != Strategy::ExactOnly) {
      MethodOutcome mo;
      mo.kind = MethodKind::SeriesProbe;
      mo.name = "first-order integral probe";
      try {
        DivergenceVerdict v = first_order_probe(op, s, numerics.series);
        mo.verdict = from_probe(v);
        mo.note = v.note;
        mo.details = std::move(v);
      } catch (const Error& e) {
        mo.note = e.what();
      }
      bv.verdict = mo.verdict;
      bv.decided_by = mo.name;
      bv.attempts.push_back(std::move(mo));
    }
    methods.push_back(bv.decided_by);
    if (bv.verdict == BoundaryClass::Inconclusive) any_inconclusive = true;
    if (bv.verdict == BoundaryClass::Entrance) any_converges = true;
    result.sides.push_back(std::move(bv));
  }

  if (any_converges) {
    result.verdict = Uniq::NotUnique;
  } else if (any_inconclusive) {
    result.verdict = Uniq::Inconclusive;
  } else {
    result.verdict = Uniq::Unique;
  }
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::ostringstream os;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) os << " + ";
    os << methods[i];
  }
  result.method = os.str();
  return result;
}

// ---------------------------------------------------------------------------
// Comparison transfer

HypothesisFailed::HypothesisFailed(double x, std::string which)
    : Error("comparison hypothesis '" + which + "' fails at x=" +
            std::to_string(x)),
      x_(x),
      which_(std::move(which)) {}

BoundaryVerdict compare_transfer(const Operator1D& op1, const Operator1D& op2,
                                 Side side, const BoundaryVerdict& verdict1,
                                 int probe_points) {
  if (verdict1.verdict != BoundaryClass::NoEntrance) {
    throw Error("comparison transfer needs a no-entrance verdict for op1");
  }
  if (verdict1.q != 1.0) {
    throw Error("comparison transfer applies to the q=1 classification");
  }
  const Interval& i1 = op1.interval();
  const Interval& i2 = op2.interval();
  if (i1.lo != i2.lo || i1.hi != i2.hi) {
    throw Error("comparison transfer requires a common interval");
  }

  const double c_star = std::max(op1.c(), op2.c());
  const double e = i1.endpoint(side);
  std::vector<double> xs;
  xs.push_back(c_star);
  if (std::isinf(e)) {
    const double sign = side == Side::Upper ? 1.0 : -1.0;
    for (int i = 1; i <= probe_points; ++i) {
      xs.push_back(c_star + sign * (std::exp2(40.0 * i / probe_points) - 1.0));
    }
  } else {
    const double span = e - c_star;
    for (int i = 1; i <= probe_points; ++i) {
      xs.push_back(e - span * std::exp2(-40.0 * i / probe_points));
    }
  }

  const double slack = 1e-12;
  for (double x : xs) {
    const double a1 = op1.a().eval(x), a2 = op2.a().eval(x);
    if (a1 < a2 * (1.0 - slack) - slack) {
      throw HypothesisFailed(x, "a1 >= a2");
    }
    const double v1 = op1.V().eval(x), v2 = op2.V().eval(x);
    if (v2 < v1 * (1.0 - slack) - slack) {
      throw HypothesisFailed(x, "V2 >= V1");
    }
    const double d1 = op1.b().eval(x) / a1, d2 = op2.b().eval(x) / a2;
    const double tol = slack * (1.0 + std::abs(d1) + std::abs(d2));
    if (side == Side::Upper ? d1 > d2 + tol : d1 < d2 - tol) {
      throw HypothesisFailed(x, side == Side::Upper ? "b1/a1 <= b2/a2"
                                                    : "b1/a1 >= b2/a2");
    }
  }

  BoundaryVerdict out;
  out.side = side;
  out.q = 1.0;
  out.verdict = BoundaryClass::NoEntrance;
  out.decided_by = "comparison transfer";
  MethodOutcome mo;
  mo.kind = MethodKind::ComparisonTransfer;
  mo.name = "comparison transfer";
  mo.verdict = BoundaryClass::NoEntrance;
  std::ostringstream os;
  os << "hypotheses verified at " << xs.size() << " probes from c=" << c_star
     << " toward the " << to_string(side) << " boundary; source verdict: "
     << (verdict1.decided_by.empty() ? "direct" : verdict1.decided_by);
  mo.note = os.str();
  out.attempts.push_back(std::move(mo));
  return out;
}

// ---------------------------------------------------------------------------
// Per-exponent report

const UniquenessEntry* UniquenessReport::entry_for(double p) const {
  for (const auto& e : entries) {
    if (e.p == p || (std::isinf(p) && std::isinf(e.p))) return &e;
  }
  return nullptr;
}

UniquenessReport uniqueness_report(const Operator1D& op,
                                   const std::vector<double>& p_list,
                                   Strategy strategy,
                                   const NumericsOptions& numerics) {
  UniquenessReport report;
  report.operator_summary = op.summary();
  report.probes_validated = op.probes_validated();

  static const char* kLiouvilleNote =
      "integrable-harmonic alternative holds: above the spectral bottom every "
      "integrable dual-harmonic function vanishes; at the bottom it is a "
      "constant multiple of the distinguished positive invariant density "
      "when one exists";

  for (double p : p_list) {
    if (!(p >= 1.0)) throw Error("uniqueness exponents must satisfy p >= 1");
    UniquenessEntry entry;
    entry.p = p;
    if (p == 1.0) {
      L1Result l1 = l1_uniqueness_test(op, strategy, numerics);
      entry.verdict = l1.verdict;
      entry.method = l1.method;
      for (auto& bv : l1.sides) {
        if (bv.side == Side::Lower) entry.lower = bv;
        else entry.upper = bv;
      }
      report.entries.push_back(std::move(entry));
      continue;
    }
    const double q = std::isinf(p) ? 1.0 : p / (p - 1.0);
    bool any_entrance = false, any_inconclusive = false;
    std::vector<std::string> methods;
    for (Side s : {Side::Lower, Side::Upper}) {
      if (!op.interval().end_open(s)) continue;  // closed end: no test
      BoundaryVerdict bv = classify_boundary(op, s, q, strategy, numerics);
      if (bv.verdict == BoundaryClass::Entrance) any_entrance = true;
      if (bv.verdict == BoundaryClass::Inconclusive) any_inconclusive = true;
      if (!bv.decided_by.empty()) methods.push_back(bv.decided_by);
      if (s == Side::Lower) entry.lower = std::move(bv);
      else entry.upper = std::move(bv);
    }
    if (any_entrance) {
      entry.verdict = Uniq::NotUnique;
    } else if (any_inconclusive) {
      entry.verdict = Uniq::Inconclusive;
    } else {
      entry.verdict = Uniq::Unique;
    }
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
    std::ostringstream os;
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (i) os << " + ";
      os << methods[i];
    }
    entry.method = os.str();
    if (std::isinf(p) && entry.verdict == Uniq::Unique) {
      entry.liouville_note = kLiouvilleNote;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace sturm_uniq
