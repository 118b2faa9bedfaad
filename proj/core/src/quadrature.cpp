#include "sturm_uniq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <sstream>

namespace sturm_uniq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double value;
  double error;
};

// One GK15 pass; evaluation errors propagate to the caller.
PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_kronrod = fc * kWgk[7];
  double result_gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    result_kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = result_kronrod * half;
  const double error = std::abs((result_kronrod - result_gauss) * half);
  return {value, error};
}

struct Segment {
  double a, b;
  double value, error;
  int depth;
};

// Global adaptive bisection driven by the largest-error segment.
IntegrateResult adaptive(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, double abs_tol,
                        int max_depth = 100, int max_panels = 20000) {
  if (a == b) return {0.0, 0.0};

  auto eval_panel = [&](double lo, double hi, int depth) -> Segment {
    try {
      PanelEstimate e = gk15(f, lo, hi);
      if (std::isfinite(e.value)) return {lo, hi, e.value, e.error, depth};
    } catch (const EvalError&) {
      // fall through: treat like a singular panel, forcing subdivision
    }
    return {lo, hi, 0.0, kInf, depth};
  };

  std::vector<Segment> segs;
  segs.push_back(eval_panel(a, b, 0));

  for (int iter = 0; iter < max_panels; ++iter) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
      if (segs[i].error > worst_err) {
        worst_err = segs[i].error;
        worst = i;
      }
    }
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) {
      return {total, err};
    }
    Segment s = segs[worst];
    if (s.depth >= max_depth) {
      if (std::isinf(s.error)) {
        throw NonIntegrableSingularity(
            "integrand not evaluable/integrable after maximal refinement",
            0.5 * (s.a + s.b));
      }
      throw QuadratureFailure("adaptive bisection budget exhausted", a, b);
    }
    const double mid = 0.5 * (s.a + s.b);
    if (!(s.a < mid && mid < s.b)) {
      // interval collapsed to machine resolution around a singular point
      if (std::isinf(s.error)) {
        throw NonIntegrableSingularity("singularity at machine resolution",
                                       mid);
      }
      segs[worst].error = 0.0;  // as converged as double precision allows
      continue;
    }
    segs[worst] = eval_panel(s.a, mid, s.depth + 1);
    segs.push_back(eval_panel(mid, s.b, s.depth + 1));
  }
  throw QuadratureFailure("panel budget exhausted", a, b);
}

bool evaluable(const std::function<double(double)>& f, double x) {
  try {
    double v = f(x);
    return std::isfinite(v);
  } catch (const EvalError&) {
    return false;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

QuadratureFailure::QuadratureFailure(std::string message, double x1, double x2)
    : Error("quadrature failure on [" + std::to_string(x1) + ", " +
            std::to_string(x2) + "]: " + message),
      x1_(x1),
      x2_(x2) {}

NonIntegrableSingularity::NonIntegrableSingularity(std::string message,
                                                   double near_x)
    : Error("non-integrable singularity near x=" + std::to_string(near_x) +
            ": " + message),
      near_x_(near_x) {}

IntegrateResult integrate(const std::function<double(double)>& f, double x1,
                          double x2, double rel_tol, double abs_tol) {
  if (x1 > x2) {
    IntegrateResult r = integrate(f, x2, x1, rel_tol, abs_tol);
    return {-r.value, r.err_estimate};
  }
  if (x1 == x2) return {0.0, 0.0};

  // Map infinite bounds onto a compact interval. x = x1 + t/(1-t) etc.
  if (std::isinf(x1) && std::isinf(x2)) {
    IntegrateResult lo = integrate(f, x1, 0.0, rel_tol / 2, abs_tol / 2);
    IntegrateResult hi = integrate(f, 0.0, x2, rel_tol / 2, abs_tol / 2);
    return {lo.value + hi.value, lo.err_estimate + hi.err_estimate};
  }
  if (std::isinf(x2)) {
    auto g = [&f, x1](double t) {
      const double om = 1.0 - t;
      return f(x1 + t / om) / (om * om);
    };
    return adaptive(g, 0.0, 1.0, rel_tol, abs_tol);
  }
  if (std::isinf(x1)) {
    auto g = [&f, x2](double t) {
      const double om = 1.0 - t;
      return f(x2 - t / om) / (om * om);
    };
    return adaptive(g, 0.0, 1.0, rel_tol, abs_tol);
  }

  // Remove endpoint poles by a square-root substitution.
  const double span = x2 - x1;
  bool pole_lo = !evaluable(f, x1);
  bool pole_hi = !evaluable(f, x2);
  if (pole_lo && pole_hi) {
    const double mid = 0.5 * (x1 + x2);
    IntegrateResult lo = integrate(f, x1, mid, rel_tol / 2, abs_tol / 2);
    IntegrateResult hi = integrate(f, mid, x2, rel_tol / 2, abs_tol / 2);
    return {lo.value + hi.value, lo.err_estimate + hi.err_estimate};
  }
  if (pole_lo) {
    auto g = [&f, x1](double u) { return 2.0 * u * f(x1 + u * u); };
    return adaptive(g, 0.0, std::sqrt(span), rel_tol, abs_tol);
  }
  if (pole_hi) {
    auto g = [&f, x2](double u) { return 2.0 * u * f(x2 - u * u); };
    return adaptive(g, 0.0, std::sqrt(span), rel_tol, abs_tol);
  }
  return adaptive(f, x1, x2, rel_tol, abs_tol);
}

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_segment_exp_fit(double u1, double u2, double h) {
  if (h <= 0.0) return kNegInf;
  if (u1 == kNegInf && u2 == kNegInf) return kNegInf;
  const double logh = std::log(h);
  if (u1 == kNegInf || u2 == kNegInf) {
    // one vanishing endpoint: fall back to the trapezoid value
    return std::max(u1, u2) + logh - std::log(2.0);
  }
  const double d = u2 - u1;
  if (std::abs(d) < 1e-12) {
    return 0.5 * (u1 + u2) + logh;
  }
  // exact integral of exp(linear): h * (e^{u2} - e^{u1}) / (u2 - u1)
  const double lo = std::min(u1, u2);
  const double hi = std::max(u1, u2);
  const double ad = std::abs(d);
  if (ad > 30.0) {
    // dominated by the larger endpoint; expm1 would overflow
    return hi + logh - std::log(ad);
  }
  return lo + logh + std::log(std::expm1(ad)) - std::log(ad);
}

namespace {

struct LogPanel {
  double value;  // log of panel integral
  double error;  // relative error estimate (linear scale)
};

LogPanel log_gk15(const std::function<double(double)>& log_f, double a,
                  double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> lf;
  std::array<double, 15> xs;
  int idx = 0;
  xs[idx] = center;
  lf[idx++] = log_f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    xs[idx] = center - dx;
    lf[idx++] = log_f(center - dx);
    xs[idx] = center + dx;
    lf[idx++] = log_f(center + dx);
  }
  double m = kNegInf;
  for (double v : lf) m = std::max(m, v);
  if (m == kNegInf) return {kNegInf, 0.0};

  // shifted-space Kronrod and Gauss sums
  double k = std::exp(lf[0] - m) * kWgk[7];
  double g = std::exp(lf[0] - m) * kWg[3];
  idx = 1;
  for (int j = 0; j < 7; ++j) {
    const double f1 = std::exp(lf[idx++] - m);
    const double f2 = std::exp(lf[idx++] - m);
    k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  if (k <= 0.0) return {kNegInf, 0.0};
  return {m + std::log(k * half), std::abs(k - g) / k};
}

}  // namespace

double log_integrate(const std::function<double(double)>& log_f, double x1,
                     double x2, double rel_tol) {
  if (x1 == x2) return kNegInf;
  if (x1 > x2) throw QuadratureFailure("reversed log-integral bounds", x1, x2);

  struct Seg {
    double a, b;
    LogPanel est;
    int depth;
  };
  std::vector<Seg> segs;
  auto mk = [&](double a, double b, int depth) -> Seg {
    return {a, b, log_gk15(log_f, a, b), depth};
  };
  segs.push_back(mk(x1, x2, 0));
  const int max_depth = 60;
  const int max_panels = 4000;

  for (int iter = 0; iter < max_panels; ++iter) {
    // total in log space; error as weighted relative estimate
    double total = kNegInf;
    for (const auto& s : segs) total = log_sum_exp(total, s.est.value);
    double err_rel = 0.0;
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const double weight =
          segs[i].est.value == kNegInf || total == kNegInf
              ? 0.0
              : std::exp(segs[i].est.value - total);
      const double score = segs[i].est.error * weight;
      err_rel += score;
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    if (err_rel <= rel_tol || total == kNegInf) return total;
    Seg s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (s.depth >= max_depth || !(s.a < mid && mid < s.b)) {
      segs[worst].est.error = 0.0;
      continue;
    }
    segs[worst] = mk(s.a, mid, s.depth + 1);
    segs.push_back(mk(mid, s.b, s.depth + 1));
  }
  throw QuadratureFailure("log-space panel budget exhausted", x1, x2);
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Diverges: return "diverges";
    case Outcome::Converges: return "converges";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<double> probe_grid(double c, double endpoint,
                               const ProbeSettings& settings) {
  std::vector<double> ys;
  ys.push_back(c);
  if (std::isinf(endpoint)) {
    const double sign = endpoint > 0 ? 1.0 : -1.0;
    double step = 1.0;
    for (int k = 0; k <= settings.depth; ++k) {
      ys.push_back(c + sign * step);
      step *= 2.0;
    }
  } else {
    const double span = endpoint - c;
    for (int k = 1; k <= settings.depth; ++k) {
      const double y = endpoint - span * std::ldexp(1.0, -k);
      if (y == ys.back() || y == endpoint) break;  // double resolution hit
      ys.push_back(y);
    }
  }
  return ys;
}

DivergenceVerdict decide_divergence(const std::vector<double>& ys,
                                    const std::vector<double>& panel_log,
                                    const ProbeSettings& settings) {
  DivergenceVerdict v;
  const double log_mbig = std::log(settings.m_big);

  // cumulative partials
  std::vector<double> logF(panel_log.size());
  double acc = kNegInf;
  for (std::size_t i = 0; i < panel_log.size(); ++i) {
    acc = log_sum_exp(acc, panel_log[i]);
    logF[i] = acc;
    ProbePoint p;
    p.y = ys[i + 1];
    p.log_partial = acc;
    p.partial = acc > 709.0 ? 1e308 : std::exp(acc);
    v.probes.push_back(p);
    if (acc >= log_mbig) {
      v.outcome = Outcome::Diverges;
      v.growth.rule = "threshold";
      v.growth.last_increment =
          panel_log[i] > 709.0 ? 1e308 : std::exp(panel_log[i]);
      std::ostringstream os;
      os << "partial integral exceeded M_big=" << settings.m_big << " at y="
         << p.y;
      v.note = os.str();
      return v;
    }
  }

  const int n = static_cast<int>(panel_log.size());
  if (n < settings.windows + 2) {
    v.growth.rule = "insufficient-grid";
    v.note = "grid too short for a verdict";
    return v;
  }

  const double F = std::exp(logF.back());
  const double f_scale = std::max(F, 1e-300);

  // exhausted tail: the last windows contribute nothing measurable
  {
    bool dead = true;
    for (int i = n - settings.windows; i < n; ++i) {
      const double inc = panel_log[i] == kNegInf ? 0.0 : std::exp(panel_log[i]);
      if (inc > 1e-15 * f_scale) {
        dead = false;
        break;
      }
    }
    if (dead) {
      v.outcome = Outcome::Converges;
      v.limit = F;
      v.tail_bound = 1e-14 * f_scale;
      v.growth.rule = "tail-exhausted";
      v.growth.last_increment = std::exp(panel_log.back());
      return v;
    }
  }

  // least-squares quadratic fit of log2(increment) over the last windows
  std::vector<double> l2;  // log2 increments, most recent last
  const int fit_n = std::min(settings.fit_window, n);
  for (int i = n - fit_n; i < n; ++i) {
    if (panel_log[i] == kNegInf) {
      l2.clear();  // vanished panel inside the window: fit not meaningful
      break;
    }
    l2.push_back(panel_log[i] / std::log(2.0));
  }

  double slope = 0.0, curvature = 0.0;
  bool fit_ok = false;
  if (static_cast<int>(l2.size()) >= settings.windows + 2) {
    // fit u_i = c0 + c1*t + c2*t^2, t = i - (m-1) so t=0 is the last window
    const int m = static_cast<int>(l2.size());
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double b0 = 0, b1 = 0, b2 = 0;
    for (int i = 0; i < m; ++i) {
      const double t = static_cast<double>(i - (m - 1));
      const double u = l2[i];
      s0 += 1;
      s1 += t;
      s2 += t * t;
      s3 += t * t * t;
      s4 += t * t * t * t;
      b0 += u;
      b1 += u * t;
      b2 += u * t * t;
    }
    // solve the 3x3 normal equations by Cramer's rule
    const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) +
                       s2 * (s1 * s3 - s2 * s2);
    if (std::abs(det) > 1e-9) {
      const double d1 = b0 * (s2 * s4 - s3 * s3) - s1 * (b1 * s4 - s3 * b2) +
                        s2 * (b1 * s3 - s2 * b2);
      const double d2 = s0 * (b1 * s4 - b2 * s3) - b0 * (s1 * s4 - s3 * s2) +
                        s2 * (s1 * b2 - s2 * b1);
      const double d3 = s0 * (s2 * b2 - s3 * b1) - s1 * (s1 * b2 - s3 * b0) +
                        s2 * (s1 * b1 - s2 * b0);
      (void)d1;
      slope = d2 / det;      // d/dt at t=0 (the most recent window)
      curvature = d3 / det;  // quadratic coefficient
      fit_ok = true;
    }
  }
  v.growth.slope = slope;
  v.growth.curvature = curvature;
  v.growth.windows_used = static_cast<int>(l2.size());
  v.growth.last_increment = std::exp(panel_log.back());

  const bool flat_fit = fit_ok && std::abs(curvature) <= settings.curvature_max;

  if (flat_fit && slope >= settings.slope_min) {
    v.outcome = Outcome::Diverges;
    v.growth.rule = "growth-fit";
    v.note = "increments grow geometrically";
    return v;
  }
  if (flat_fit && slope <= -settings.slope_min) {
    const double rho = std::exp2(slope);
    const double last = std::exp(panel_log.back());
    const double tail = last * rho / (1.0 - rho);
    v.outcome = Outcome::Converges;
    v.limit = F + tail;
    v.tail_bound = tail;
    v.growth.rule =
        tail <= settings.eps_conv * f_scale ? "tail-certified" : "decay-fit";
    return v;
  }

  // floor rule: increments bounded below across the last windows, not
  // collapsing — logarithmic-type divergence
  {
    double min_inc = kInf, max_inc = 0.0;
    double min_ratio = kInf;
    for (int i = n - settings.windows; i < n; ++i) {
      const double inc = panel_log[i] == kNegInf ? 0.0 : std::exp(panel_log[i]);
      min_inc = std::min(min_inc, inc);
      max_inc = std::max(max_inc, inc);
      if (i > n - settings.windows) {
        const double prev = std::exp(panel_log[i - 1]);
        if (prev > 0.0) min_ratio = std::min(min_ratio, inc / prev);
      }
    }
    if (min_inc >= settings.inc_floor && min_ratio >= 0.5) {
      v.outcome = Outcome::Diverges;
      v.growth.rule = "increment-floor";
      v.note = "increments bounded below across trailing windows";
      return v;
    }
  }

  v.growth.rule = "none";
  v.note = "no decision rule fired; integrand is borderline at this depth";
  return v;
}

namespace {

DivergenceVerdict probe_impl(const std::function<double(double)>& log_f,
                             double c, double endpoint,
                             const ProbeSettings& settings) {
  if (endpoint == c) {
    throw QuadratureFailure("probe endpoint equals reference point", c, c);
  }
  std::vector<double> ys = probe_grid(c, endpoint, settings);
  std::vector<double> panel_log;
  panel_log.reserve(ys.size());
  const double log_mbig = std::log(settings.m_big);
  double acc = kNegInf;
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    const double a = std::min(ys[i], ys[i + 1]);
    const double b = std::max(ys[i], ys[i + 1]);
    panel_log.push_back(log_integrate(log_f, a, b, settings.quad_rel_tol));
    acc = log_sum_exp(acc, panel_log.back());
    if (acc >= log_mbig) break;  // already divergent; grid can stop
  }
  std::vector<double> ys_used(ys.begin(), ys.begin() + panel_log.size() + 1);
  return decide_divergence(ys_used, panel_log, settings);
}

}  // namespace

DivergenceVerdict probe_divergence_log(
    const std::function<double(double)>& log_f, double c, double endpoint,
    const ProbeSettings& settings) {
  return probe_impl(log_f, c, endpoint, settings);
}

DivergenceVerdict probe_divergence(const std::function<double(double)>& f,
                                   double c, double endpoint,
                                   const ProbeSettings& settings) {
  auto log_f = [&f](double t) {
    const double v = f(t);
    if (v < 0.0) {
      throw EvalError("probe integrand must be nonnegative", t);
    }
    return v == 0.0 ? kNegInf : std::log(v);
  };
  return probe_impl(log_f, c, endpoint, settings);
}

}  // namespace sturm_uniq
