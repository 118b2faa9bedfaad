#include "sturm_uniq/ode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sturm_uniq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Coeffs {
  double log_sp;
  double log_mp;
  double V;
};

struct Rhs {
  const ScaleSpeedCache& cache;
  double c;
  double sign;
  double delta;

  Coeffs coeffs(double t) const {
    const double y = c + sign * t;
    const double d = cache.drift_integral(y);
    return {-d, d - std::log(cache.op().a().eval(y)),
            cache.op().V().eval(y)};
  }

  // state u = (L, v);  L' = exp(ls+v),  v' = exp(lm+log(V+d)-v) - exp(ls+v)
  void operator()(double t, const double u[2], double out[2]) const {
    const Coeffs k = coeffs(t);
    const double growth = std::exp(k.log_sp + u[1]);
    const double source = std::exp(k.log_mp + std::log(k.V + delta) - u[1]);
    out[0] = growth;
    out[1] = source - growth;
  }
};

void rk4(const Rhs& rhs, double t, const double u[2], double h, double out[2]) {
  double k1[2], k2[2], k3[2], k4[2], tmp[2];
  rhs(t, u, k1);
  tmp[0] = u[0] + 0.5 * h * k1[0];
  tmp[1] = u[1] + 0.5 * h * k1[1];
  rhs(t + 0.5 * h, tmp, k2);
  tmp[0] = u[0] + 0.5 * h * k2[0];
  tmp[1] = u[1] + 0.5 * h * k2[1];
  rhs(t + 0.5 * h, tmp, k3);
  tmp[0] = u[0] + h * k3[0];
  tmp[1] = u[1] + h * k3[1];
  rhs(t + h, tmp, k4);
  out[0] = u[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
  out[1] = u[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
}

// The v-equation relaxes toward its equilibrium at rate
// exp(e1) + exp(e2); explicit stepping is stability-limited there. A
// backward-Euler step in v (scalar Newton, L-stable so equilibrium noise is
// damped) with trapezoidal L keeps huge far-field steps stable.
bool implicit_euler(const Rhs& rhs, double t, const double u[2], double h,
                    double out[2]) {
  const Coeffs ka = rhs.coeffs(t);
  const Coeffs kb = rhs.coeffs(t + h);
  const double lVb = std::log(kb.V + rhs.delta);
  double z = u[1];
  for (int it = 0; it < 60; ++it) {
    const double e1 = std::exp(kb.log_mp + lVb - z);
    const double e2 = std::exp(kb.log_sp + z);
    const double g = z - u[1] - h * (e1 - e2);
    const double dg = 1.0 + h * (e1 + e2);
    const double step = g / dg;
    z -= step;
    if (!std::isfinite(z)) return false;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) break;
  }
  out[1] = z;
  out[0] = u[0] + 0.5 * h * (std::exp(ka.log_sp + u[1]) + std::exp(kb.log_sp + z));
  return std::isfinite(out[0]) && std::isfinite(out[1]);
}

// stiffness measure: |d f_v / d v| at the current state
double relaxation_rate(const Rhs& rhs, double t, const double u[2]) {
  const Coeffs k = rhs.coeffs(t);
  return std::exp(k.log_mp + std::log(k.V + rhs.delta) - u[1]) +
         std::exp(k.log_sp + u[1]);
}

}  // namespace

StepSizeUnderflow::StepSizeUnderflow(double at_t)
    : Error("adaptive step size underflow at t=" + std::to_string(at_t)),
      at_(at_t) {}

std::string to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::ReachedEnd: return "reached_end";
    case TraceStatus::GrowthBudget: return "growth_budget";
    case TraceStatus::StepBudget: return "step_budget";
    case TraceStatus::StepUnderflow: return "step_underflow";
  }
  return "?";
}

SolutionTrace feller_solution(const Operator1D& op, double delta, Side side,
                              const OdeOptions& opts, double t_stop) {
  if (!(delta > 0.0)) throw Error("feller_solution requires delta > 0");
  SolutionTrace trace;
  trace.cache = std::make_shared<ScaleSpeedCache>(op);
  trace.side = side;
  trace.delta = delta;

  const double c = op.c();
  const double sign = side == Side::Upper ? 1.0 : -1.0;
  const double endpoint = op.interval().endpoint(side);
  Rhs rhs{*trace.cache, c, sign, delta};

  // targets: the probe grid in distance-from-c coordinates
  std::vector<double> targets;
  for (double y : probe_grid(c, endpoint, opts.probe)) {
    const double t = std::abs(y - c);
    if (t > 0.0) targets.push_back(t);
  }
  if (t_stop > 0.0) {
    targets.erase(std::remove_if(targets.begin(), targets.end(),
                                 [&](double t) { return t > t_stop; }),
                  targets.end());
    if (targets.empty() || targets.back() < t_stop) targets.push_back(t_stop);
  }
  trace.probe_targets = targets;
  if (targets.empty()) return trace;
  const double t_end = targets.back();

  auto record = [&](double t, double L, double v) {
    const Coeffs k = rhs.coeffs(t);
    trace.nodes.push_back({t, c + sign * t, L, v, k.log_sp, k.log_mp, k.V});
  };

  // bootstrap: w' ~ m'(V+delta) near c, so w(t0) ~ t0 * mean source
  record(0.0, 0.0, kNegInf);
  const double scale0 = std::isinf(endpoint)
                            ? 1.0
                            : std::min(1.0, 0.25 * std::abs(endpoint - c));
  const double t0 = 1e-8 * std::min(scale0, t_end);
  const Coeffs k0 = rhs.coeffs(0.0);
  const Coeffs kb = rhs.coeffs(t0);
  const double g0 = std::exp(k0.log_mp) * (k0.V + delta);
  const double g1 = std::exp(kb.log_mp) * (kb.V + delta);
  double u[2];
  double w0 = 0.5 * t0 * (g0 + g1);
  u[1] = std::log(w0);
  u[0] = 0.5 * t0 * std::exp(kb.log_sp) * w0;  // L(t0) ~ s' w t0 / 2
  double t = t0;
  record(t, u[0], u[1]);

  double h = t0;
  std::size_t next_target = 0;
  while (targets[next_target] <= t) ++next_target;

  const double h_floor_rel = 1e-14;
  while (true) {
    if (trace.accepted + trace.rejected >= opts.max_steps) {
      trace.status = TraceStatus::StepBudget;
      return trace;
    }
    bool hit_target = false;
    double h_try = h;
    if (t + h_try >= targets[next_target]) {
      h_try = targets[next_target] - t;
      hit_target = true;
    }

    double full[2], half[2], two[2];
    bool ok = true;
    bool stiff = false;
    try {
      stiff = h_try * relaxation_rate(rhs, t, u) > 2.5;
      if (stiff) {
        ok = implicit_euler(rhs, t, u, h_try, full) &&
             implicit_euler(rhs, t, u, 0.5 * h_try, half) &&
             implicit_euler(rhs, t + 0.5 * h_try, half, 0.5 * h_try, two);
      } else {
        rk4(rhs, t, u, h_try, full);
        rk4(rhs, t, u, 0.5 * h_try, half);
        rk4(rhs, t + 0.5 * h_try, half, 0.5 * h_try, two);
      }
    } catch (const Error&) {
      ok = false;
    }
    const double order_div = stiff ? 1.0 : 15.0;
    double err = kInf;
    if (ok && std::isfinite(two[0]) && std::isfinite(two[1]) &&
        std::isfinite(full[0]) && std::isfinite(full[1])) {
      const double e0 = std::abs(two[0] - full[0]) / order_div;
      const double e1 = std::abs(two[1] - full[1]) / order_div;
      const double s0 = opts.atol + opts.rtol * std::max(1.0, std::abs(two[0]));
      const double s1 = opts.atol + opts.rtol * std::max(1.0, std::abs(two[1]));
      err = std::max(e0 / s0, e1 / s1);
    }

    if (err <= 1.0) {
      t += h_try;
      u[0] = two[0] + (two[0] - full[0]) / order_div;
      u[1] = two[1] + (two[1] - full[1]) / order_div;
      ++trace.accepted;
      trace.max_local_err = std::max(trace.max_local_err, err * opts.rtol);
      record(t, u[0], u[1]);
      if (u[0] > opts.L_max || u[1] > opts.v_max) {
        trace.status = TraceStatus::GrowthBudget;
        return trace;
      }
      if (hit_target) {
        ++next_target;
        if (next_target >= targets.size()) {
          trace.status = TraceStatus::ReachedEnd;
          return trace;
        }
      }
      if (!hit_target || h_try == h) {
        h = h * std::min(4.0, std::max(0.2, 0.9 * std::pow(1.0 / std::max(err, 1e-10), 0.2)));
      }
    } else {
      ++trace.rejected;
      h = 0.5 * h_try;
      if (h < h_floor_rel * std::max(1.0, t)) {
        trace.status = TraceStatus::StepUnderflow;
        return trace;
      }
    }
  }
}

double SolutionTrace::log_h_at(double y) const {
  const double t = std::abs(y - op().c());
  if (nodes.empty() || t > nodes.back().t + 1e-12 * std::max(1.0, t)) {
    throw Error("requested point is outside the integrated trace");
  }
  if (t <= nodes.front().t) return 0.0;
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), t,
      [](const TraceNode& n, double tv) { return n.t < tv; });
  if (it == nodes.begin()) return it->L;
  const TraceNode& b = *it;
  const TraceNode& a = *(it - 1);
  const double hseg = b.t - a.t;
  if (hseg <= 0.0) return b.L;
  const double x = (t - a.t) / hseg;
  // Hermite with L' = exp(log s' + v)
  const double da = a.v == kNegInf ? 0.0 : std::exp(a.log_sprime + a.v);
  const double db = b.v == kNegInf ? 0.0 : std::exp(b.log_sprime + b.v);
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
  const double h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x);
  const double h11 = x * x * (x - 1);
  return h00 * a.L + h10 * hseg * da + h01 * b.L + h11 * hseg * db;
}

double SolutionTrace::w_at(double y) const {
  const double t = std::abs(y - op().c());
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), t,
      [](const TraceNode& n, double tv) { return n.t < tv; });
  if (it == nodes.end()) throw Error("requested point is outside the trace");
  if (it == nodes.begin()) return it->v == kNegInf ? 0.0 : std::exp(it->v);
  const TraceNode& b = *it;
  const TraceNode& a = *(it - 1);
  if (a.v == kNegInf || b.v == kNegInf) {
    return std::exp(std::max(a.v, b.v)) * (t - a.t) / std::max(b.t - a.t, 1e-300);
  }
  const double x = (t - a.t) / std::max(b.t - a.t, 1e-300);
  return std::exp(a.v + x * (b.v - a.v));
}

DivergenceVerdict l1m_integrability(const SolutionTrace& trace, double q) {
  const auto& nodes = trace.nodes;
  if (nodes.size() < 2) {
    DivergenceVerdict v;
    v.note = "trace too short";
    return v;
  }
  // per-panel logs of \int exp(qL) m' dt over the probe targets
  std::vector<double> ys;
  ys.push_back(trace.op().c());
  std::vector<double> panels;
  double acc = kNegInf;
  std::size_t i = 0;
  const double sign = trace.side == Side::Upper ? 1.0 : -1.0;
  for (double target : trace.probe_targets) {
    if (nodes.back().t + 1e-12 < target) break;  // trace ended early
    double panel = kNegInf;
    while (i + 1 < nodes.size() && nodes[i + 1].t <= target * (1 + 1e-15)) {
      const double u0 = q * nodes[i].L + nodes[i].log_mprime;
      const double u1 = q * nodes[i + 1].L + nodes[i + 1].log_mprime;
      panel = log_sum_exp(panel,
                          log_segment_exp_fit(u0, u1, nodes[i + 1].t - nodes[i].t));
      ++i;
    }
    panels.push_back(panel);
    ys.push_back(trace.op().c() + sign * target);
    acc = log_sum_exp(acc, panel);
  }
  ProbeSettings settings;  // decision thresholds; grid already fixed by trace
  DivergenceVerdict v = decide_divergence(ys, panels, settings);
  if (trace.status != TraceStatus::ReachedEnd &&
      v.outcome != Outcome::Diverges) {
    v.outcome = Outcome::Inconclusive;
    std::ostringstream os;
    os << "trace terminated early (" << to_string(trace.status)
       << "); integral undetermined beyond t=" << trace.end_t();
    v.note = os.str();
  }
  return v;
}

double riccati_residual(const SolutionTrace& trace) {
  const auto& n = trace.nodes;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n.size(); ++i) {
    if (n[i].v == kNegInf || n[i - 1].v == kNegInf || n[i + 1].v == kNegInf) {
      continue;
    }
    const double w_prev = std::exp(n[i - 1].v);
    const double w_next = std::exp(n[i + 1].v);
    const double dt = n[i + 1].t - n[i - 1].t;
    if (dt <= 0.0) continue;
    const double fd = (w_next - w_prev) / dt;
    const double source = std::exp(n[i].log_mprime) * (n[i].V + trace.delta);
    const double drain = std::exp(n[i].log_sprime + 2.0 * n[i].v);
    const double rhs = source - drain;
    const double scale = std::max({std::abs(source), std::abs(drain), 1.0});
    worst = std::max(worst, std::abs(fd - rhs) / scale);
  }
  return worst;
}

CrosscheckReport sandwich_crosscheck(const Operator1D& op, double delta,
                                     Side side,
                                     const std::vector<double>& checkpoints,
                                     double tol) {
  CrosscheckReport report;
  report.tol = tol;
  double t_stop = 0.0;
  for (double y : checkpoints) {
    t_stop = std::max(t_stop, std::abs(y - op.c()));
  }
  OdeOptions opts;
  SolutionTrace trace = feller_solution(op, delta, side, opts, t_stop);
  for (double y : checkpoints) {
    CrosscheckRow row;
    row.y = y;
    row.series = series_sum(op, delta, y, side, 1e-10);
    row.ode = std::exp(trace.log_h_at(y));
    row.rel_discrepancy = std::abs(row.ode - row.series) /
                          std::max(std::abs(row.series), 1e-300);
    report.max_rel_discrepancy =
        std::max(report.max_rel_discrepancy, row.rel_discrepancy);
    report.rows.push_back(row);
  }
  report.ok = report.max_rel_discrepancy <= tol;
  return report;
}

}  // namespace sturm_uniq
