#include "sturm_uniq/feller_series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sturm_uniq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_delta(double delta) {
  if (!(delta > 0.0)) throw Error("series requires delta > 0");
}

// ---------------------------------------------------------------------------
// Point-evaluation path: uniform grid in tau = |y - c|, linear arithmetic,
// cumulative quadratic rule (4th-order on smooth integrands).

struct PointLevels {
  std::vector<std::vector<double>> I;  // levels at nodes
  std::vector<double> S;               // partial sums at nodes
  int n_used = 0;
  double tail_ratio = 0.0;
  bool truncated = false;
  bool overflowed = false;
};

std::vector<double> cumulative_quadratic(const std::vector<double>& f,
                                         double h) {
  const std::size_t k = f.size();
  std::vector<double> c(k, 0.0);
  if (k < 2) return c;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    double inc;
    if (i + 2 < k) {
      inc = h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
    } else {
      inc = h / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
    }
    if (!(inc >= 0.0)) inc = 0.5 * h * (f[i] + f[i + 1]);  // steep growth
    c[i + 1] = c[i] + inc;
  }
  return c;
}

PointLevels point_levels(const ScaleSpeedCache& cache, double delta, Side side,
                         double tau_max, int k_nodes, int n_max,
                         double tail_tol, int min_levels) {
  const double c = cache.op().c();
  const double sign = side == Side::Upper ? 1.0 : -1.0;
  const double h = tau_max / k_nodes;

  std::vector<double> sp(k_nodes + 1), mpv(k_nodes + 1);
  for (int i = 0; i <= k_nodes; ++i) {
    const double y = c + sign * (h * i);
    const double d = cache.drift_integral(y);
    sp[i] = std::exp(-d);
    mpv[i] = std::exp(d) / cache.op().a().eval(y) *
             (cache.op().V().eval(y) + delta);
  }

  PointLevels out;
  out.I.emplace_back(k_nodes + 1, 1.0);
  out.S.assign(k_nodes + 1, 1.0);

  std::vector<double> g(k_nodes + 1), inner(k_nodes + 1);
  for (int n = 1; n <= n_max; ++n) {
    const std::vector<double>& prev = out.I.back();
    for (int i = 0; i <= k_nodes; ++i) g[i] = mpv[i] * prev[i];
    inner = cumulative_quadratic(g, h);
    for (int i = 0; i <= k_nodes; ++i) g[i] = sp[i] * inner[i];
    out.I.push_back(cumulative_quadratic(g, h));
    const std::vector<double>& cur = out.I.back();

    double ratio = 0.0;
    for (int i = 0; i <= k_nodes; ++i) {
      out.S[i] += cur[i];
      if (out.S[i] > 1e250) out.overflowed = true;
      if (out.S[i] > 0.0) ratio = std::max(ratio, cur[i] / out.S[i]);
    }
    out.n_used = n;
    out.tail_ratio = ratio;
    if (out.overflowed) return out;
    if (n >= min_levels && ratio < tail_tol) return out;
  }
  out.truncated = true;
  return out;
}

struct PointEval {
  double value = 0.0;
  bool truncated = false;
  double tail_ratio = 0.0;
};

// Evaluate either I_n (level >= 0) or the level sum (level < 0) at distance
// tau from c, doubling the grid until the value settles.
PointEval point_eval(const Operator1D& op, double delta, Side side, double tau,
                     int level, double tol, const SeriesOptions& opts) {
  require_delta(delta);
  PointEval out;
  if (tau == 0.0) {
    out.value = level <= 0 ? 1.0 : 0.0;
    return out;
  }
  const int min_levels = level < 0 ? 2 : level;
  ScaleSpeedCache cache(op, 1e-12);
  double prev = kInf;
  for (int k = 256; k <= opts.max_point_nodes; k *= 2) {
    PointLevels lv = point_levels(cache, delta, side, tau, k, opts.n_max,
                                  opts.tol, min_levels);
    if (lv.overflowed) {
      throw QuadratureFailure(
          "series value exceeds linear range at this point; evaluate the "
          "probe path instead",
          op.c(), tau);
    }
    double v;
    if (level >= 0) {
      if (level >= static_cast<int>(lv.I.size())) return {0.0, true, lv.tail_ratio};
      v = lv.I[level].back();
    } else {
      v = lv.S.back();
    }
    out.truncated = lv.truncated;
    out.tail_ratio = lv.tail_ratio;
    if (std::abs(v - prev) <= tol * std::max(std::abs(v), 1.0)) {
      out.value = v;
      return out;
    }
    prev = v;
    out.value = v;
  }
  return out;
}

double tau_of(const Operator1D& op, Side side, double y) {
  const double c = op.c();
  if (side == Side::Upper) {
    if (y < c) throw Error("upper-side evaluation point is below c");
    if (y >= op.interval().hi) throw Error("evaluation point is at/past the boundary");
    return y - c;
  }
  if (y > c) throw Error("lower-side evaluation point is above c");
  if (y <= op.interval().lo) throw Error("evaluation point is at/past the boundary");
  return c - y;
}

}  // namespace

TruncationBudgetExceeded::TruncationBudgetExceeded(double partial_sum,
                                                   double tail_ratio, int n_max)
    : Error("series level sum stalled at n_max=" + std::to_string(n_max) +
            " (tail ratio " + std::to_string(tail_ratio) +
            "); partial sum is a lower bound"),
      partial_sum_(partial_sum),
      tail_ratio_(tail_ratio) {}

double iter_integral(const Operator1D& op, double delta, Side side, int n,
                     double y, double tol) {
  if (n < 0) throw Error("iterated integral level must be >= 0");
  SeriesOptions opts;
  PointEval e = point_eval(op, delta, side, tau_of(op, side, y), n, tol, opts);
  return e.value;
}

double series_sum(const Operator1D& op, double delta, double y, Side side,
                  double tol) {
  SeriesOptions opts;
  opts.tol = std::min(opts.tol, tol * 1e-2);
  PointEval e = point_eval(op, delta, side, tau_of(op, side, y), -1, tol, opts);
  if (e.truncated) {
    throw TruncationBudgetExceeded(e.value, e.tail_ratio, opts.n_max);
  }
  return e.value;
}

// ---------------------------------------------------------------------------
// Probe path: geometric panels toward the boundary, log-space levels.

SeriesState::SeriesState(std::shared_ptr<const ScaleSpeedCache> cache,
                         Side side, const SeriesOptions& opts)
    : cache_(std::move(cache)), side_(side), delta_(opts.delta) {
  require_delta(delta_);
  const Operator1D& op = cache_->op();
  const double c = op.c();
  const double endpoint = op.interval().endpoint(side);
  probe_y_ = probe_grid(c, endpoint, opts.probe);

  // node ladder: geometric inside each probe panel
  const int nsub = std::max(4, opts.nodes_per_panel);
  tau_.push_back(0.0);
  const bool finite = !std::isinf(endpoint);
  const double span = finite ? std::abs(endpoint - c) : 0.0;
  for (std::size_t k = 0; k + 1 < probe_y_.size(); ++k) {
    const double t0 = std::abs(probe_y_[k] - c);
    const double t1 = std::abs(probe_y_[k + 1] - c);
    for (int j = 1; j <= nsub; ++j) {
      double t;
      if (finite) {
        // geometric in the distance to the endpoint
        const double g0 = span - t0;
        const double g1 = span - t1;
        t = span - g0 * std::pow(g1 / g0, static_cast<double>(j) / nsub);
      } else if (t0 == 0.0) {
        t = t1 * j / nsub;
      } else {
        t = t0 * std::pow(t1 / t0, static_cast<double>(j) / nsub);
      }
      if (t > tau_.back()) tau_.push_back(t);
    }
    panel_end_.push_back(tau_.size() - 1);
  }

  const double sign = side == Side::Upper ? 1.0 : -1.0;
  y_.resize(tau_.size());
  log_sp_.resize(tau_.size());
  log_mp_.resize(tau_.size());
  V_.resize(tau_.size());
  std::size_t good = tau_.size();
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    y_[i] = c + sign * tau_[i];
    try {
      const double d = cache_->drift_integral(y_[i]);
      log_sp_[i] = -d;
      log_mp_[i] = d - std::log(op.a().eval(y_[i]));
      V_[i] = op.V().eval(y_[i]);
    } catch (const Error&) {
      good = i;  // keep the evaluable prefix; probes note the truncation
      break;
    }
  }
  if (good < tau_.size()) {
    if (good < 8) throw QuadratureFailure("coefficients not evaluable near c",
                                          c, y_[good]);
    tau_.resize(good);
    y_.resize(good);
    log_sp_.resize(good);
    log_mp_.resize(good);
    V_.resize(good);
    while (!panel_end_.empty() && panel_end_.back() >= good) {
      panel_end_.pop_back();
    }
    probe_y_.resize(panel_end_.size() + 1);
  }

  const std::size_t m = tau_.size();

  // cumulative log \int s' and log \int m'(1+V) along the grid
  log_Ss_.assign(m, kNegInf);
  log_A1_.assign(m, kNegInf);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = tau_[i + 1] - tau_[i];
    log_Ss_[i + 1] = log_sum_exp(
        log_Ss_[i], log_segment_exp_fit(log_sp_[i], log_sp_[i + 1], h));
    const double u0 = log_mp_[i] + std::log1p(V_[i]);
    const double u1 = log_mp_[i + 1] + std::log1p(V_[i + 1]);
    log_A1_[i + 1] = log_sum_exp(log_A1_[i], log_segment_exp_fit(u0, u1, h));
  }

  // level recursion
  log_I_.emplace_back(m, 0.0);  // I_0 = 1
  log_S_.assign(m, 0.0);
  std::vector<double> u(m), log_A(m), level(m);
  for (int n = 1; n <= opts.n_max; ++n) {
    const std::vector<double>& prev = log_I_.back();
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = log_mp_[i] + std::log(V_[i] + delta_) + prev[i];
    }
    log_A[0] = kNegInf;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      log_A[i + 1] = log_sum_exp(
          log_A[i], log_segment_exp_fit(u[i], u[i + 1], tau_[i + 1] - tau_[i]));
    }
    level[0] = kNegInf;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double v0 = log_sp_[i] + log_A[i];
      const double v1 = log_sp_[i + 1] + log_A[i + 1];
      level[i + 1] = log_sum_exp(
          level[i], log_segment_exp_fit(v0, v1, tau_[i + 1] - tau_[i]));
    }
    log_I_.push_back(level);
    double ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      log_S_[i] = log_sum_exp(log_S_[i], level[i]);
      if (level[i] != kNegInf) {
        ratio = std::max(ratio, std::exp(level[i] - log_S_[i]));
      }
    }
    n_used_ = n;
    tail_ratio_ = ratio;
    if (n >= 2 && ratio < opts.tol) return;
  }
  truncated_ = opts.n_max > 0;
}

std::vector<double> SeriesState::panel_logs(
    const std::vector<double>& node_log_f) const {
  std::vector<double> out;
  out.reserve(panel_end_.size());
  std::size_t i = 0;
  for (std::size_t end : panel_end_) {
    double acc = kNegInf;
    for (; i < end; ++i) {
      acc = log_sum_exp(acc, log_segment_exp_fit(node_log_f[i],
                                                 node_log_f[i + 1],
                                                 tau_[i + 1] - tau_[i]));
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<double> SeriesState::panel_logs_series(double q) const {
  std::vector<double> f(tau_.size());
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    f[i] = q * log_S_[i] + log_mp_[i];
  }
  return panel_logs(f);
}

std::vector<double> SeriesState::panel_logs_v0(double q) const {
  std::vector<double> f(tau_.size());
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    f[i] = log_Ss_[i] == kNegInf ? kNegInf : q * log_Ss_[i] + log_mp_[i];
  }
  return panel_logs(f);
}

std::vector<double> SeriesState::panel_logs_classical() const {
  std::vector<double> f(tau_.size());
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    f[i] = log_Ss_[i] == kNegInf
               ? kNegInf
               : std::log1p(V_[i]) + log_mp_[i] + log_Ss_[i];
  }
  return panel_logs(f);
}

std::vector<double> SeriesState::panel_logs_first_order() const {
  std::vector<double> f(tau_.size());
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    f[i] = log_A1_[i] == kNegInf ? kNegInf : log_sp_[i] + log_A1_[i];
  }
  return panel_logs(f);
}

// ---------------------------------------------------------------------------
// Probe-level operations

namespace {

// SeriesState construction without the level recursion, for the probes
// that only need scale/speed cumulatives.
SeriesOptions levels_off(SeriesOptions opts) {
  opts.n_max = 0;
  return opts;
}

DivergenceVerdict run_probe(const SeriesState& state,
                            const std::vector<double>& panels,
                            const ProbeSettings& settings, std::string note) {
  std::vector<double> ys(state.probe_points());
  DivergenceVerdict v = decide_divergence(ys, panels, settings);
  if (!note.empty()) {
    v.note = v.note.empty() ? note : note + "; " + v.note;
  }
  return v;
}

}  // namespace

DivergenceVerdict v0_fast_test(const Operator1D& op, Side side,
                               const SeriesOptions& opts, double q) {
  auto cache = std::make_shared<ScaleSpeedCache>(op);
  SeriesState state(cache, side, levels_off(opts));
  return run_probe(state, state.panel_logs_v0(q), opts.probe,
                   "zero-potential fast path");
}

DivergenceVerdict feller_classical_entrance(const Operator1D& op, Side side,
                                            const SeriesOptions& opts) {
  auto cache = std::make_shared<ScaleSpeedCache>(op);
  SeriesState state(cache, side, levels_off(opts));
  return run_probe(state, state.panel_logs_classical(), opts.probe,
                   "classical entrance integral");
}

DivergenceVerdict first_order_probe(const Operator1D& op, Side side,
                                    const SeriesOptions& opts) {
  auto cache = std::make_shared<ScaleSpeedCache>(op);
  SeriesState state(cache, side, levels_off(opts));
  return run_probe(state, state.panel_logs_first_order(), opts.probe,
                   "first-order integral with unit killing");
}

DivergenceVerdict lq_no_entrance_probe(const Operator1D& op, Side side,
                                       double q, const SeriesOptions& opts) {
  if (!(q >= 1.0)) throw Error("exponent q must be >= 1");
  if (op.potential_zero_on(side)) {
    return v0_fast_test(op, side, opts, q);
  }
  auto cache = std::make_shared<ScaleSpeedCache>(op);
  SeriesState state(cache, side, opts);
  DivergenceVerdict v =
      run_probe(state, state.panel_logs_series(q), opts.probe, "");
  if (state.truncated()) {
    std::ostringstream os;
    os << "series truncated at n_max=" << opts.n_max
       << " (tail ratio " << state.tail_ratio()
       << "); integrand is a lower bound";
    v.note = v.note.empty() ? os.str() : v.note + "; " + os.str();
    if (v.outcome == Outcome::Converges) {
      // a lower bound cannot certify convergence
      v.outcome = Outcome::Inconclusive;
      v.growth.rule += "+truncated";
    }
  }
  return v;
}

DivergenceVerdict no_entrance_test(const Operator1D& op, Side side,
                                   const SeriesOptions& opts) {
  return lq_no_entrance_probe(op, side, 1.0, opts);
}

}  // namespace sturm_uniq
