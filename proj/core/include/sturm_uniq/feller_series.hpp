#pragma once

#include <memory>
#include <vector>

#include "sturm_uniq/operator_model.hpp"
#include "sturm_uniq/quadrature.hpp"

namespace sturm_uniq {

/// The adaptive level sum stalled before reaching the tail tolerance; the
/// partial sum is still a valid lower bound by nonnegativity.
class TruncationBudgetExceeded : public Error {
 public:
  TruncationBudgetExceeded(double partial_sum, double tail_ratio, int n_max);
  double partial_sum() const { return partial_sum_; }
  double tail_ratio() const { return tail_ratio_; }

 private:
  double partial_sum_;
  double tail_ratio_;
};

struct SeriesOptions {
  double delta = 1.0;       // killing shift; the dichotomy is delta-free
  double tol = 1e-10;       // level-sum tail ratio target
  int n_max = 64;           // level cap
  int nodes_per_panel = 32; // probe-grid nodes per geometric panel
  int max_point_nodes = 1 << 14;  // point-evaluation grid cap
  ProbeSettings probe;      // divergence-probe settings
};

/// Iterated integrals of one side on a shared monotone grid from c toward
/// the boundary. Levels are computed in log space; values[n][i] holds
/// log I_n (upper side) or log J_n (lower side) at grid node i. Immutable
/// once built.
class SeriesState {
 public:
  /// Build on the geometric probe grid of the side.
  SeriesState(std::shared_ptr<const ScaleSpeedCache> cache, Side side,
              const SeriesOptions& opts);

  Side side() const { return side_; }
  double delta() const { return delta_; }
  const Operator1D& op() const { return cache_->op(); }

  const std::vector<double>& grid() const { return y_; }
  const std::vector<double>& distances() const { return tau_; }
  int levels_used() const { return n_used_; }
  double tail_ratio() const { return tail_ratio_; }
  bool truncated() const { return truncated_; }

  double log_level_at(int n, std::size_t node) const { return log_I_[n][node]; }
  double log_sum_at(std::size_t node) const { return log_S_[node]; }
  double log_mprime_at(std::size_t node) const { return log_mp_[node]; }
  double log_scale_cum_at(std::size_t node) const { return log_Ss_[node]; }
  double potential_at(std::size_t node) const { return V_[node]; }

  /// Per-panel log of \int (sum_n I_n)^q m' over the probe panels.
  std::vector<double> panel_logs_series(double q) const;
  /// Per-panel log of \int (s(y)-s(c))^q m'(y) dy (zero-potential path).
  std::vector<double> panel_logs_v0(double q) const;
  /// Per-panel log of \int (1+V) m' (s-s(c)); the classical entrance test.
  std::vector<double> panel_logs_classical() const;
  /// Per-panel increments of I_1 computed with V+1 (first-order test).
  std::vector<double> panel_logs_first_order() const;

  const std::vector<double>& probe_points() const { return probe_y_; }

 private:
  std::vector<double> panel_logs(const std::vector<double>& node_log_f) const;

  std::shared_ptr<const ScaleSpeedCache> cache_;
  Side side_;
  double delta_;
  std::vector<double> y_, tau_;
  std::vector<double> log_sp_, log_mp_, V_;
  std::vector<std::vector<double>> log_I_;
  std::vector<double> log_S_;
  std::vector<double> log_Ss_;            // cumulative log \int s'
  std::vector<double> log_A1_;            // cumulative log \int m'(1+V)
  std::vector<std::size_t> panel_end_;    // node index of each probe point
  std::vector<double> probe_y_;
  int n_used_ = 0;
  double tail_ratio_ = 0.0;
  bool truncated_ = false;
};

/// I_n^{V+delta}(y) for the upper side (J_n for the lower side), by the
/// level recursion on an adaptively refined grid.
double iter_integral(const Operator1D& op, double delta, Side side, int n,
                     double y, double tol = 1e-10);

/// sum_{n} I_n^{V+delta}(y), adaptive in both grid and level count. Throws
/// TruncationBudgetExceeded (carrying the partial sum) when the level sum
/// stalls.
double series_sum(const Operator1D& op, double delta, double y, Side side,
                  double tol = 1e-9);

/// Divergence of \int_c^boundary (sum_n I_n^{V+delta}) m' — the no-entrance
/// test of the boundary. Diverges <=> no entrance. Falls back to the exact
/// zero-potential criterion when V vanishes on the side.
DivergenceVerdict no_entrance_test(const Operator1D& op, Side side,
                                   const SeriesOptions& opts = {});

/// Divergence of \int m'(y)(s(y)-s(c)) dy; equivalent to the full test when
/// V = 0 on the side. `q` generalizes to the L^q integrand (\int s')^q m'.
DivergenceVerdict v0_fast_test(const Operator1D& op, Side side,
                               const SeriesOptions& opts = {}, double q = 1.0);

/// Feller's classical entrance integral \int (1+V) m' (s - s(c));
/// Converges => entrance in the classical sense (sufficient only).
DivergenceVerdict feller_classical_entrance(const Operator1D& op, Side side,
                                            const SeriesOptions& opts = {});

/// L^q variant of the no-entrance probe: \int (sum I_n)^q m'. Includes the
/// independent zero-potential fast path when applicable.
DivergenceVerdict lq_no_entrance_probe(const Operator1D& op, Side side,
                                       double q, const SeriesOptions& opts = {});

/// First-order integral I_1^{V+1} toward the boundary (the L^1 test probes
/// its divergence on each side).
DivergenceVerdict first_order_probe(const Operator1D& op, Side side,
                                    const SeriesOptions& opts = {});

}  // namespace sturm_uniq
