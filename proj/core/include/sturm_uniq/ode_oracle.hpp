#pragma once

#include <memory>
#include <vector>

#include "sturm_uniq/feller_series.hpp"
#include "sturm_uniq/operator_model.hpp"
#include "sturm_uniq/quadrature.hpp"

namespace sturm_uniq {

class StepSizeUnderflow : public Error {
 public:
  explicit StepSizeUnderflow(double at_t);
  double at() const { return at_; }

 private:
  double at_;
};

struct OdeOptions {
  double rtol = 1e-9;       // local error per step
  double atol = 1e-12;
  double L_max = 1e6;       // stop once log h exceeds this
  double v_max = 345.0;     // log(w_max), w_max ~ 1e150
  long max_steps = 200000;
  ProbeSettings probe;      // grid the trace is driven along
};

enum class TraceStatus { ReachedEnd, GrowthBudget, StepBudget, StepUnderflow };
std::string to_string(TraceStatus s);

/// One accepted integration node. t is the distance from c along the side,
/// L = log h, v = log w with w = h'/(s'h) the Riccati variable.
struct TraceNode {
  double t = 0.0;
  double y = 0.0;
  double L = 0.0;
  double v = -std::numeric_limits<double>::infinity();
  double log_sprime = 0.0;
  double log_mprime = 0.0;
  double V = 0.0;
};

/// Log-transformed Feller solution h with h(c)=1, h'(c)=0 integrated from c
/// toward the boundary of one side.
struct SolutionTrace {
  std::shared_ptr<const ScaleSpeedCache> cache;
  Side side = Side::Upper;
  double delta = 1.0;
  std::vector<TraceNode> nodes;
  std::vector<double> probe_targets;  // tau of each probe grid point
  TraceStatus status = TraceStatus::ReachedEnd;
  long accepted = 0;
  long rejected = 0;
  double max_local_err = 0.0;

  const Operator1D& op() const { return cache->op(); }
  double end_t() const { return nodes.empty() ? 0.0 : nodes.back().t; }
  /// Interpolated log h at y between c and the trace end (cubic Hermite,
  /// L' = exp(log s' + v) is known at the nodes).
  double log_h_at(double y) const;
  double w_at(double y) const;
};

/// Integrate (L, v) adaptively from c toward the boundary until the probe
/// grid is covered, L exceeds L_max, or a budget runs out. `t_stop`
/// overrides the probe-grid span when nonzero.
SolutionTrace feller_solution(const Operator1D& op, double delta, Side side,
                              const OdeOptions& opts = {}, double t_stop = 0.0);

/// Divergence of \int exp(q L(y)) m'(y) dy along the trace; Diverges at
/// q=1 means the boundary is no entrance (sandwich equivalence with the
/// series route). Budget-terminated traces yield Inconclusive unless the
/// threshold already fired.
DivergenceVerdict l1m_integrability(const SolutionTrace& trace, double q = 1.0);

/// Max over interior nodes of the scaled Riccati residual
/// |w' - (m'(V+delta) - s' w^2)| (finite differences of the accepted grid).
double riccati_residual(const SolutionTrace& trace);

struct CrosscheckRow {
  double y = 0.0;
  double series = 0.0;     // sum of iterated integrals at y
  double ode = 0.0;        // exp(L(y))
  double rel_discrepancy = 0.0;
};

struct CrosscheckReport {
  std::vector<CrosscheckRow> rows;
  double max_rel_discrepancy = 0.0;
  double tol = 1e-5;
  bool ok = true;  // no checkpoint exceeded tol
};

/// Compare the series and ODE values of the same normalized solution at the
/// given checkpoints (distinct implementations of one function).
CrosscheckReport sandwich_crosscheck(const Operator1D& op, double delta,
                                     Side side,
                                     const std::vector<double>& checkpoints,
                                     double tol = 1e-5);

}  // namespace sturm_uniq
