#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sturm_uniq/expr.hpp"

namespace sturm_uniq {

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(std::string message, double x1, double x2);
  double x1() const { return x1_; }
  double x2() const { return x2_; }

 private:
  double x1_, x2_;
};

class NonIntegrableSingularity : public Error {
 public:
  NonIntegrableSingularity(std::string message, double near_x);
  double near_x() const { return near_x_; }

 private:
  double near_x_;
};

struct IntegrateResult {
  double value = 0.0;
  double err_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f on [x1, x2]. Infinite bounds
/// are mapped to a compact interval first; a pole of f at either finite
/// endpoint is removed by the substitution x = endpoint +/- u^2.
/// Interior singularities that refuse to integrate raise
/// NonIntegrableSingularity.
IntegrateResult integrate(const std::function<double(double)>& f, double x1,
                          double x2, double rel_tol = 1e-10,
                          double abs_tol = 1e-300);

/// log( \int_{x1}^{x2} exp(log_f(t)) dt ) for a nonnegative integrand given
/// through its logarithm (-inf where the integrand vanishes). Stable for
/// integrands far outside double range.
double log_integrate(const std::function<double(double)>& log_f, double x1,
                     double x2, double rel_tol = 1e-10);

// ---------------------------------------------------------------------------
// Divergence probing

enum class Outcome { Diverges, Converges, Inconclusive };

std::string to_string(Outcome o);

struct ProbePoint {
  double y = 0.0;           // grid point approaching the boundary
  double partial = 0.0;     // F(y), saturated at 1e308 when out of range
  double log_partial = 0.0; // exact log F(y)
};

struct GrowthDiagnostic {
  double slope = 0.0;          // fitted log2(increment) change per window
  double curvature = 0.0;      // fitted quadratic coefficient
  double last_increment = 0.0; // final window increment of F
  int windows_used = 0;
  std::string rule;            // which decision rule fired
};

/// Three-valued verdict on whether a cumulative nonnegative integral
/// diverges toward a boundary.
struct DivergenceVerdict {
  Outcome outcome = Outcome::Inconclusive;
  double limit = std::numeric_limits<double>::quiet_NaN();  // Converges only
  double tail_bound = 0.0;                                  // Converges only
  std::vector<ProbePoint> probes;
  GrowthDiagnostic growth;
  std::string note;

  bool diverges() const { return outcome == Outcome::Diverges; }
  bool converges() const { return outcome == Outcome::Converges; }
  bool conclusive() const { return outcome != Outcome::Inconclusive; }
};

/// Tunables of the probe protocol. Defaults cover the closed-form example
/// families in double precision; genuinely borderline iterated-log
/// integrands come out Inconclusive rather than wrong.
struct ProbeSettings {
  double m_big = 1e12;      // blow-up threshold on F
  int windows = 6;          // consecutive windows consulted by floor rules
  double eps_conv = 1e-6;   // certified-tail fraction for early convergence
  int depth = 60;           // geometric grid depth
  double inc_floor = 3.5e-3;   // increments bounded below => divergence
  double slope_min = 0.01;     // minimal |slope| for the fit rules
  double curvature_max = 1e-4; // fit acceptance threshold
  int fit_window = 30;         // windows entering the least-squares fit
  double quad_rel_tol = 1e-9;  // per-panel integration tolerance
};

/// Decide from per-panel log-contributions. `panel_log` holds
/// log( F(y_{k+1}) - F(y_k) ) for consecutive grid points `ys`
/// (ys.size() == panel_log.size() + 1, ys[0] = c).
DivergenceVerdict decide_divergence(const std::vector<double>& ys,
                                    const std::vector<double>& panel_log,
                                    const ProbeSettings& settings);

/// Geometric probe grid from c toward `endpoint` (+-inf allowed):
/// y_k = endpoint -/+ (distance)*2^-k for finite endpoints,
/// y_k = c +/- 2^k for infinite ones.
std::vector<double> probe_grid(double c, double endpoint,
                               const ProbeSettings& settings);

/// Evaluate F(y_k) = \int_c^{y_k} f for nonnegative f on the geometric grid
/// and classify. `log_f` gives log f(t).
DivergenceVerdict probe_divergence_log(
    const std::function<double(double)>& log_f, double c, double endpoint,
    const ProbeSettings& settings = {});

/// Same for a plain nonnegative integrand.
DivergenceVerdict probe_divergence(const std::function<double(double)>& f,
                                   double c, double endpoint,
                                   const ProbeSettings& settings = {});

// Numerically stable helpers shared by the series and ODE modules.
double log_sum_exp(double a, double b);
/// log of the integral of the exponential interpolant of (log-)values
/// u1, u2 over a segment of width h.
double log_segment_exp_fit(double u1, double u2, double h);

}  // namespace sturm_uniq
