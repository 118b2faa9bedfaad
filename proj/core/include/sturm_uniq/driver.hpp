#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sturm_uniq/config.hpp"
#include "sturm_uniq/report.hpp"

namespace sturm_uniq {

class NoFlipInRange : public Error {
 public:
  NoFlipInRange(double lo, double hi, std::string detail);
};

struct BracketResult {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::pair<double, BoundaryClass>> evaluations;
  bool width_reached = false;  // false: stalled on an inconclusive core
};

/// Bisect the verdict flip of `classify` between conclusive, differing
/// endpoint verdicts down to `width`. Inconclusive midpoints shrink the
/// bracket from both sides; if the inconclusive core cannot be pierced the
/// surrounding interval is returned as the flip interval.
BracketResult bracket_critical(
    const std::function<BoundaryClass(double)>& classify, double lo, double hi,
    double width, int max_evaluations = 200);

/// Execute a parsed config and assemble the report. Per-task errors are
/// embedded in the report; configuration-level errors throw.
ReportDocument run(const RunConfig& config);

/// run() plus writing the report to config.out_path when set.
ReportDocument run_and_write(const RunConfig& config);

}  // namespace sturm_uniq
