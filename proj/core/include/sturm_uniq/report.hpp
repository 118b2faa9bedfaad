#pragma once

#include <string>

namespace sturm_uniq {

inline constexpr const char* kToolName = "sturm-uniq";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// One finished run: a machine-readable JSON document, a human-readable
/// summary, and the process exit code (0 = all conclusive, 2 = some
/// inconclusive results, 1 = error).
struct ReportDocument {
  std::string json;
  std::string text;
  int exit_code = 0;
};

/// The report with every volatile field (wall-clock timings) removed and
/// re-serialized canonically; byte-identical across repeated runs of the
/// same config and tool version.
std::string canonical_verdicts(const std::string& report_json);

}  // namespace sturm_uniq
