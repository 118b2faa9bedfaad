#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sturm_uniq/classifier.hpp"
#include "sturm_uniq/operator_model.hpp"

namespace sturm_uniq {

class UnknownPreset : public Error {
 public:
  explicit UnknownPreset(const std::string& name);
};

class ParamOutOfRange : public Error {
 public:
  ParamOutOfRange(const std::string& preset, const std::string& message);
};

/// Radial bounds alpha(r), beta(r), q(r) that dominate an elliptic operator
/// on a manifold through a proxy function rho: |grad rho|^2 <= alpha(rho),
/// (drift generator applied to rho) >= (beta/alpha)(rho) |grad rho|^2 on the
/// relevant region, V >= q(rho). The geometric verification lives in
/// `provenance` as free text and is not machine-checked; the tool consumes
/// only the resulting 1-D model alpha f'' + beta f' - q f.
struct RadialProfile {
  Interval interval;
  CoefficientExpr alpha;  // > 0
  CoefficientExpr beta;
  CoefficientExpr q;      // >= 0
  bool two_sided = false;
  Side classified_end = Side::Upper;  // one-sided profiles
  double c = 0.0;                     // one-sided reference point
  double c1 = 0.0, c2 = 0.0;          // two-sided drift-split points
  std::string name;                   // preset name when applicable
  std::string provenance;
  std::optional<ExactFamilyHint> hint;
};

enum class ManifoldClaim {
  LInftyUniqueOnM,       // the 1-D boundary test certifies uniqueness on M
  TheoremInapplicable,   // entrance in the 1-D model: one-directional test
  Undetermined,          // inconclusive 1-D verdict
};
std::string to_string(ManifoldClaim c);

struct ReduceResult {
  Operator1D op;                     // the 1-D comparison model
  UniquenessReport report;           // p = inf entry for the model
  ManifoldClaim claim = ManifoldClaim::Undetermined;
  std::string claim_note;
  std::string provenance;
};

/// One-sided reduction: classify the open end of the 1-D model at q = 1.
/// A no-entrance verdict certifies L-infinity uniqueness on the manifold;
/// anything else leaves the theorem silent (never "not unique on M").
ReduceResult reduce_radial(const RadialProfile& profile,
                           Strategy strategy = Strategy::Auto,
                           const NumericsOptions& numerics = {});

/// Two-sided reduction: both ends of the model must be no-entrance.
ReduceResult reduce_two_sided(const RadialProfile& profile,
                              Strategy strategy = Strategy::Auto,
                              const NumericsOptions& numerics = {});

/// Named profiles for standard geometries:
///   cartan_hadamard_drift(L)
///   cartan_hadamard_killing(L, alpha_exp, c)
///   li_schoen(alpha_ls, delta)
///   unit_ball(d, c)
///   punctured_space(d, c, delta)
RadialProfile preset(const std::string& name, const std::vector<double>& params);

std::vector<std::string> preset_names();

}  // namespace sturm_uniq
