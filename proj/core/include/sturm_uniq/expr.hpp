#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sturm_uniq {

/// Base class of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. Carries the byte offset of the failure and
/// the set of tokens that would have been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t offset, std::string expected);
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Identifier that is neither the variable, a declared parameter, nor a
/// name in the function table.
class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::string name, std::size_t offset);
  const std::string& name() const { return name_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

/// Evaluation hit a pole or left the domain of a primitive (division by
/// zero, log of a non-positive value, sqrt of a negative, overflow).
class EvalError : public Error {
 public:
  EvalError(std::string message, double at);
  double at() const { return at_; }

 private:
  double at_;
};

/// One coefficient function a(x), b(x) or V(x), given as expression text
/// over the variable x with constants, + - * / ^, and the function table
/// pow, exp, log, abs, sgn, min, max, sqrt, piecewise.
///
/// piecewise(t, f, g) evaluates f(x) when x < t(x) and g(x) otherwise.
/// sgn(0) = 0. There is no implicit multiplication.
///
/// Parsed expressions are immutable; eval is pure and reentrant.
class CoefficientExpr {
 public:
  struct Node;
  using NodeHandle = std::shared_ptr<const Node>;

  CoefficientExpr() = default;

  /// Parse expression text. Free identifiers other than x are rejected
  /// unless listed in `parameters`.
  static CoefficientExpr parse(std::string_view source,
                               const std::set<std::string>& parameters = {});

  /// Constant expression holding a single number.
  static CoefficientExpr constant(double value);

  bool empty() const { return root_ == nullptr; }

  /// Evaluate at x. Throws EvalError at poles; never returns NaN/inf.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  /// Substitute numeric values for parameters, producing a closed
  /// expression. Throws Error if any parameter stays unbound on use.
  CoefficientExpr bind(const std::map<std::string, double>& params) const;

  std::vector<std::string> free_parameters() const;

  /// Canonical text form; reparsing it yields a structurally equal tree.
  std::string pretty() const;

  const std::string& source() const { return source_; }

  bool structurally_equal(const CoefficientExpr& other) const;

  /// True when the expression folds to the constant 0 (used for the
  /// zero-potential fast paths).
  bool is_constant_zero() const;

  /// Folds to a constant? Returns the value through `out` when so.
  bool constant_value(double& out) const;

 private:
  explicit CoefficientExpr(NodeHandle root, std::string source);

  NodeHandle root_;
  std::string source_;
};

}  // namespace sturm_uniq
