#include "sturm_uniq/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace sturm_uniq {

namespace {

enum class Op : std::uint8_t {
  Number,
  Var,
  Param,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Exp,
  Log,
  Abs,
  Sgn,
  Min,
  Max,
  Sqrt,
  Piecewise,
};

struct FuncInfo {
  const char* name;
  Op op;
  int arity;
};

constexpr std::array<FuncInfo, 9> kFunctions = {{
    {"pow", Op::Pow, 2},
    {"exp", Op::Exp, 1},
    {"log", Op::Log, 1},
    {"abs", Op::Abs, 1},
    {"sgn", Op::Sgn, 1},
    {"min", Op::Min, 2},
    {"max", Op::Max, 2},
    {"sqrt", Op::Sqrt, 1},
    {"piecewise", Op::Piecewise, 3},
}};

const FuncInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

}  // namespace

struct CoefficientExpr::Node {
  Op op = Op::Number;
  double number = 0.0;
  std::string name;  // parameter name
  std::vector<NodeHandle> args;
};

namespace {

using Node = CoefficientExpr::Node;
using NodeHandle = CoefficientExpr::NodeHandle;

NodeHandle make_node(Op op, std::vector<NodeHandle> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

NodeHandle make_number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->number = v;
  return n;
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok : std::uint8_t {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Comma,
  End,
};

struct Token {
  Tok kind;
  std::size_t offset;
  double number = 0.0;
  std::string_view text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      tok_.text = {};
      return;
    }
    char ch = src_[pos_];
    switch (ch) {
      case '+': tok_ = {Tok::Plus, pos_++}; return;
      case '-': tok_ = {Tok::Minus, pos_++}; return;
      case '*': tok_ = {Tok::Star, pos_++}; return;
      case '/': tok_ = {Tok::Slash, pos_++}; return;
      case '^': tok_ = {Tok::Caret, pos_++}; return;
      case '(': tok_ = {Tok::LParen, pos_++}; return;
      case ')': tok_ = {Tok::RParen, pos_++}; return;
      case ',': tok_ = {Tok::Comma, pos_++}; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        ++pos_;
      }
      tok_.kind = Tok::Ident;
      tok_.offset = start;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    throw SyntaxError("unexpected character", pos_,
                      "number, identifier, operator, or parenthesis");
  }

  void lex_number() {
    std::size_t start = pos_;
    bool digits = false;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) {
      throw SyntaxError("malformed number", start, "digit");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      bool exp_digits = false;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        exp_digits = true;
      }
      if (!exp_digits) pos_ = mark;  // "2e" parses as 2 followed by ident
    }
    double value = 0.0;
    auto text = src_.substr(start, pos_ - start);
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{}) {
      throw SyntaxError("malformed number", start, "valid numeric literal");
    }
    tok_.kind = Tok::Number;
    tok_.offset = start;
    tok_.number = value;
    tok_.text = text;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_{};
};

// ---------------------------------------------------------------------------
// Recursive-descent parser
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' unary)?            right-associative
//   atom   := NUMBER | 'x' | IDENT '(' expr (',' expr)* ')' | IDENT
//           | '(' expr ')'

class Parser {
 public:
  Parser(std::string_view src, const std::set<std::string>& params)
      : lex_(src), params_(params) {}

  NodeHandle parse() {
    NodeHandle e = parse_expr();
    if (lex_.peek().kind != Tok::End) {
      throw SyntaxError("trailing input", lex_.peek().offset,
                        "operator or end of input");
    }
    return e;
  }

 private:
  NodeHandle parse_expr() {
    NodeHandle lhs = parse_term();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      Tok op = lex_.take().kind;
      NodeHandle rhs = parse_term();
      lhs = make_node(op == Tok::Plus ? Op::Add : Op::Sub, {lhs, rhs});
    }
    return lhs;
  }

  NodeHandle parse_term() {
    NodeHandle lhs = parse_unary();
    while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
      Tok op = lex_.take().kind;
      NodeHandle rhs = parse_unary();
      lhs = make_node(op == Tok::Star ? Op::Mul : Op::Div, {lhs, rhs});
    }
    return lhs;
  }

  NodeHandle parse_unary() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return make_node(Op::Neg, {parse_unary()});
    }
    if (lex_.peek().kind == Tok::Plus) {
      lex_.take();
      return parse_unary();
    }
    return parse_power();
  }

  NodeHandle parse_power() {
    NodeHandle base = parse_atom();
    if (lex_.peek().kind == Tok::Caret) {
      lex_.take();
      NodeHandle exponent = parse_unary();  // right assoc, allows 2^-3
      return make_node(Op::Pow, {base, exponent});
    }
    return base;
  }

  NodeHandle parse_atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token num = lex_.take();
        return make_number(num.number);
      }
      case Tok::LParen: {
        lex_.take();
        NodeHandle e = parse_expr();
        expect(Tok::RParen, ")");
        return e;
      }
      case Tok::Ident: {
        Token id = lex_.take();
        if (id.text == "x") return make_node(Op::Var, {});
        if (const FuncInfo* f = find_function(id.text)) {
          expect(Tok::LParen, "(");
          std::vector<NodeHandle> args;
          args.push_back(parse_expr());
          while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            args.push_back(parse_expr());
          }
          expect(Tok::RParen, ")");
          if (static_cast<int>(args.size()) != f->arity) {
            std::ostringstream os;
            os << f->name << " takes " << f->arity << " argument(s), got "
               << args.size();
            throw SyntaxError(os.str(), id.offset, "correct arity");
          }
          return make_node(f->op, std::move(args));
        }
        std::string name(id.text);
        if (params_.count(name)) {
          auto n = std::make_shared<Node>();
          n->op = Op::Param;
          n->name = name;
          return n;
        }
        throw UnknownIdentifier(name, id.offset);
      }
      default:
        throw SyntaxError("expected expression", t.offset,
                          "number, 'x', function call, or '('");
    }
  }

  void expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) {
      throw SyntaxError(std::string("expected '") + what + "'",
                        lex_.peek().offset, what);
    }
    lex_.take();
  }

  Lexer lex_;
  const std::set<std::string>& params_;
};

// ---------------------------------------------------------------------------
// Evaluation

[[noreturn]] void eval_fail(const char* msg, double x) {
  throw EvalError(msg, x);
}

double eval_node(const Node& n, double x) {
  switch (n.op) {
    case Op::Number: return n.number;
    case Op::Var: return x;
    case Op::Param:
      throw Error("unbound parameter '" + n.name + "' in expression");
    case Op::Neg: return -eval_node(*n.args[0], x);
    case Op::Add: return eval_node(*n.args[0], x) + eval_node(*n.args[1], x);
    case Op::Sub: return eval_node(*n.args[0], x) - eval_node(*n.args[1], x);
    case Op::Mul: return eval_node(*n.args[0], x) * eval_node(*n.args[1], x);
    case Op::Div: {
      double num = eval_node(*n.args[0], x);
      double den = eval_node(*n.args[1], x);
      if (den == 0.0) eval_fail("division by zero", x);
      return num / den;
    }
    case Op::Pow: {
      double base = eval_node(*n.args[0], x);
      double e = eval_node(*n.args[1], x);
      if (base > 0.0) return std::pow(base, e);
      if (base == 0.0) {
        if (e > 0.0) return 0.0;
        if (e == 0.0) return 1.0;
        eval_fail("pow: zero base with negative exponent", x);
      }
      // negative base: integer exponents only
      if (std::nearbyint(e) == e && std::abs(e) < 9.0e15) {
        double mag = std::pow(-base, e);
        bool odd = std::fmod(std::abs(e), 2.0) == 1.0;
        return odd ? -mag : mag;
      }
      eval_fail("pow: negative base with non-integer exponent", x);
    }
    case Op::Exp: return std::exp(eval_node(*n.args[0], x));
    case Op::Log: {
      double v = eval_node(*n.args[0], x);
      if (v <= 0.0) eval_fail("log of non-positive value", x);
      return std::log(v);
    }
    case Op::Abs: return std::abs(eval_node(*n.args[0], x));
    case Op::Sgn: {
      double v = eval_node(*n.args[0], x);
      return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    case Op::Min:
      return std::min(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
    case Op::Max:
      return std::max(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
    case Op::Sqrt: {
      double v = eval_node(*n.args[0], x);
      if (v < 0.0) eval_fail("sqrt of negative value", x);
      return std::sqrt(v);
    }
    case Op::Piecewise: {
      double threshold = eval_node(*n.args[0], x);
      return x < threshold ? eval_node(*n.args[1], x) : eval_node(*n.args[2], x);
    }
  }
  eval_fail("corrupt expression tree", x);
}

// ---------------------------------------------------------------------------
// Printing

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;  // atoms and calls
  }
}

void print_number(std::ostream& os, double v) {
  std::array<char, 32> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  os << std::string_view(buf.data(), res.ptr - buf.data());
}

void print_node(std::ostream& os, const Node& n);

void print_child(std::ostream& os, const Node& child, int parent_prec,
                 bool is_right) {
  int child_prec = precedence(child.op);
  bool parens = child_prec < parent_prec ||
                (child_prec == parent_prec && is_right &&
                 (child.op == Op::Add || child.op == Op::Sub ||
                  child.op == Op::Mul || child.op == Op::Div));
  // negative literals and unary minus under a binary op always get parens
  if (is_right && (child.op == Op::Neg ||
                   (child.op == Op::Number && child.number < 0))) {
    parens = true;
  }
  if (parens) os << '(';
  print_node(os, child);
  if (parens) os << ')';
}

void print_node(std::ostream& os, const Node& n) {
  switch (n.op) {
    case Op::Number: print_number(os, n.number); return;
    case Op::Var: os << 'x'; return;
    case Op::Param: os << n.name; return;
    case Op::Neg:
      os << '-';
      print_child(os, *n.args[0], precedence(Op::Neg), true);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const char* sym = n.op == Op::Add   ? "+"
                        : n.op == Op::Sub ? "-"
                        : n.op == Op::Mul ? "*"
                                          : "/";
      print_child(os, *n.args[0], precedence(n.op), false);
      os << sym;
      print_child(os, *n.args[1], precedence(n.op), true);
      return;
    }
    case Op::Pow:
      os << "pow(";
      print_node(os, *n.args[0]);
      os << ",";
      print_node(os, *n.args[1]);
      os << ")";
      return;
    default: {
      for (const auto& f : kFunctions) {
        if (f.op == n.op) {
          os << f.name << '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) os << ',';
            print_node(os, *n.args[i]);
          }
          os << ')';
          return;
        }
      }
      os << "?";
    }
  }
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::Number) {
    // bit comparison keeps -0.0 distinct from 0.0, which is fine for
    // the structural round-trip property
    return a.number == b.number && std::signbit(a.number) == std::signbit(b.number);
  }
  if (a.op == Op::Param && a.name != b.name) return false;
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!nodes_equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

NodeHandle bind_node(const NodeHandle& n,
                     const std::map<std::string, double>& params) {
  if (n->op == Op::Param) {
    auto it = params.find(n->name);
    if (it == params.end()) return n;
    return make_number(it->second);
  }
  if (n->args.empty()) return n;
  std::vector<NodeHandle> args;
  args.reserve(n->args.size());
  bool changed = false;
  for (const auto& a : n->args) {
    NodeHandle na = bind_node(a, params);
    changed = changed || na != a;
    args.push_back(std::move(na));
  }
  if (!changed) return n;
  auto copy = std::make_shared<Node>(*n);
  copy->args = std::move(args);
  return copy;
}

void collect_params(const Node& n, std::set<std::string>& out) {
  if (n.op == Op::Param) out.insert(n.name);
  for (const auto& a : n.args) collect_params(*a, out);
}

bool fold_constant(const Node& n, double& out) {
  std::set<std::string> params;
  collect_params(n, params);
  if (!params.empty()) return false;
  // A closed expression is constant iff it never reads x. Cheap check:
  // evaluate at two points and require bitwise agreement plus no Var node.
  std::vector<const Node*> stack{&n};
  while (!stack.empty()) {
    const Node* cur = stack.back();
    stack.pop_back();
    if (cur->op == Op::Var) return false;
    for (const auto& a : cur->args) stack.push_back(a.get());
  }
  try {
    out = eval_node(n, 0.0);
  } catch (const EvalError&) {
    return false;
  }
  return true;
}

}  // namespace

SyntaxError::SyntaxError(std::string message, std::size_t offset,
                         std::string expected)
    : Error("syntax error at byte " + std::to_string(offset) + ": " + message +
            " (expected: " + expected + ")"),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::string name, std::size_t offset)
    : Error("unknown identifier '" + name + "' at byte " +
            std::to_string(offset)),
      name_(std::move(name)),
      offset_(offset) {}

EvalError::EvalError(std::string message, double at)
    : Error(message + " at x=" + std::to_string(at)), at_(at) {}

CoefficientExpr::CoefficientExpr(NodeHandle root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

CoefficientExpr CoefficientExpr::parse(std::string_view source,
                                       const std::set<std::string>& parameters) {
  if (source.empty()) {
    throw SyntaxError("empty expression", 0, "expression");
  }
  Parser p(source, parameters);
  return CoefficientExpr(p.parse(), std::string(source));
}

CoefficientExpr CoefficientExpr::constant(double value) {
  std::ostringstream os;
  print_number(os, value);
  return CoefficientExpr(make_number(value), os.str());
}

double CoefficientExpr::eval(double x) const {
  if (!root_) throw Error("evaluating empty expression");
  double v = eval_node(*root_, x);
  if (!std::isfinite(v)) {
    throw EvalError("expression evaluated to a non-finite value", x);
  }
  return v;
}

CoefficientExpr CoefficientExpr::bind(
    const std::map<std::string, double>& params) const {
  if (!root_) return *this;
  NodeHandle bound = bind_node(root_, params);
  CoefficientExpr out(bound, source_);
  out.source_ = out.pretty();
  return out;
}

std::vector<std::string> CoefficientExpr::free_parameters() const {
  std::set<std::string> names;
  if (root_) collect_params(*root_, names);
  return {names.begin(), names.end()};
}

std::string CoefficientExpr::pretty() const {
  if (!root_) return "";
  std::ostringstream os;
  print_node(os, *root_);
  return os.str();
}

bool CoefficientExpr::structurally_equal(const CoefficientExpr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return nodes_equal(*root_, *other.root_);
}

bool CoefficientExpr::is_constant_zero() const {
  double v;
  return constant_value(v) && v == 0.0;
}

bool CoefficientExpr::constant_value(double& out) const {
  if (!root_) return false;
  return fold_constant(*root_, out);
}

}  // namespace sturm_uniq
