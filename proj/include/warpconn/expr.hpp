#pragma once

// Scalar expressions over named coordinates.
//
// Grammar (whitespace is insignificant):
//
//   expr    ::= term { ("+" | "-") term }
//   term    ::= unary { ("*" | "/") unary }
//   unary   ::= "-" unary | "+" unary | power
//   power   ::= primary [ "^" unary ]           (right associative)
//   primary ::= number | constant | coordinate
//             | function "(" expr ")" | "(" expr ")"
//   number  ::= digits [ "." digits ] [ ("e" | "E") [sign] digits ]
//   constant ::= "pi" | "e"
//   function ::= sin | cos | tan | exp | log | sqrt | sinh | cosh | tanh
//
// `^` binds tighter than unary minus, so `-x^2` is `-(x^2)` and `2^-1` is
// `2^(-1)`. Coordinate names are identifiers (letters, digits, `_`, and any
// non-ASCII UTF-8 byte, not starting with a digit) and may not shadow a
// constant or a function name.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "warpconn/error.hpp"
#include "warpconn/jet.hpp"

namespace warpconn {

/// A point of a coordinate chart. Every coordinate is finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double c : coords_) {
      if (!std::isfinite(c)) throw GeometryError("point coordinates must be finite");
    }
  }
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  /// Copy with coordinate `axis` moved by `delta`.
  Point shifted(std::size_t axis, double delta) const {
    std::vector<double> c = coords_;
    c.at(axis) += delta;
    return Point(std::move(c));
  }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

enum class Function { sin, cos, tan, exp, log, sqrt, sinh, cosh, tanh };

inline constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"tanh", Function::tanh},
}};

inline std::string_view function_name(Function f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

inline std::optional<Function> function_from_name(std::string_view name) {
  for (const auto& [n, fn] : kFunctions)
    if (n == name) return fn;
  return std::nullopt;
}

inline bool is_reserved_name(std::string_view name) {
  return name == "pi" || name == "e" || function_from_name(name).has_value();
}

inline bool is_identifier_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}
inline bool is_identifier_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

inline bool is_valid_identifier(std::string_view name) {
  if (name.empty() || !is_identifier_start(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name)
    if (!is_identifier_char(static_cast<unsigned char>(c))) return false;
  return true;
}

using VarList = std::shared_ptr<const std::vector<std::string>>;

/// Validated, shared coordinate-name list.
inline VarList make_vars(std::vector<std::string> names) {
  if (names.empty()) throw ConfigError("coordinate list must not be empty");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!is_valid_identifier(names[i]))
      throw ConfigError("invalid coordinate name '" + names[i] + "'");
    if (is_reserved_name(names[i]))
      throw ConfigError("coordinate name '" + names[i] + "' is reserved");
    for (std::size_t j = 0; j < i; ++j)
      if (names[j] == names[i]) throw ConfigError("duplicate coordinate name '" + names[i] + "'");
  }
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

inline bool same_vars(const VarList& a, const VarList& b) {
  return a == b || (a && b && *a == *b);
}

namespace detail {

enum class Op { constant, coordinate, negate, add, sub, mul, div, pow, call };

struct Node {
  Op op;
  double value = 0.0;      // constant
  std::size_t index = 0;   // coordinate
  Function fn = Function::sin;
  std::shared_ptr<const Node> lhs, rhs;  // operands (lhs only for unary)
};

using NodePtr = std::shared_ptr<const Node>;

inline NodePtr make_constant(double v) {
  return std::make_shared<const Node>(Node{Op::constant, v, 0, Function::sin, nullptr, nullptr});
}
inline NodePtr make_coordinate(std::size_t i) {
  return std::make_shared<const Node>(Node{Op::coordinate, 0.0, i, Function::sin, nullptr, nullptr});
}
inline NodePtr make_unary(Op op, NodePtr a) {
  return std::make_shared<const Node>(Node{op, 0.0, 0, Function::sin, std::move(a), nullptr});
}
inline NodePtr make_call(Function f, NodePtr a) {
  return std::make_shared<const Node>(Node{Op::call, 0.0, 0, f, std::move(a), nullptr});
}
inline NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  return std::make_shared<const Node>(Node{op, 0.0, 0, Function::sin, std::move(a), std::move(b)});
}

inline bool has_coordinates(const Node& n) {
  switch (n.op) {
    case Op::constant: return false;
    case Op::coordinate: return true;
    case Op::negate:
    case Op::call: return has_coordinates(*n.lhs);
    default: return has_coordinates(*n.lhs) || has_coordinates(*n.rhs);
  }
}

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::negate: return 3;
    case Op::pow: return 4;
    case Op::constant: return n.value < 0 || std::signbit(n.value) ? 0 : 5;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, end);
}

inline void print(const Node& n, const std::vector<std::string>& vars, std::string& out);

inline void print_child(const Node& child, int min_prec, const std::vector<std::string>& vars,
                        std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print(child, vars, out);
    out += ')';
  } else {
    print(child, vars, out);
  }
}

inline void print(const Node& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.op) {
    case Op::constant:
      out += format_number(n.value);
      return;
    case Op::coordinate:
      out += vars[n.index];
      return;
    case Op::negate:
      out += '-';
      print_child(*n.lhs, 3, vars, out);
      return;
    case Op::call:
      out += function_name(n.fn);
      out += '(';
      print(*n.lhs, vars, out);
      out += ')';
      return;
    case Op::add:
    case Op::sub:
      print_child(*n.lhs, 1, vars, out);
      out += n.op == Op::add ? " + " : " - ";
      print_child(*n.rhs, 2, vars, out);
      return;
    case Op::mul:
    case Op::div:
      print_child(*n.lhs, 2, vars, out);
      out += n.op == Op::mul ? "*" : "/";
      print_child(*n.rhs, 3, vars, out);
      return;
    case Op::pow:
      print_child(*n.lhs, 5, vars, out);
      out += '^';
      print_child(*n.rhs, 3, vars, out);
      return;
  }
}

inline std::string to_text(const Node& n, const std::vector<std::string>& vars) {
  std::string s;
  print(n, vars, s);
  return s;
}

}  // namespace detail

/// An immutable parsed expression together with the coordinate list it is
/// written against. Copies share the tree.
class ScalarExpr {
 public:
  ScalarExpr() = default;

  static ScalarExpr constant(VarList vars, double v) {
    if (!std::isfinite(v)) throw ConfigError("expression constants must be finite");
    return ScalarExpr(detail::make_constant(v), std::move(vars));
  }
  static ScalarExpr coordinate(VarList vars, std::size_t index) {
    if (!vars || index >= vars->size()) throw ConfigError("coordinate index out of range");
    return ScalarExpr(detail::make_coordinate(index), std::move(vars));
  }

  bool empty() const noexcept { return root_ == nullptr; }
  const VarList& vars() const noexcept { return vars_; }
  std::size_t dim() const noexcept { return vars_ ? vars_->size() : 0; }

  /// Text that parses back to the same tree.
  std::string str() const { return root_ ? detail::to_text(*root_, *vars_) : std::string(); }

  /// True when no coordinate appears in the tree.
  bool is_constant() const { return root_ && !detail::has_coordinates(*root_); }

  /// True when the tree is a literal constant equal to zero.
  bool is_literal_zero() const { return root_ && root_->op == detail::Op::constant && root_->value == 0.0; }

  bool depends_on(std::size_t index) const { return root_ && depends(*root_, index); }

  /// Plain evaluation.
  double evaluate(const Point& p) const { return eval_jet(p, 0).value(); }

  /// Value plus exact derivatives up to `order` (0, 1 or 2).
  Jet eval_jet(const Point& p, int order) const {
    if (!root_) throw ConfigError("evaluating an empty expression");
    if (p.size() != dim())
      throw GeometryError("point has " + std::to_string(p.size()) + " coordinates, expression expects " +
                          std::to_string(dim()));
    if (order < 0 || order > 2) throw ConfigError("jet order must be 0, 1 or 2");
    return eval(*root_, p, order);
  }

  /// Re-express over a different coordinate list. `map[i]` says where old
  /// coordinate i goes: an index into `new_vars`, or a fixed value
  /// (substitution). Every old coordinate must be mapped.
  ScalarExpr rebind(VarList new_vars, std::span<const std::variant<std::size_t, double>> map) const {
    if (map.size() != dim()) throw ConfigError("rebind map must cover every coordinate");
    for (const auto& m : map) {
      if (const auto* idx = std::get_if<std::size_t>(&m); idx && *idx >= new_vars->size())
        throw ConfigError("rebind target index out of range");
    }
    return ScalarExpr(remap(root_, map), std::move(new_vars));
  }

  /// Re-express over `new_vars`, matching coordinates by name.
  ScalarExpr rebind_by_name(VarList new_vars) const {
    std::vector<std::variant<std::size_t, double>> map;
    for (std::size_t i = 0; i < dim(); ++i) {
      const std::string& name = (*vars_)[i];
      std::size_t j = 0;
      while (j < new_vars->size() && (*new_vars)[j] != name) ++j;
      if (j == new_vars->size()) {
        if (depends_on(i))
          throw ConfigError("expression '" + str() + "' uses coordinate '" + name +
                            "' that the target chart does not have");
        map.emplace_back(0.0);
      } else {
        map.emplace_back(j);
      }
    }
    return rebind(std::move(new_vars), map);
  }

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) { return combine(detail::Op::add, a, b); }
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return combine(detail::Op::sub, a, b); }
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) { return combine(detail::Op::mul, a, b); }
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) { return combine(detail::Op::div, a, b); }
  friend ScalarExpr operator-(const ScalarExpr& a) { return ScalarExpr(detail::make_unary(detail::Op::negate, a.root_), a.vars_); }
  friend ScalarExpr pow(const ScalarExpr& a, const ScalarExpr& b) { return combine(detail::Op::pow, a, b); }
  friend ScalarExpr apply(Function f, const ScalarExpr& a) { return ScalarExpr(detail::make_call(f, a.root_), a.vars_); }

 private:
  friend class Parser;
  ScalarExpr(detail::NodePtr root, VarList vars) : root_(std::move(root)), vars_(std::move(vars)) {}

  static ScalarExpr combine(detail::Op op, const ScalarExpr& a, const ScalarExpr& b) {
    if (a.empty() || b.empty()) throw ConfigError("combining an empty expression");
    if (!same_vars(a.vars_, b.vars_)) throw ConfigError("combining expressions over different coordinates");
    return ScalarExpr(detail::make_binary(op, a.root_, b.root_), a.vars_);
  }

  static bool depends(const detail::Node& n, std::size_t index) {
    using detail::Op;
    switch (n.op) {
      case Op::constant: return false;
      case Op::coordinate: return n.index == index;
      case Op::negate:
      case Op::call: return depends(*n.lhs, index);
      default: return depends(*n.lhs, index) || depends(*n.rhs, index);
    }
  }

  static detail::NodePtr remap(const detail::NodePtr& n, std::span<const std::variant<std::size_t, double>> map) {
    using detail::Op;
    switch (n->op) {
      case Op::constant: return n;
      case Op::coordinate: {
        const auto& m = map[n->index];
        if (const auto* idx = std::get_if<std::size_t>(&m)) return detail::make_coordinate(*idx);
        return detail::make_constant(std::get<double>(m));
      }
      case Op::negate: return detail::make_unary(Op::negate, remap(n->lhs, map));
      case Op::call: return detail::make_call(n->fn, remap(n->lhs, map));
      default: return detail::make_binary(n->op, remap(n->lhs, map), remap(n->rhs, map));
    }
  }

  [[noreturn]] void domain_error(const detail::Node& n, const std::string& what, double arg) const {
    throw DomainError(what + " in '" + detail::to_text(n, *vars_) + "' (argument " + detail::format_number(arg) +
                      ")");
  }

  Jet checked(const detail::Node& n, Jet r) const {
    if (!std::isfinite(r.value())) domain_error(n, "non-finite result", r.value());
    return r;
  }

  Jet eval(const detail::Node& n, const Point& p, int order) const {
    using detail::Op;
    const std::size_t dim = p.size();
    switch (n.op) {
      case Op::constant: return Jet(n.value, dim, order);
      case Op::coordinate: return Jet::variable(p[n.index], dim, n.index, order);
      case Op::negate: return -eval(*n.lhs, p, order);
      case Op::add: return eval(*n.lhs, p, order) + eval(*n.rhs, p, order);
      case Op::sub: return eval(*n.lhs, p, order) - eval(*n.rhs, p, order);
      case Op::mul: return eval(*n.lhs, p, order) * eval(*n.rhs, p, order);
      case Op::div: {
        Jet den = eval(*n.rhs, p, order);
        if (den.value() == 0.0) domain_error(n, "division by zero", 0.0);
        return checked(n, eval(*n.lhs, p, order) / den);
      }
      case Op::pow: return eval_pow(n, p, order);
      case Op::call: return eval_call(n, p, order);
    }
    return Jet();
  }

  Jet eval_pow(const detail::Node& n, const Point& p, int order) const {
    Jet base = eval(*n.lhs, p, order);
    if (!detail::has_coordinates(*n.rhs)) {
      const double k = eval(*n.rhs, p, 0).value();
      if (std::nearbyint(k) == k && std::abs(k) <= 1024.0) {
        if (k < 0 && base.value() == 0.0) domain_error(n, "zero raised to a negative power", 0.0);
        return checked(n, pow_int(base, static_cast<long>(k)));
      }
      if (base.value() <= 0.0) domain_error(n, "non-positive base with non-integer exponent", base.value());
      return checked(n, pow_real(base, k));
    }
    if (base.value() <= 0.0) domain_error(n, "non-positive base with variable exponent", base.value());
    Jet ex = eval(*n.rhs, p, order);
    return checked(n, exp(ex * log(base)));
  }

  Jet eval_call(const detail::Node& n, const Point& p, int order) const {
    Jet a = eval(*n.lhs, p, order);
    const double v = a.value();
    switch (n.fn) {
      case Function::sin: return sin(a);
      case Function::cos: return cos(a);
      case Function::tan:
        if (std::cos(v) == 0.0) domain_error(n, "tan at a pole", v);
        return checked(n, tan(a));
      case Function::exp: return checked(n, exp(a));
      case Function::log:
        if (v <= 0.0) domain_error(n, "log of non-positive argument", v);
        return log(a);
      case Function::sqrt:
        if (v < 0.0 || (v == 0.0 && order > 0)) domain_error(n, "sqrt outside its smooth domain", v);
        return sqrt(a);
      case Function::sinh: return checked(n, sinh(a));
      case Function::cosh: return checked(n, cosh(a));
      case Function::tanh: return tanh(a);
    }
    return a;
  }

  detail::NodePtr root_;
  VarList vars_;
};

/// Recursive-descent parser for the grammar at the top of this header.
class Parser {
 public:
  Parser(std::string_view source, VarList vars) : src_(source), vars_(std::move(vars)) {}

  ScalarExpr parse() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    detail::NodePtr root = expr();
    skip_space();
    if (pos_ < src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return ScalarExpr(std::move(root), vars_);
  }

 private:
  using NodePtr = detail::NodePtr;
  using Op = detail::Op;

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      lhs = detail::make_binary(c == '+' ? Op::add : Op::sub, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      lhs = detail::make_binary(c == '*' ? Op::mul : Op::div, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return detail::make_unary(Op::negate, unary());
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      return detail::make_binary(Op::pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    const char c = peek();
    const std::size_t start = pos_;
    if (c == '\0') throw ParseError("expected an operand, found end of input", pos_);
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (is_identifier_start(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && is_identifier_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (auto fn = function_from_name(name)) {
        if (peek() != '(') throw ParseError("expected '(' after function '" + std::string(name) + "'", pos_);
        ++pos_;
        NodePtr arg = expr();
        if (peek() != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
        return detail::make_call(*fn, std::move(arg));
      }
      if (name == "pi") return detail::make_constant(std::numbers::pi);
      if (name == "e") return detail::make_constant(std::numbers::e);
      for (std::size_t i = 0; i < vars_->size(); ++i)
        if ((*vars_)[i] == name) return detail::make_coordinate(i);
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    throw ParseError("expected an operand, found '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    // Exponent only when followed by digits, so "2e" stays an error and not "2*e".
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        pos_ = q;
        digits();
      }
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    if (!std::isfinite(v)) throw ParseError("number out of range", start);
    return detail::make_constant(v);
  }

  std::string_view src_;
  VarList vars_;
  std::size_t pos_ = 0;
};

/// Parse `source` against the coordinate list `vars`.
inline ScalarExpr parse(std::string_view source, const VarList& vars) {
  if (!vars || vars->empty()) throw ConfigError("coordinate list must not be empty");
  return Parser(source, vars).parse();
}

inline ScalarExpr parse(std::string_view source, std::vector<std::string> vars) {
  return parse(source, make_vars(std::move(vars)));
}

inline Jet eval_jet(const ScalarExpr& e, const Point& p, int order) { return e.eval_jet(p, order); }

/// Central difference (e(p + h e_axis) − e(p − h e_axis)) / 2h.
inline double fd_derivative(const ScalarExpr& e, const Point& p, std::size_t axis, double step) {
  if (!(step > 0.0)) throw ConfigError("finite-difference step must be positive");
  if (axis >= p.size()) throw ConfigError("finite-difference axis out of range");
  return (e.evaluate(p.shifted(axis, step)) - e.evaluate(p.shifted(axis, -step))) / (2.0 * step);
}

}  // namespace warpconn
