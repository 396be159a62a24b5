#include "cascade/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace cascade {

namespace {

constexpr std::array<std::string_view, 5> kFunctions = {"exp", "log", "sqrt", "sin", "cos"};

std::string format_number(double v) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

}  // namespace

class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, std::span<const std::string> variables)
      : src_(src), variables_(variables) {}

  Expression run() {
    Expression out;
    out.variables_.assign(variables_.begin(), variables_.end());
    out.source_ = std::string(src_);
    expr_ = &out;
    skip_ws();
    out.root_ = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
    return out;
  }

 private:
  using Node = Expression::Node;

  int add(Node n) {
    expr_->nodes_.push_back(n);
    return static_cast<int>(expr_->nodes_.size()) - 1;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  int parse_expr() {
    if (++depth_ > 512) throw ParseError("expression too deeply nested", pos_);
    int lhs = parse_term();
    while (true) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        int rhs = parse_term();
        Node n;
        n.kind = c == '+' ? Node::Kind::add : Node::Kind::sub;
        n.lhs = lhs;
        n.rhs = rhs;
        lhs = add(n);
      } else {
        break;
      }
    }
    --depth_;
    return lhs;
  }

  int parse_term() {
    int lhs = parse_factor();
    while (true) {
      char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        int rhs = parse_factor();
        Node n;
        n.kind = c == '*' ? Node::Kind::mul : Node::Kind::div;
        n.lhs = lhs;
        n.rhs = rhs;
        lhs = add(n);
      } else {
        break;
      }
    }
    return lhs;
  }

  int parse_factor() {
    if (++depth_ > 512) throw ParseError("expression too deeply nested", pos_);
    int out;
    if (consume('-')) {
      int child = parse_factor();
      Node n;
      n.kind = Node::Kind::neg;
      n.lhs = child;
      out = add(n);
    } else {
      int base = parse_base();
      if (consume('^')) {
        int exponent = parse_factor();  // right-associative
        Node n;
        n.kind = Node::Kind::pow;
        n.lhs = base;
        n.rhs = exponent;
        out = add(n);
      } else {
        out = base;
      }
    }
    --depth_;
    return out;
  }

  int parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  int parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ - start == 0 || (pos_ - start == 1 && src_[start] == '.'))
      throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // the 'e' belongs to something else; not part of this number
      }
    }
    double value = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc{}) throw ParseError("malformed number", start);
    Node n;
    n.kind = Node::Kind::constant;
    n.value = value;
    return add(n);
  }

  int parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);

    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (name == variables_[i]) {
        Node n;
        n.kind = Node::Kind::variable;
        n.var = static_cast<int>(i);
        return add(n);
      }
    }
    if (name == "pi") {
      Node n;
      n.kind = Node::Kind::constant;
      n.value = std::numbers::pi;
      return add(n);
    }
    if (name == "e") {
      Node n;
      n.kind = Node::Kind::constant;
      n.value = std::numbers::e;
      return add(n);
    }
    auto fn = std::find(kFunctions.begin(), kFunctions.end(), name);
    if (fn != kFunctions.end()) {
      if (!consume('(')) throw ParseError("function '" + std::string(name) + "' requires '('", pos_);
      int arg = parse_expr();
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ',')
        throw ParseError("function '" + std::string(name) + "' takes exactly one argument", pos_);
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      Node n;
      n.kind = Node::Kind::fn;
      n.fn = static_cast<Expression::Fn>(fn - kFunctions.begin());
      n.lhs = arg;
      return add(n);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  std::span<const std::string> variables_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  Expression* expr_ = nullptr;
};

Expression Expression::parse(std::string_view src, std::span<const std::string> variables) {
  return ExpressionParser(src, variables).run();
}

Expression Expression::parse(std::string_view src) {
  static const std::vector<std::string> kLambda = {"lambda"};
  return parse(src, kLambda);
}

double Expression::eval_node(int idx, std::span<const double> vars) const {
  const Node& n = nodes_[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case Node::Kind::constant:
      return n.value;
    case Node::Kind::variable:
      return vars[static_cast<std::size_t>(n.var)];
    case Node::Kind::add:
      return eval_node(n.lhs, vars) + eval_node(n.rhs, vars);
    case Node::Kind::sub:
      return eval_node(n.lhs, vars) - eval_node(n.rhs, vars);
    case Node::Kind::mul:
      return eval_node(n.lhs, vars) * eval_node(n.rhs, vars);
    case Node::Kind::div:
      return eval_node(n.lhs, vars) / eval_node(n.rhs, vars);
    case Node::Kind::pow:
      return std::pow(eval_node(n.lhs, vars), eval_node(n.rhs, vars));
    case Node::Kind::neg:
      return -eval_node(n.lhs, vars);
    case Node::Kind::fn: {
      double x = eval_node(n.lhs, vars);
      switch (n.fn) {
        case Fn::exp:
          return std::exp(x);
        case Fn::log:
          return std::log(x);
        case Fn::sqrt:
          return std::sqrt(x);
        case Fn::sin:
          return std::sin(x);
        case Fn::cos:
          return std::cos(x);
      }
      return std::nan("");
    }
  }
  return std::nan("");
}

double Expression::eval(std::span<const double> vars) const { return eval_node(root_, vars); }

double Expression::eval(double x) const { return eval(std::span<const double>(&x, 1)); }

double Expression::eval_checked(std::span<const double> vars) const {
  double v = eval(vars);
  if (!std::isfinite(v)) {
    std::string at = "(";
    for (std::size_t i = 0; i < vars.size(); ++i)
      at += (i ? ", " : "") + variables_[i] + "=" + format_number(vars[i]);
    at += ")";
    throw NumericError("expression '" + source_ + "' is not finite at " + at);
  }
  return v;
}

double Expression::eval_checked(double x) const {
  return eval_checked(std::span<const double>(&x, 1));
}

// Precedence levels: 0 = sum, 1 = product, 2 = unary/power, 3 = atom.
void Expression::print_node(int idx, int parent_level, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(idx)];
  int level;
  switch (n.kind) {
    case Node::Kind::add:
    case Node::Kind::sub:
      level = 0;
      break;
    case Node::Kind::mul:
    case Node::Kind::div:
      level = 1;
      break;
    case Node::Kind::neg:
    case Node::Kind::pow:
      level = 2;
      break;
    default:
      level = 3;
      break;
  }
  bool parens = level < parent_level;
  if (n.kind == Node::Kind::constant && n.value < 0) parens = parent_level > 2;
  if (parens) out += '(';
  switch (n.kind) {
    case Node::Kind::constant:
      out += format_number(n.value);
      break;
    case Node::Kind::variable:
      out += variables_[static_cast<std::size_t>(n.var)];
      break;
    case Node::Kind::add:
      print_node(n.lhs, 0, out);
      out += " + ";
      print_node(n.rhs, 1, out);
      break;
    case Node::Kind::sub:
      print_node(n.lhs, 0, out);
      out += " - ";
      print_node(n.rhs, 1, out);
      break;
    case Node::Kind::mul:
      print_node(n.lhs, 1, out);
      out += "*";
      print_node(n.rhs, 2, out);
      break;
    case Node::Kind::div:
      print_node(n.lhs, 1, out);
      out += "/";
      print_node(n.rhs, 2, out);
      break;
    case Node::Kind::pow:
      // '^' binds its base one level tighter than itself (left operand must
      // be an atom) and recurses at its own level on the right.
      print_node(n.lhs, 3, out);
      out += "^";
      print_node(n.rhs, 2, out);
      break;
    case Node::Kind::neg:
      out += "-";
      print_node(n.lhs, 2, out);
      break;
    case Node::Kind::fn: {
      out += kFunctions[static_cast<std::size_t>(n.fn)];
      out += '(';
      print_node(n.lhs, 0, out);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

std::string Expression::print() const {
  std::string out;
  print_node(root_, 0, out);
  return out;
}

}  // namespace cascade
