#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

// Arithmetic expression over a fixed set of free variables.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' factor)?
//   base   := NUMBER | VARIABLE | 'pi' | 'e' | IDENT '(' expr ')' | '(' expr ')'
//   IDENT  := exp | log | sqrt | sin | cos
//
// '^' is right-associative; whitespace is insignificant; numbers are decimal
// with an optional exponent. Instances are immutable and safe to evaluate
// concurrently.
class Expression {
 public:
  // Parses `src` with the given variable names. Throws ParseError (with the
  // byte offset of the failure) on bad syntax, unknown identifiers, or a
  // function applied to the wrong number of arguments.
  static Expression parse(std::string_view src, std::span<const std::string> variables);

  // Single-variable convenience, variable name "lambda".
  static Expression parse(std::string_view src);

  // Evaluates with the given variable values (one per declared variable).
  // Domain violations (log of a negative, 0/0, overflow) surface as NaN/Inf.
  double eval(std::span<const double> vars) const;
  double eval(double x) const;

  // As eval(), but throws NumericError if the result is not finite.
  double eval_checked(std::span<const double> vars) const;
  double eval_checked(double x) const;

  // Round-trippable text form: parse(print()) evaluates identically.
  std::string print() const;

  std::size_t num_variables() const { return variables_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::string& source() const { return source_; }

 private:
  enum class Fn : unsigned char { exp, log, sqrt, sin, cos };
  struct Node {
    enum class Kind : unsigned char { constant, variable, add, sub, mul, div, pow, neg, fn } kind;
    double value = 0.0;  // constant
    int var = 0;         // variable index
    Fn fn = Fn::exp;
    int lhs = -1, rhs = -1;
  };

  Expression() = default;
  double eval_node(int idx, std::span<const double> vars) const;
  void print_node(int idx, int parent_level, std::string& out) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<std::string> variables_;
  std::string source_;

  friend class ExpressionParser;
};

}  // namespace cascade
