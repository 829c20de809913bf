#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symkit/error.hpp"

namespace symkit::cli {

/// Expression tree of the problem language. Numbers are nonnegative
/// integers; negation, division and powers are explicit nodes so that
/// rendering and reparsing reproduce the tree exactly.
struct Expr {
  enum class Kind { Number, Imag, Symbol, Derivative, Neg, Add, Sub, Mul, Div, Pow };

  Kind kind = Kind::Number;
  /// Digits for Number, the name for Symbol, the unknown for Derivative.
  std::string text;
  /// Derivative variables in order, repeats allowed.
  std::vector<std::string> vars;
  std::vector<Expr> args;
  /// Pow exponent.
  unsigned exponent = 0;

  static Expr number(std::string digits);
  static Expr imag();
  static Expr symbol(std::string name);
  static Expr derivative(std::string unknown, std::vector<std::string> vars);
  static Expr unary(Kind kind, Expr a);
  static Expr binary(Kind kind, Expr a, Expr b);
  static Expr power(Expr base, unsigned exponent);

  friend bool operator==(const Expr&, const Expr&) = default;
};

std::string render(const Expr& e);

struct Equation {
  Expr lhs;
  Expr rhs;
  std::size_t line = 0;

  friend bool operator==(const Equation& a, const Equation& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
};

/// One lambda entry: a tuple "(a, b)" or a bare expression (a 1-tuple).
using LambdaItem = std::vector<Expr>;

struct Task {
  std::string kind;
  std::optional<unsigned> order;
  std::optional<unsigned> qmax;
  std::vector<unsigned> caps;
  std::vector<LambdaItem> lambdas;

  friend bool operator==(const Task&, const Task&) = default;
};

struct FieldComponent {
  std::string name;
  Expr value;

  friend bool operator==(const FieldComponent&, const FieldComponent&) = default;
};

struct ProblemFile {
  std::vector<std::string> vars;
  std::vector<std::string> unknowns;
  std::vector<std::string> translations;
  std::vector<Equation> equations;
  std::optional<Expr> op;
  std::vector<FieldComponent> field;
  std::optional<Task> task;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected, const std::string& found);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

class SemanticError : public InputError {
 public:
  using InputError::InputError;
};

/// Parses and validates a problem file. Throws SyntaxError or SemanticError.
ProblemFile parse_problem(std::string_view text);
/// Canonical text; parse_problem(render_problem(p)) == p.
std::string render_problem(const ProblemFile& p);

/// A single expression, e.g. from the command line.
Expr parse_expression(std::string_view text);
/// "(0, 1), (i, 0)" or "0, 1, -1".
std::vector<LambdaItem> parse_lambda_list(std::string_view text);
/// "3,3".
std::vector<unsigned> parse_caps(std::string_view text);

/// Highest derivative order mentioned anywhere in the file.
unsigned max_derivative_order(const ProblemFile& p);

}  // namespace symkit::cli
