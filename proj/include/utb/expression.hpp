#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace utb {

/// Closed-form real expression over a fixed list of variables.
///
/// Grammar: numbers, the named variables, `pi`, binary + - * / ^ (right
/// associative), unary minus, parentheses and the functions sin, cos, exp,
/// log, sqrt. Expressions are immutable and cheap to copy.
class Expression {
 public:
  struct Node;

  /// Parses `text`; identifiers other than `variables` and `pi` are rejected
  /// with ParseError.
  static Expression parse(const std::string& text, std::vector<std::string> variables);

  static Expression constant(double value, std::vector<std::string> variables);

  double eval(std::span<const double> values) const;
  double eval(double a) const { return eval(std::span<const double>(&a, 1)); }
  double eval(double a, double b) const {
    const double v[2] = {a, b};
    return eval(std::span<const double>(v, 2));
  }

  /// Symbolic partial derivative with respect to variable `index`.
  Expression derivative(int index) const;

  std::string to_string() const;
  const std::vector<std::string>& variables() const { return variables_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::vector<std::string> variables)
      : root_(std::move(root)), variables_(std::move(variables)) {}

  std::shared_ptr<const Node> root_;
  std::vector<std::string> variables_;
};

}  // namespace utb
