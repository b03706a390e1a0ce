#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hpfem {

class ExpressionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Scalar expression in x and y, e.g. "(1-x^2)^2*(1-y^2)^2".
 *
 * Supports + - * / ^, unary minus, parentheses, numeric literals, the
 * constants pi and e, named parameters bound at parse time, and the functions
 * sin cos tan exp log sqrt abs.
 */
class Expression {
public:
  struct Node;

  static Expression parse(std::string_view text, const std::map<std::string, double>& params = {});

  double operator()(double x, double y) const;

  /// Symbolic partial derivative with respect to "x" or "y".
  Expression derivative(char var) const;

  std::string to_string() const;

private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

} // namespace hpfem
