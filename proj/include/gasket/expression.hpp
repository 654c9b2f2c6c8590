#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gasket {

/// Arithmetic expression over named variables: + - * / ^, parentheses,
/// numbers, pi, and the functions sin cos tan exp log sqrt abs.
class Expression {
public:
  struct Node;

  static Expression parse(const std::string& text, std::vector<std::string> variables);

  double operator()(std::span<const double> values) const;
  const std::string& text() const { return text_; }

private:
  std::string text_;
  std::vector<std::string> variables_;
  std::shared_ptr<const Node> root_;
};

}  // namespace gasket
