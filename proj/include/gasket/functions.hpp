#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "gasket/expression.hpp"
#include "gasket/topology.hpp"

namespace gasket {

struct ConstantFunction {
  double value = 1.0;
};

/// sum_k a_k chi_{C_k} over the N-cells in address order. At a vertex shared
/// by two N-cells the lexicographically smaller cell supplies the value.
struct SimpleFunction {
  int scale = 0;
  std::vector<double> coefficients;
};

/// Harmonic function with the given values at q_1, q_2, q_3.
struct HarmonicFunction {
  std::array<double, 3> boundary{0.0, 0.0, 0.0};
};

/// Expression in the Euclidean coordinates x, y.
struct ExpressionFunction {
  Expression expression;
};

class TestFunction {
public:
  using Spec = std::variant<ConstantFunction, SimpleFunction, HarmonicFunction, ExpressionFunction>;

  TestFunction(Spec spec);
  /// "constant:c", "simple:a1,...,a_{3^N}", "harmonic:b1,b2,b3" or "expr:<x,y expression>".
  static TestFunction parse(const std::string& text);

  const Spec& spec() const { return spec_; }
  const std::string& description() const { return description_; }

  double at_vertex(const GasketLevel& level, std::size_t v) const;
  /// Value at corner (1..3) of an m-cell seen from inside that cell.
  double in_cell(const GasketLevel& level, std::size_t cell, int corner) const;

private:
  Spec spec_;
  std::string description_;
};

/// f restricted to V_m, indexed like GasketLevel::vertices().
struct SampledFunction {
  int level = 0;
  std::vector<double> values;
  bool positive = false;

  double min() const;
  double max() const;
};

SampledFunction sample(const TestFunction& f, const GasketLevel& level);

double harmonic_value(const HarmonicFunction& h, const VertexId& v);

/// Scalar function F applied to spectra: "log", "power:p" or "expr:<x expression>".
class Functional {
public:
  static Functional parse(const std::string& text);
  static Functional log();
  static Functional power(double p);

  double operator()(double x) const;
  const std::string& description() const { return description_; }

private:
  enum class Kind { Log, Power, Expr } kind_ = Kind::Log;
  double exponent_ = 1.0;
  std::variant<std::monostate, Expression> expression_;
  std::string description_;
};

}  // namespace gasket
