#include "gasket/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gasket {

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::pair<std::string, std::string> split_kind(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, ""};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::size_t cells_below(int levels) {
  std::size_t r = 1;
  for (int i = 0; i < levels; ++i) r *= 3;
  return r;
}

}  // namespace

TestFunction::TestFunction(Spec spec) : spec_(std::move(spec)) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantFunction>) {
          os << "constant:" << s.value;
        } else if constexpr (std::is_same_v<T, SimpleFunction>) {
          if (s.coefficients.size() != cells_below(s.scale))
            throw std::invalid_argument("simple function needs 3^N coefficients");
          os << "simple:";
          for (std::size_t i = 0; i < s.coefficients.size(); ++i) os << (i ? "," : "") << s.coefficients[i];
        } else if constexpr (std::is_same_v<T, HarmonicFunction>) {
          os << "harmonic:" << s.boundary[0] << "," << s.boundary[1] << "," << s.boundary[2];
        } else {
          os << "expr:" << s.expression.text();
        }
      },
      spec_);
  description_ = os.str();
}

TestFunction TestFunction::parse(const std::string& text) {
  const auto [kind, body] = split_kind(text);
  if (kind == "constant") {
    const auto v = parse_list(body);
    if (v.size() != 1) throw std::invalid_argument("constant function takes one value");
    return TestFunction(ConstantFunction{v[0]});
  }
  if (kind == "simple") {
    const auto v = parse_list(body);
    int scale = 0;
    while (cells_below(scale) < v.size()) ++scale;
    if (v.empty() || cells_below(scale) != v.size())
      throw std::invalid_argument("simple function needs 3^N coefficients, got " + std::to_string(v.size()));
    return TestFunction(SimpleFunction{scale, v});
  }
  if (kind == "harmonic") {
    const auto v = parse_list(body);
    if (v.size() != 3) throw std::invalid_argument("harmonic function takes three boundary values");
    return TestFunction(HarmonicFunction{{v[0], v[1], v[2]}});
  }
  if (kind == "expr") return TestFunction(ExpressionFunction{Expression::parse(body, {"x", "y"})});
  throw std::invalid_argument("unknown function kind '" + kind + "'");
}

double harmonic_value(const HarmonicFunction& h, const VertexId& v) {
  std::array<double, 3> c = h.boundary;
  for (auto s : v.cell.symbols()) {
    const int i = s - 1;
    std::array<double, 3> next{};
    for (int j = 0; j < 3; ++j) {
      if (j == i) {
        next[j] = c[i];
      } else {
        const int k = 3 - i - j;
        next[j] = (2.0 * c[i] + 2.0 * c[j] + c[k]) / 5.0;
      }
    }
    c = next;
  }
  return c[v.corner - 1];
}

double TestFunction::at_vertex(const GasketLevel& level, std::size_t v) const {
  const Vertex& vert = level.vertex(v);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantFunction>) {
          return s.value;
        } else if constexpr (std::is_same_v<T, SimpleFunction>) {
          if (s.scale > level.level()) throw std::invalid_argument("simple function finer than the sample level");
          // The canonical word is the least m-cell containing v, so its prefix
          // is the least N-cell containing v.
          return s.coefficients[vert.id.cell.prefix(s.scale).index()];
        } else if constexpr (std::is_same_v<T, HarmonicFunction>) {
          return harmonic_value(s, vert.id);
        } else {
          const double xy[2] = {vert.x, vert.y};
          return s.expression(xy);
        }
      },
      spec_);
}

double TestFunction::in_cell(const GasketLevel& level, std::size_t cell, int corner) const {
  if (const auto* s = std::get_if<SimpleFunction>(&spec_)) {
    if (s->scale > level.level()) throw std::invalid_argument("simple function finer than the sample level");
    return s->coefficients[cell / cells_below(level.level() - s->scale)];
  }
  return at_vertex(level, level.cell_corners(cell)[corner - 1]);
}

double SampledFunction::min() const { return *std::min_element(values.begin(), values.end()); }
double SampledFunction::max() const { return *std::max_element(values.begin(), values.end()); }

SampledFunction sample(const TestFunction& f, const GasketLevel& level) {
  SampledFunction out;
  out.level = level.level();
  out.values.resize(level.num_vertices());
  for (std::size_t v = 0; v < level.num_vertices(); ++v) out.values[v] = f.at_vertex(level, v);
  out.positive = out.min() > 0.0;
  return out;
}

Functional Functional::parse(const std::string& text) {
  const auto [kind, body] = split_kind(text);
  if (kind == "log") return log();
  if (kind == "power") {
    const auto v = parse_list(body);
    if (v.size() != 1) throw std::invalid_argument("power functional takes one exponent");
    return power(v[0]);
  }
  if (kind == "expr") {
    Functional f;
    f.kind_ = Kind::Expr;
    f.expression_ = Expression::parse(body, {"x"});
    f.description_ = text;
    return f;
  }
  throw std::invalid_argument("unknown functional '" + text + "'");
}

Functional Functional::log() {
  Functional f;
  f.kind_ = Kind::Log;
  f.description_ = "log";
  return f;
}

Functional Functional::power(double p) {
  Functional f;
  f.kind_ = Kind::Power;
  f.exponent_ = p;
  std::ostringstream os;
  os.precision(17);
  os << "power:" << p;
  f.description_ = os.str();
  return f;
}

double Functional::operator()(double x) const {
  switch (kind_) {
    case Kind::Log:
      if (!(x > 0.0)) throw std::domain_error("log functional at a non-positive value");
      return std::log(x);
    case Kind::Power: return std::pow(x, exponent_);
    case Kind::Expr: {
      const double v[1] = {x};
      return std::get<Expression>(expression_)(v);
    }
  }
  return 0.0;
}

}  // namespace gasket
