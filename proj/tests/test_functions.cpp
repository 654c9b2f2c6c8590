#include <gtest/gtest.h>

#include <cmath>

#include "gasket/expression.hpp"
#include "gasket/functions.hpp"
#include "gasket/laplacian.hpp"

using namespace gasket;

namespace {
double eval(const std::string& text, double x = 0.0, double y = 0.0) {
  const double v[2] = {x, y};
  return Expression::parse(text, {"x", "y"})(v);
}
}  // namespace

TEST(Expression, Arithmetic) {
  EXPECT_DOUBLE_EQ(eval("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2) * 3"), 9.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ 3 ^ 2"), 512.0);
  EXPECT_DOUBLE_EQ(eval("-2 ^ 2"), -4.0);
  EXPECT_DOUBLE_EQ(eval("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(eval("1.5e1 - 5"), 10.0);
  EXPECT_DOUBLE_EQ(eval("x * y + x", 2.0, 3.0), 8.0);
  EXPECT_NEAR(eval("sin(pi / 2) + cos(0) + exp(0) + log(1) + sqrt(4) + abs(-1) + tan(0)"), 6.0, 1e-15);
}

TEST(Expression, Errors) {
  EXPECT_THROW(eval("1 +"), std::invalid_argument);
  EXPECT_THROW(eval("(1"), std::invalid_argument);
  EXPECT_THROW(eval("z"), std::invalid_argument);
  EXPECT_THROW(eval("foo(1)"), std::invalid_argument);
  EXPECT_THROW(eval("1 2"), std::invalid_argument);
}

TEST(TestFunction, ParseAndEvaluate) {
  const GasketLevel level(3);
  const auto c = sample(TestFunction::parse("constant:2.5"), level);
  EXPECT_TRUE(c.positive);
  EXPECT_EQ(c.min(), 2.5);
  EXPECT_EQ(c.max(), 2.5);
  EXPECT_THROW(TestFunction::parse("simple:1,2"), std::invalid_argument);
  EXPECT_THROW(TestFunction::parse("wavy:1"), std::invalid_argument);
  EXPECT_THROW(TestFunction::parse("harmonic:1,2"), std::invalid_argument);
  const auto e = sample(TestFunction::parse("expr:1 + x"), level);
  for (std::size_t v = 0; v < level.num_vertices(); ++v) EXPECT_DOUBLE_EQ(e.values[v], 1.0 + level.vertex(v).x);
  EXPECT_FALSE(sample(TestFunction::parse("expr:x - 0.5"), level).positive);
}

TEST(TestFunction, SimpleOwningCell) {
  const GasketLevel level(2);
  const auto f = TestFunction::parse("simple:1,2,3");
  // Midpoint shared by cells 1 and 2 takes the value of cell 1.
  const auto p = level.find(lattice_point(VertexId{CellAddress::parse("1"), 2}));
  ASSERT_GE(p, 0);
  EXPECT_EQ(f.at_vertex(level, static_cast<std::size_t>(p)), 1.0);
  const auto q = level.find(lattice_point(VertexId{CellAddress::parse("2"), 3}));
  EXPECT_EQ(f.at_vertex(level, static_cast<std::size_t>(q)), 2.0);
  // Seen from inside each cell the value is that cell's coefficient.
  for (std::size_t c = 0; c < level.num_cells(); ++c)
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(f.in_cell(level, c, k), static_cast<double>(1 + c / 3));
}

TEST(TestFunction, Harmonic) {
  const HarmonicFunction h{{1.0, 2.0, 4.0}};
  EXPECT_DOUBLE_EQ(harmonic_value(h, VertexId{CellAddress::parse("1"), 1}), 1.0);
  // 1/5-2/5 rule on the q1-q2 midpoint.
  EXPECT_DOUBLE_EQ(harmonic_value(h, VertexId{CellAddress::parse("1"), 2}), (2 * 1.0 + 2 * 2.0 + 4.0) / 5);
  // Discrete harmonic on every level: Delta_4 f = 0 at interior vertices.
  const GasketLevel level(4);
  const auto f = sample(TestFunction::parse("harmonic:1,2,4"), level);
  EXPECT_GE(f.min(), 1.0);
  EXPECT_LE(f.max(), 4.0);
  const auto emb = Gasket(4).embedding(0, 4);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(f.values[emb[i]], h.boundary[i]);
  const LevelGraph g(level);
  for (auto v : level.interior()) {
    double sum = 0.0;
    for (auto n : g.neighbors(v)) sum += f.values[n];
    EXPECT_NEAR(sum - 4.0 * f.values[v], 0.0, 1e-12);
  }
}

TEST(Functional, Parse) {
  EXPECT_DOUBLE_EQ(Functional::parse("log")(std::exp(2.0)), 2.0);
  EXPECT_DOUBLE_EQ(Functional::parse("power:2")(3.0), 9.0);
  EXPECT_DOUBLE_EQ(Functional::parse("expr:x^2 + 1")(2.0), 5.0);
  EXPECT_THROW(Functional::parse("cube"), std::invalid_argument);
}
