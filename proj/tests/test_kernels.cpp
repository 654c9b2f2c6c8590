#include <gtest/gtest.h>

#include <random>

#include "gasket/eigenbasis.hpp"
#include "gasket/kernels.hpp"

using namespace gasket;

namespace {
Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = n(rng);
  return m;
}
}  // namespace

TEST(Kernels, ExtensionSerialMatchesParallel) {
  const Gasket g(5);
  for (int k = 1; k <= 5; ++k) {
    const auto in = random_matrix(static_cast<Eigen::Index>(g.level(k - 1).num_vertices()), 17, k);
    const auto a = kernels::extend_columns(g, k, in, 0.37);
    const auto b = kernels::extend_columns_serial(g, k, in, 0.37);
    EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
  }
  const auto in = random_matrix(3, 1, 1);
  EXPECT_THROW(kernels::extend_columns(g, 2, in, 0.5), std::invalid_argument);
  EXPECT_THROW(kernels::extend_columns(g, 9, in, 0.5), std::out_of_range);
}

TEST(Kernels, GramSerialMatchesParallel) {
  const auto u = random_matrix(400, 60, 7);
  Eigen::VectorXd w = random_matrix(400, 1, 8).col(0).cwiseAbs();
  const auto a = kernels::weighted_gram(u, w);
  const auto b = kernels::weighted_gram_serial(u, w);
  EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((a - u.transpose() * w.asDiagonal() * u).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(kernels::weighted_gram(u, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST(Kernels, NullspacesAgreeOnRealEigenspace) {
  const Gasket g(5);
  const EigenspaceBuilder builder(g, 4);
  const auto raw = builder.build(make_descriptor(Series::Six, 4, {}, 5), 5);
  const auto& level = g.level(5);
  // Row sets: interior vertices outside each 1-cell and each 2-cell.
  for (int n : {1, 2}) {
    std::vector<std::vector<Eigen::Index>> sets;
    for (const auto& cell : enumerate_cells(n)) {
      std::vector<Eigen::Index> rows;
      for (std::size_t i = 0; i < level.num_interior(); ++i)
        if (!cell_contains(cell, level.vertex(level.interior()[i]).lattice)) rows.push_back(static_cast<Eigen::Index>(i));
      sets.push_back(rows);
    }
    const auto par = kernels::restricted_nullspaces(raw.vectors, sets, kNullspaceThreshold);
    const auto ser = kernels::restricted_nullspaces_serial(raw.vectors, sets, kNullspaceThreshold);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      ASSERT_EQ(par[i].cols(), ser[i].cols());
      EXPECT_GT(par[i].cols(), 0);
      EXPECT_LE(subspace_distance(par[i], ser[i]), 1e-8);
    }
  }
}

TEST(Kernels, NullspaceEdgeCases) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(4, 2);
  const auto none = kernels::restricted_nullspaces(q, {{}}, 1e-8);
  EXPECT_EQ(none[0].cols(), 2);
  const auto all = kernels::restricted_nullspaces(q, {{0, 1, 2, 3}}, 1e-8);
  EXPECT_EQ(all[0].cols(), 0);
  const auto one = kernels::restricted_nullspaces_serial(q, {{0}}, 1e-8);
  ASSERT_EQ(one[0].cols(), 1);
  EXPECT_NEAR(std::abs(one[0](1, 0)), 1.0, 1e-14);
}
