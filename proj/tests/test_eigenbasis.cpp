#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gasket/eigenbasis.hpp"
#include "gasket/szego.hpp"

using namespace gasket;

namespace {
long long pow3(int n) { return static_cast<long long>(std::llround(std::pow(3.0, n))); }

const Gasket& shared_gasket() {
  static const Gasket g(7);
  return g;
}
const EigenspaceBuilder& shared_builder() {
  static const EigenspaceBuilder b(shared_gasket(), 5);
  return b;
}

double max_residual(const RawEigenspace& raw) {
  const auto L = assemble_dirichlet_laplacian(LevelGraph(shared_gasket().level(raw.sample_level)));
  const double gamma = raw.descriptor.gamma(raw.sample_level);
  double r = 0.0;
  for (Eigen::Index k = 0; k < raw.vectors.cols(); ++k)
    r = std::max(r, (apply_negative_laplacian(L, raw.vectors.col(k)) - gamma * raw.vectors.col(k)).norm());
  return r;
}
}  // namespace

TEST(Eigenspace, Dimensions) {
  const auto& b = shared_builder();
  EXPECT_EQ(b.build(make_descriptor(Series::Five, 1, {}, 3), 3).vectors.cols(), 2);
  EXPECT_EQ(b.build(make_descriptor(Series::Six, 2, {}, 3), 3).vectors.cols(), 3);
  EXPECT_EQ(b.build(make_descriptor(Series::Two, 1, {}, 4), 4).vectors.cols(), 1);
  EXPECT_THROW(b.build(make_descriptor(Series::Five, 1, {1, 1}, 3), 2), std::invalid_argument);
}

TEST(Eigenspace, DecimationMatchesDensePath) {
  const auto& b = shared_builder();
  for (const auto& e : enumerate_spectrum(4).entries) {
    const auto d = make_descriptor(e.series, e.birth, e.signs, 5);
    const auto fast = b.build(d, 5, EigenspacePath::Decimation);
    const auto slow = b.build(d, 5, EigenspacePath::Dense);
    EXPECT_LE(subspace_distance(fast.vectors, slow.vectors), 1e-8);
    EXPECT_LE(max_residual(fast), 1e-9);
  }
}

TEST(Eigenspace, RandomExtendedVectorsHaveSmallResidual) {
  const auto& b = shared_builder();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  const auto table = enumerate_spectrum(4);
  for (int t = 0; t < 40; ++t) {
    const auto& e = table.entries[static_cast<std::size_t>(rng() % table.entries.size())];
    const int mq = 5 + static_cast<int>(rng() % 2);
    const auto raw = b.build(make_descriptor(e.series, e.birth, e.signs, mq), mq);
    Eigen::VectorXd c(raw.vectors.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = n(rng);
    RawEigenspace one = raw;
    one.vectors = raw.vectors * c.normalized();
    EXPECT_LE(max_residual(one), 1e-9);
  }
}

TEST(Localize, SixSeriesExamples) {
  const auto& g = shared_gasket();
  const auto& b = shared_builder();
  const auto basis = localize_basis(g, b.build(make_descriptor(Series::Six, 3, {}, 4), 4), 1);
  EXPECT_EQ(basis.num_localized(), 9);
  EXPECT_EQ(basis.num_nonlocalized(), 3);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(basis.cell_dimension(c), 3);
  const auto b4 = localize_basis(g, b.build(make_descriptor(Series::Six, 4, {}, 5), 5), 1);
  EXPECT_EQ(b4.cell_dimension(0), 12);
  EXPECT_FALSE(b4.scale_warning);
}

TEST(Localize, SixSeriesFormulas) {
  const auto& g = shared_gasket();
  const auto& b = shared_builder();
  for (int j = 2; j <= 5; ++j) {
    const auto raw = b.build(make_descriptor(Series::Six, j, {}, j + 1), j + 1);
    for (int N = 1; N < j; ++N) {
      const auto basis = localize_basis(g, raw, N);
      EXPECT_EQ(basis.num_localized(), six_series_localized_dim(j, N));
      EXPECT_EQ(basis.num_nonlocalized(), six_series_nonlocalized_dim(N));
      for (std::size_t c = 0; c < static_cast<std::size_t>(pow3(N)); ++c)
        EXPECT_EQ(basis.cell_dimension(c), six_series_cell_dim(j, N));
      EXPECT_EQ(six_series_localized_dim(j, N), pow3(N) * six_series_cell_dim(j, N));
    }
  }
}

TEST(Localize, InvariantsOfOneBasis) {
  const auto& g = shared_gasket();
  const auto& b = shared_builder();
  const auto raw = b.build(make_descriptor(Series::Six, 4, {}, 5), 5);
  const auto basis = localize_basis(g, raw, 2);
  EXPECT_EQ(basis.dimension(), raw.vectors.cols());
  EXPECT_LE(orthonormality_check(basis), 1e-10);
  // Localized columns vanish outside their cell.
  const auto& level = g.level(5);
  const auto cells = enumerate_cells(2);
  double leak = 0.0;
  for (Eigen::Index k = 0; k < basis.num_localized(); ++k) {
    const auto& cell = cells[static_cast<std::size_t>(basis.column_cell(k))];
    for (std::size_t i = 0; i < level.num_interior(); ++i)
      if (!cell_contains(cell, level.vertex(level.interior()[i]).lattice))
        leak = std::max(leak, std::abs(basis.vectors(static_cast<Eigen::Index>(i), k)));
  }
  EXPECT_LE(leak, 1e-10);
  EXPECT_EQ(basis.column_cell(basis.dimension() - 1), -1);
  // Span preserved.
  EXPECT_LE(subspace_distance(raw.vectors, basis.vectors * std::sqrt(basis.weight)), 1e-8);
}

TEST(Localize, ScaleWarning) {
  const auto& g = shared_gasket();
  const auto basis = localize_basis(g, shared_builder().build(make_descriptor(Series::Six, 2, {}, 3), 3), 2);
  EXPECT_TRUE(basis.scale_warning);
  EXPECT_EQ(basis.num_localized(), 0);
  EXPECT_EQ(basis.num_nonlocalized(), 3);
}

TEST(Localize, SerialReferenceAgrees) {
  const auto& g = shared_gasket();
  const auto raw = shared_builder().build(make_descriptor(Series::Six, 4, {}, 5), 5);
  const auto a = localize_basis(g, raw, 1, {kNullspaceThreshold, true});
  const auto b = localize_basis(g, raw, 1, {kNullspaceThreshold, false});
  EXPECT_EQ(a.cell_begin, b.cell_begin);
  EXPECT_LE(orthonormality_check(b), 1e-10);
}

TEST(Localize, FiveSeriesNonlocalizedCount) {
  const auto& g = shared_gasket();
  const auto& b = shared_builder();
  for (int j = 2; j <= 5; ++j) {
    const auto raw = b.build(make_descriptor(Series::Five, j, {}, j + 1), j + 1);
    for (int N = 1; N < j; ++N) {
      const auto basis = localize_basis(g, raw, N);
      EXPECT_EQ(basis.num_nonlocalized(), (pow3(N) + 3) / 2) << j << " " << N;
      EXPECT_NE(basis.num_nonlocalized(), (pow3(N) - 3) / 2);
    }
  }
}

TEST(Orthonormality, DetectsDoubledColumn) {
  const auto& g = shared_gasket();
  auto basis = localize_basis(g, shared_builder().build(make_descriptor(Series::Six, 3, {}, 4), 4), 1);
  basis.vectors.col(1) = basis.vectors.col(0);
  EXPECT_NEAR(orthonormality_check(basis), 1.0, 1e-10);
}

TEST(Orthonormality, DistinctEigenvalues) {
  const auto& g = shared_gasket();
  const auto& b = shared_builder();
  const auto x = localize_basis(g, b.build(make_descriptor(Series::Six, 3, {}, 5), 5), 1);
  const auto y = localize_basis(g, b.build(make_descriptor(Series::Five, 2, {1}, 5), 5), 1);
  const auto z = localize_basis(g, b.build(make_descriptor(Series::Two, 1, {}, 5), 5), 1);
  EXPECT_LE(cross_orthogonality(x, y), 1e-9);
  EXPECT_LE(cross_orthogonality(x, z), 1e-9);
  EXPECT_LE(cross_orthogonality(y, z), 1e-9);
}

TEST(GramSchmidt, Extend) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(4, 1);
  q(0, 0) = 1.0;
  const auto full = gram_schmidt_extend(q, 4);
  EXPECT_LE((full.transpose() * full - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(full.col(0), q.col(0));
  EXPECT_THROW(gram_schmidt_extend(q, 5), std::invalid_argument);
}
