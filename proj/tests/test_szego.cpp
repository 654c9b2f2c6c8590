#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gasket/szego.hpp"

using namespace gasket;

namespace {
const Gasket& shared_gasket() {
  static const Gasket g(7);
  return g;
}
const EigenspaceBuilder& shared_builder() {
  static const EigenspaceBuilder b(shared_gasket(), 5);
  return b;
}
EigenspaceBasis six_basis(int j, int N) {
  const int mq = default_sample_level(j);
  return localize_basis(shared_gasket(), shared_builder().build(canonical_descriptor(Series::Six, j, mq), mq), N);
}
SampledFunction sampled(const std::string& spec, int level) {
  return sample(TestFunction::parse(spec), shared_gasket().level(level));
}
}  // namespace

TEST(LogDet, Basics) {
  EXPECT_EQ(log_det(Eigen::MatrixXd::Identity(5, 5)), 0.0);
  EXPECT_NEAR(log_det(Eigen::Vector3d(1, 2, 3).asDiagonal().toDenseMatrix()), std::log(6.0), 1e-15);
  EXPECT_THROW(log_det(Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix()), NumericalError);
  EXPECT_EQ(log_det(Eigen::MatrixXd(0, 0)), 0.0);
}

TEST(Assemble, ConstantFunctions) {
  const auto basis = six_basis(3, 1);
  const auto one = assemble_compressed(sampled("constant:1", basis.sample_level), basis);
  const auto d = one.dimension();
  EXPECT_LE((one.matrix() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
  const auto c = assemble_compressed(sampled("constant:2.5", basis.sample_level), basis);
  EXPECT_LE((c.matrix() - 2.5 * Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(log_det(c), static_cast<double>(d) * std::log(2.5), 1e-9);
  EXPECT_THROW(assemble_compressed(sampled("constant:1", 3), basis), std::invalid_argument);
}

TEST(Assemble, SerialMatchesParallel) {
  const auto basis = six_basis(4, 1);
  const auto f = sampled("harmonic:1,2,1.5", basis.sample_level);
  EXPECT_EQ((assemble_block(f, basis, true).matrix - assemble_block(f, basis, false).matrix).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assemble, SimpleFunctionBlockStructure) {
  const auto basis = six_basis(3, 1);
  const auto op = assemble_compressed(sampled("simple:1,2,3", basis.sample_level), basis);
  const Eigen::MatrixXd m = op.matrix();
  const auto nl = basis.num_localized();
  double off = 0.0, diag = 0.0;
  for (Eigen::Index a = 0; a < nl; ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      const auto ca = basis.column_cell(a);
      const auto cb = basis.column_cell(b);
      if (b < nl && ca == cb) {
        diag = std::max(diag, std::abs(m(a, b) - (a == b ? static_cast<double>(ca + 1) : 0.0)));
      } else {
        off = std::max(off, std::abs(m(a, b)));
      }
    }
  EXPECT_LE(diag, 1e-10);
  EXPECT_LE(off, 1e-10);
}

TEST(Assemble, EigenvaluesInRangeOfF) {
  const auto basis = six_basis(4, 1);
  const auto f = sampled("simple:1,2,3", basis.sample_level);
  const auto sigma = operator_eigenvalues(assemble_compressed(f, basis));
  EXPECT_GE(sigma.minCoeff(), 1.0 - 1e-8);
  EXPECT_LE(sigma.maxCoeff(), 3.0 + 1e-8);
}

TEST(Spectral, LogMatchesLogDet) {
  const auto basis = six_basis(4, 1);
  const auto op = assemble_compressed(sampled("harmonic:1,2,1", basis.sample_level), basis);
  const double ld = log_det(op);
  double sum = 0.0;
  const auto sigma = operator_eigenvalues(op);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) sum += std::log(sigma(i));
  EXPECT_NEAR(ld, sum, 1e-8 * std::max(1.0, std::abs(ld)));
  EXPECT_NEAR(spectral_functional(op, Functional::log()), ld / static_cast<double>(op.dimension()), 1e-8);
  const auto c = assemble_compressed(sampled("constant:3", basis.sample_level), basis);
  EXPECT_NEAR(spectral_functional(c, Functional::power(2)), 9.0, 1e-9);
}

TEST(Sweep, ErrorBoundSingleCase) {
  const auto basis = six_basis(4, 1);
  const auto r = szego_single_eigenspace_sweep(shared_gasket(), TestFunction::parse("simple:1,2,3"), {basis});
  ASSERT_EQ(r.records.size(), 1u);
  const auto& rec = r.records.front();
  EXPECT_EQ(rec.dimension, 39);
  EXPECT_EQ(rec.num_localized, 36);
  EXPECT_GE(rec.error, 0.0);
  EXPECT_LE(rec.error, rec.bound);
  EXPECT_NEAR(rec.integral, std::log(6.0) / 3.0, 1e-14);
}

TEST(Sweep, ConstantIsExact) {
  const auto bases = single_eigenspace_bases(shared_builder(), Series::Six, 1, 4, 1);
  EXPECT_EQ(bases.size(), 3u);  // j = 1 impossible for the 6-series, skipped as j <= N
  const auto r = szego_single_eigenspace_sweep(shared_gasket(), TestFunction::parse("constant:1"), bases);
  for (const auto& rec : r.records) EXPECT_LE(rec.error, 1e-9);
}

TEST(Sweep, CutoffConstantAndCounts) {
  std::vector<std::vector<EigenspaceBasis>> levels;
  std::vector<int> ms;
  for (int m = 2; m <= 4; ++m) {
    levels.push_back(cutoff_bases(shared_builder(), m, 2));
    ms.push_back(m);
  }
  const auto r = szego_cutoff_sweep(shared_gasket(), TestFunction::parse("constant:2"), levels, ms);
  ASSERT_EQ(r.records.size(), 3u);
  for (const auto& rec : r.records) {
    EXPECT_LE(rec.error, 1e-9);
    EXPECT_LE(rec.blockwise_gap, 1e-8);
  }
  EXPECT_EQ(r.records.back().dimension, 120);
  // m = 4, N = 2: two-series 8, five j=1 16, five j=2 12, six j=2 6.
  EXPECT_EQ(r.records.back().outside_gamma_n_dim, 42);
  // Bookkeeping sum with the unhalved 6-series term is an upper bound.
  const int m = 4, N = 2;
  long long bookkeeping = 1LL << (m - 1);
  for (int j = 1; j <= N; ++j) bookkeeping += (1LL << (m - j - 1)) * (static_cast<long long>(std::pow(3, j - 1)) + 3);
  for (int j = 2; j <= N; ++j) bookkeeping += (1LL << (m - j - 2)) * 2 * (static_cast<long long>(std::pow(3, j)) - 3);
  EXPECT_EQ(bookkeeping, 48);
  EXPECT_LE(r.records.back().outside_gamma_n_dim, bookkeeping);
  // Gamma_2 at m = 4: five j=3 (2), five j=4 (1), six j=3 (1), six j=4 (1).
  EXPECT_EQ(r.records.back().gamma_n_count, 5);
}

TEST(RateFit, Synthetic) {
  std::vector<double> d{3, 12, 39, 120, 363}, e;
  for (double x : d) e.push_back(2.0 * std::pow(x, -0.5));
  const auto fit = fit_rate(d, e);
  EXPECT_NEAR(fit.exponent, 0.5, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(2.0), 1e-12);
  EXPECT_EQ(fit_rate({1}, {1}).points, 1u);
  EXPECT_THROW(fit_rate({1, 2}, {1}), std::invalid_argument);
}

TEST(Rates, Beta) {
  EXPECT_NEAR(szego_beta(1.0), 1.0 - std::log(3.0) / std::log(5.0), 1e-15);
  EXPECT_NEAR(szego_beta_cutoff(1.0), szego_beta(1.0) * (1.0 - std::log(2.0) / std::log(3.0)), 1e-15);
  EXPECT_LT(szego_beta(0.5), szego_beta(1.0));
}

TEST(Riemann, Points) {
  for (Eigen::Index d : {1, 3, 12, 39, 120}) {
    const auto pts = riemann_points(d);
    ASSERT_EQ(static_cast<Eigen::Index>(pts.size()), d);
    std::set<VertexId> distinct(pts.begin(), pts.end());
    EXPECT_EQ(static_cast<Eigen::Index>(distinct.size()), d);
  }
  EXPECT_TRUE(riemann_points(0).empty());
}

TEST(Equidistribution, ConstantIsExact) {
  const auto basis = six_basis(4, 1);
  const auto f = TestFunction::parse("constant:2");
  const auto op = assemble_compressed(sample(f, shared_gasket().level(basis.sample_level)), basis);
  for (const auto& F : {Functional::power(1), Functional::power(2), Functional::log()}) {
    const auto e = equidistribution_compare(shared_gasket(), op, f, F, basis.sample_level + 1);
    EXPECT_LE(e.gap, 1e-9);
    EXPECT_LE(e.integral_gap, 1e-9);
  }
}

TEST(Equidistribution, ErrorBoundForSimpleFunction) {
  const auto basis = six_basis(5, 1);
  const auto f = TestFunction::parse("simple:1,2,3");
  const auto op = assemble_compressed(sample(f, shared_gasket().level(basis.sample_level)), basis);
  const auto F = Functional::power(2);
  const auto e = equidistribution_compare(shared_gasket(), op, f, F, basis.sample_level + 1);
  const double alpha_over_d = static_cast<double>(basis.num_nonlocalized()) / static_cast<double>(basis.dimension());
  EXPECT_LE(e.integral_gap, 2.0 * alpha_over_d * 9.0 + 1e-12);
}
