#include "gasket/eigenbasis.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "gasket/kernels.hpp"

namespace gasket {

namespace {

constexpr double kEigenvalueMatchTol = 1e-8;

Eigen::MatrixXd select_eigenspace(const DenseSpectrum& spec, double gamma, long long expected) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i)
    if (std::abs(spec.values(i) - gamma) < kEigenvalueMatchTol) cols.push_back(i);
  if (static_cast<long long>(cols.size()) != expected)
    throw std::runtime_error("eigenspace for gamma=" + std::to_string(gamma) + " has dimension " +
                             std::to_string(cols.size()) + ", expected " + std::to_string(expected));
  Eigen::MatrixXd out(spec.vectors.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = spec.vectors.col(cols[i]);
  return out;
}

Eigen::MatrixXd interior_to_full(const GasketLevel& level, const Eigen::MatrixXd& interior) {
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(level.num_vertices()), interior.cols());
  for (std::size_t i = 0; i < level.num_interior(); ++i)
    full.row(static_cast<Eigen::Index>(level.interior()[i])) = interior.row(static_cast<Eigen::Index>(i));
  return full;
}

Eigen::MatrixXd full_to_interior(const GasketLevel& level, const Eigen::MatrixXd& full) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(level.num_interior()), full.cols());
  for (std::size_t i = 0; i < level.num_interior(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = full.row(static_cast<Eigen::Index>(level.interior()[i]));
  return out;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

}  // namespace

EigenspaceBuilder::EigenspaceBuilder(const Gasket& gasket, int max_birth) : gasket_(&gasket), max_birth_(max_birth) {
  if (max_birth < 1 || max_birth > gasket.max_level())
    throw std::invalid_argument("max_birth must lie in [1, gasket max level]");
  for (int j = 1; j <= max_birth; ++j) {
    const auto& level = gasket.level(j);
    const DenseSpectrum spec = dense_dirichlet_spectrum(assemble_dirichlet_laplacian(LevelGraph(level)));
    if (j == 1) birth_[{j, Series::Two}] = interior_to_full(level, select_eigenspace(spec, 2.0, 1));
    birth_[{j, Series::Five}] =
        interior_to_full(level, select_eigenspace(spec, 5.0, series_multiplicity(Series::Five, j)));
    if (j >= 2)
      birth_[{j, Series::Six}] =
          interior_to_full(level, select_eigenspace(spec, 6.0, series_multiplicity(Series::Six, j)));
  }
}

const Eigen::MatrixXd& EigenspaceBuilder::birth_space(int j, Series series) const {
  auto it = birth_.find({j, series});
  if (it == birth_.end())
    throw std::out_of_range("no " + to_string(series) + "-series birth space at level " + std::to_string(j));
  return it->second;
}

RawEigenspace EigenspaceBuilder::build(const EigenvalueDescriptor& d, int sample_level, EigenspacePath path) const {
  if (sample_level < d.fixation() || sample_level < d.birth)
    throw std::invalid_argument("sample level below the generation of fixation");
  if (sample_level > gasket_->max_level()) throw std::invalid_argument("sample level exceeds the gasket levels built");
  RawEigenspace out;
  out.descriptor = d;
  out.sample_level = sample_level;
  const auto& level = gasket_->level(sample_level);
  if (path == EigenspacePath::Dense) {
    const DenseSpectrum spec = dense_dirichlet_spectrum(assemble_dirichlet_laplacian(LevelGraph(level)));
    out.vectors = select_eigenspace(spec, d.gamma(sample_level), d.multiplicity);
    return out;
  }
  if (d.birth > max_birth_) throw std::invalid_argument("birth level exceeds the builder's precomputed levels");
  Eigen::MatrixXd full = birth_space(d.birth, d.series);
  for (int k = d.birth + 1; k <= sample_level; ++k) full = kernels::extend_columns(*gasket_, k, full, d.gamma(k));
  out.vectors = orthonormalize(full_to_interior(level, full));
  return out;
}

RawEigenspace eigenspace_vectors(const EigenspaceBuilder& builder, const EigenvalueDescriptor& d, int sample_level,
                                 EigenspacePath path) {
  return builder.build(d, sample_level, path);
}

double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return 1.0;
  const Eigen::MatrixXd residual = b - a * (a.transpose() * b);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

std::ptrdiff_t EigenspaceBasis::column_cell(Eigen::Index col) const {
  for (std::size_t c = 0; c + 1 < cell_begin.size(); ++c)
    if (col >= cell_begin[c] && col < cell_begin[c + 1]) return static_cast<std::ptrdiff_t>(c);
  return -1;
}

Eigen::MatrixXd gram_schmidt_extend(const Eigen::MatrixXd& q, Eigen::Index target) {
  const Eigen::Index d = q.rows();
  if (target > d || target < q.cols()) throw std::invalid_argument("gram_schmidt_extend: bad target size");
  Eigen::MatrixXd basis(d, target);
  basis.leftCols(q.cols()) = q;
  // Residuals of e_1..e_d against the current basis.
  Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(d, d) - q * q.transpose();
  for (Eigen::Index k = q.cols(); k < target; ++k) {
    Eigen::Index pick = 0;
    residual.colwise().norm().maxCoeff(&pick);
    Eigen::VectorXd v = residual.col(pick);
    // Second pass against everything chosen so far.
    v -= basis.leftCols(k) * (basis.leftCols(k).transpose() * v);
    const double norm = v.norm();
    if (norm < 1e-12) throw std::runtime_error("gram_schmidt_extend: candidates exhausted");
    v /= norm;
    basis.col(k) = v;
    residual -= v * (v.transpose() * residual);
  }
  return basis;
}

EigenspaceBasis localize_basis(const Gasket& gasket, const RawEigenspace& raw, int scale,
                               const LocalizeOptions& options) {
  if (scale < 0) throw std::invalid_argument("localization scale must be nonnegative");
  const auto& level = gasket.level(raw.sample_level);
  EigenspaceBasis out;
  out.descriptor = raw.descriptor;
  out.sample_level = raw.sample_level;
  out.scale = scale;
  out.weight = QuadratureScheme(level).interior_weight();
  const double unscale = 1.0 / std::sqrt(out.weight);
  const Eigen::Index d = raw.vectors.cols();

  if (scale >= raw.descriptor.birth || scale > raw.sample_level) {
    out.scale_warning = true;
    out.vectors = raw.vectors * unscale;
    const std::size_t ncells = scale > raw.sample_level ? 0 : enumerate_cells(scale).size();
    out.cell_begin.assign(ncells + 1, 0);
    return out;
  }

  const auto cells = enumerate_cells(scale);
  std::vector<std::vector<Eigen::Index>> outside(cells.size());
  for (std::size_t i = 0; i < level.num_interior(); ++i) {
    const auto& p = level.vertex(level.interior()[i]).lattice;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!cell_contains(cells[c], p)) outside[c].push_back(static_cast<Eigen::Index>(i));
  }
  const auto nulls = options.parallel ? kernels::restricted_nullspaces(raw.vectors, outside, options.threshold)
                                      : kernels::restricted_nullspaces_serial(raw.vectors, outside, options.threshold);

  out.cell_begin.assign(cells.size() + 1, 0);
  Eigen::Index localized = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    localized += nulls[c].cols();
    out.cell_begin[c + 1] = localized;
  }
  if (localized > d) throw std::runtime_error("localized subspaces overlap; threshold too loose");
  Eigen::MatrixXd coeffs(d, localized);
  for (std::size_t c = 0; c < cells.size(); ++c)
    coeffs.middleCols(out.cell_begin[c], nulls[c].cols()) = nulls[c];
  const Eigen::MatrixXd full = gram_schmidt_extend(coeffs, d);
  out.vectors = raw.vectors * full * unscale;
  return out;
}

double orthonormality_check(const EigenspaceBasis& b) {
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(b.vectors.rows(), b.weight);
  const Eigen::MatrixXd g = kernels::weighted_gram(b.vectors, w);
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double cross_orthogonality(const EigenspaceBasis& a, const EigenspaceBasis& b) {
  if (a.sample_level != b.sample_level) throw std::invalid_argument("bases sampled on different levels");
  if (a.dimension() == 0 || b.dimension() == 0) return 0.0;
  return (a.weight * (a.vectors.transpose() * b.vectors)).cwiseAbs().maxCoeff();
}

}  // namespace gasket
