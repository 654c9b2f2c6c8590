#include "gasket/szego.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "gasket/kernels.hpp"

namespace gasket {

namespace {

long long ipow3(int n) {
  long long r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXd interior_weights(const SampledFunction& f, const EigenspaceBasis& basis, const GasketLevel& level) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(level.num_interior()));
  for (std::size_t i = 0; i < level.num_interior(); ++i)
    w(static_cast<Eigen::Index>(i)) = basis.weight * f.values[level.interior()[i]];
  return w;
}

double max_min_ratio(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

}  // namespace

Eigen::Index CompressedOperator::dimension() const {
  Eigen::Index d = 0;
  for (const auto& b : blocks) d += b.matrix.rows();
  return d;
}

Eigen::MatrixXd CompressedOperator::matrix() const {
  const Eigen::Index d = dimension();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    m.block(at, at, b.matrix.rows(), b.matrix.cols()) = b.matrix;
    at += b.matrix.rows();
  }
  return m;
}

OperatorBlock assemble_block(const SampledFunction& f, const EigenspaceBasis& basis, bool parallel) {
  if (f.level != basis.sample_level) throw std::invalid_argument("function and basis sampled on different levels");
  // Levels are rebuilt cheaply here; only the interior ordering is needed.
  const GasketLevel level(basis.sample_level);
  const Eigen::VectorXd w = interior_weights(f, basis, level);
  OperatorBlock out;
  out.descriptor = basis.descriptor;
  out.matrix = parallel ? kernels::weighted_gram(basis.vectors, w) : kernels::weighted_gram_serial(basis.vectors, w);
  out.num_localized = basis.num_localized();
  out.cell_begin = basis.cell_begin;
  return out;
}

CompressedOperator assemble_compressed(const SampledFunction& f, const EigenspaceBasis& basis) {
  CompressedOperator op;
  op.blocks.push_back(assemble_block(f, basis));
  return op;
}

CompressedOperator assemble_compressed(const SampledFunction& f, const std::vector<EigenspaceBasis>& bases) {
  CompressedOperator op;
  op.blocks.resize(bases.size());
  if (bases.empty()) return op;
  const GasketLevel level(bases.front().sample_level);
  const auto n = static_cast<std::ptrdiff_t>(bases.size());
  for (const auto& b : bases)
    if (b.sample_level != f.level) throw std::invalid_argument("function and basis sampled on different levels");
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& basis = bases[i];
    OperatorBlock& block = op.blocks[i];
    block.descriptor = basis.descriptor;
    block.matrix = kernels::weighted_gram_serial(basis.vectors, interior_weights(f, basis, level));
    block.num_localized = basis.num_localized();
    block.cell_begin = basis.cell_begin;
  }
  return op;
}

double log_det(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalError("compressed operator is not positive definite (f <= 0 somewhere?)");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double log_det(const CompressedOperator& op) { return log_det(op.matrix()); }

double log_det_blockwise(const CompressedOperator& op) {
  double sum = 0.0;
  for (const auto& b : op.blocks) sum += log_det(b.matrix);
  return sum;
}

Eigen::VectorXd operator_eigenvalues(const CompressedOperator& op) {
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(op.dimension()));
  for (const auto& b : op.blocks) {
    if (b.matrix.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.matrix, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) all.push_back(es.eigenvalues()(i));
  }
  std::sort(all.begin(), all.end());
  return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

double spectral_functional(const CompressedOperator& op, const Functional& F) {
  const Eigen::VectorXd sigma = operator_eigenvalues(op);
  if (sigma.size() == 0) throw std::invalid_argument("spectral functional of an empty operator");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) sum += F(sigma(i));
  return sum / static_cast<double>(sigma.size());
}

double reference_integral(const TestFunction& f, const Functional& F, const GasketLevel& level) {
  return QuadratureScheme(level).integrate_cellwise(
      [&](std::size_t cell, int corner) { return F(f.in_cell(level, cell, corner)); });
}

double log_l1_norm(const TestFunction& f, const GasketLevel& level) {
  return QuadratureScheme(level).integrate_cellwise(
      [&](std::size_t cell, int corner) { return std::abs(std::log(f.in_cell(level, cell, corner))); });
}

EigenvalueDescriptor canonical_descriptor(Series series, int birth, int sample_level) {
  return make_descriptor(series, birth, {}, sample_level);
}

int default_sample_level(int index) { return std::min(index + 1, kMaxSampleLevel); }

long long six_series_localized_dim(int j, int scale) { return (ipow3(j) - ipow3(scale + 1)) / 2; }
long long six_series_nonlocalized_dim(int scale) { return (ipow3(scale + 1) - 3) / 2; }
long long six_series_cell_dim(int j, int scale) { return (ipow3(j - scale) - 3) / 2; }

RateFit fit_rate(const std::vector<double>& dims, const std::vector<double>& errors) {
  if (dims.size() != errors.size()) throw std::invalid_argument("fit_rate: size mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (errors[i] > 0.0 && dims[i] > 0.0) {
      xs.push_back(std::log(dims[i]));
      ys.push_back(std::log(errors[i]));
    }
  RateFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) return fit;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = xs[i];
    y(static_cast<Eigen::Index>(i)) = ys[i];
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
  fit.intercept = coef(0);
  fit.exponent = -coef(1);
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  const double ss_res = (y - a * coef).squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double szego_beta(double alpha) {
  const double l = alpha * std::log(5.0 / 3.0);
  return l / (std::log(3.0) + l);
}

double szego_beta_cutoff(double alpha) { return szego_beta(alpha) * (1.0 - std::log(2.0) / std::log(3.0)); }

std::vector<EigenspaceBasis> single_eigenspace_bases(const EigenspaceBuilder& builder, Series series, int j_lo,
                                                     int j_hi, int scale, int sample_level,
                                                     const LocalizeOptions& options) {
  std::vector<EigenspaceBasis> out;
  for (int j = j_lo; j <= j_hi; ++j) {
    if (j <= scale) continue;
    const int mq = sample_level > 0 ? sample_level : default_sample_level(j);
    const auto d = canonical_descriptor(series, j, mq);
    out.push_back(localize_basis(builder.gasket(), builder.build(d, mq), scale, options));
  }
  return out;
}

std::vector<EigenspaceBasis> cutoff_bases(const EigenspaceBuilder& builder, int m, int scale, int sample_level,
                                          const LocalizeOptions& options) {
  const int mq = sample_level > 0 ? sample_level : default_sample_level(m);
  const SpectrumTable table = enumerate_spectrum(m);
  std::vector<EigenspaceBasis> out;
  out.reserve(table.entries.size());
  for (const auto& e : table.entries) {
    const auto d = make_descriptor(e.series, e.birth, e.signs, mq);
    out.push_back(localize_basis(builder.gasket(), builder.build(d, mq), scale, options));
  }
  return out;
}

SweepResult szego_single_eigenspace_sweep(const Gasket& gasket, const TestFunction& f,
                                          const std::vector<EigenspaceBasis>& bases) {
  SweepResult result;
  std::vector<double> dims, errors, scaled;
  for (const auto& basis : bases) {
    const auto t0 = std::chrono::steady_clock::now();
    const SampledFunction fs = sample(f, gasket.level(basis.sample_level));
    if (!fs.positive) throw std::invalid_argument("log det requires a positive function");
    const CompressedOperator op = assemble_compressed(fs, basis);
    const GasketLevel& ref = gasket.level(basis.sample_level + 1);
    SzegoRecord r;
    r.mode = "single";
    r.index = basis.descriptor.birth;
    r.sample_level = basis.sample_level;
    r.dimension = basis.dimension();
    r.logdet_over_d = log_det(op) / static_cast<double>(r.dimension);
    r.integral = reference_integral(f, Functional::log(), ref);
    r.error = std::abs(r.logdet_over_d - r.integral);
    r.num_localized = basis.num_localized();
    r.bound = static_cast<double>(basis.num_nonlocalized()) / static_cast<double>(r.dimension) *
              (log_l1_norm(f, ref) + fs.max());
    r.runtime_seconds = seconds_since(t0);
    dims.push_back(static_cast<double>(r.dimension));
    errors.push_back(r.error);
    scaled.push_back(static_cast<double>(r.dimension) * r.error);
    result.records.push_back(r);
  }
  result.fit = fit_rate(dims, errors);
  result.scaled_error_ratio = max_min_ratio(scaled);
  return result;
}

SweepResult szego_cutoff_sweep(const Gasket& gasket, const TestFunction& f,
                               const std::vector<std::vector<EigenspaceBasis>>& levels, const std::vector<int>& ms) {
  if (levels.size() != ms.size()) throw std::invalid_argument("cutoff sweep: one basis set per level");
  SweepResult result;
  std::vector<double> dims, errors, scaled;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& bases = levels[i];
    if (bases.empty()) continue;
    const int mq = bases.front().sample_level;
    const SampledFunction fs = sample(f, gasket.level(mq));
    if (!fs.positive) throw std::invalid_argument("log det requires a positive function");
    const CompressedOperator op = assemble_compressed(fs, bases);
    SzegoRecord r;
    r.mode = "cutoff";
    r.index = ms[i];
    r.sample_level = mq;
    r.dimension = op.dimension();
    const double full = log_det(op);
    const double blockwise = log_det_blockwise(op);
    r.logdet_over_d = full / static_cast<double>(r.dimension);
    r.blockwise_gap = std::abs(full - blockwise) / std::max(1.0, std::abs(full));
    r.integral = reference_integral(f, Functional::log(), gasket.level(mq + 1));
    r.error = std::abs(r.logdet_over_d - r.integral);
    for (const auto& b : bases) {
      r.num_localized += b.num_localized();
      const bool in_gamma = b.descriptor.series != Series::Two && b.descriptor.birth > b.scale;
      if (in_gamma) ++r.gamma_n_count;
      else r.outside_gamma_n_dim += b.dimension();
    }
    r.runtime_seconds = seconds_since(t0);
    dims.push_back(static_cast<double>(r.dimension));
    errors.push_back(r.error);
    scaled.push_back(static_cast<double>(r.dimension) * r.error);
    result.records.push_back(r);
  }
  result.fit = fit_rate(dims, errors);
  result.scaled_error_ratio = max_min_ratio(scaled);
  return result;
}

std::vector<VertexId> riemann_points(Eigen::Index d) {
  if (d <= 0) return {};
  int n = 0;
  long long cells = 1;
  while (cells < d) {
    cells *= 3;
    ++n;
  }
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto cell = static_cast<std::size_t>((static_cast<long long>(k) * cells) / d);
    out.push_back(VertexId{CellAddress::from_index(cell, n).child(1), 2});
  }
  return out;
}

EquidistributionResult equidistribution_compare(const Gasket& gasket, const CompressedOperator& op,
                                                const TestFunction& f, const Functional& F, int reference_level) {
  EquidistributionResult r;
  r.dimension = op.dimension();
  r.spectral = spectral_functional(op, F);
  const auto points = riemann_points(r.dimension);
  const int point_level = points.front().level();
  const GasketLevel& level = gasket.level(point_level);
  double sum = 0.0;
  for (const auto& p : points) {
    const auto v = level.find(lattice_point(p));
    if (v < 0) throw std::logic_error("Riemann point missing from its level");
    sum += F(f.at_vertex(level, static_cast<std::size_t>(v)));
  }
  r.riemann = sum / static_cast<double>(r.dimension);
  r.integral = reference_integral(f, F, gasket.level(reference_level));
  r.gap = std::abs(r.spectral - r.riemann);
  r.integral_gap = std::abs(r.spectral - r.integral);
  return r;
}

}  // namespace gasket
