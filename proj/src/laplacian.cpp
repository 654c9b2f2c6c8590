#include "gasket/laplacian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gasket {

LevelGraph::LevelGraph(const GasketLevel& level) : level_(&level), adjacency_(level.num_vertices()) {
  for (std::size_t c = 0; c < level.num_cells(); ++c) {
    const auto& k = level.cell_corners(c);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        edges_.emplace_back(std::min(k[i], k[j]), std::max(k[i], k[j]));
        adjacency_[k[i]].push_back(k[j]);
        adjacency_[k[j]].push_back(k[i]);
      }
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

LaplacianMatrix assemble_dirichlet_laplacian(const LevelGraph& graph) {
  const auto& level = graph.level();
  if (level.level() < 1) throw std::invalid_argument("Dirichlet Laplacian needs level >= 1");
  const auto n = static_cast<Eigen::Index>(level.num_interior());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(5 * n);
  for (std::size_t v : level.interior()) {
    const auto row = level.interior_index(v);
    entries.emplace_back(row, row, -4.0);
    for (std::size_t w : graph.neighbors(v)) {
      const auto col = level.interior_index(w);
      if (col >= 0) entries.emplace_back(row, col, 1.0);
    }
  }
  LaplacianMatrix out;
  out.level = level.level();
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(entries.begin(), entries.end());
  return out;
}

DenseSpectrum dense_dirichlet_spectrum(const LaplacianMatrix& laplacian, bool with_vectors) {
  const Eigen::MatrixXd a = -laplacian.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, with_vectors ? Eigen::ComputeEigenvectors
                                                                        : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
  DenseSpectrum out;
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

Eigen::VectorXd apply_negative_laplacian(const LaplacianMatrix& laplacian, const Eigen::VectorXd& u) {
  return -(laplacian.matrix * u);
}

ResistanceComputer::ResistanceComputer(const LevelGraph& graph)
    : level_(graph.level().level()),
      num_vertices_(graph.level().num_vertices()),
      conductance_(std::pow(5.0 / 3.0, level_)),
      ground_(0),
      reduced_index_(num_vertices_, -1) {
  // Graph Laplacian with vertex 0 grounded; the remaining block is SPD.
  Eigen::Index next = 0;
  for (std::size_t v = 0; v < num_vertices_; ++v)
    if (v != ground_) reduced_index_[v] = next++;
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t v = 0; v < num_vertices_; ++v) {
    if (v == ground_) continue;
    const auto row = reduced_index_[v];
    entries.emplace_back(row, row, conductance_ * static_cast<double>(graph.degree(v)));
    for (std::size_t w : graph.neighbors(v))
      if (w != ground_) entries.emplace_back(row, reduced_index_[w], -conductance_);
  }
  Eigen::SparseMatrix<double> k(next, next);
  k.setFromTriplets(entries.begin(), entries.end());
  solver_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(k);
  if (solver_->info() != Eigen::Success) throw std::runtime_error("resistance network factorization failed");
}

Eigen::VectorXd ResistanceComputer::potential(std::size_t source) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_vertices_));
  if (source == ground_) return full;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_vertices_ - 1));
  rhs(reduced_index_[source]) = 1.0;
  const Eigen::VectorXd u = solver_->solve(rhs);
  for (std::size_t v = 0; v < num_vertices_; ++v)
    if (v != ground_) full(static_cast<Eigen::Index>(v)) = u(reduced_index_[v]);
  return full;
}

double ResistanceComputer::resistance(std::size_t x, std::size_t y) const {
  if (x >= num_vertices_ || y >= num_vertices_) throw std::out_of_range("resistance: vertex index");
  if (x == y) return 0.0;
  // Unit current injected at x and extracted at y.
  const Eigen::VectorXd gx = potential(x);
  const Eigen::VectorXd gy = potential(y);
  return gx(x) + gy(y) - 2.0 * gx(y);
}

Eigen::MatrixXd ResistanceComputer::resistance_table() const {
  const auto n = static_cast<Eigen::Index>(num_vertices_);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index v = 0; v < n; ++v) g.col(v) = potential(static_cast<std::size_t>(v));
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) r(i, j) = i == j ? 0.0 : g(i, i) + g(j, j) - 2.0 * g(i, j);
  return r;
}

double effective_resistance(const ResistanceComputer& rc, std::size_t x, std::size_t y) {
  return rc.resistance(x, y);
}

double holder_seminorm(const std::vector<double>& f, const ResistanceComputer& rc, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("Hoelder exponent must be positive");
  const Eigen::MatrixXd r = rc.resistance_table();
  if (static_cast<Eigen::Index>(f.size()) != r.rows()) throw std::invalid_argument("holder_seminorm: size mismatch");
  double best = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = i + 1; j < r.cols(); ++j)
      best = std::max(best, std::abs(f[i] - f[j]) / std::pow(r(i, j), alpha));
  return best;
}

}  // namespace gasket
