#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <utility>
#include <vector>

#include "gasket/topology.hpp"

namespace gasket {

/// Gamma_m: vertices of V_m joined when they share an m-cell.
class LevelGraph {
public:
  explicit LevelGraph(const GasketLevel& level);

  const GasketLevel& level() const { return *level_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }

private:
  const GasketLevel* level_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Delta_m restricted to V_m \ V_0 (rows and columns in GasketLevel::interior() order).
/// Diagonal -4, off-diagonal 1 for neighbours.
struct LaplacianMatrix {
  int level = 0;
  Eigen::SparseMatrix<double> matrix;

  Eigen::Index size() const { return matrix.rows(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

LaplacianMatrix assemble_dirichlet_laplacian(const LevelGraph& graph);

/// Spectrum of -Delta_m with Dirichlet conditions: ascending eigenvalues and
/// orthonormal eigenvectors (columns, interior coordinates).
struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

DenseSpectrum dense_dirichlet_spectrum(const LaplacianMatrix& laplacian, bool with_vectors = true);

/// Apply -Delta_m to a function on the interior vertices.
Eigen::VectorXd apply_negative_laplacian(const LaplacianMatrix& laplacian, const Eigen::VectorXd& u);

/// Effective resistance on Gamma_m with every edge conductance (5/3)^m, so
/// that the resistance between two corners of SG is 2/3 at every level.
class ResistanceComputer {
public:
  explicit ResistanceComputer(const LevelGraph& graph);

  int level() const { return level_; }
  double conductance() const { return conductance_; }
  double resistance(std::size_t x, std::size_t y) const;
  /// Dense table of R(x, y) over all pairs of V_m.
  Eigen::MatrixXd resistance_table() const;

private:
  Eigen::VectorXd potential(std::size_t source) const;

  int level_;
  std::size_t num_vertices_;
  double conductance_;
  std::size_t ground_;
  std::vector<std::ptrdiff_t> reduced_index_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> solver_;
};

double effective_resistance(const ResistanceComputer& rc, std::size_t x, std::size_t y);

/// max_{x != y} |f(x) - f(y)| / R(x,y)^alpha over V_m; f indexed by vertex.
double holder_seminorm(const std::vector<double>& f, const ResistanceComputer& rc, double alpha);

}  // namespace gasket
