#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "gasket/decimation.hpp"
#include "gasket/laplacian.hpp"
#include "gasket/topology.hpp"

namespace gasket {

enum class EigenspacePath {
  Decimation,  // dense solve at the birth level, then extension
  Dense,       // dense solve at the sample level (oracle)
};

/// Eigenspace of -Delta_{m_q} for gamma_{m_q}: orthonormal columns indexed by
/// the interior vertices of V_{m_q}.
struct RawEigenspace {
  EigenvalueDescriptor descriptor;
  int sample_level = 0;
  Eigen::MatrixXd vectors;
};

/// Builds eigenspaces. Dense birth-level eigenspaces for levels up to
/// max_birth are computed once in the constructor; building is then const.
class EigenspaceBuilder {
public:
  EigenspaceBuilder(const Gasket& gasket, int max_birth);

  const Gasket& gasket() const { return *gasket_; }
  int max_birth() const { return max_birth_; }

  RawEigenspace build(const EigenvalueDescriptor& d, int sample_level,
                      EigenspacePath path = EigenspacePath::Decimation) const;

  /// Orthonormal eigenspace of -Delta_j for gamma in {2,5,6}, rows = all of V_j
  /// (zero on V_0).
  const Eigen::MatrixXd& birth_space(int j, Series series) const;

private:
  const Gasket* gasket_;
  int max_birth_;
  std::map<std::pair<int, Series>, Eigen::MatrixXd> birth_;
};

RawEigenspace eigenspace_vectors(const EigenspaceBuilder& builder, const EigenvalueDescriptor& d, int sample_level,
                                 EigenspacePath path = EigenspacePath::Decimation);

/// Largest sine of the principal angles between the column spans of two
/// matrices with orthonormal columns.
double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

inline constexpr double kNullspaceThreshold = 1e-8;

/// Eigenspace basis orthonormal in the quadrature inner product on V_{m_q},
/// ordered localized-first: columns [cell_begin[c], cell_begin[c+1]) are
/// supported in N-cell c, the last `num_nonlocalized()` are not localized.
struct EigenspaceBasis {
  EigenvalueDescriptor descriptor;
  int sample_level = 0;
  int scale = 0;
  double weight = 0.0;  // quadrature weight of every interior sample vertex
  Eigen::MatrixXd vectors;
  std::vector<Eigen::Index> cell_begin;  // size 3^N + 1
  bool scale_warning = false;            // N >= birth: nothing localized

  Eigen::Index dimension() const { return vectors.cols(); }
  Eigen::Index num_localized() const { return cell_begin.empty() ? 0 : cell_begin.back(); }
  Eigen::Index num_nonlocalized() const { return dimension() - num_localized(); }
  Eigen::Index cell_dimension(std::size_t cell) const { return cell_begin[cell + 1] - cell_begin[cell]; }
  /// Cell index of column `col`, or -1 when not localized.
  std::ptrdiff_t column_cell(Eigen::Index col) const;
};

struct LocalizeOptions {
  double threshold = kNullspaceThreshold;
  bool parallel = true;
};

EigenspaceBasis localize_basis(const Gasket& gasket, const RawEigenspace& raw, int scale,
                               const LocalizeOptions& options = {});

/// Extend an orthonormal set (columns of `q`, in R^d) to `target` columns by
/// Gram-Schmidt on the standard basis, choosing the largest residual each step.
Eigen::MatrixXd gram_schmidt_extend(const Eigen::MatrixXd& q, Eigen::Index target);

/// max |<u_a, u_b> - delta_ab| in the quadrature inner product.
double orthonormality_check(const EigenspaceBasis& b);
/// max |<u_a, v_b>| between two bases sampled on the same level.
double cross_orthogonality(const EigenspaceBasis& a, const EigenspaceBasis& b);

}  // namespace gasket
