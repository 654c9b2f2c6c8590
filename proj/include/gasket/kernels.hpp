#pragma once

// Data-parallel kernels. Each has an OpenMP version and a serial reference
// kept for testing; the benchmark times them against each other. Extension
// and Gram assembly use identical arithmetic in both versions and agree
// bit for bit. The nullspace reference is a direct SVD per row set, while
// the parallel version works through the complementary rows and agrees up
// to the choice of basis within each nullspace.

#include <Eigen/Dense>
#include <vector>

#include "gasket/topology.hpp"

namespace gasket::kernels {

/// Decimation extension of every column of `coarse` (rows = V_{k-1}) to V_k.
Eigen::MatrixXd extend_columns(const Gasket& gasket, int k, const Eigen::MatrixXd& coarse, double gamma_k);
Eigen::MatrixXd extend_columns_serial(const Gasket& gasket, int k, const Eigen::MatrixXd& coarse, double gamma_k);

/// M = U^T diag(w) U, with U columns the basis and w the pointwise weights.
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w);
Eigen::MatrixXd weighted_gram_serial(const Eigen::MatrixXd& u, const Eigen::VectorXd& w);

/// For each row set, an orthonormal basis (columns in R^d) of the right
/// singular vectors of u.rows(set) with singular value <= threshold, i.e. the
/// combinations of u's columns that vanish on those rows. The parallel
/// version requires u to have orthonormal columns.
std::vector<Eigen::MatrixXd> restricted_nullspaces(const Eigen::MatrixXd& u,
                                                   const std::vector<std::vector<Eigen::Index>>& row_sets,
                                                   double threshold);
std::vector<Eigen::MatrixXd> restricted_nullspaces_serial(const Eigen::MatrixXd& u,
                                                          const std::vector<std::vector<Eigen::Index>>& row_sets,
                                                          double threshold);

int max_threads();

}  // namespace gasket::kernels
