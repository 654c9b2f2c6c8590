#include "gasket/kernels.hpp"

#include <omp.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <stdexcept>

#include "gasket/decimation.hpp"

namespace gasket::kernels {

namespace {

struct ExtensionPlan {
  const GasketLevel* coarse;
  const GasketLevel* fine;
  const std::vector<std::size_t>* embed;
  double edge_factor;  // (4 - gamma) / ((2 - gamma)(5 - gamma))
  double opposite_factor;  // 2 / ((2 - gamma)(5 - gamma))
};

ExtensionPlan make_plan(const Gasket& gasket, int k, const Eigen::MatrixXd& coarse, double gamma_k) {
  if (k < 1 || k > gasket.max_level()) throw std::out_of_range("extension target level not built");
  if (is_forbidden_gamma(gamma_k)) throw std::domain_error("extension through a forbidden eigenvalue (2, 5 or 6)");
  ExtensionPlan plan{&gasket.level(k - 1), &gasket.level(k), &gasket.embedding(k), 0.0, 0.0};
  if (static_cast<std::size_t>(coarse.rows()) != plan.coarse->num_vertices())
    throw std::invalid_argument("extension: input rows must match |V_{k-1}|");
  const double denom = (2.0 - gamma_k) * (5.0 - gamma_k);
  plan.edge_factor = (4.0 - gamma_k) / denom;
  plan.opposite_factor = 2.0 / denom;
  return plan;
}

void extend_one(const ExtensionPlan& plan, const double* in, double* out) {
  const auto& embed = *plan.embed;
  for (std::size_t v = 0; v < embed.size(); ++v) out[embed[v]] = in[v];
  for (std::size_t c = 0; c < plan.coarse->num_cells(); ++c) {
    const auto& p = plan.coarse->cell_corners(c);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const int r = 3 - a - b;
        const std::size_t mid = plan.fine->cell_corners(3 * c + a)[b];
        out[mid] = plan.edge_factor * (in[p[a]] + in[p[b]]) + plan.opposite_factor * in[p[r]];
      }
  }
}

double weighted_dot(const Eigen::MatrixXd& u, const Eigen::VectorXd& w, Eigen::Index a, Eigen::Index b) {
  return (u.col(a).cwiseProduct(w).cwiseProduct(u.col(b))).sum();
}

// Direct route: SVD of the rows outside the cell.
Eigen::MatrixXd nullspace_of(const Eigen::MatrixXd& u, const std::vector<Eigen::Index>& rows, double threshold) {
  const Eigen::Index d = u.cols();
  if (rows.empty()) return Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = u.row(rows[i]);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Singular values come sorted descending; missing ones (rows < d) are zero.
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > threshold) ++rank;
  return svd.matrixV().rightCols(d - rank);
}

// Two-stage route for orthonormal u. With u_in the complementary rows,
// u_out^T u_out = I - u_in^T u_in, so both share right singular vectors and
// sigma_out^2 + sigma_in^2 = 1. Directions with sigma_in^2 near 1 are the only
// candidates; they come from a symmetric eigensolve of the smaller Gram matrix
// of u_in, which resolves the clustered eigenvalue 1 reliably. The threshold
// is then applied to u_out on that small subspace.
Eigen::MatrixXd nullspace_by_complement(const Eigen::MatrixXd& u, const std::vector<Eigen::Index>& outside,
                                        double threshold) {
  const Eigen::Index d = u.cols();
  if (outside.empty()) return Eigen::MatrixXd::Identity(d, d);
  std::vector<char> is_out(static_cast<std::size_t>(u.rows()), 0);
  for (auto r : outside) is_out[static_cast<std::size_t>(r)] = 1;
  const auto n_in = u.rows() - static_cast<Eigen::Index>(outside.size());
  if (n_in == 0) return Eigen::MatrixXd(d, 0);
  Eigen::MatrixXd in(n_in, d);
  for (Eigen::Index r = 0, k = 0; r < u.rows(); ++r)
    if (!is_out[static_cast<std::size_t>(r)]) in.row(k++) = u.row(r);

  constexpr double kCandidate = 1e-6;  // sigma_out <= 1e-3
  Eigen::MatrixXd cand;
  if (n_in < d) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(in * in.transpose());
    const auto& lam = es.eigenvalues();
    Eigen::Index k = 0;
    while (k < lam.size() && 1.0 - lam(lam.size() - 1 - k) <= kCandidate) ++k;
    if (k == 0) return Eigen::MatrixXd(d, 0);
    cand = in.transpose() * es.eigenvectors().rightCols(k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(cand);
    cand = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(in.transpose() * in);
    const auto& lam = es.eigenvalues();
    Eigen::Index k = 0;
    while (k < lam.size() && 1.0 - lam(lam.size() - 1 - k) <= kCandidate) ++k;
    if (k == 0) return Eigen::MatrixXd(d, 0);
    cand = es.eigenvectors().rightCols(k);
  }
  const Eigen::Index k = cand.cols();
  Eigen::MatrixXd out_cand(static_cast<Eigen::Index>(outside.size()), k);
  const Eigen::MatrixXd projected = u * cand;
  for (std::size_t i = 0; i < outside.size(); ++i) out_cand.row(static_cast<Eigen::Index>(i)) = projected.row(outside[i]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_out(out_cand, Eigen::ComputeFullV);
  const auto& s_out = svd_out.singularValues();
  Eigen::Index rank = 0;
  while (rank < s_out.size() && s_out(rank) > threshold) ++rank;
  return cand * svd_out.matrixV().rightCols(k - rank);
}

}  // namespace

Eigen::MatrixXd extend_columns(const Gasket& gasket, int k, const Eigen::MatrixXd& coarse, double gamma_k) {
  const ExtensionPlan plan = make_plan(gasket, k, coarse, gamma_k);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(plan.fine->num_vertices()), coarse.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index col = 0; col < coarse.cols(); ++col) extend_one(plan, coarse.col(col).data(), out.col(col).data());
  return out;
}

Eigen::MatrixXd extend_columns_serial(const Gasket& gasket, int k, const Eigen::MatrixXd& coarse, double gamma_k) {
  const ExtensionPlan plan = make_plan(gasket, k, coarse, gamma_k);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(plan.fine->num_vertices()), coarse.cols());
  for (Eigen::Index col = 0; col < coarse.cols(); ++col) extend_one(plan, coarse.col(col).data(), out.col(col).data());
  return out;
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w) {
  if (w.size() != u.rows()) throw std::invalid_argument("weighted_gram: weight size mismatch");
  const Eigen::Index d = u.cols();
  Eigen::MatrixXd m(d, d);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) m(a, b) = m(b, a) = weighted_dot(u, w, a, b);
  return m;
}

Eigen::MatrixXd weighted_gram_serial(const Eigen::MatrixXd& u, const Eigen::VectorXd& w) {
  if (w.size() != u.rows()) throw std::invalid_argument("weighted_gram: weight size mismatch");
  const Eigen::Index d = u.cols();
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) m(a, b) = m(b, a) = weighted_dot(u, w, a, b);
  return m;
}

std::vector<Eigen::MatrixXd> restricted_nullspaces(const Eigen::MatrixXd& u,
                                                   const std::vector<std::vector<Eigen::Index>>& row_sets,
                                                   double threshold) {
  std::vector<Eigen::MatrixXd> out(row_sets.size());
  const auto n = static_cast<std::ptrdiff_t>(row_sets.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nullspace_by_complement(u, row_sets[i], threshold);
  return out;
}

std::vector<Eigen::MatrixXd> restricted_nullspaces_serial(const Eigen::MatrixXd& u,
                                                          const std::vector<std::vector<Eigen::Index>>& row_sets,
                                                          double threshold) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(row_sets.size());
  for (const auto& rows : row_sets) out.push_back(nullspace_of(u, rows, threshold));
  return out;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace gasket::kernels
