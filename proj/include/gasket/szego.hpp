#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasket/eigenbasis.hpp"
#include "gasket/functions.hpp"

namespace gasket {

/// Raised when a factorization that requires positive definiteness fails.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Largest sample level; keeps the matrices at most 3279 on a side.
inline constexpr int kMaxSampleLevel = 7;

/// P[f]P restricted to one eigenspace, in the basis of EigenspaceBasis.
struct OperatorBlock {
  EigenvalueDescriptor descriptor;
  Eigen::MatrixXd matrix;
  Eigen::Index num_localized = 0;
  std::vector<Eigen::Index> cell_begin;
};

/// Compressed multiplication operator. Single-eigenspace mode has one block;
/// cutoff mode has one block per eigenvalue and is block diagonal.
struct CompressedOperator {
  std::vector<OperatorBlock> blocks;

  Eigen::Index dimension() const;
  /// Dense block-diagonal matrix.
  Eigen::MatrixXd matrix() const;
};

/// Entries sum_x w(x) f(x) u_a(x) u_b(x) over the interior sample vertices.
OperatorBlock assemble_block(const SampledFunction& f, const EigenspaceBasis& basis, bool parallel = true);
CompressedOperator assemble_compressed(const SampledFunction& f, const EigenspaceBasis& basis);
CompressedOperator assemble_compressed(const SampledFunction& f, const std::vector<EigenspaceBasis>& bases);

/// Sum of log of the Cholesky diagonal, doubled. Throws NumericalError when
/// the matrix is not positive definite.
double log_det(const Eigen::MatrixXd& m);
double log_det(const CompressedOperator& op);
/// Sum over blocks of log_det(block).
double log_det_blockwise(const CompressedOperator& op);

/// Eigenvalues of the operator (union over blocks), ascending.
Eigen::VectorXd operator_eigenvalues(const CompressedOperator& op);
/// (1/d) sum_k F(sigma_k).
double spectral_functional(const CompressedOperator& op, const Functional& F);

/// int F(f) dmu with the cellwise quadrature on V_level.
double reference_integral(const TestFunction& f, const Functional& F, const GasketLevel& level);
/// int |log f| dmu.
double log_l1_norm(const TestFunction& f, const GasketLevel& level);

/// Descriptor used for a single-eigenspace experiment at birth j: no free +
/// signs, so fixation equals birth.
EigenvalueDescriptor canonical_descriptor(Series series, int birth, int sample_level);
/// Default sample level for index j (or m): one level finer, capped.
int default_sample_level(int index);

/// Closed-form dimension bookkeeping for scale N.
long long six_series_localized_dim(int j, int scale);
long long six_series_nonlocalized_dim(int scale);
long long six_series_cell_dim(int j, int scale);

struct SzegoRecord {
  std::string mode;  // "single" or "cutoff"
  int index = 0;     // birth j or level m
  int sample_level = 0;
  Eigen::Index dimension = 0;
  double logdet_over_d = 0.0;
  double integral = 0.0;
  double error = 0.0;
  Eigen::Index num_localized = 0;
  double bound = 0.0;           // single mode: (alpha/d)(|log f|_1 + |f|_inf)
  double blockwise_gap = 0.0;   // cutoff mode: relative gap between full and blockwise logdet
  long long gamma_n_count = 0;  // cutoff mode: #{lambda in Gamma_N}
  long long outside_gamma_n_dim = 0;  // cutoff mode: sum of d_lambda over lambda not in Gamma_N
  double runtime_seconds = 0.0;
};

struct RateFit {
  double exponent = 0.0;  // -slope of log(error) against log(d)
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares on (log d, log error); records with error <= 0 are skipped.
RateFit fit_rate(const std::vector<double>& dims, const std::vector<double>& errors);

/// Holder decay exponents: beta for single eigenspaces and its cutoff analogue.
double szego_beta(double alpha);
double szego_beta_cutoff(double alpha);

/// Bases for a single-eigenspace sweep, one per j in [j_lo, j_hi] (j <= N skipped).
/// sample_level 0 means default_sample_level(j) for each j.
std::vector<EigenspaceBasis> single_eigenspace_bases(const EigenspaceBuilder& builder, Series series, int j_lo,
                                                     int j_hi, int scale, int sample_level = 0,
                                                     const LocalizeOptions& options = {});
/// Bases for every eigenvalue with fixation <= m, localized at scale N.
/// sample_level 0 means default_sample_level(m).
std::vector<EigenspaceBasis> cutoff_bases(const EigenspaceBuilder& builder, int m, int scale, int sample_level = 0,
                                          const LocalizeOptions& options = {});

struct SweepResult {
  std::vector<SzegoRecord> records;
  RateFit fit;
  double scaled_error_ratio = 0.0;  // max/min of d * error
};

SweepResult szego_single_eigenspace_sweep(const Gasket& gasket, const TestFunction& f,
                                          const std::vector<EigenspaceBasis>& bases);
SweepResult szego_cutoff_sweep(const Gasket& gasket, const TestFunction& f,
                               const std::vector<std::vector<EigenspaceBasis>>& levels, const std::vector<int>& ms);

struct EquidistributionResult {
  Eigen::Index dimension = 0;
  double spectral = 0.0;  // (1/d) sum F(sigma_k)
  double riemann = 0.0;   // (1/d) sum F(f(s_k))
  double integral = 0.0;  // int F(f) dmu
  double gap = 0.0;       // |spectral - riemann|
  double integral_gap = 0.0;  // |spectral - integral|
};

/// Sample points s_k, one per cell at the first level with at least d cells,
/// spread evenly in address order; each is the midpoint of the cell's q1-q2 edge.
std::vector<VertexId> riemann_points(Eigen::Index d);

EquidistributionResult equidistribution_compare(const Gasket& gasket, const CompressedOperator& op,
                                                const TestFunction& f, const Functional& F, int reference_level);

}  // namespace gasket
