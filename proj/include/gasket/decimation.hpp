#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gasket/topology.hpp"

namespace gasket {

enum class Series { Two, Five, Six };

std::string to_string(Series s);
Series parse_series(const std::string& text);
/// gamma at birth: 2, 5 or 6.
double birth_gamma(Series s);

/// One Dirichlet eigenvalue of the gasket Laplacian, described by its
/// decimation history. Only the free signs up to the generation of fixation
/// are stored; every later sign is -1. The 6-series always takes
/// epsilon_{birth+1} = +1, which is implicit and not stored.
struct EigenvalueDescriptor {
  Series series = Series::Two;
  int birth = 1;
  std::vector<int> signs;       // free signs, last one +1 (or empty)
  std::vector<double> gammas;   // gamma_birth .. gamma_level
  double lambda = 0.0;
  long long multiplicity = 1;

  /// Index of the first free sign.
  int first_free_level() const { return birth + (series == Series::Six ? 2 : 1); }
  /// Last level with a free + sign, or the birth level when there is none.
  int fixation() const {
    return signs.empty() ? birth : first_free_level() + static_cast<int>(signs.size()) - 1;
  }
  /// Highest level recorded in gammas.
  int level() const { return birth + static_cast<int>(gammas.size()) - 1; }
  int sign(int k) const;
  /// gamma_k for any k >= birth, continuing with -1 signs past level().
  double gamma(int k) const;
  /// Explicit signs epsilon_{birth+1} .. epsilon_{fixation} as '+'/'-'.
  std::string sign_word() const;
};

/// Descriptor for (series, birth, free signs) with gammas evaluated up to level m.
EigenvalueDescriptor make_descriptor(Series series, int birth, std::vector<int> signs, int m);

long long series_multiplicity(Series series, int birth);

struct SpectrumTable {
  int level = 0;
  std::vector<EigenvalueDescriptor> entries;  // ascending lambda

  long long total_multiplicity() const;
};

/// gamma_k = (5 + eps*sqrt(25 - 4*gamma_prev)) / 2. The minus branch is
/// evaluated as 2*gamma_prev / (5 + sqrt(25 - 4*gamma_prev)) to avoid
/// cancellation for small gamma.
double gamma_step(double gamma_prev, int sign);

/// All Dirichlet eigenvalues with fixation <= m, i.e. the (3^(m+1)-3)/2
/// smallest counted with multiplicity.
SpectrumTable enumerate_spectrum(int m);

struct LambdaEstimate {
  double value = 0.0;
  double last_relative_change = 0.0;
  bool converged = false;
};

inline constexpr int kLambdaDepth = 40;

/// (3/2) 5^k gamma_k at k = k_max, continuing with minus signs.
LambdaEstimate renormalized_lambda(const EigenvalueDescriptor& d, int k_max = kLambdaDepth);

/// True when gamma is 2, 5 or 6 within tol; decimation cannot pass through these.
bool is_forbidden_gamma(double gamma, double tol = 1e-12);

/// Extend an eigenfunction of -Delta_{k-1} (values on all of V_{k-1}) to V_k.
/// gamma_k is the eigenvalue at the new level.
Eigen::VectorXd extend_eigenfunction(const Gasket& gasket, int k, const Eigen::VectorXd& coarse, double gamma_k);

}  // namespace gasket
