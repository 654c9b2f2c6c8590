#include "gasket/decimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "gasket/kernels.hpp"

namespace gasket {

namespace {

long long ipow(long long base, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void strip_trailing_minus(std::vector<int>& signs) {
  while (!signs.empty() && signs.back() == -1) signs.pop_back();
}

// Every word over {+1,-1} of the given length, lexicographic with +1 first.
std::vector<std::vector<int>> sign_words(int length) {
  std::vector<std::vector<int>> out;
  const long long n = ipow(2, length);
  for (long long w = 0; w < n; ++w) {
    std::vector<int> s(length);
    for (int i = 0; i < length; ++i) s[i] = (w >> (length - 1 - i)) & 1 ? -1 : 1;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string to_string(Series s) {
  switch (s) {
    case Series::Two: return "two";
    case Series::Five: return "five";
    case Series::Six: return "six";
  }
  return "?";
}

Series parse_series(const std::string& text) {
  if (text == "two" || text == "2") return Series::Two;
  if (text == "five" || text == "5") return Series::Five;
  if (text == "six" || text == "6") return Series::Six;
  throw std::invalid_argument("unknown series '" + text + "'");
}

double birth_gamma(Series s) {
  switch (s) {
    case Series::Two: return 2.0;
    case Series::Five: return 5.0;
    case Series::Six: return 6.0;
  }
  return 0.0;
}

long long series_multiplicity(Series series, int birth) {
  switch (series) {
    case Series::Two: return 1;
    case Series::Five: return (ipow(3, birth - 1) + 3) / 2;
    case Series::Six: return (ipow(3, birth) - 3) / 2;
  }
  return 0;
}

int EigenvalueDescriptor::sign(int k) const {
  if (k <= birth) throw std::out_of_range("sign index must exceed the birth level");
  if (series == Series::Six && k == birth + 1) return 1;
  const int i = k - first_free_level();
  return i < static_cast<int>(signs.size()) ? signs[i] : -1;
}

double EigenvalueDescriptor::gamma(int k) const {
  if (k < birth) throw std::out_of_range("gamma before birth");
  if (k <= level()) return gammas[k - birth];
  double g = gammas.back();
  for (int i = level() + 1; i <= k; ++i) g = gamma_step(g, sign(i));
  return g;
}

std::string EigenvalueDescriptor::sign_word() const {
  std::string out;
  for (int k = birth + 1; k <= fixation(); ++k) out.push_back(sign(k) > 0 ? '+' : '-');
  return out;
}

EigenvalueDescriptor make_descriptor(Series series, int birth, std::vector<int> signs, int m) {
  if (birth < 1 || (series == Series::Six && birth < 2) || (series == Series::Two && birth != 1))
    throw std::invalid_argument("invalid birth level for " + to_string(series) + "-series");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
  strip_trailing_minus(signs);
  EigenvalueDescriptor d;
  d.series = series;
  d.birth = birth;
  d.signs = std::move(signs);
  if (m < d.fixation()) throw std::invalid_argument("level below the generation of fixation");
  d.multiplicity = series_multiplicity(series, birth);
  d.gammas.push_back(birth_gamma(series));
  for (int k = birth + 1; k <= m; ++k) d.gammas.push_back(gamma_step(d.gammas.back(), d.sign(k)));
  d.lambda = renormalized_lambda(d).value;
  return d;
}

long long SpectrumTable::total_multiplicity() const {
  long long total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

double gamma_step(double gamma_prev, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const double disc = 25.0 - 4.0 * gamma_prev;
  if (disc < 0.0) throw std::domain_error("gamma_step: gamma_prev exceeds 25/4");
  const double root = std::sqrt(disc);
  if (sign > 0) return 0.5 * (5.0 + root);
  return 2.0 * gamma_prev / (5.0 + root);
}

SpectrumTable enumerate_spectrum(int m) {
  if (m < 1) throw std::invalid_argument("enumerate_spectrum needs m >= 1");
  SpectrumTable table;
  table.level = m;
  for (auto& s : sign_words(m - 1)) table.entries.push_back(make_descriptor(Series::Two, 1, std::move(s), m));
  for (int j = 1; j <= m; ++j)
    for (auto& s : sign_words(m - j)) table.entries.push_back(make_descriptor(Series::Five, j, std::move(s), m));
  // epsilon_{j+1} = +1 is forced, so birth j < m leaves m-j-1 free signs.
  for (int j = 2; j <= m; ++j)
    for (auto& s : sign_words(std::max(0, m - j - 1)))
      table.entries.push_back(make_descriptor(Series::Six, j, std::move(s), m));
  std::stable_sort(table.entries.begin(), table.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.lambda, a.series, a.birth, a.signs) < std::tie(b.lambda, b.series, b.birth, b.signs);
  });
  return table;
}

LambdaEstimate renormalized_lambda(const EigenvalueDescriptor& d, int k_max) {
  LambdaEstimate out;
  if (k_max < d.fixation() || k_max < d.birth) return out;
  double g = d.gammas.front();
  double scale = 1.5 * std::pow(5.0, d.birth);
  double value = scale * g;
  double change = 1.0;
  for (int k = d.birth + 1; k <= k_max; ++k) {
    g = gamma_step(g, d.sign(k));
    scale *= 5.0;
    const double next = scale * g;
    change = std::abs(next - value) / std::abs(next);
    value = next;
  }
  out.value = value;
  out.last_relative_change = change;
  out.converged = change < 1e-12;
  return out;
}

bool is_forbidden_gamma(double gamma, double tol) {
  return std::abs(gamma - 2.0) <= tol || std::abs(gamma - 5.0) <= tol || std::abs(gamma - 6.0) <= tol;
}

Eigen::VectorXd extend_eigenfunction(const Gasket& gasket, int k, const Eigen::VectorXd& coarse, double gamma_k) {
  Eigen::MatrixXd m = coarse;
  return kernels::extend_columns_serial(gasket, k, m, gamma_k).col(0);
}

}  // namespace gasket
