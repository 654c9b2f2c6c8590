#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gasket {

struct Tolerances {
  double nullspace = 1e-8;        // singular values treated as zero when localizing
  double residual = 1e-9;         // eigen-residual of constructed eigenvectors
  double orthonormality = 1e-10;  // Gram matrix deviation from the identity
  double block = 1e-8;            // full vs blockwise log det, relative
};

struct IntRange {
  int lo = 0;
  int hi = 0;
  bool single() const { return lo == hi; }
  std::string str() const;
  /// "4", "2..5" or "2-5".
  static IntRange parse(const std::string& text);
};

/// One experiment. Read from a JSON document; command-line flags override
/// individual fields afterwards.
struct ExperimentConfig {
  std::string command;  // topology, spectrum, basis, szego, equidist, resistance
  std::string mode = "single";  // szego / equidist: single or cutoff
  std::string series = "six";
  IntRange j{2, 2};
  IntRange m{1, 1};
  int scale = 1;         // N
  int sample_level = 0;  // 0 picks the default per index
  std::string function = "constant:1";
  std::vector<std::string> functionals{"power:1", "power:2"};
  std::string signs;  // basis: free signs after birth, e.g. "+-+"
  std::string path = "decimation";
  bool dense = false;  // spectrum: also write the dense oracle spectrum
  int pairs = 1000;    // resistance: random pairs and triples
  double alpha = 1.0;  // Holder exponent
  std::string output = "out";
  std::uint64_t seed = 0;
  Tolerances tol;

  nlohmann::json to_json() const;
  /// Unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& j);
  /// Hash of every field except the output directory.
  std::string hash() const;
};

/// Raised for configuration problems detected only while running.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Empty iff the config is runnable. Each entry is "field: constraint".
std::vector<std::string> validate(const ExperimentConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

/// Run the experiment and write its artifacts into config.output. On failure
/// writes error.json there and returns 2 (invalid config) or 3 (numerical).
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace gasket
