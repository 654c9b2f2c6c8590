// Command-line front end: one subcommand per experiment, configured by an
// optional JSON file with flags taking precedence.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gasket/experiment.hpp"

namespace {

struct Flags {
  std::string config, out, mode, series, j, m, f, signs, path;
  std::vector<std::string> functionals;
  int scale = 0, sample_level = 0, pairs = 0;
  double alpha = 0, tol_nullspace = 0, tol_residual = 0, tol_orthonormality = 0, tol_block = 0;
  std::uint64_t seed = 0;
  bool dense = false;
};

void common(CLI::App* s, Flags& fl) {
  s->add_option("--config", fl.config, "JSON config file; flags override its fields")->check(CLI::ExistingFile);
  s->add_option("--out", fl.out, "output directory");
  s->add_option("--seed", fl.seed, "seed for randomized checks");
}

void level(CLI::App* s, Flags& fl, const char* help) { s->add_option("--m", fl.m, help); }

void eigen(CLI::App* s, Flags& fl) {
  s->add_option("--series", fl.series, "two, five or six");
  s->add_option("--j", fl.j, "birth level or range lo..hi");
  s->add_option("--N", fl.scale, "localization scale");
  s->add_option("--m-q", fl.sample_level, "sample level (0 = default)");
  s->add_option("--tol-nullspace", fl.tol_nullspace, "singular value threshold for localization");
}

void sweep(CLI::App* s, Flags& fl) {
  eigen(s, fl);
  s->add_option("--mode", fl.mode, "single or cutoff");
  level(s, fl, "cutoff level or range lo..hi");
  s->add_option("--f", fl.f, "constant:c | simple:a1,..,a_{3^N} | harmonic:b1,b2,b3 | expr:<x,y>");
}

gasket::ExperimentConfig build_config(const CLI::App& sub, const Flags& fl) {
  gasket::ExperimentConfig c;
  if (!fl.config.empty()) {
    std::ifstream in(fl.config);
    c = gasket::ExperimentConfig::from_json(nlohmann::json::parse(in));
  }
  c.command = sub.get_name();
  auto given = [&](const char* name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };
  if (given("--out")) c.output = fl.out;
  if (given("--seed")) c.seed = fl.seed;
  if (given("--mode")) c.mode = fl.mode;
  if (given("--series")) c.series = fl.series;
  if (given("--j")) c.j = gasket::IntRange::parse(fl.j);
  if (given("--m")) c.m = gasket::IntRange::parse(fl.m);
  if (given("--N")) c.scale = fl.scale;
  if (given("--m-q")) c.sample_level = fl.sample_level;
  if (given("--f")) c.function = fl.f;
  if (given("--F")) c.functionals = fl.functionals;
  if (given("--signs")) c.signs = fl.signs;
  if (given("--path")) c.path = fl.path;
  if (given("--dense")) c.dense = fl.dense;
  if (given("--pairs")) c.pairs = fl.pairs;
  if (given("--alpha")) c.alpha = fl.alpha;
  if (given("--tol-nullspace")) c.tol.nullspace = fl.tol_nullspace;
  if (given("--tol-residual")) c.tol.residual = fl.tol_residual;
  if (given("--tol-orthonormality")) c.tol.orthonormality = fl.tol_orthonormality;
  if (given("--tol-block")) c.tol.block = fl.tol_block;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet spectrum, localized eigenbases and Szego experiments on the Sierpinski gasket"};
  app.require_subcommand(1);
  Flags fl;

  auto* topo = app.add_subcommand("topology", "vertex and cell tables, Laplacian in coordinate form");
  common(topo, fl);
  level(topo, fl, "level");

  auto* spec = app.add_subcommand("spectrum", "decimation spectrum table");
  common(spec, fl);
  level(spec, fl, "level");
  spec->add_flag("--dense", fl.dense, "also solve densely and compare");
  spec->add_option("--tol-residual", fl.tol_residual, "oracle tolerance");

  auto* basis = app.add_subcommand("basis", "localized eigenspace basis for one eigenvalue");
  common(basis, fl);
  eigen(basis, fl);
  basis->add_option("--signs", fl.signs, "free signs after birth, e.g. +-+");
  basis->add_option("--path", fl.path, "decimation or dense");
  basis->add_option("--tol-residual", fl.tol_residual, "eigen-residual tolerance");
  basis->add_option("--tol-orthonormality", fl.tol_orthonormality, "Gram matrix tolerance");

  auto* szego = app.add_subcommand("szego", "log det sweeps against the integral of log f");
  common(szego, fl);
  sweep(szego, fl);
  szego->add_option("--alpha", fl.alpha, "Holder exponent for the reference rate");
  szego->add_option("--tol-block", fl.tol_block, "full vs blockwise log det tolerance");

  auto* equi = app.add_subcommand("equidist", "spectral averages of F against Riemann sums and integrals");
  common(equi, fl);
  sweep(equi, fl);
  equi->add_option("--F", fl.functionals, "log | power:p | expr:<x>  (repeatable)");

  auto* res = app.add_subcommand("resistance", "effective resistance checks");
  common(res, fl);
  level(res, fl, "level");
  res->add_option("--pairs", fl.pairs, "random pairs and triples");
  res->add_option("--f", fl.f, "function for the Holder seminorm");
  res->add_option("--alpha", fl.alpha, "Holder exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gasket::kExitInvalid;
  }

  const CLI::App* sub = app.get_subcommands().front();
  gasket::ExperimentConfig config;
  try {
    config = build_config(*sub, fl);
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return gasket::kExitInvalid;
  }
  return gasket::run(config, std::cerr);
}
