#include "gasket/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "gasket/io.hpp"
#include "gasket/laplacian.hpp"
#include "gasket/szego.hpp"

namespace gasket {

using nlohmann::json;
namespace fs = std::filesystem;

std::string IntRange::str() const { return single() ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi); }

IntRange IntRange::parse(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("bad integer range '" + text + "'");
    return v;
  };
  auto dots = text.find("..");
  if (dots != std::string::npos) return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
  auto dash = text.find('-', 1);
  if (dash != std::string::npos) return {to_int(text.substr(0, dash)), to_int(text.substr(dash + 1))};
  const int v = to_int(text);
  return {v, v};
}

namespace {

IntRange range_from_json(const json& v) {
  if (v.is_number_integer()) return {v.get<int>(), v.get<int>()};
  if (v.is_string()) return IntRange::parse(v.get<std::string>());
  if (v.is_array() && v.size() == 2) return {v[0].get<int>(), v[1].get<int>()};
  throw std::invalid_argument("range must be an integer, \"lo..hi\" or [lo, hi]");
}

std::vector<int> signs_from_word(const std::string& word) {
  std::vector<int> out;
  for (char c : word) out.push_back(c == '+' ? 1 : -1);
  return out;
}

bool is_log(const std::string& spec) { return spec == "log"; }

// Smallest value a positive-definite check can see without sampling, or NaN
// when the function has to be sampled first.
double static_minimum(const TestFunction& f) {
  struct {
    double operator()(const ConstantFunction& c) const { return c.value; }
    double operator()(const SimpleFunction& s) const {
      return *std::min_element(s.coefficients.begin(), s.coefficients.end());
    }
    double operator()(const HarmonicFunction& h) const { return *std::min_element(h.boundary.begin(), h.boundary.end()); }
    double operator()(const ExpressionFunction&) const { return std::nan(""); }
  } visitor;
  return std::visit(visitor, f.spec());
}

int simple_scale(const TestFunction& f) {
  if (const auto* s = std::get_if<SimpleFunction>(&f.spec())) return s->scale;
  return 0;
}

bool valid_birth(Series s, int j) {
  switch (s) {
    case Series::Two: return j == 1;
    case Series::Five: return j >= 1;
    case Series::Six: return j >= 2;
  }
  return false;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

// Shared state for one run: output location, header data and checks.
class Run {
public:
  Run(const ExperimentConfig& c, std::ostream& log) : config(c), log(log), hash(c.hash()), dir(c.output) {
    fs::create_directories(dir);
  }

  io::CsvTable table(std::vector<std::string> columns) const { return {std::move(columns), hash, config.seed}; }
  void write(const std::string& name, const io::CsvTable& t) const {
    t.write(dir / name);
    log << "wrote " << (dir / name).string() << " (" << t.rows() << " rows)\n";
  }
  void write_text(const std::string& name, const std::string& body) const {
    io::write_file_atomic(dir / name, "# config_hash=" + hash + " seed=" + std::to_string(config.seed) + "\n" + body);
    log << "wrote " << (dir / name).string() << "\n";
  }

  void check(const std::string& name, double value, double tolerance) {
    checks.push_back({name, value, tolerance, value <= tolerance});
  }
  void require(const std::string& name, bool ok) { checks.push_back({name, ok ? 0.0 : 1.0, 0.0, ok}); }

  json summary_base() const {
    json s;
    s["command"] = config.command;
    s["config"] = config.to_json();
    s["config_hash"] = hash;
    s["seed"] = config.seed;
    s["timestamp"] = utc_timestamp();
    s["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json cs = json::array();
    for (const auto& c : checks) cs.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    s["checks"] = cs;
    return s;
  }

  void write_summary(json results) const {
    json s = summary_base();
    s["results"] = std::move(results);
    io::write_file_atomic(dir / "summary.json", s.dump(2) + "\n");
    log << "wrote " << (dir / "summary.json").string() << "\n";
  }

  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c.name + ": " + io::format_double(c.value) + " exceeds " + io::format_double(c.tolerance));
    return out;
  }

  const ExperimentConfig& config;
  std::ostream& log;
  std::string hash;
  fs::path dir;
  std::vector<Check> checks;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

int sample_level_for(const ExperimentConfig& c, int index) {
  return c.sample_level > 0 ? c.sample_level : default_sample_level(index);
}

void run_topology(Run& r) {
  const int m = r.config.m.hi;
  const GasketLevel level(m);
  const QuadratureScheme q(level);
  auto vt = r.table({"id", "word", "corner", "x", "y", "is_boundary", "weight"});
  for (std::size_t v = 0; v < level.num_vertices(); ++v) {
    const auto& vx = level.vertex(v);
    vt.row().add(v).add(vx.id.cell.str()).add(vx.id.corner).add(vx.x).add(vx.y).add(vx.boundary ? 1 : 0).add(q.weight(v));
  }
  r.write("vertices.csv", vt);
  auto ct = r.table({"index", "word", "v1", "v2", "v3"});
  const auto cells = enumerate_cells(m);
  for (std::size_t c = 0; c < level.num_cells(); ++c) {
    const auto& k = level.cell_corners(c);
    ct.row().add(c).add(cells[c].str()).add(k[0]).add(k[1]).add(k[2]);
  }
  r.write("cells.csv", ct);

  json res = {{"level", m},
              {"num_vertices", level.num_vertices()},
              {"num_cells", level.num_cells()},
              {"num_interior", level.num_interior()}};
  r.require("vertex count", static_cast<long long>(level.num_vertices()) == (static_cast<long long>(std::pow(3, m + 1)) + 3) / 2);
  double total = 0.0;
  for (double w : q.weights()) total += w;
  r.check("quadrature weights sum to 1", std::abs(total - 1.0), 1e-14);
  if (m >= 1) {
    const LevelGraph graph(level);
    const auto lap = assemble_dirichlet_laplacian(graph);
    std::ostringstream os;
    os << "# row col value (vertex indices of vertices.csv)\n";
    for (int k = 0; k < lap.matrix.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lap.matrix, k); it; ++it)
        os << level.interior()[it.row()] << ' ' << level.interior()[it.col()] << ' ' << io::format_double(it.value())
           << '\n';
    r.write_text("laplacian.txt", os.str());
    bool degrees = true;
    for (std::size_t v = 0; v < level.num_vertices(); ++v)
      degrees = degrees && graph.degree(v) == (level.vertex(v).boundary ? 2u : 4u);
    r.require("degree 4 inside, 2 on the boundary", degrees);
    res["num_edges"] = graph.edges().size();
  }
  r.write_summary(res);
}

void run_spectrum(Run& r) {
  const int m = r.config.m.hi;
  const auto table = enumerate_spectrum(m);
  auto t = r.table({"series", "birth", "signs", "fixation", "gamma_m", "lambda", "multiplicity"});
  for (const auto& e : table.entries)
    t.row().add(to_string(e.series)).add(e.birth).add(e.sign_word()).add(e.fixation()).add(e.gammas.back()).add(e.lambda).add(e.multiplicity);
  r.write("spectrum.csv", t);
  const long long expected = (static_cast<long long>(std::pow(3, m + 1)) - 3) / 2;
  r.require("total multiplicity", table.total_multiplicity() == expected);
  json res = {{"level", m}, {"entries", table.entries.size()}, {"total_multiplicity", table.total_multiplicity()},
              {"expected_total", expected}};
  if (r.config.dense) {
    const GasketLevel level(m);
    const auto spec = dense_dirichlet_spectrum(assemble_dirichlet_laplacian(LevelGraph(level)), false);
    auto dt = r.table({"index", "eigenvalue"});
    for (Eigen::Index i = 0; i < spec.values.size(); ++i) dt.row().add(static_cast<long long>(i)).add(spec.values(i));
    r.write("dense_spectrum.csv", dt);
    std::vector<double> dec;
    for (const auto& e : table.entries) dec.insert(dec.end(), static_cast<std::size_t>(e.multiplicity), e.gammas.back());
    std::sort(dec.begin(), dec.end());
    double diff = dec.size() == static_cast<std::size_t>(spec.values.size()) ? 0.0 : INFINITY;
    for (std::size_t i = 0; std::isfinite(diff) && i < dec.size(); ++i)
      diff = std::max(diff, std::abs(dec[i] - spec.values(static_cast<Eigen::Index>(i))));
    r.check("decimation vs dense spectrum", diff, r.config.tol.residual);
    res["oracle_max_difference"] = diff;
  }
  r.write_summary(res);
}

void run_basis(Run& r) {
  const auto& c = r.config;
  const Series series = parse_series(c.series);
  const int j = c.j.hi;
  const int mq = sample_level_for(c, j);
  const Gasket gasket(mq);
  const EigenspaceBuilder builder(gasket, j);
  const auto d = make_descriptor(series, j, signs_from_word(c.signs), mq);
  const auto path = c.path == "dense" ? EigenspacePath::Dense : EigenspacePath::Decimation;
  const auto raw = builder.build(d, mq, path);
  const auto basis = localize_basis(gasket, raw, c.scale, {c.tol.nullspace, true});

  const GasketLevel& level = gasket.level(mq);
  const auto lap = assemble_dirichlet_laplacian(LevelGraph(level));
  const double gamma = d.gammas.back();
  double residual = 0.0;
  for (Eigen::Index k = 0; k < raw.vectors.cols(); ++k)
    residual = std::max(residual, (apply_negative_laplacian(lap, raw.vectors.col(k)) - gamma * raw.vectors.col(k)).norm());
  r.check("eigen-residual", residual, c.tol.residual);
  r.check("orthonormality", orthonormality_check(basis), c.tol.orthonormality);

  const auto cells = enumerate_cells(c.scale);
  auto t = r.table({"vertex_id", "column", "value", "tag"});
  for (Eigen::Index k = 0; k < basis.dimension(); ++k) {
    const auto cell = basis.column_cell(k);
    const std::string tag = cell < 0 ? "nonlocalized" : "cell:" + cells[static_cast<std::size_t>(cell)].str();
    for (std::size_t i = 0; i < level.num_interior(); ++i)
      t.row().add(level.vertex(level.interior()[i]).id.str()).add(static_cast<long long>(k)).add(basis.vectors(static_cast<Eigen::Index>(i), k)).add(tag);
  }
  r.write("basis.csv", t);
  json per_cell = json::array();
  for (std::size_t i = 0; i + 1 < basis.cell_begin.size(); ++i) per_cell.push_back(basis.cell_dimension(i));
  r.write_summary({{"series", to_string(series)},
                   {"birth", j},
                   {"signs", d.sign_word()},
                   {"sample_level", mq},
                   {"gamma", gamma},
                   {"lambda", d.lambda},
                   {"dimension", basis.dimension()},
                   {"localized", basis.num_localized()},
                   {"nonlocalized", basis.num_nonlocalized()},
                   {"per_cell", per_cell},
                   {"scale_warning", basis.scale_warning}});
}

// Bases for every index of a sweep, grouped per index.
struct SweepInput {
  std::unique_ptr<Gasket> gasket;
  std::unique_ptr<EigenspaceBuilder> builder;
  std::vector<std::vector<EigenspaceBasis>> sets;
  std::vector<int> indices;
};

SweepInput prepare_sweep(const ExperimentConfig& c, std::ostream& log) {
  SweepInput in;
  const bool cutoff = c.mode == "cutoff";
  const IntRange range = cutoff ? c.m : c.j;
  int top = 0;
  for (int i = range.lo; i <= range.hi; ++i) top = std::max(top, sample_level_for(c, i));
  // Riemann points for the largest operator may sit one level below V_{index+1}.
  in.gasket = std::make_unique<Gasket>(std::max(top + 1, range.hi + 2));
  in.builder = std::make_unique<EigenspaceBuilder>(*in.gasket, range.hi);
  const LocalizeOptions opts{c.tol.nullspace, true};
  for (int i = range.lo; i <= range.hi; ++i) {
    if (cutoff) {
      in.sets.push_back(cutoff_bases(*in.builder, i, c.scale, c.sample_level, opts));
    } else {
      auto b = single_eigenspace_bases(*in.builder, parse_series(c.series), i, i, c.scale, c.sample_level, opts);
      if (b.empty()) {
        log << "skipping j=" << i << " (j <= N)\n";
        continue;
      }
      in.sets.push_back(std::move(b));
    }
    in.indices.push_back(i);
    log << (cutoff ? "m=" : "j=") << i << ": bases ready\n";
  }
  return in;
}

void require_positive(const TestFunction& f, const Gasket& g, int level) {
  if (!sample(f, g.level(level)).positive) throw ConfigError("f: positivity required (sampled minimum <= 0)");
}

void run_szego(Run& r) {
  const auto& c = r.config;
  const auto f = TestFunction::parse(c.function);
  const auto in = prepare_sweep(c, r.log);
  for (const auto& set : in.sets) require_positive(f, *in.gasket, set.front().sample_level);
  const bool cutoff = c.mode == "cutoff";
  SweepResult sweep;
  if (cutoff) {
    sweep = szego_cutoff_sweep(*in.gasket, f, in.sets, in.indices);
  } else {
    std::vector<EigenspaceBasis> flat;
    for (const auto& s : in.sets) flat.push_back(s.front());
    sweep = szego_single_eigenspace_sweep(*in.gasket, f, flat);
  }
  auto t = r.table({"mode", "index", "d", "logdet_over_d", "integral", "error", "fitted_beta", "sample_level",
                    "num_localized", "bound", "blockwise_gap", "gamma_n_count", "outside_gamma_n_dim"});
  std::ostringstream plot;
  plot << "# log_d log_error\n";
  json runtimes = json::array();
  bool bound_holds = true;
  double max_block_gap = 0.0;
  for (const auto& rec : sweep.records) {
    t.row().add(rec.mode).add(rec.index).add(static_cast<long long>(rec.dimension)).add(rec.logdet_over_d)
        .add(rec.integral).add(rec.error).add(sweep.fit.exponent).add(rec.sample_level)
        .add(static_cast<long long>(rec.num_localized)).add(rec.bound).add(rec.blockwise_gap).add(rec.gamma_n_count)
        .add(rec.outside_gamma_n_dim);
    if (rec.error > 0.0)
      plot << io::format_double(std::log(static_cast<double>(rec.dimension))) << ' ' << io::format_double(std::log(rec.error)) << '\n';
    runtimes.push_back({{"index", rec.index}, {"seconds", rec.runtime_seconds}});
    bound_holds = bound_holds && rec.error <= rec.bound;
    max_block_gap = std::max(max_block_gap, rec.blockwise_gap);
  }
  r.write("szego.csv", t);
  r.write_text("szego_loglog.dat", plot.str());
  if (cutoff) r.check("blockwise log det", max_block_gap, c.tol.block);
  const double beta = szego_beta(c.alpha);
  const double beta_tilde = szego_beta_cutoff(c.alpha);
  json res = {{"mode", c.mode},
              {"function", f.description()},
              {"alpha", c.alpha},
              {"beta", beta},
              {"beta_tilde", beta_tilde},
              {"target_exponent", cutoff ? beta_tilde : beta},
              {"fit", {{"exponent", sweep.fit.exponent}, {"intercept", sweep.fit.intercept},
                       {"r_squared", sweep.fit.r_squared}, {"points", sweep.fit.points}}},
              {"fit_over_target", sweep.fit.exponent / (cutoff ? beta_tilde : beta)},
              {"scaled_error_ratio", sweep.scaled_error_ratio},
              {"runtimes", runtimes}};
  if (!cutoff) res["error_bound_holds"] = bound_holds;
  r.write_summary(res);
}

void run_equidist(Run& r) {
  const auto& c = r.config;
  const auto f = TestFunction::parse(c.function);
  std::vector<Functional> Fs;
  for (const auto& s : c.functionals) Fs.push_back(Functional::parse(s));
  const auto in = prepare_sweep(c, r.log);
  const bool needs_log = std::any_of(c.functionals.begin(), c.functionals.end(), is_log);
  if (needs_log)
    for (const auto& set : in.sets) require_positive(f, *in.gasket, set.front().sample_level);
  auto t = r.table({"mode", "index", "d", "functional", "spectral", "riemann", "integral", "riemann_gap", "integral_gap"});
  json per_functional = json::object();
  for (const auto& F : Fs) per_functional[F.description()] = json::array();
  for (std::size_t i = 0; i < in.sets.size(); ++i) {
    const int mq = in.sets[i].front().sample_level;
    const auto fs = sample(f, in.gasket->level(mq));
    const auto op = in.sets[i].size() == 1 ? assemble_compressed(fs, in.sets[i].front()) : assemble_compressed(fs, in.sets[i]);
    for (const auto& F : Fs) {
      const auto e = equidistribution_compare(*in.gasket, op, f, F, mq + 1);
      t.row().add(c.mode).add(in.indices[i]).add(static_cast<long long>(e.dimension)).add(F.description())
          .add(e.spectral).add(e.riemann).add(e.integral).add(e.gap).add(e.integral_gap);
      per_functional[F.description()].push_back({{"index", in.indices[i]}, {"integral_gap", e.integral_gap}, {"riemann_gap", e.gap}});
    }
  }
  r.write("equidist.csv", t);
  r.write_summary({{"mode", c.mode}, {"function", f.description()}, {"gaps", per_functional}});
}

void run_resistance(Run& r) {
  const auto& c = r.config;
  const int m = c.m.hi;
  const GasketLevel level(m);
  const LevelGraph graph(level);
  const ResistanceComputer rc(graph);
  const std::size_t n = level.num_vertices();
  auto t = r.table({"kind", "x", "y", "resistance", "euclidean"});
  auto euclid = [&](std::size_t a, std::size_t b) {
    return std::hypot(level.vertex(a).x - level.vertex(b).x, level.vertex(a).y - level.vertex(b).y);
  };
  std::vector<std::size_t> boundary;
  for (std::size_t v = 0; v < n; ++v)
    if (level.vertex(v).boundary) boundary.push_back(v);
  double boundary_dev = 0.0;
  for (std::size_t a = 0; a < boundary.size(); ++a)
    for (std::size_t b = a + 1; b < boundary.size(); ++b) {
      const double R = rc.resistance(boundary[a], boundary[b]);
      boundary_dev = std::max(boundary_dev, std::abs(R - 2.0 / 3.0));
      t.row().add("boundary").add(level.vertex(boundary[a]).id.str()).add(level.vertex(boundary[b]).id.str()).add(R).add(euclid(boundary[a], boundary[b]));
    }
  r.check("boundary resistance 2/3", boundary_dev, c.tol.residual);

  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const double dim = std::log(5.0 / 3.0) / std::log(2.0);
  double lo = INFINITY, hi = 0.0;
  for (int k = 0; k < c.pairs; ++k) {
    const std::size_t a = pick(rng), b = pick(rng);
    const double R = rc.resistance(a, b);
    t.row().add("random").add(level.vertex(a).id.str()).add(level.vertex(b).id.str()).add(R).add(euclid(a, b));
    if (a != b) {
      const double ratio = R / std::pow(euclid(a, b), dim);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  r.write("resistance.csv", t);
  long long violations = 0;
  double worst = 0.0;
  for (int k = 0; k < c.pairs; ++k) {
    const std::size_t a = pick(rng), b = pick(rng), x = pick(rng);
    const double excess = rc.resistance(a, b) - rc.resistance(a, x) - rc.resistance(x, b);
    worst = std::max(worst, excess);
    if (excess > 1e-12) ++violations;
  }
  r.require("triangle inequality", violations == 0);
  json res = {{"level", m},
              {"boundary_max_deviation", boundary_dev},
              {"triangle_violations", violations},
              {"triangle_worst_excess", worst},
              {"ratio_to_euclidean_power", {{"exponent", dim}, {"min", lo}, {"max", hi}}}};
  const auto f = TestFunction::parse(c.function);
  res["holder_seminorm"] = {{"function", f.description()}, {"alpha", c.alpha},
                            {"value", holder_seminorm(sample(f, level).values, rc, c.alpha)}};
  r.write_summary(res);
}

void write_error(const ExperimentConfig& c, const std::string& kind, const std::vector<std::string>& messages) {
  json e = {{"status", "error"}, {"kind", kind}, {"messages", messages}, {"config_hash", c.hash()}, {"seed", c.seed},
            {"exit_code", kind == "validation" ? kExitInvalid : kExitNumerical}};
  try {
    io::write_file_atomic(fs::path(c.output) / "error.json", e.dump(2) + "\n");
  } catch (const std::exception&) {
    // Nothing else to report to; the exit code still carries the failure.
  }
}

}  // namespace

json ExperimentConfig::to_json() const {
  return {{"command", command},
          {"mode", mode},
          {"series", series},
          {"j", j.str()},
          {"m", m.str()},
          {"N", scale},
          {"m_q", sample_level},
          {"f", function},
          {"F", functionals},
          {"signs", signs},
          {"path", path},
          {"dense", dense},
          {"pairs", pairs},
          {"alpha", alpha},
          {"output", output},
          {"seed", seed},
          {"tolerances",
           {{"nullspace", tol.nullspace}, {"residual", tol.residual}, {"orthonormality", tol.orthonormality},
            {"block", tol.block}}}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> known{"command", "mode", "series", "j",      "m",     "N",      "m_q",  "f",
                                           "F",       "signs", "path",  "dense", "pairs", "alpha", "output", "seed",
                                           "tolerances"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
  ExperimentConfig c;
  c.command = j.value("command", c.command);
  c.mode = j.value("mode", c.mode);
  c.series = j.value("series", c.series);
  if (j.contains("j")) c.j = range_from_json(j["j"]);
  if (j.contains("m")) c.m = range_from_json(j["m"]);
  c.scale = j.value("N", c.scale);
  c.sample_level = j.value("m_q", c.sample_level);
  c.function = j.value("f", c.function);
  if (j.contains("F")) {
    c.functionals.clear();
    if (j["F"].is_string()) c.functionals.push_back(j["F"].get<std::string>());
    else c.functionals = j["F"].get<std::vector<std::string>>();
  }
  c.signs = j.value("signs", c.signs);
  c.path = j.value("path", c.path);
  c.dense = j.value("dense", c.dense);
  c.pairs = j.value("pairs", c.pairs);
  c.alpha = j.value("alpha", c.alpha);
  c.output = j.value("output", c.output);
  c.seed = j.value("seed", c.seed);
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    c.tol.nullspace = t.value("nullspace", c.tol.nullspace);
    c.tol.residual = t.value("residual", c.tol.residual);
    c.tol.orthonormality = t.value("orthonormality", c.tol.orthonormality);
    c.tol.block = t.value("block", c.tol.block);
  }
  return c;
}

std::string ExperimentConfig::hash() const {
  json j = to_json();
  j.erase("output");
  return io::fnv1a_hex(j.dump());
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> v;
  static const std::set<std::string> commands{"topology", "spectrum", "basis", "szego", "equidist", "resistance"};
  if (!commands.count(c.command)) {
    v.push_back("command: must be one of topology, spectrum, basis, szego, equidist, resistance");
    return v;
  }
  if (c.mode != "single" && c.mode != "cutoff") v.push_back("mode: must be single or cutoff");
  std::optional<Series> series;
  try {
    series = parse_series(c.series);
  } catch (const std::exception& e) {
    v.push_back(std::string("series: ") + e.what());
  }
  if (c.j.lo > c.j.hi) v.push_back("j: range must be nonempty");
  if (c.m.lo > c.m.hi) v.push_back("m: range must be nonempty");
  if (c.scale < 0) v.push_back("N: must be >= 0");
  if (c.sample_level < 0) v.push_back("m_q: must be >= 0 (0 selects the default)");
  if (c.sample_level > kMaxSampleLevel) v.push_back("m_q: desk-scale cap exceeded (max " + std::to_string(kMaxSampleLevel) + ")");
  if (c.pairs < 1) v.push_back("pairs: must be >= 1");
  if (!(c.alpha > 0.0)) v.push_back("alpha: must be > 0");
  if (c.path != "decimation" && c.path != "dense") v.push_back("path: must be decimation or dense");
  if (!(c.tol.nullspace > 0 && c.tol.residual > 0 && c.tol.orthonormality > 0 && c.tol.block > 0))
    v.push_back("tolerances: must be positive");
  if (c.signs.find_first_not_of("+-") != std::string::npos) v.push_back("signs: only '+' and '-' allowed");

  std::optional<TestFunction> f;
  try {
    f = TestFunction::parse(c.function);
  } catch (const std::exception& e) {
    v.push_back(std::string("f: ") + e.what());
  }
  bool wants_log = c.command == "szego";
  for (const auto& s : c.functionals) {
    try {
      Functional::parse(s);
    } catch (const std::exception& e) {
      v.push_back(std::string("F: ") + e.what());
    }
    if (c.command == "equidist" && is_log(s)) wants_log = true;
  }
  if (wants_log && f) {
    const double lo = static_minimum(*f);
    if (!std::isnan(lo) && lo <= 0.0) v.push_back("f: positivity required (log det needs f > 0)");
  }

  const bool level_cmd = c.command == "topology" || c.command == "spectrum" || c.command == "resistance";
  if (level_cmd) {
    if (!c.m.single()) v.push_back("m: must be a single level for " + c.command);
    const int lo = c.command == "spectrum" ? 1 : 0;
    if (c.m.hi < lo) v.push_back("m: must be >= " + std::to_string(lo));
    if (c.m.hi > kMaxSampleLevel) v.push_back("m: desk-scale cap exceeded (max " + std::to_string(kMaxSampleLevel) + ")");
    return v;
  }

  const bool cutoff = c.command != "basis" && c.mode == "cutoff";
  if (c.command == "basis" && !c.j.single()) v.push_back("j: must be a single birth level for basis");
  if (cutoff) {
    if (c.m.lo < 1) v.push_back("m: must be >= 1");
    if (c.m.hi > kMaxSampleLevel) v.push_back("m: desk-scale cap exceeded (max " + std::to_string(kMaxSampleLevel) + ")");
    if (c.sample_level > 0 && c.sample_level < c.m.hi) v.push_back("m_q: must be >= m");
  } else {
    if (series)
      for (int j = c.j.lo; j <= c.j.hi; ++j)
        if (!valid_birth(*series, j)) {
          v.push_back("j: birth level " + std::to_string(j) + " impossible for the " + c.series + "-series");
          break;
        }
    if (c.scale >= c.j.lo) v.push_back("N: N must be < birth j");
    if (c.j.hi > kMaxSampleLevel) v.push_back("j: desk-scale cap exceeded (max " + std::to_string(kMaxSampleLevel) + ")");
    int needed = c.j.hi;
    if (c.command == "basis" && series) {
      const auto w = signs_from_word(c.signs);
      int last_plus = -1;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] > 0) last_plus = static_cast<int>(i);
      if (last_plus >= 0) needed += (*series == Series::Six ? 2 : 1) + last_plus;
      if (c.sample_level == 0 && needed > std::min(c.j.hi + 1, kMaxSampleLevel))
        v.push_back("m_q: default sample level is below the generation of fixation; set m_q");
    }
    if (c.sample_level > 0 && c.sample_level < needed) v.push_back("m_q: must be >= birth j (and the generation of fixation)");
  }
  if (f) {
    const int fine = c.sample_level > 0 ? c.sample_level : std::min((cutoff ? c.m.lo : c.j.lo) + 1, kMaxSampleLevel);
    if (simple_scale(*f) > fine) v.push_back("f: simple function scale exceeds the sample level");
  }
  return v;
}

int run(const ExperimentConfig& config, std::ostream& log) {
  const auto violations = validate(config);
  if (!violations.empty()) {
    for (const auto& s : violations) log << "invalid config: " << s << "\n";
    write_error(config, "validation", violations);
    return kExitInvalid;
  }
  try {
    Run r(config, log);
    if (config.command == "topology") run_topology(r);
    else if (config.command == "spectrum") run_spectrum(r);
    else if (config.command == "basis") run_basis(r);
    else if (config.command == "szego") run_szego(r);
    else if (config.command == "equidist") run_equidist(r);
    else run_resistance(r);
    const auto failed = r.failed();
    if (!failed.empty()) {
      for (const auto& s : failed) log << "check failed: " << s << "\n";
      write_error(config, "numerical", failed);
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "invalid config: " << e.what() << "\n";
    write_error(config, "validation", {e.what()});
    return kExitInvalid;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    write_error(config, "numerical", {e.what()});
    return kExitNumerical;
  } catch (const std::exception& e) {
    log << "failure: " << e.what() << "\n";
    write_error(config, "numerical", {e.what()});
    return kExitNumerical;
  }
}

}  // namespace gasket
