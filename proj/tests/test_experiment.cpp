#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gasket/experiment.hpp"
#include "gasket/io.hpp"

using namespace gasket;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("gasket_test_" + name);
  fs::remove_all(p);
  return p;
}

bool has(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST(Io, CsvFormatting) {
  io::CsvTable t({"a", "b"}, "abc", 9);
  t.row().add(1).add(0.1);
  t.row().add("x,y").add(std::string("q\"q"));
  EXPECT_EQ(t.str(), "# config_hash=abc seed=9\na,b\n1,0.10000000000000001\n\"x,y\",\"q\"\"q\"\n");
  io::CsvTable bad({"a"}, "h", 0);
  EXPECT_THROW(bad.add(1), std::logic_error);
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Io, AtomicWrite) {
  const auto dir = scratch("io");
  io::write_file_atomic(dir / "a.txt", "hello");
  EXPECT_EQ(slurp(dir / "a.txt"), "hello");
  EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
}

TEST(Config, RangesAndJson) {
  EXPECT_EQ(IntRange::parse("2..5").lo, 2);
  EXPECT_EQ(IntRange::parse("2..5").hi, 5);
  EXPECT_EQ(IntRange::parse("3").hi, 3);
  EXPECT_EQ(IntRange::parse("2-4").hi, 4);
  EXPECT_THROW(IntRange::parse("a"), std::invalid_argument);
  const auto c = ExperimentConfig::from_json(nlohmann::json::parse(
      R"({"command":"szego","j":"2..4","N":1,"f":"simple:1,2,3","tolerances":{"block":1e-7}})"));
  EXPECT_EQ(c.j.hi, 4);
  EXPECT_EQ(c.tol.block, 1e-7);
  EXPECT_EQ(ExperimentConfig::from_json(c.to_json()).hash(), c.hash());
  EXPECT_THROW(ExperimentConfig::from_json(nlohmann::json::parse(R"({"bogus":1})")), std::invalid_argument);
  auto moved = c;
  moved.output = "elsewhere";
  EXPECT_EQ(moved.hash(), c.hash());
  moved.seed = 4;
  EXPECT_NE(moved.hash(), c.hash());
}

TEST(Validate, Violations) {
  ExperimentConfig c;
  c.command = "szego";
  c.j = {2, 4};
  c.scale = 2;
  EXPECT_TRUE(has(validate(c), "N must be < birth j"));
  c.scale = 1;
  c.function = "simple:1,0,3";
  EXPECT_TRUE(has(validate(c), "positivity required"));
  c.function = "simple:1,2,3";
  c.sample_level = 8;
  EXPECT_TRUE(has(validate(c), "desk-scale cap exceeded"));
  c.sample_level = 0;
  EXPECT_TRUE(validate(c).empty());
  c.j = {5, 2};
  EXPECT_TRUE(has(validate(c), "j: range must be nonempty"));
  c.j = {2, 4};
  c.series = "two";
  EXPECT_TRUE(has(validate(c), "impossible"));
  c.command = "launch";
  EXPECT_TRUE(has(validate(c), "command"));
  ExperimentConfig s;
  s.command = "spectrum";
  s.m = {2, 3};
  EXPECT_TRUE(has(validate(s), "single level"));
  s.m = {9, 9};
  EXPECT_TRUE(has(validate(s), "desk-scale"));
}

TEST(Run, SpectrumCount) {
  ExperimentConfig c;
  c.command = "spectrum";
  c.m = {4, 4};
  c.dense = true;
  c.output = scratch("spectrum").string();
  std::ostringstream log;
  ASSERT_EQ(run(c, log), kExitOk) << log.str();
  std::ifstream in(fs::path(c.output) / "spectrum.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# config_hash=", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "series,birth,signs,fixation,gamma_m,lambda,multiplicity");
  long long total = 0;
  while (std::getline(in, line)) total += std::stoll(line.substr(line.rfind(',') + 1));
  EXPECT_EQ(total, 120);
  EXPECT_TRUE(fs::exists(fs::path(c.output) / "dense_spectrum.csv"));
}

TEST(Run, ExitCodes) {
  ExperimentConfig c;
  c.command = "szego";
  c.j = {2, 3};
  c.scale = 3;
  c.output = scratch("invalid").string();
  std::ostringstream log;
  EXPECT_EQ(run(c, log), kExitInvalid);
  const auto err = nlohmann::json::parse(slurp(fs::path(c.output) / "error.json"));
  EXPECT_EQ(err["kind"], "validation");
  EXPECT_EQ(err["exit_code"], 2);

  c.scale = 1;
  c.function = "expr:x - 0.5";
  c.output = scratch("nonpositive").string();
  EXPECT_EQ(run(c, log), kExitInvalid);

  ExperimentConfig b;
  b.command = "basis";
  b.j = {3, 3};
  b.tol.orthonormality = 1e-30;  // unattainable on purpose
  b.output = scratch("numerical").string();
  EXPECT_EQ(run(b, log), kExitNumerical);
  EXPECT_EQ(nlohmann::json::parse(slurp(fs::path(b.output) / "error.json"))["kind"], "numerical");
}

TEST(Run, SzegoConstantExact) {
  ExperimentConfig c;
  c.command = "szego";
  c.j = {2, 4};
  c.function = "constant:1";
  c.output = scratch("szego_const").string();
  std::ostringstream log;
  ASSERT_EQ(run(c, log), kExitOk) << log.str();
  std::ifstream in(fs::path(c.output) / "szego.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (int k = 0; k < 6; ++k) std::getline(ss, cell, ',');
    EXPECT_LE(std::stod(cell), 1e-9);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  const auto summary = nlohmann::json::parse(slurp(fs::path(c.output) / "summary.json"));
  EXPECT_TRUE(summary.contains("timestamp"));
  EXPECT_TRUE(fs::exists(fs::path(c.output) / "szego_loglog.dat"));
}

TEST(Run, AllCommandsProduceArtifacts) {
  std::ostringstream log;
  const std::vector<std::pair<std::string, std::string>> cases{
      {"topology", "vertices.csv"}, {"resistance", "resistance.csv"}, {"basis", "basis.csv"}, {"equidist", "equidist.csv"}};
  for (const auto& [cmd, file] : cases) {
    ExperimentConfig c;
    c.command = cmd;
    c.m = {3, 3};
    c.j = {3, 3};
    c.pairs = 50;
    c.function = "harmonic:1,2,1";
    c.output = scratch("cmd_" + cmd).string();
    ASSERT_EQ(run(c, log), kExitOk) << cmd << "\n" << log.str();
    EXPECT_TRUE(fs::exists(fs::path(c.output) / file)) << cmd;
    EXPECT_TRUE(fs::exists(fs::path(c.output) / "summary.json")) << cmd;
  }
}

TEST(Run, DeterministicBodies) {
  std::ostringstream log;
  ExperimentConfig c;
  c.command = "szego";
  c.mode = "cutoff";
  c.m = {2, 4};
  c.function = "harmonic:1,2,1";
  c.seed = 17;
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  c.output = a.string();
  ASSERT_EQ(run(c, log), kExitOk);
  c.output = b.string();
  ASSERT_EQ(run(c, log), kExitOk);
  const std::string body = slurp(a / "szego.csv");
  EXPECT_FALSE(body.empty());
  EXPECT_EQ(body, slurp(b / "szego.csv"));
}
