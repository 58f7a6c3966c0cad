#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "infharm/cli.hpp"

using namespace infharm;
using Json = nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "infharm");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string map_path(const std::string& name) { return std::string(INFHARM_MAPS_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / ("infharm_test_" + name);
  std::ofstream(p) << content;
  return p.string();
}

}  // namespace

TEST(CliCheck, SingleEntryJson) {
  const CliRun r = run({"check", "--entry", "clifford_torus"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "check");
  EXPECT_TRUE(j["passed"].get<bool>());
  ASSERT_EQ(j["entries"].size(), 1u);
  const Json& e = j["entries"][0];
  EXPECT_EQ(e["id"], "clifford_torus");
  EXPECT_TRUE(e["classification"]["verdict"]["infinity_harmonic"].get<bool>());
  EXPECT_TRUE(e["energy"]["has_oracle"].get<bool>());
  EXPECT_LT(e["energy"]["max_rel_error"].get<double>(), 1e-10);
}

TEST(CliCheck, EntriesAreOrderedById) {
  const CliRun r = run({"check", "--entry", "sol_projection", "--entry", "aronsson", "--entry", "arc_length_circle"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["entries"].size(), 3u);
  EXPECT_EQ(j["entries"][0]["id"], "arc_length_circle");
  EXPECT_EQ(j["entries"][1]["id"], "aronsson");
  EXPECT_EQ(j["entries"][2]["id"], "sol_projection");
}

TEST(CliCheck, UnknownEntryIsUsageError) {
  const CliRun r = run({"check", "--entry", "bogus"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
}

TEST(CliCheck, SeededRunsAreByteIdentical) {
  const CliRun a = run({"check", "--seed", "7"});
  const CliRun b = run({"check", "--seed", "7"});
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST(CliCheck, CsvAndHumanFormats) {
  const CliRun c = run({"check", "--entry", "arc_length_circle", "--format", "csv"});
  EXPECT_EQ(c.code, kExitOk);
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "id,passed,verdicts,inf_harmonic,conformality,homothety,energy_max_rel_error");
  const CliRun h = run({"check", "--entry", "arc_length_circle", "--format", "human"});
  EXPECT_EQ(h.code, kExitOk);
  EXPECT_NE(h.out.find("PASS arc_length_circle"), std::string::npos);
  EXPECT_NE(h.out.find("1/1 entries passed"), std::string::npos);
}

TEST(CliCheck, OutFileReceivesReport) {
  const std::string path = (std::filesystem::temp_directory_path() / "infharm_test_check.json").string();
  const CliRun r = run({"check", "--entry", "arc_length_circle", "--out", path});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["entries"][0]["id"], "arc_length_circle");
}

TEST(CliClassify, OrthogonalProjectionIsMorphism) {
  const CliRun r = run({"classify", map_path("orthogonal_projection.map"), "--expect", "infinity_harmonic_morphism,hwc,"
                                                                                   "infinity_harmonic,"
                                                                                   "horizontally_homothetic"});
  EXPECT_EQ(r.code, kExitOk) << r.err << r.out;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["classification"]["verdict"]["infinity_harmonic_morphism"].get<bool>());
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(CliClassify, Diag12IsNotConformal) {
  const CliRun r = run({"classify", map_path("diag12.map"), "--format", "human"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("verdict: infinity_harmonic "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("conformality"), std::string::npos);
  const CliRun m = run({"classify", map_path("diag12.map"), "--expect", "infinity_harmonic_morphism"});
  EXPECT_EQ(m.code, kExitCheckFailed);
}

TEST(CliClassify, ArctanLineMapIsMorphism) {
  const CliRun r = run({"classify", map_path("line_map_arctan.map"), "--samples", "20", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["classification"]["verdict"]["infinity_harmonic_morphism"].get<bool>());
}

TEST(CliClassify, MalformedFileReportsPosition) {
  const std::string path = map_path("malformed.map");
  const CliRun r = run({"classify", path});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind(path + ":3:14: error:", 0), 0u) << r.err;
}

TEST(CliClassify, SingularSamplePointIsListed) {
  const std::string path = temp_file("singular.map", "source.dim = 1\ntarget.dim = 1\nphi[1] = log(x1)\n");
  const CliRun r = run({"classify", path});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("at sample point (-1)"), std::string::npos) << r.err;
}

TEST(CliClassify, MissingFileAndBadVerdict) {
  EXPECT_EQ(run({"classify", "/nonexistent/file.map"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", map_path("diag12.map"), "--expect", "wonderful"}).code, kExitUsage);
}

TEST(CliReduce, Kink) {
  const CliRun r = run({"reduce", "kink", "--k", "1", "--verify-grid", "20"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["kind"], "cylinder_kink");
  EXPECT_DOUBLE_EQ(j["conserved_constant"].get<double>(), 1.0);
  EXPECT_TRUE(j["verification"]["passed"].get<bool>());
}

TEST(CliReduce, PendulumRecordsPeriod) {
  const CliRun r = run({"reduce", "pendulum", "--k", "1", "--C", "2", "--verify-grid", "10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_FALSE(j["period"].is_null());
  EXPECT_LT(j["max_invariant_residual"].get<double>(), 1e-7);
}

TEST(CliReduce, PendulumAtBoundaryPointsToOtherBranches) {
  const CliRun r = run({"reduce", "pendulum", "--k", "1", "--C", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("reduce kink"), std::string::npos);
  EXPECT_NE(r.err.find("reduce constant"), std::string::npos);
}

TEST(CliReduce, BallInfeasibleConstant) {
  EXPECT_EQ(run({"reduce", "ball", "--n", "2", "--C", "0.5"}).code, kExitUsage);
}

TEST(CliReduce, ConstantAndEquatorHuman) {
  const CliRun c = run({"reduce", "constant", "--k", "2", "--format", "human", "--verify-grid", "10"});
  EXPECT_EQ(c.code, kExitOk);
  EXPECT_NE(c.out.find("C = 3"), std::string::npos) << c.out;
  const CliRun e = run({"reduce", "equator", "--n", "2", "--format", "human", "--verify-grid", "10"});
  EXPECT_EQ(e.code, kExitOk) << e.err;
}

TEST(CliReduce, CsvToStdoutAndFile) {
  const CliRun s = run({"reduce", "kink", "--s0", "0", "--s1", "1", "--step", "0.1", "--format", "csv", "--verify-grid",
                     "5"});
  EXPECT_EQ(s.code, kExitOk);
  EXPECT_EQ(s.out.rfind("param,value,derivative,residual\n", 0), 0u);
  const std::string path = (std::filesystem::temp_directory_path() / "infharm_test_kink.csv").string();
  const CliRun f = run({"reduce", "kink", "--s0", "0", "--s1", "1", "--step", "0.1", "--out", path, "--verify-grid",
                     "5"});
  EXPECT_EQ(f.code, kExitOk);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "param,value,derivative,residual");
  EXPECT_EQ(Json::parse(f.out)["csv"], path);
}

TEST(CliConformal, AllChecksPass) {
  const CliRun r = run({"conformal", "--samples", "30"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
}

TEST(CliCatalog, ListsEveryEntry) {
  const CliRun r = run({"catalog"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* id : {"aronsson", "clifford_torus", "sol_projection", "linear_diag12_distance"}) {
    EXPECT_NE(r.out.find(id), std::string::npos) << id;
  }
}

TEST(CliUsage, ErrorsAndHelp) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--tol", "-1"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"reduce", "spiral"}).code, kExitUsage);
  const CliRun h = run({"--help"});
  EXPECT_EQ(h.code, kExitOk);
  EXPECT_NE(h.out.find("check"), std::string::npos);
  EXPECT_EQ(run({"reduce", "--help"}).code, kExitOk);
}
