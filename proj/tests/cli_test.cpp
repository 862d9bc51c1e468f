#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
};

// Runs zc with the given argument string; stderr is discarded.
Result zc(const std::string& args, const std::string& env = "") {
  const std::string command = env + (env.empty() ? "" : " ") + "'" + ZC_BINARY + "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "zc_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, BuildMatchesGoldenFiles) {
  for (int k = 1; k <= 5; ++k) {
    const Result r = zc("build --x 0 --y " + std::to_string(k));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, slurp(std::filesystem::path(GOLDEN_DIR) / ("k0_" + std::to_string(k) + ".json"))) << k;
  }
}

TEST(Cli, BuildErrors) {
  EXPECT_EQ(zc("build --x 0 --y 0").exit_code, 2);
  EXPECT_EQ(zc("build --x 0").exit_code, 2);
  EXPECT_EQ(zc("build --x 0,q --y 1").exit_code, 2);
  EXPECT_EQ(zc("frobnicate").exit_code, 2);
}

TEST(Cli, BuildFourStates) {
  const Result r = zc("build --x 0,5 --y 1,2");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["states"].size(), 4u);
  EXPECT_EQ(j["transitions"].size(), 4u);
}

TEST(Cli, BuildToFileAndRoundTrip) {
  const auto path = scratch("k22.json");
  ASSERT_EQ(zc("build --x 0,5 --y 1,2 -o '" + path.string() + "'").exit_code, 0);
  const Result again = zc("build -A '" + path.string() + "'");
  EXPECT_EQ(again.exit_code, 0);
  EXPECT_EQ(again.out, slurp(path));
}

TEST(Cli, ActSectionTrivialEqual) {
  const std::string K = " --x 0 --y 1";
  EXPECT_EQ(zc("act b '0 0'" + K).out, "0 1\n");
  EXPECT_EQ(zc("act 'a1 b1' '0,0'" + K).out, "1 1\n");
  EXPECT_EQ(zc("act a^-1 0 --format json" + K).out, "[-1]\n");
  EXPECT_EQ(zc("section b 0" + K).out, "a1\n");
  EXPECT_EQ(zc("section 'a1 b1 a1^-1 b1^-1' 0" + K).out, "a1^-1\n");

  const Result t = zc("trivial 'a1 b1 a1^-1 b1^-1'" + K);
  EXPECT_EQ(t.exit_code, 1);
  EXPECT_EQ(t.out, "nontrivial\nwitness 0\nrho -1\n");
  const Result e = zc("trivial 1" + K);
  EXPECT_EQ(e.exit_code, 0);
  EXPECT_EQ(e.out, "trivial\n");
  EXPECT_EQ(zc("trivial 'b a^-2 b a^2 b^-1 a^-2 b^-1 a^2'" + K).exit_code, 0);
  EXPECT_EQ(zc("trivial c3" + K).exit_code, 2);

  EXPECT_EQ(zc("equal 'a b' 'b a'" + K).out, "false\n");
  EXPECT_EQ(zc("equal 'a b' 'b a'" + K).exit_code, 1);
  EXPECT_EQ(zc("equal 'a a^-1 b' b" + K).exit_code, 0);
}

TEST(Cli, AbelianizeWreathSpine) {
  const std::string K = " --x 0 --y 1";
  EXPECT_EQ(zc("abelianize 'a^2 b'" + K).out, "2 1\n");
  EXPECT_EQ(zc("abelianize 'a^2 b' --format json" + K).out, "[2,1]\n");
  EXPECT_EQ(zc("wreath b" + K).out, "shift 0\nlamp 0:1\n");
  EXPECT_EQ(zc("wreath 'a b a^-1 b^-1' --format json" + K).out, "{\"shift\":0,\"lamp\":[[0,-1],[1,1]]}\n");
  EXPECT_EQ(zc("spine 2" + K).out, "w 1 0\nc b1\n");
  EXPECT_EQ(zc("spine 3 --x 0 --y 4").out, "w 4 4 0\nc b1\n");
  EXPECT_EQ(zc("spine 0 --format json" + K).out, "{\"m\":0,\"w\":[],\"c\":\"a1\"}\n");
}

TEST(Cli, SchreierFormats) {
  const std::string K = " --x 0 --y 1";
  const Result dot = zc("schreier --center 0,0 --radius 1" + K);
  EXPECT_EQ(dot.exit_code, 0);
  EXPECT_EQ(dot.out.rfind("graph schreier {\n", 0), 0u);
  EXPECT_NE(dot.out.find("\"0,0\" -- \"0,1\" [label=\"b1\"];"), std::string::npos);
  const Result j = zc("schreier --level 1 --radius 2 --format json" + K);
  const auto parsed = nlohmann::json::parse(j.out);
  EXPECT_EQ(parsed["vertices"].size(), 5u);
  EXPECT_EQ(parsed["edges"].size(), 4u);
  const Result orbital = zc("schreier --end-period 0 --level 2 --radius 3 --format json" + K);
  EXPECT_EQ(nlohmann::json::parse(orbital.out)["end"]["depth"], 2);
  EXPECT_EQ(zc("schreier --end-pre 1 --level 2" + K).exit_code, 2);
}

TEST(Cli, VertexCapFlagEnvAndConfig) {
  const std::string K = " --x 0 --y 1";
  const std::string args = "schreier --level 3 --radius 20" + K;
  EXPECT_EQ(zc(args).exit_code, 0);
  EXPECT_EQ(zc(args + " --vertex-cap 10").exit_code, 1);
  EXPECT_EQ(zc(args, "ZC_VERTEX_CAP=10").exit_code, 1);
  EXPECT_EQ(zc(args + " --vertex-cap 100000", "ZC_VERTEX_CAP=10").exit_code, 0);
  EXPECT_EQ(zc(args, "ZC_VERTEX_CAP=abc").exit_code, 2);

  const auto config = scratch("cap.json");
  std::ofstream(config) << R"({"vertex_cap": 10})";
  EXPECT_EQ(zc(args + " --config '" + config.string() + "'").exit_code, 1);
  EXPECT_EQ(zc(args + " --config '" + config.string() + "'", "ZC_VERTEX_CAP=100000").exit_code, 0);
}

TEST(Cli, ConfigSuppliesDefaultsAndFlagsOverride) {
  const auto config = scratch("session.json");
  std::ofstream(config) << R"({"x": [0], "y": "1", "format": "json", "radius": 1})";
  const std::string c = " --config '" + config.string() + "'";
  const Result fromfile = zc("schreier --level 1" + c);
  ASSERT_EQ(fromfile.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(fromfile.out)["radius"], 1);
  const Result overridden = zc("schreier --level 1 --format dot --radius 2" + c);
  EXPECT_EQ(overridden.out.rfind("graph schreier {", 0), 0u);
  EXPECT_NE(overridden.out.find("radius 2"), std::string::npos);
  // explicit words beat the config's
  EXPECT_EQ(zc("spine 1 --format text --x 3 --y 1" + c).out, "w 3\nc b1\n");
  EXPECT_EQ(zc("spine 1 --config /nonexistent/zc.json --x 0 --y 1").exit_code, 2);
}

TEST(Cli, VerifyAllPassesAndIsDeterministic) {
  const Result first = zc("verify all --x 0 --y 1");
  const Result second = zc("verify all --x 0 --y 1");
  EXPECT_EQ(first.exit_code, 0);
  EXPECT_EQ(first.out, second.out);
  std::istringstream lines(first.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j["pass"].get<bool>()) << line;
    EXPECT_EQ(j["ms"], 0);
    ++count;
  }
  EXPECT_GT(count, 10);
}

TEST(Cli, VerifySingleChecks) {
  const std::string K = " --x 0 --y 1";
  EXPECT_EQ(zc("verify commutator_section --s a --t b" + K).exit_code, 0);
  EXPECT_EQ(zc("verify residual_witness --wx b --wy 'a^-1 b a'" + K).exit_code, 0);
  EXPECT_EQ(zc("verify residual_witness --wx a --wy b" + K).exit_code, 2);
  EXPECT_EQ(zc("verify level_transitive --level 1 --lo -5 --hi 5 --radius 4" + K).exit_code, 1);
  EXPECT_EQ(zc("verify inductive_structure --m 2 --lo -2 --hi 2" + K).exit_code, 0);
  EXPECT_EQ(zc("verify nonsense" + K).exit_code, 2);
  const Result timed = zc("verify growth --timing" + K);
  EXPECT_EQ(timed.exit_code, 0);
  EXPECT_TRUE(nlohmann::json::parse(timed.out).contains("ms"));
}
