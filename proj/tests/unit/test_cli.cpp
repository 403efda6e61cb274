#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "meyer/io.hpp"

#ifdef MEYER_CLI

namespace fs = std::filesystem;
using meyer::io::json;

namespace {

const std::string fixtures = MEYER_FIXTURES;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("meyer_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(MEYER_CLI) + " " + args + " > " + (dir_ / "stdout").string() + " 2> " + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  void write(const std::string& name, const std::string& content) const { std::ofstream(path(name)) << content; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateThenLiftIntegers) {
  ASSERT_EQ(run("generate --scheme " + fixtures + "/integers.json --region -100,100 -o " + path("z.json")), 0);
  EXPECT_EQ(meyer::io::read_json_file(path("z.json")).at("points").size(), 201u);
  ASSERT_EQ(run("lift --input " + path("z.json") + " --schedule 10,20,40 -o " + path("lift.json")), 0);
  const json r = meyer::io::read_json_file(path("lift.json"));
  EXPECT_EQ(r.at("verdict"), "stabilized");
}

TEST_F(Cli, VerifyMismatchIsCertificateFailure) {
  ASSERT_EQ(run("generate --scheme " + fixtures + "/fibonacci.json --region -40,40 -o " + path("fib.json")), 0);
  EXPECT_EQ(run("verify --scheme " + fixtures + "/fibonacci.json --patch " + path("fib.json")), 0);
  EXPECT_EQ(run("verify --scheme " + fixtures + "/wrong_fibonacci.json --patch " + path("fib.json")), 2);
}

TEST_F(Cli, MalformedInputIsInputError) {
  write("bad.json", "{\"dim\": 1, \"points\": ");
  EXPECT_EQ(run("analyze --input " + path("bad.json")), 4);
  EXPECT_EQ(run("cover --input " + path("missing.json")), 4);
  EXPECT_NE(slurp("stderr").find("missing.json"), std::string::npos);
}

TEST_F(Cli, BudgetExceeded) {
  EXPECT_EQ(run("generate --scheme " + fixtures + "/integers.json --region -100000,100000 --budget 100"), 3);
}

TEST_F(Cli, SumsetAndCover) {
  write("a.json", R"({"dim": 1, "points": [[0], [1], [10], [11], [20], [21]]})");
  ASSERT_EQ(run("sumset --op diff --a " + path("a.json") + " --b " + path("a.json") + " -o " + path("d.json")), 0);
  EXPECT_EQ(meyer::io::read_json_file(path("d.json")).at("points").size(), 15u);
  ASSERT_EQ(run("cover --input " + path("a.json") + " --max-f 1 -o " + path("c.json")), 0);
  EXPECT_TRUE(meyer::io::read_json_file(path("c.json")).at("success").get<bool>());
}

TEST_F(Cli, ToruscoverAndManifest) {
  write("half.json", R"({"dim": 1, "resolution": 1024, "rle": [0, 512, 512]})");
  ASSERT_EQ(run("toruscover --input " + path("half.json") + " --eps 1/2 --bruteforce -o " + path("t.json") + " --manifest " + path("m.json") + " --seed 7"), 0);
  const json t = meyer::io::read_json_file(path("t.json"));
  EXPECT_EQ(t.at("certificate").at("k"), 8);
  EXPECT_TRUE(t.at("bruteforce").get<bool>());
  const json m = meyer::io::read_json_file(path("m.json"));
  EXPECT_EQ(m.at("seed"), 7);
  EXPECT_EQ(m.at("exit_code"), 0);
  EXPECT_EQ(m.at("outputs").at(0).at("sha256").get<std::string>().size(), 64u);
  EXPECT_EQ(m.at("inputs").at(0).at("sha256").get<std::string>().size(), 64u);
}

TEST_F(Cli, OutputsAreReproducible) {
  const std::string cmd = "generate --scheme " + fixtures + "/fibonacci.json --region -30,30 -o ";
  ASSERT_EQ(run(cmd + path("one.json")), 0);
  ASSERT_EQ(run(cmd + path("two.json")), 0);
  EXPECT_EQ(slurp("one.json"), slurp("two.json"));
}

TEST_F(Cli, ReduceAndRender) {
  ASSERT_EQ(run("reduce --scheme " + fixtures + "/non_dense.json -o " + path("r.json")), 0);
  EXPECT_EQ(meyer::io::read_json_file(path("r.json")).at("steps").size(), 1u);
  ASSERT_EQ(run("generate --scheme " + fixtures + "/fibonacci.json --region -10,10 -o " + path("p.json")), 0);
  ASSERT_EQ(run("render --input " + path("p.json") + " -o " + path("p.svg") + " --difference " + path("d.svg")), 0);
  EXPECT_EQ(slurp("p.svg").rfind("<svg", 0), 0u);
  EXPECT_EQ(slurp("d.svg").rfind("<svg", 0), 0u);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_NE(run(""), 0);
  EXPECT_NE(run("lift --schedule 10"), 0);
}

#endif
