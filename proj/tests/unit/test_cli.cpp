// Copyright 2026 The Fragscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fragscope/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kDir = std::string(FIXTURE_DIR) + "/addressbook-mini/";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    work_ = fs::temp_directory_path() / ("fragscope_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(work_);
    fs::create_directories(work_);
  }
  void TearDown() override { fs::remove_all(work_); }

  int run(const std::string& args) {
    std::string cmd = "cd '" + work_.string() + "' && '" FRAGSCOPE_CLI "' --log-level quiet " + args +
                      " > out.txt 2> err.txt";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::string read(const std::string& name) {
    std::ifstream in(work_ / name);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path work_;
};

TEST_F(Cli, ClassifyPrintsLabelAndTrace) {
  EXPECT_EQ(run("classify " + kDir + "snapshots/s3.json " + kDir + "snapshots/s5.json"), 0);
  std::string out = read("out.txt");
  EXPECT_EQ(out.substr(0, out.find('\n')), "Nd3");
  EXPECT_NE(out.find('['), std::string::npos);
  EXPECT_TRUE(fs::exists(work_ / "fragscope-manifest.json"));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("bogus"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("classify only-one.json"), 2);
  EXPECT_EQ(run("crawl " + kDir + "app.json --mode sideways"), 2);
  EXPECT_EQ(run("eval"), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, DomainErrors) {
  std::ofstream(work_ / "bad.json") << "{";
  EXPECT_EQ(run("fragment bad.json"), 1);
  std::ofstream(work_ / "tworoots.json") << R"({"root":0,"nodes":[{"id":0,"tag":"html"},{"id":1,"tag":"p"}]})";
  EXPECT_EQ(run("fragment tworoots.json"), 1);
}

TEST_F(Cli, CrawlGenerateRunPipeline) {
  ASSERT_EQ(run("crawl " + kDir + "app.json --out model --max-actions 500"), 0);
  EXPECT_TRUE(fs::exists(work_ / "model/model.json"));
  EXPECT_TRUE(fs::exists(work_ / "model/audit.jsonl"));
  EXPECT_TRUE(fs::exists(work_ / "model/manifest.json"));
  ASSERT_EQ(run("gentest model --out tests.json"), 0);
  EXPECT_TRUE(fs::exists(work_ / "tests.json.manifest.json"));
  EXPECT_EQ(run("runtest tests.json model " + kDir + "app.json --fail-on-test-failure --report r.html"), 0);
  EXPECT_TRUE(fs::exists(work_ / "r.html"));
  EXPECT_EQ(run("runtest tests.json model " + kDir + "app-variant.json --fail-on-test-failure"), 1);
  EXPECT_EQ(run("runtest tests.json model " + kDir + "app-variant.json"), 0);
}

TEST_F(Cli, ManifestRecordsSeedAndConfig) {
  ASSERT_EQ(run("--seed 42 tune " + kDir + "pairs.csv --budget 20 --out tune.json"), 0);
  auto m = fragscope::Json::parse(read("tune.json.manifest.json"));
  EXPECT_EQ(m["seed"], 42);
  EXPECT_EQ(m["subcommand"], "tune");
  EXPECT_EQ(m["config"]["budget"], 20);
  std::string first = read("tune.json");
  ASSERT_EQ(run("--seed 42 tune " + kDir + "pairs.csv --budget 20 --out tune.json"), 0);
  EXPECT_EQ(read("tune.json"), first);
}

TEST_F(Cli, EvalPairs) {
  ASSERT_EQ(run("eval --pairs " + kDir + "pairs.csv --out f1.json"), 0);
  auto j = fragscope::Json::parse(read("f1.json"));
  EXPECT_DOUBLE_EQ(j["f1"].get<double>(), 1.0);
}

}  // namespace
