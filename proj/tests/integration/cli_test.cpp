/*
 * Copyright 2026 The MDistrib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + MDISTRIB_CLI_PATH + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mdistrib_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }
  std::string synth(const std::string& spec) const {
    write("spec.txt", spec);
    const auto r = run("synth --spec " + path("spec.txt") + " --out-edges " + path("edges.csv") +
                       " --out-labels " + path("labels.txt"));
    EXPECT_EQ(r.code, 0) << r.out;
    return r.out;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HelpShowsDefaults) {
  for (const char* sub : {"score", "eval", "bench"}) {
    const auto r = run(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.75"), std::string::npos) << sub;
    EXPECT_NE(r.out.find("constant"), std::string::npos) << sub;
    EXPECT_NE(r.out.find("719"), std::string::npos) << sub;
    EXPECT_NE(r.out.find("0.6"), std::string::npos) << sub;
  }
  EXPECT_EQ(run("synth --help").code, 0);
  EXPECT_EQ(run("").code, 1);
}

TEST_F(CliTest, ScoreWritesCsvDeterministically) {
  write("e.csv", "a,b,1\na,b,2\na,c,2\nb,c,3\na,b,3\n");
  const std::string flags = " --variant cms --rows 2 --buckets 719 --partitions 2 --workers 2"
                            " --relational --alpha 0.6";
  auto r = run("score --input " + path("e.csv") + flags + " --output " + path("s1.csv") +
               " --timing " + path("t.csv") + " --node-map " + path("n.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  r = run("score --input " + path("e.csv") + flags + " --output " + path("s2.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto s1 = slurp(path("s1.csv"));
  EXPECT_EQ(s1, slurp(path("s2.csv")));
  EXPECT_EQ(s1.rfind("seq,src,dst,tick,score,edge_score,src_score,dst_score\n", 0), 0u);
  EXPECT_EQ(std::count(s1.begin(), s1.end(), '\n'), 6);
  EXPECT_EQ(slurp(path("n.csv")), "id,name\n0,a\n1,b\n2,c\n");
  EXPECT_EQ(slurp(path("t.csv")).rfind("phase,partition,worker,millis\n", 0), 0u);
  EXPECT_FALSE(fs::exists(path("s1.csv.tmp")));
}

TEST_F(CliTest, EmptyInputGivesHeaderOnly) {
  write("empty.csv", "");
  const auto r = run("score --input " + path("empty.csv") + " --output " + path("s.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(path("s.csv")), "seq,src,dst,tick,score,edge_score,src_score,dst_score\n");
}

TEST_F(CliTest, BadFlagsExitOneWithoutOutput) {
  write("e.csv", "a,b,1\n");
  for (const std::string bad : {"--alpha 2", "--alpha 0", "--variant xyz", "--partitions 0",
                                "--variant fis --max-map-size 100", "--load-factor 1.5 --variant fis",
                                "--decay-mode sometimes", "--bogus"}) {
    const auto r = run("score --input " + path("e.csv") + " --output " + path("s.csv") + " " + bad);
    EXPECT_EQ(r.code, 1) << bad << "\n" << r.out;
    EXPECT_FALSE(fs::exists(path("s.csv"))) << bad;
  }
  EXPECT_EQ(run("score --input " + path("nope.csv")).code, 1);
  EXPECT_EQ(run("score --input " + path("e.csv") + " --output " + path("s.csv"),
                "MDISTRIB_WORKERS=0")
                .code,
            1);
  EXPECT_EQ(run("score --input " + path("e.csv") + " --output " + path("s.csv"),
                "MDISTRIB_WORKERS=3")
                .code,
            0);
}

TEST_F(CliTest, MalformedInputExitTwo) {
  write("e.csv", "a,b,1\nbroken line\n");
  const auto r = run("score --input " + path("e.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
  EXPECT_EQ(run("score --input " + path("e.csv") + " --output " + path("no/such/dir/s.csv")).code,
            2);
}

TEST_F(CliTest, SynthAndEval) {
  synth("num_nodes=300\nnum_ticks=30\nbase_rate=100\nseed=4\nburst=10,7,30,2\n");
  const std::string first = slurp(path("edges.csv"));
  synth("num_nodes=300\nnum_ticks=30\nbase_rate=100\nseed=4\nburst=10,7,30,2\n");
  EXPECT_EQ(slurp(path("edges.csv")), first);

  // Burst rows are exactly the tick-10 label-1 rows.
  std::istringstream edges(first);
  std::istringstream labels(slurp(path("labels.txt")));
  std::string e, l;
  int burst = 0;
  while (std::getline(edges, e) && std::getline(labels, l)) {
    if (l == "1") {
      ++burst;
      EXPECT_EQ(e.substr(e.rfind(',') + 1), "10");
    }
  }
  EXPECT_EQ(burst, 60);

  const auto r = run("eval --input " + path("edges.csv") + " --labels " + path("labels.txt") +
                     " --repeats 3 --report-jsonl " + path("r.jsonl") + " --report-csv " +
                     path("r.csv") + " --dataset darpa");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("auc "), std::string::npos);
  EXPECT_NE(r.out.find("total_ms mean"), std::string::npos);
  EXPECT_NE(slurp(path("r.jsonl")).find("\"repeats\":3"), std::string::npos);
  EXPECT_EQ(slurp(path("r.csv")).rfind("variant,", 0), 0u);
}

TEST_F(CliTest, SynthWithoutBurstsHasNoAnomalies) {
  synth("num_nodes=20\nnum_ticks=5\nbase_rate=4\n");
  const auto labels = slurp(path("labels.txt"));
  EXPECT_EQ(labels.size(), 40u);
  EXPECT_EQ(labels.find('1'), std::string::npos);
  write("bad.txt", "colour=blue\n");
  EXPECT_EQ(run("synth --spec " + path("bad.txt") + " --out-edges " + path("x") +
                " --out-labels " + path("y"))
                .code,
            1);
}

TEST_F(CliTest, EvalLabelErrors) {
  write("e.csv", "a,b,1\nb,c,2\n");
  write("short.txt", "1\n");
  auto r = run("eval --input " + path("e.csv"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("labels"), std::string::npos) << r.out;
  r = run("eval --input " + path("e.csv") + " --labels " + path("missing.txt"));
  EXPECT_EQ(r.code, 1);
  r = run("eval --input " + path("e.csv") + " --labels " + path("short.txt"));
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST_F(CliTest, BenchGridHasMatchingDigests) {
  synth("num_nodes=100\nnum_ticks=40\nbase_rate=100\n");
  const auto r = run("bench --input " + path("edges.csv") +
                     " --lengths 1000,4000 --workers-list 1,4 --partitions-list 1,8 --output " +
                     path("b.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(slurp(path("b.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "length,workers,partitions,repeat,pass1_ms,prefix_ms,pass2_ms,total_ms,digest");
  std::map<std::string, std::string> digest_by_config;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    const std::string key = line.substr(0, c1) + "/" + line.substr(c2 + 1, c3 - c2 - 1);
    const std::string digest = line.substr(line.rfind(',') + 1);
    auto [it, inserted] = digest_by_config.emplace(key, digest);
    if (!inserted) EXPECT_EQ(it->second, digest) << line;
  }
  EXPECT_EQ(rows, 8);
  EXPECT_EQ(run("bench --input " + path("edges.csv") + " --workers-list 1,x").code, 1);
  EXPECT_EQ(run("bench --input " + path("edges.csv") + " --lengths 999999").code, 1);
  EXPECT_EQ(run("bench").code, 1);
}
