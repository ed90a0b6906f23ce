// Copyright 2026 The spinsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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
#include <sstream>
#include <string>

#include "spinsq/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
    const std::string cmd = std::string(SPINSQ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("spinsq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    void write(const std::string &name, const std::string &text) const { std::ofstream(dir_ / name) << text; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateWritesCsv) {
    EXPECT_EQ(run("simulate --trials 200 --seed 4 --csv --quiet --out " + path("out")), 0);
    EXPECT_TRUE(fs::exists(path("out/trials.csv")));
    EXPECT_TRUE(fs::exists(path("out/summary.csv")));
    const auto resolved = spinsq::parse_config(slurp(path("out/config.resolved")));
    EXPECT_EQ(resolved.mc.trials, 200u);
    EXPECT_EQ(resolved.mc.seed, 4u);
}

TEST_F(Cli, SameSeedSameBytes) {
    ASSERT_EQ(run("sweep --trials 100 --csv --quiet --out " + path("a")), 0);
    ASSERT_EQ(run("sweep --trials 100 --csv --quiet --out " + path("b")), 0);
    EXPECT_EQ(slurp(path("a/trials.csv")), slurp(path("b/trials.csv")));
    EXPECT_EQ(slurp(path("a/summary.csv")), slurp(path("b/summary.csv")));
}

TEST_F(Cli, AnalyzeReproducesSummary) {
    ASSERT_EQ(run("sweep --trials 100 --csv --quiet --out " + path("a")), 0);
    ASSERT_EQ(run("analyze --input " + path("a/trials.csv") + " --csv --quiet --out " + path("b")), 0);
    EXPECT_EQ(slurp(path("a/summary.csv")), slurp(path("b/summary.csv")));
}

TEST_F(Cli, RamseyAndOracle) {
    write("r.cfg", "sweep.steps = 3\nmc.trials = 100\n");
    EXPECT_EQ(run("ramsey --quiet --config " + path("r.cfg")), 0);
    EXPECT_EQ(run("oracle-check --trials 0 --csv --quiet --out " + path("o")), 0);
    EXPECT_TRUE(fs::exists(path("o/oracle.csv")));
}

TEST_F(Cli, ConfigErrorsExitTwo) {
    write("bad.cfg", "atoms.cont = 5\n");
    EXPECT_EQ(run("simulate --config " + path("bad.cfg")), 2);
    write("range.cfg", "sweep.loss_factor = 1.5\n");
    EXPECT_EQ(run("sweep --config " + path("range.cfg")), 2);
    EXPECT_EQ(run("simulate --config " + path("missing.cfg")), 2);
    EXPECT_EQ(run("simulate --trials many"), 2);
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, RuntimeErrorsExitThree) {
    write("broken.csv", "trial_id,tx_in,phi1,phi2,phi_aoc,tx_out,seed_stream_id\n0,1,2\n");
    EXPECT_EQ(run("analyze --quiet --input " + path("broken.csv")), 3);
    // Two trials per bin cannot be summarized.
    EXPECT_EQ(run("simulate --quiet --trials 2"), 3);
}

TEST_F(Cli, HelpSucceeds) { EXPECT_EQ(run("--help"), 0); }
