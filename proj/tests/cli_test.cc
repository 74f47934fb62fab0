// Copyright 2026 The prs-lab Authors
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

#include "prslab/cli.h"

#include <fstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "test_util.h"

using namespace prslab;
using namespace prslab::testing;

namespace {

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST(Cli, moments_row) {
    TempDir dir;
    CliResult r = run_cli_capture({"--out-dir", dir.str(), "moments", "--source", "construction1", "--n", "2", "--i",
                                   "1", "--t", "2", "--method", "deltapair", "--canonical", "--json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto csv = lines(read_file(dir.path() / "moments.csv"));
    ASSERT_EQ(csv.size(), 3u);
    ASSERT_EQ(csv[0], "# schema=1");
    ASSERT_EQ(csv[1], "source,kind,n,i,t,method,seed,haar_distance,runtime_ms");
    ASSERT_EQ(csv[2], "construction1,binary,2,1,2,deltapair,0,0.833333333333333,0");
    auto j = nlohmann::json::parse(read_file(dir.path() / "moments.json"));
    ASSERT_NEAR(j["haar_distance"].get<double>(), 5.0 / 6.0, 1e-12);
}

TEST(Cli, usage_errors) {
    ASSERT_EQ(run_cli_capture({}).code, kExitUsage);
    ASSERT_EQ(run_cli_capture({"moments", "--t", "0"}).code, kExitUsage);
    ASSERT_EQ(run_cli_capture({"frobnicate"}).code, kExitUsage);
    TempDir dir;
    CliResult r = run_cli_capture({"--out-dir", dir.str(), "moments", "--space", "uniform", "--count", "4"});
    ASSERT_EQ(r.code, kExitUsage);
    ASSERT_NE(r.err.find("--seed"), std::string::npos);
    ASSERT_EQ(run_cli_capture({"--help"}).code, kExitOk);
}

TEST(Cli, budget_failure_is_runtime_error) {
    TempDir dir;
    CliResult r = run_cli_capture(
        {"--budget-mib", "1", "--out-dir", dir.str(), "moments", "--source", "construction1", "--n", "3", "--i", "2", "--t", "2"});
    ASSERT_EQ(r.code, kExitRuntimeError);
}

TEST(Cli, lemmas_pass) {
    TempDir dir;
    CliResult r = run_cli_capture({"--out-dir", dir.str(), "lemmas", "--max-n", "5", "--max-t", "4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(read_file(dir.path() / "lemmas.json"));
    ASSERT_EQ(j["dist"].size(), 20u);
    for (const auto &row : j["dist"]) {
        ASSERT_TRUE(row["holds"].get<bool>());
    }
}

TEST(Cli, expand_check_pass) {
    TempDir dir;
    CliResult r = run_cli_capture({"--out-dir", dir.str(), "expand-check", "--n", "3", "--i", "1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(read_file(dir.path() / "expand_check.json"));
    ASSERT_LE(j["max_deviation"].get<double>(), 1e-12);
}

TEST(Cli, good_census_reports_ambiguity) {
    TempDir dir;
    CliResult r = run_cli_capture({"--out-dir", dir.str(), "good-census", "--n", "4", "--i", "1", "--t", "2"});
    ASSERT_EQ(r.code, kExitAssertionFailed);
    auto csv = lines(read_file(dir.path() / "good_census.csv"));
    ASSERT_EQ(csv[1], "n,i,t,|Dist|,|Good|,bound,slack");
    ASSERT_EQ(csv[2], "4,1,2,26880,496,256,240");
    CliResult single = run_cli_capture({"--out-dir", dir.str(), "good-census", "--n", "3", "4", "--i", "1", "--t", "1"});
    ASSERT_EQ(single.code, kExitOk) << single.err;
}

TEST(Cli, condition_json) {
    TempDir dir;
    CliResult ok = run_cli_capture({"--out-dir", dir.str(), "condition", "--witness", "general", "--n", "2"});
    ASSERT_EQ(ok.code, kExitOk) << ok.err;
    auto j = nlohmann::json::parse(read_file(dir.path() / "condition.json"));
    ASSERT_TRUE(j["passed"].get<bool>());
    ASSERT_EQ(j["reports"].size(), 2u);

    CliResult bad = run_cli_capture({"--out-dir", dir.str(), "condition", "--witness", "identity-binary", "--n", "2"});
    ASSERT_EQ(bad.code, kExitAssertionFailed);
    auto jb = nlohmann::json::parse(read_file(dir.path() / "condition.json"));
    ASSERT_EQ(jb["reports"][0]["failures"][0]["x"], 1);
    ASSERT_EQ(jb["reports"][1]["failures"][0]["y"], 1);

    CliResult scaled = run_cli_capture({"--out-dir", dir.str(), "condition", "--witness", "binary", "--n", "2", "--scale", "1"});
    ASSERT_EQ(scaled.code, kExitAssertionFailed);
}

TEST(Cli, empty_sweep_writes_header_only) {
    TempDir dir;
    CliResult r = run_cli_capture({"--out-dir", dir.str(), "sweep", "--n", "--canonical"});
    ASSERT_EQ(r.code, kExitOk) << r.err << r.out;
    auto csv = lines(read_file(dir.path() / "sweep.csv"));
    ASSERT_EQ(csv.size(), 2u);
    ASSERT_EQ(csv[1], "source,kind,n,i,t,method,seed,haar_distance,runtime_ms,method_max_diff");
}

TEST(Cli, infeasible_sweep_point_writes_manifest) {
    TempDir dir;
    CliResult r = run_cli_capture({"--budget-mib", "8", "--out-dir", dir.str(), "sweep", "--source", "construction1", "--n",
                                   "3", "--i", "1", "2", "--t", "2", "--method", "bruteforce"});
    ASSERT_EQ(r.code, kExitRuntimeError);
    auto j = nlohmann::json::parse(read_file(dir.path() / "sweep.failures.json"));
    ASSERT_EQ(j["failed_points"].size(), 1u);
    ASSERT_EQ(j["failed_points"][0]["i"], 2);
    auto csv = lines(read_file(dir.path() / "sweep.csv"));
    ASSERT_EQ(csv.size(), 3u);
}

TEST(Cli, canonical_sweep_is_byte_stable) {
    TempDir a;
    TempDir b;
    std::vector<std::string> grid{"sweep", "--source", "plain", "construction1", "--n", "2", "3", "--i", "1", "--t", "1",
                                  "2", "--method", "bruteforce", "deltapair", "--canonical"};
    std::vector<std::string> args_a{"--out-dir", a.str()};
    std::vector<std::string> args_b{"--out-dir", b.str()};
    args_a.insert(args_a.end(), grid.begin(), grid.end());
    args_b.insert(args_b.end(), grid.begin(), grid.end());
    args_b.push_back("--threads");
    args_b.push_back("1");
    ASSERT_EQ(run_cli_capture(args_a).code, kExitOk);
    ASSERT_EQ(run_cli_capture(args_b).code, kExitOk);
    std::string sa = read_file(a.path() / "sweep.csv");
    ASSERT_EQ(sa, read_file(b.path() / "sweep.csv"));
    ASSERT_EQ(lines(sa).size(), 18u);
}

TEST(Cli, config_file_and_flag_precedence) {
    TempDir dir;
    std::filesystem::path cfg = dir.path() / "run.json";
    {
        std::ofstream f(cfg);
        f << R"({"seed": 5, "out_dir": ")" << dir.str()
          << R"(", "command": "moments", "n": 3, "t": 2, "space": "uniform", "count": 8, "canonical": true})";
    }
    CliResult r = run_cli_capture({"--config", cfg.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_EQ(lines(read_file(dir.path() / "moments.csv"))[2].substr(0, 29), "plain,binary,3,0,2,bruteforce");
    ASSERT_NE(read_file(dir.path() / "moments.csv").find(",5,"), std::string::npos);

    CliResult over = run_cli_capture({"--config", cfg.string(), "--n", "2", "--seed", "6"});
    ASSERT_EQ(over.code, kExitOk) << over.err;
    std::string row = lines(read_file(dir.path() / "moments.csv"))[2];
    ASSERT_EQ(row.substr(0, 29), "plain,binary,2,0,2,bruteforce");
    ASSERT_NE(row.find(",6,"), std::string::npos);

    std::filesystem::path nested = dir.path() / "nested.json";
    {
        std::ofstream f(nested);
        f << R"({"out_dir": ")" << dir.str() << R"(", "sweep": {"n": [2], "t": [1], "canonical": true}})";
    }
    CliResult sw = run_cli_capture({"--config", nested.string(), "sweep"});
    ASSERT_EQ(sw.code, kExitOk) << sw.err;
    ASSERT_EQ(lines(read_file(dir.path() / "sweep.csv")).size(), 3u);
}

TEST(Cli, invalid_config_is_usage_error) {
    TempDir dir;
    std::filesystem::path cfg = dir.path() / "bad.json";
    std::ofstream(cfg) << "{not json";
    ASSERT_EQ(run_cli_capture({"--config", cfg.string(), "lemmas"}).code, kExitUsage);
}
