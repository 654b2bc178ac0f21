/* Copyright 2026 The qchannel Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "test_util.hpp"

namespace qchannel {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qchannel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("qchannel_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

TEST_F(CliTest, GenIsDeterministic) {
  const auto a = run({"gen", "--n", "4", "--d", "4", "--m", "10", "--seed", "1",
                      "--out", path("a.json")});
  const auto b = run({"gen", "--n", "4", "--d", "4", "--m", "10", "--seed", "1",
                      "--out", path("b.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_FALSE(slurp(path("a.json")).empty());
}

TEST_F(CliTest, GenRankOneInputs) {
  ASSERT_EQ(run({"gen", "--n", "5", "--d", "3", "--nr", "1", "--m", "8", "--out",
                 path("d.json")})
                .code,
            0);
  const MappingDataset ds = dataset_from_json(read_json_file(path("d.json")));
  ASSERT_EQ(ds.size(), 8u);
  for (const auto& r : ds.records()) {
    const Spectrum s = eigh(r.rho.sym());
    int positive = 0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) positive += s.values(i) > 1e-10;
    EXPECT_EQ(positive, 1);
  }
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"gen", "--m", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"gen", "--n", "2", "--d", "3"}).code, cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"learn"}).code, cli::kExitUsage);  // no dataset
  EXPECT_EQ(run({"learn", "--dataset", path("missing.json")}).code, cli::kExitUsage);
  EXPECT_EQ(run({"fig1", "--m", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"evolve"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, LearnSqrtRecoversExactUnitary) {
  ASSERT_EQ(run({"gen", "--n", "5", "--d", "5", "--nr", "3", "--m", "40", "--out",
                 path("d.json"), "--truth-out", path("truth.json")})
                .code,
            0);
  const auto r = run({"learn", "--dataset", path("d.json"), "--proxy", "sqrt",
                      "--out", path("rep.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json rep = read_json_file(path("rep.json"));
  EXPECT_TRUE(rep.at("converged").get<bool>());
  EXPECT_NEAR(rep.at("fidelity_per_observation").get<double>(), 1.0, 1e-8);
  EXPECT_NEAR(rep.at("F_prop").get<double>(), 40.0, 1e-8 * 40);
  const MappingOperator truth = operator_from_json(read_json_file(path("truth.json")));
  const Solution sol = solution_from_json(rep.at("solution"));
  EXPECT_LE(testing::sign_free_diff(sol.b.block(0), truth.block(0)), 1e-6);
}

TEST_F(CliTest, LearnRhoSigmaOnPureData) {
  ASSERT_EQ(run({"gen", "--n", "4", "--d", "4", "--nr", "1", "--m", "30", "--out",
                 path("d.json")})
                .code,
            0);
  const auto r = run({"learn", "--dataset", path("d.json"), "--proxy", "rho_sigma"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out).at("fidelity_per_observation").get<double>(), 1.0,
              1e-8);
}

TEST_F(CliTest, LearnRejectsMismatchedDimsAndNonQuadraticProxy) {
  ASSERT_EQ(run({"gen", "--n", "4", "--d", "3", "--m", "5", "--out", path("d.json")}).code, 0);
  EXPECT_EQ(run({"learn", "--dataset", path("d.json"), "--n", "5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"learn", "--dataset", path("d.json"), "--d", "4"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"learn", "--dataset", path("d.json"), "--proxy", "prop"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"learn", "--dataset", path("d.json"), "--proxy", "zzz"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"learn", "--dataset", path("d.json"), "--n", "4", "--d", "3"}).code,
            cli::kExitOk);
}

TEST_F(CliTest, LearnNotConvergedExitCode) {
  ASSERT_EQ(run({"gen", "--n", "4", "--d", "4", "--ns", "3", "--m", "20", "--out",
                 path("d.json")})
                .code,
            0);
  const auto r = run({"learn", "--dataset", path("d.json"), "--max-iter", "1",
                      "--restarts", "0"});
  EXPECT_EQ(r.code, cli::kExitNotConverged);
  EXPECT_FALSE(Json::parse(r.out).at("converged").get<bool>());
}

TEST_F(CliTest, WeightsFileScalesFidelity) {
  ASSERT_EQ(run({"gen", "--n", "3", "--d", "3", "--nr", "1", "--m", "3", "--out",
                 path("d.json")})
                .code,
            0);
  write_text_file(path("w.json"), "[2.0, 2.0, 2.0]");
  const auto r = run({"learn", "--dataset", path("d.json"), "--weights", path("w.json"),
                      "--proxy", "rho_sigma"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out).at("fidelity").get<double>(), 6.0, 1e-8);
  write_text_file(path("bad.json"), "[1.0]");
  EXPECT_EQ(run({"learn", "--dataset", path("d.json"), "--weights", path("bad.json")}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, ReportIsSelfConsistent) {
  ASSERT_EQ(run({"gen", "--n", "4", "--d", "3", "--ns", "2", "--nr", "2", "--m", "30",
                 "--out", path("d.json")})
                .code,
            0);
  const auto r = run({"learn", "--dataset", path("d.json"), "--proxy", "vec"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json rep = Json::parse(r.out);
  const MappingDataset ds = dataset_from_json(read_json_file(path("d.json")));
  const Solution sol = solution_from_json(rep.at("solution"));
  const double f = rep.at("fidelity").get<double>();
  EXPECT_NEAR(total_fidelity_dataset(Closeness::kVec, ds, sol.b), f, 1e-8 * f);
  EXPECT_NEAR(total_fidelity_dataset(Closeness::kPropOverlap, ds, sol.b),
              rep.at("F_prop_overlap").get<double>(), 1e-8 * f);
  EXPECT_NEAR(total_fidelity_dataset(Closeness::kProp, ds, sol.b),
              rep.at("F_prop").get<double>(), 1e-8 * f);
  EXPECT_NEAR(rep.at("trace_lambda").get<double>(), f, 1e-9 * f);
}

TEST_F(CliTest, HierarchyDepthOneMatchesLearn) {
  ASSERT_EQ(run({"gen", "--n", "4", "--d", "4", "--ns", "2", "--m", "40", "--out",
                 path("d.json")})
                .code,
            0);
  const auto learn = run({"learn", "--dataset", path("d.json"), "--seed", "9"});
  const auto hier = run({"hier", "--dataset", path("d.json"), "--seed", "9",
                         "--levels", "1"});
  ASSERT_EQ(learn.code, 0) << learn.err;
  ASSERT_EQ(hier.code, 0) << hier.err;
  const Json l = Json::parse(learn.out);
  const Json h = Json::parse(hier.out);
  EXPECT_EQ(h.at("levels").size(), 1u);
  EXPECT_EQ(h.at("levels")[0].at("fidelity"), l.at("fidelity"));
  EXPECT_EQ(h.at("levels")[0].at("u"), l.at("solution").at("operator").at("blocks")[0]);
  EXPECT_EQ(h.at("proper_fidelity")[0].at("F_prop_overlap"), l.at("F_prop_overlap"));
}

TEST_F(CliTest, EvolveStartsAtSolutionAndStaysUnitary) {
  ASSERT_EQ(run({"gen", "--n", "3", "--d", "3", "--ns", "2", "--m", "30", "--out",
                 path("d.json")})
                .code,
            0);
  ASSERT_EQ(run({"learn", "--dataset", path("d.json"), "--out", path("rep.json")}).code, 0);
  const auto r = run({"evolve", "--solution", path("rep.json"), "--out", path("traj.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(slurp(path("traj.csv")));
  ASSERT_EQ(rows.front(),
            (std::vector<std::string>{"t", "row", "col", "re", "im", "abs", "phase"}));
  EXPECT_EQ(rows.size(), 1u + 101u * 9u);
  const Solution sol = solution_from_json(read_json_file(path("rep.json")).at("solution"));
  for (std::size_t i = 1; i <= 9; ++i) {
    ASSERT_EQ(std::stod(rows[i][0]), 0.0);
    const int p = std::stoi(rows[i][1]), k = std::stoi(rows[i][2]);
    EXPECT_NEAR(std::stod(rows[i][3]), sol.b.block(0)(p, k), 1e-15);
    EXPECT_EQ(std::stod(rows[i][4]), 0.0);
  }
  const auto pos = r.err.find("max_unitarity_violation ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(r.err.substr(pos + 24)), 1e-12);
}

TEST_F(CliTest, Fig1Columns) {
  const auto r = run({"fig1", "--n", "5", "--d", "5", "--m", "40", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.front(),
            (std::vector<std::string>{"N_r", "proxy", "F_total_on_exact_channel"}));
  ASSERT_EQ(rows.size(), 1u + 5u * 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double f = std::stod(rows[i][2]);
    if (rows[i][1] != "rho_sigma" || rows[i][0] == "1") EXPECT_NEAR(f, 40.0, 1e-8 * 40);
  }
  // Full precision output.
  EXPECT_EQ(cli::fmt17(0.1), "0.10000000000000001");
}

TEST_F(CliTest, Fig1KrausRankFour) {
  const auto r = run({"fig1", "--n", "5", "--d", "5", "--ns", "4", "--m", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::map<std::string, std::map<std::string, double>> v;
  for (const auto& row : csv(r.out)) {
    if (row[0] == "N_r") continue;
    v[row[0]][row[1]] = std::stod(row[2]);
  }
  for (int n_r = 2; n_r <= 5; ++n_r) {
    const auto& c = v[std::to_string(n_r)];
    EXPECT_LT(c.at("rho_sigma"), c.at("sqrt"));
  }
}

TEST_F(CliTest, Table1Rows) {
  const auto r = run({"table1", "--n", "4", "--d", "4", "--ns", "2", "--m", "60",
                      "--levels", "2", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.front(), (std::vector<std::string>{"proxy", "F_exact", "level", "F_level",
                                                    "F_prop_level",
                                                    "F_prop_uhlmann_level"}));
  ASSERT_EQ(rows.size(), 1u + 4u * 2u);
  for (std::size_t i = 1; i < rows.size(); i += 2) {
    const double f_exact = std::stod(rows[i][1]);
    const double f0 = std::stod(rows[i][3]), f1 = std::stod(rows[i + 1][3]);
    EXPECT_GE(f0, f_exact - 1e-8 * f0) << rows[i][0];
    EXPECT_GE(f0, f1 - 1e-9);
    if (rows[i][0] == "sqrt") {
      EXPECT_NEAR(std::stod(rows[i][4]), f0, 1e-6 * 60);
      EXPECT_NEAR(std::stod(rows[i + 1][4]), f1, 1e-6 * 60);
    }
  }
}

}  // namespace
}  // namespace qchannel
