//
// Copyright 2026 The SmoothCert Authors
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
//

#include "smoothcert/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "smoothcert/tensor_io.h"

namespace smoothcert::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;

  json Json() const { return json::parse(out); }
};

Run Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ::unsetenv(kSeedEnv);
    dir_ = fs::temp_directory_path() /
           ("smoothcert_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    WriteTensor(ImageTensor::FromValues({0.5}), Path("x.mst1"));
    Write("threshold.json", R"({"type": "threshold", "threshold": 0.25})");
    Write("hash.json", R"({"type": "hash", "classes": 10})");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    ::unsetenv(kSeedEnv);
  }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  std::string Write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return Path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
  EXPECT_EQ(Invoke({"cert", "--help"}).code, kExitOk);
  EXPECT_EQ(Invoke({"bogus"}).code, kExitError);
  EXPECT_EQ(Invoke({}).code, kExitError);
  EXPECT_EQ(Invoke({"cert", "--pa", "abc", "--trivial-pb"}).code, kExitError);
}

TEST_F(CliTest, TableReproducesTheReferenceGrid) {
  const auto run = Invoke({"table"});
  ASSERT_EQ(run.code, kExitOk);
  EXPECT_EQ(run.out.find('\r'), std::string::npos);
  const auto lines = Lines(run.out);
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_EQ(lines[0], "pa,pb,gamma1,gamma2,gamma1_full,gamma2_full");
  EXPECT_EQ(lines[2].rfind("0.600,0.200,0.71,1.33,0.70710678", 0), 0u);
  EXPECT_EQ(lines[5].rfind("0.800,0.200,0.57,1.52,", 0), 0u);
  EXPECT_EQ(lines[7].rfind("0.990,0.010,0.12,2.58,", 0), 0u);
  const auto report = Invoke({"table", "--json"}).Json();
  EXPECT_EQ(report["manifest"]["command"], "table");
  EXPECT_EQ(report["result"]["rows"].size(), 8u);
}

TEST_F(CliTest, CertExitCodes) {
  const auto ok = Invoke({"cert", "--pa", "0.9", "--trivial-pb"});
  EXPECT_EQ(ok.code, kExitOk);
  EXPECT_NE(ok.out.find("gamma1: 0.389876"), std::string::npos) << ok.out;
  EXPECT_NE(ok.out.find("gamma2: 1.822616"), std::string::npos) << ok.out;
  EXPECT_EQ(Invoke({"cert", "--pa", "0.4", "--trivial-pb"}).code, kExitAbstain);
  EXPECT_EQ(Invoke({"cert", "--pa", "0.9", "--pb", "0.95"}).code, kExitError);
  EXPECT_EQ(Invoke({"cert", "--pa", "0.9"}).code, kExitError);
  EXPECT_EQ(Invoke({"cert", "--pa", "1.5", "--trivial-pb"}).code, kExitError);
  EXPECT_EQ(Invoke({"cert", "--pa", "0.9", "--pb", "0.1", "--trivial-pb"}).code,
            kExitError);
}

TEST_F(CliTest, CertJsonAndDistributions) {
  const auto report =
      Invoke({"cert", "--pa", "0.9", "--pb", "0.1", "--json"}).Json();
  const auto& cert = report["result"]["certificate"];
  EXPECT_NEAR(cert["gamma1"].get<double>(), 0.389876, 1e-6);
  EXPECT_NEAR(cert["gamma2"].get<double>(), 1.822616, 1e-6);
  EXPECT_EQ(cert["method"], "bisection");
  const auto inverse =
      Invoke({"cert", "--pa", "0.9", "--pb", "0.1", "--dist", "inv-rayleigh", "--json"})
          .Json();
  EXPECT_NEAR(inverse["result"]["certificate"]["gamma2"].get<double>(), 1 / 0.389876,
              1e-4);
  const auto laplace = Invoke({"cert", "--pa", "0.75", "--trivial-pb", "--dist",
                               "log-laplace", "--scale", "1", "--json"})
                           .Json();
  EXPECT_NEAR(laplace["result"]["certificate"]["gamma2"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(Invoke({"cert", "--pa", "0.9", "--trivial-pb", "--dist", "cauchy"}).code,
            kExitError);
}

TEST_F(CliTest, SmoothThresholdOracle) {
  const auto run = Invoke({"smooth", "--input", Path("x.mst1"), "--classifier",
                           Path("threshold.json"), "--n", "100000", "--sweep"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  const auto report = run.Json();
  const auto& result = report["result"];
  EXPECT_EQ(result["label"], 0);
  EXPECT_LE(result["certificate"]["gamma2"].get<double>(), 2.0);
  EXPECT_NEAR(result["sweep"]["right"].get<double>(), 2.0, 0.02 + 1e-9);
  EXPECT_EQ(report["manifest"]["config"]["n"], 100000);
}

TEST_F(CliTest, SmoothErrorsAndAbstention) {
  EXPECT_EQ(Invoke({"smooth", "--input", Path("missing.mst1"), "--classifier",
                    Path("threshold.json")})
                .code,
            kExitError);
  EXPECT_EQ(Invoke({"smooth", "--input", Path("x.mst1"), "--classifier",
                    Path("threshold.json"), "--n", "0"})
                .code,
            kExitError);
  const auto bad = Invoke({"smooth", "--input", Path("x.mst1"), "--classifier",
                           Write("bad.json", "{not json")});
  EXPECT_EQ(bad.code, kExitError);
  EXPECT_NE(bad.err.find("error:"), std::string::npos);
  const auto abstain = Invoke({"smooth", "--input", Path("x.mst1"), "--classifier",
                               Path("hash.json"), "--n", "10000"});
  EXPECT_EQ(abstain.code, kExitAbstain);
  EXPECT_TRUE(abstain.Json()["result"]["abstain"].get<bool>());
}

TEST_F(CliTest, SeedComesFromEnvironmentUnlessGiven) {
  const std::vector<std::string> args = {"smooth", "--input", Path("x.mst1"),
                                         "--classifier", Path("hash.json"),
                                         "--n", "1000"};
  ::setenv(kSeedEnv, "42", 1);
  EXPECT_EQ(Invoke(args).Json()["manifest"]["seed"], 42);
  auto with_flag = args;
  with_flag.insert(with_flag.end(), {"--seed", "7"});
  EXPECT_EQ(Invoke(with_flag).Json()["manifest"]["seed"], 7);
  ::setenv(kSeedEnv, "not-a-number", 1);
  EXPECT_EQ(Invoke(args).code, kExitError);
}

TEST_F(CliTest, ResultPayloadsAreByteIdenticalAcrossReruns) {
  const std::vector<std::string> args = {"smooth", "--input", Path("x.mst1"),
                                         "--classifier", Path("threshold.json"),
                                         "--n", "5000", "--seed", "3", "--sweep",
                                         "--step", "0.1"};
  const auto a = Invoke(args).Json();
  const auto b = Invoke(args).Json();
  EXPECT_EQ(a["result"].dump(), b["result"].dump());
  EXPECT_EQ(a["manifest"]["config"].dump(), b["manifest"]["config"].dump());
}

TEST_F(CliTest, RealisticReportsAndAbstains) {
  const auto config =
      Write("config.json", R"({"n_eps": 20, "n_gamma": 1000, "sigma_gauss": 0.0, "alpha": 0.001, "seed": 1})");
  const auto budget = Write(
      "budget.json",
      R"({"E": 0.0, "q_E": 0.9, "alpha_E": 0.01, "rho": 0.111, "gamma_interval": [0.5, 1.5]})");
  const auto ok = Invoke({"realistic", "--budget", budget, "--config", config,
                          "--input", Path("x.mst1"), "--classifier",
                          Path("threshold.json")});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  const auto cert = ok.Json()["result"]["certificate"];
  EXPECT_GE(cert["gamma1"].get<double>(), 0.5);
  EXPECT_LE(cert["gamma2"].get<double>(), 1.5);

  const auto infeasible = Write(
      "infeasible.json",
      R"({"E": 0.0, "q_E": 0.9, "alpha_E": 0.01, "rho": 0.6, "gamma_interval": [0.5, 1.5]})");
  const auto abstain = Invoke({"realistic", "--budget", infeasible, "--config", config,
                               "--input", Path("x.mst1"), "--classifier",
                               Path("threshold.json")});
  EXPECT_EQ(abstain.code, kExitAbstain);
  EXPECT_TRUE(abstain.Json()["result"]["abstain"].get<bool>());

  const auto unknown_field = Write(
      "extra.json",
      R"({"E": 0.0, "q_E": 0.9, "alpha_E": 0.01, "rho": 0.111, "gamma_interval": [0.5, 1.5], "x": 1})");
  EXPECT_EQ(Invoke({"realistic", "--budget", unknown_field, "--config", config,
                    "--input", Path("x.mst1"), "--classifier", Path("threshold.json")})
                .code,
            kExitError);
}

TEST_F(CliTest, EstimateErrorOnBinaryDataset) {
  fs::create_directories(dir_ / "data");
  for (int i = 0; i < 50; ++i) {
    WriteTensor(ImageTensor::FromValues({0.0, 1.0, static_cast<double>(i % 2)}),
                dir_ / "data" / ("img" + std::to_string(100 + i) + ".mst1"));
  }
  const auto run = Invoke({"estimate-error", "--dataset", Path("data"), "--gamma-min",
                           "0.71", "--gamma-max", "1.33"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_EQ(run.Json()["result"]["E"].get<double>(), 0.0);
  const auto too_small = Invoke({"estimate-error", "--dataset", Path("data"),
                                 "--gamma-min", "0.71", "--gamma-max", "1.33",
                                 "--samples", "10"});
  EXPECT_EQ(too_small.code, kExitError);
  EXPECT_NE(too_small.err.find("need >= 44 samples"), std::string::npos) << too_small.err;
}

TEST_F(CliTest, CompareEmitsEveryDistribution) {
  const auto run = Invoke({"compare", "--pa-grid", "0.9:0.9:0.01"});
  ASSERT_EQ(run.code, kExitOk);
  const auto lines = Lines(run.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "pa,pb,dist,scale,gamma1,gamma2,abstain");
  EXPECT_EQ(lines[1].rfind("0.9,0.1,rayleigh,", 0), 0u);
  EXPECT_NE(run.out.find("log-gaussian"), std::string::npos);
  const auto report = Invoke({"compare", "--dists", "rayleigh,log-gaussian",
                              "--pa-grid", "0.55:0.99:0.01", "--json"})
                          .Json();
  EXPECT_EQ(report["result"]["rows"].size(), 2u * 45u);
  EXPECT_EQ(Invoke({"compare", "--pa-grid", "0.9"}).code, kExitError);
}

}  // namespace
}  // namespace smoothcert::cli
