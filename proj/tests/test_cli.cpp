// Copyright 2026 The ultrawalk Authors
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

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ultrawalk/cli.hpp"

namespace {

namespace cli = ultrawalk::cli;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ultrawalk_test_" + name);
}

TEST(Cli, TimeAverageCsv) {
  const auto r = invoke({"time-average", "--p", "3", "--M", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"entity", "t", "class_k", "class_size",
                                               "representative", "value_float", "value_exact"}));
  EXPECT_EQ(rows[1][2], "0");
  EXPECT_EQ(rows[1][3], "1");
  EXPECT_EQ(rows[1][6], "41/81");
  EXPECT_EQ(rows[2][3], "2");
  EXPECT_EQ(rows[2][6], "14/81");
  EXPECT_EQ(rows[3][3], "6");
  EXPECT_EQ(rows[3][6], "2/81");
}

TEST(Cli, HypercubeSiteAverages) {
  const auto r = invoke({"graph", "--family", "hypercube", "--N", "4", "--time-average"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> site;
  for (const auto& row : parse_csv(r.out)) {
    if (row[0] == "site_average") site.push_back(row[6]);
  }
  EXPECT_EQ(site, (std::vector<std::string>{"35/128", "5/128", "3/128", "5/128", "35/128"}));
}

TEST(Cli, EvolveAtTimeZero) {
  const auto r = invoke({"evolve", "--p", "3", "--M", "2", "--eps", "2,1", "--t", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1][5], "1");
  EXPECT_EQ(rows[2][5], "0");
  EXPECT_EQ(rows[3][5], "0");
}

TEST(Cli, FloatsRoundTrip) {
  const auto r = invoke({"evolve", "--p", "3", "--M", "3", "--eps", "3,2,1", "--t-grid", "0:10:7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto wp = ultrawalk::WalkParams::make(ultrawalk::ExplicitLandscape{{3, 2, 1}},
                                              ultrawalk::TreeParams::make(3, 3));
  int checked = 0;
  for (const auto& row : parse_csv(r.out)) {
    if (row[0] != "probability") continue;
    double t = 0, v = 0;
    std::from_chars(row[1].data(), row[1].data() + row[1].size(), t);
    std::from_chars(row[5].data(), row[5].data() + row[5].size(), v);
    const int k = std::stoi(row[2]);
    EXPECT_EQ(v, ultrawalk::probabilities(wp, t)[k]);
    ++checked;
  }
  EXPECT_EQ(checked, 28);
}

TEST(Cli, JsonMirror) {
  const auto r = invoke({"time-average", "--p", "3", "--M", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], cli::kSchemaVersion);
  EXPECT_EQ(j["command"], "time-average");
  ASSERT_EQ(j["records"].size(), 3u);
  EXPECT_EQ(j["records"][1]["value_exact"], "14/81");
  EXPECT_EQ(j["records"][1]["value_float"].get<double>(), 14.0 / 81.0);
  EXPECT_TRUE(j["records"][1]["t"].is_null());
}

TEST(Cli, DecayFitJson) {
  const auto r = invoke({"decay-fit", "--p", "2", "--M", "40", "--kind", "linear", "--alpha", "1",
                         "--ref-level", "0", "--t-min", "100", "--t-max", "1e6", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["fit"]["model"], "power");
  EXPECT_NEAR(j["fit"]["slope"].get<double>(), -1.0, 0.15);
  EXPECT_EQ(j["fit"]["window"][0].get<double>(), 100.0);
  EXPECT_GE(j["fit"]["residual"].get<double>(), 0.0);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"classical", "--p", "3", "--M", "4", "--eps", "4,3,2,1",
                                      "--t-grid", "0:3:11"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST(Cli, SelfCheckPasses) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"spectrum", "--p", "3", "--M", "3", "--eps", "3,2,1", "--check"},
        {"evolve", "--p", "2", "--M", "4", "--eps", "4,3,2,1", "--t", "0.5,9", "--check"},
        {"classical", "--p", "3", "--M", "2", "--eps", "2,1", "--t", "0.37", "--check"}}) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.err.empty());
  }
}

TEST(Cli, ValidationErrors) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"spectrum", "--p", "3", "--M", "2", "--eps", "1,2"},
        {"spectrum", "--p", "3", "--eps", "2,1"},
        {"spectrum", "--p", "1", "--M", "2", "--eps", "2,1"},
        {"spectrum", "--p", "3", "--M", "2", "--kind", "quadratic"},
        {"evolve", "--p", "3", "--M", "2", "--eps", "2,1"},
        {"evolve", "--p", "3", "--M", "2", "--eps", "2,1", "--t", "abc"},
        {"graph", "--family", "torus", "--N", "4", "--time-average"},
        {"graph", "--family", "cycle", "--N", "2", "--time-average"},
        {"decay-fit", "--p", "2", "--M", "40", "--kind", "linear", "--t-min", "100", "--t-max", "1e6"},
        {"frobnicate"},
        {}}) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "" : args[0]) << ": " << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(r.err.rfind("error code=2 kind=", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  }
}

TEST(Cli, ResourceCap) {
  const auto r = invoke({"spectrum", "--p", "2", "--M", "13", "--eps",
                         "13,12,11,10,9,8,7,6,5,4,3,2,1", "--check"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("cap=4096"), std::string::npos) << r.err;
}

TEST(Cli, DenseCapEnvironment) {
  ::setenv(cli::kDenseCapEnv, "8", 1);
  const auto r = invoke({"spectrum", "--p", "3", "--M", "2", "--eps", "2,1", "--check"});
  ::setenv(cli::kDenseCapEnv, "zero", 1);
  const auto bad = invoke({"spectrum", "--p", "3", "--M", "2", "--eps", "2,1"});
  ::unsetenv(cli::kDenseCapEnv);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("cap=8"), std::string::npos) << r.err;
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, ExitCodeForNumericalFailure) {
  std::ostringstream err;
  EXPECT_EQ(cli::report_error(err, cli::ExitCode::numerical, "numerical", "a\nb"), 4);
  EXPECT_EQ(err.str(), "error code=4 kind=numerical: a b\n");
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto path = temp_file("config.ini");
  {
    std::ofstream f(path);
    f << "[spectrum]\np=3\nM=3\neps=[3,2,1]\n\n[decay-fit]\np=2\nM=40\nkind=linear\nalpha=2\n"
         "ref-level=0\nt-min=100\nt-max=1e6\n";
  }
  const auto a = invoke({"--config", path.string(), "spectrum"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(parse_csv(a.out).size(), 5u);

  const auto b = invoke({"--config", path.string(), "spectrum", "--M", "1", "--eps", "7"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(parse_csv(b.out).size(), 3u);

  const auto c = invoke({"--config", path.string(), "decay-fit", "--format", "json"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NEAR(nlohmann::json::parse(c.out)["fit"]["slope"].get<double>(), -0.5, 0.075);
  std::filesystem::remove(path);
}

TEST(Cli, OutputFile) {
  const auto path = temp_file("out.csv");
  const auto r = invoke({"limit", "--p", "3", "--classes", "2", "--output", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_NE(ss.str().find("1/54"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, CompareTaxonomy) {
  const auto r = invoke({"compare", "--hypercube-N", "1024", "--line-T", "1000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& rec : j["records"]) {
    const std::string e = rec["entity"];
    const double v = rec["value_float"];
    if (e == "cycle_max_site_average" || e == "hypercube_max_site_average" ||
        e == "line_max_site_average") {
      EXPECT_LE(v, 0.02) << e;
    }
    if (e == "complete_origin_average") EXPECT_GE(v, 0.98);
    if (e == "ultrametric_origin_average") EXPECT_GE(v, 0.5);
  }
}

TEST(Cli, TimeGridParsing) {
  EXPECT_EQ(cli::parse_time_grid("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(cli::parse_time_grid("2:9:1"), (std::vector<double>{2.0}));
  EXPECT_THROW(cli::parse_time_grid("0:1"), ultrawalk::ValidationError);
  EXPECT_THROW(cli::parse_time_grid("0:1:0"), ultrawalk::ValidationError);
}

}  // namespace
