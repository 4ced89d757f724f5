// Copyright 2026 The mclab Authors
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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mclab/error.hpp"
#include "mclab/harness.hpp"

namespace mclab {
namespace {

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

ExperimentConfig small(std::string name, std::size_t trials) {
    ExperimentConfig c;
    c.experiment = std::move(name);
    c.trials = trials;
    c.seed = 123;
    return c;
}

TEST(Registry, TwelveExperimentsWithAnchors) {
    const auto &all = list_experiments();
    EXPECT_EQ(all.size(), 12U);
    std::set<std::string> names;
    for (const auto &e : all) {
        names.insert(e.name);
        EXPECT_FALSE(e.anchor.empty()) << e.name;
        EXPECT_FALSE(e.description.empty()) << e.name;
        EXPECT_GT(e.default_trials, 0U) << e.name;
    }
    EXPECT_EQ(names.size(), 12U);
    EXPECT_EQ(find_experiment("trotter").name, "trotter");
    EXPECT_EQ(code_of([] { (void)find_experiment("nope"); }), ErrorCode::UnknownExperiment);
}

TEST(Run, ConfigurationErrors) {
    auto c = small("bernstein-diag", 0);
    EXPECT_EQ(code_of([&] { (void)run(c); }), ErrorCode::BadParams);
    c = small("bernstein-diag", 5);
    c.params["bogus"] = "1";
    EXPECT_EQ(code_of([&] { (void)run(c); }), ErrorCode::BadParams);
    c = small("bernstein-diag", 5);
    c.params["dim"] = "abc";
    EXPECT_EQ(code_of([&] { (void)run(c); }), ErrorCode::BadParams);
    c = small("tomography", 5);
    c.params["delta"] = "1.5";
    EXPECT_EQ(code_of([&] { (void)run(c); }), ErrorCode::BadParams);
    c = small("tomography", 5);
    c.params["design"] = "no-such-design-file";
    EXPECT_EQ(code_of([&] { (void)run(c); }), ErrorCode::IoError);
    c = small("no-such-experiment", 5);
    EXPECT_EQ(code_of([&] { (void)run(c); }), ErrorCode::UnknownExperiment);
}

TEST(Run, DeterministicAndThreadInvariant) {
    auto c = small("bernstein-diag", 40);
    const auto a = report_to_json(run(c));
    const auto b = report_to_json(run(c));
    EXPECT_EQ(a, b);
    c.threads = 4;
    EXPECT_EQ(report_to_json(run(c)), a);
    c.seed = 124;
    c.threads = 1;
    EXPECT_NE(report_to_json(run(c)), a);
}

TEST(Run, ThreadInvarianceOnRandomizedGraphWork) {
    auto c = small("sparsify", 6);
    c.params["vertices"] = "20";
    const auto a = report_to_csv(run(c));
    c.threads = 3;
    EXPECT_EQ(report_to_csv(run(c)), a);
}

TEST(Run, EveryExperimentRunsSmall) {
    for (const auto &e : list_experiments()) {
        auto c = small(e.name, 3);
        ExperimentReport r;
        ASSERT_NO_THROW(r = run(c)) << e.name;
        EXPECT_EQ(r.experiment, e.name);
        EXPECT_EQ(r.trials, 3U);
        EXPECT_FALSE(r.verdicts.empty()) << e.name;
        EXPECT_EQ(r.params.size(), e.params.size()) << e.name;
    }
}

TEST(Report, JsonShapeAndTiming) {
    auto c = small("bernstein-diag", 10);
    const auto r = run(c);
    const auto j = report_to_json(r);
    EXPECT_NE(j.find("\"spec_version\""), std::string::npos);
    EXPECT_NE(j.find("\"verdicts\""), std::string::npos);
    EXPECT_EQ(j.find("wall_clock_seconds"), std::string::npos);
    EXPECT_NE(report_to_json(r, true).find("wall_clock_seconds"), std::string::npos);
    EXPECT_EQ(exit_code(r), r.passed() ? 0 : 2);
    ASSERT_NE(r.find_verdict(r.verdicts.front().name), nullptr);
    EXPECT_EQ(r.find_verdict("not a verdict"), nullptr);
}

TEST(Report, CsvHeader) {
    const auto r = run(small("trotter", 4));
    const auto csv = report_to_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "section,name,index,value,detail");
}

TEST(Report, WrittenToOutPath) {
    const auto dir = std::filesystem::temp_directory_path() / "mclab_harness_test";
    std::filesystem::create_directories(dir);
    auto c = small("covariance-seq", 4);
    c.params["horizon"] = "64";
    c.out_path = dir / "report.json";
    const auto r = run(c);
    std::ifstream in(*c.out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), report_to_json(r));

    EXPECT_EQ(code_of([&] { write_report(r, "/proc/nonexistent/dir/r.json", ReportFormat::Json); }),
              ErrorCode::IoError);
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mclab
