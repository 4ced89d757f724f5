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

#ifndef MCLAB_HARNESS_HPP
#define MCLAB_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mclab {

inline constexpr std::string_view kReportSchemaVersion = "1.0";

enum class ParamKind { Int, Real, String, IntList };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::Int;
    std::string default_value;
    std::string help;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    /// Short description of the bound under test, carried into reports.
    std::string anchor;
    std::size_t default_trials = 100;
    std::vector<ParamSpec> params;
};

const std::vector<ExperimentInfo> &list_experiments();
/// Throws UnknownExperiment.
const ExperimentInfo &find_experiment(std::string_view name);

enum class ReportFormat { Json, Csv };

struct ExperimentConfig {
    std::string experiment;
    /// Raw values keyed by parameter name; missing keys take defaults.
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    /// nullopt selects the experiment's default trial count.
    std::optional<std::size_t> trials;
    std::optional<std::filesystem::path> out_path;
    ReportFormat format = ReportFormat::Json;
    /// Worker threads; the report does not depend on this.
    unsigned threads = 1;
    /// Also write wall-clock seconds into the report file. Off by default
    /// so identical configurations give identical bytes.
    bool record_timing = false;
};

enum class Verdict { Pass, Fail, Flag };
std::string_view verdict_name(Verdict v);

struct NamedValue {
    std::string name;
    double value = 0.0;
};

struct TrialRecord {
    std::size_t trial = 0;
    std::vector<NamedValue> values;
};

struct TailRecord {
    std::string statistic;
    double threshold = 0.0;
    std::size_t exceedances = 0;
    std::size_t trials = 0;
    double fraction = 0.0;
    double wilson_lower = 0.0;
    double wilson_upper = 0.0;
};

struct BoundRecord {
    std::string name;
    double value = 0.0;
    std::string anchor;
};

struct Assertion {
    std::string name;
    Verdict verdict = Verdict::Pass;
    std::string detail;
};

struct ExperimentReport {
    std::string experiment;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    /// Resolved parameters in schema order, as (name, kind, value text).
    std::vector<std::pair<ParamSpec, std::string>> params;
    std::vector<TrialRecord> trial_records;
    std::vector<NamedValue> aggregates;
    std::vector<TailRecord> tails;
    std::vector<BoundRecord> bounds;
    std::vector<Assertion> verdicts;
    double wall_seconds = 0.0;

    /// No assertion failed (flags do not count).
    bool passed() const;
    const Assertion *find_verdict(std::string_view name) const;
    std::optional<double> aggregate(std::string_view name) const;
};

/// Validates the configuration, runs the trials with per-trial streams
/// RandomStream::for_trial(seed, t), folds results in trial order and
/// writes the report when out_path is set.
///
/// Throws UnknownExperiment, BadParams or IoError.
ExperimentReport run(const ExperimentConfig &config);

std::string report_to_json(const ExperimentReport &report, bool include_timing = false);
std::string report_to_csv(const ExperimentReport &report, bool include_timing = false);
void write_report(const ExperimentReport &report, const std::filesystem::path &path, ReportFormat format,
                  bool include_timing = false);

/// 0 when every verdict passes, 2 otherwise.
int exit_code(const ExperimentReport &report);
inline constexpr int kExitConfigError = 3;

}  // namespace mclab

#endif  // MCLAB_HARNESS_HPP
