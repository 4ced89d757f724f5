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

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "mclab/error.hpp"
#include "mclab/harness.hpp"

namespace {

std::string_view kind_name(mclab::ParamKind k) {
    switch (k) {
        case mclab::ParamKind::Int:
            return "int";
        case mclab::ParamKind::Real:
            return "real";
        case mclab::ParamKind::String:
            return "string";
        case mclab::ParamKind::IntList:
            return "int list";
    }
    return "?";
}

void print_list() {
    for (const auto &e : mclab::list_experiments()) {
        std::cout << e.name << "\n  " << e.description << "\n  bound: " << e.anchor
                  << "\n  default trials: " << e.default_trials << '\n';
        for (const auto &p : e.params) {
            std::cout << "    --" << p.name << " <" << kind_name(p.kind) << "> (default '" << p.default_value
                      << "') " << p.help << '\n';
        }
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Monte Carlo validation of matrix concentration bounds"};
    app.require_subcommand(1);
    app.add_subcommand("list", "List experiments with their parameters");

    struct Slot {
        CLI::App *cmd = nullptr;
        std::map<std::string, std::string> values;
    };
    std::map<std::string, Slot> slots;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::string out_path, format = "json";
    unsigned threads = 1;
    bool timing = false;

    for (const auto &e : mclab::list_experiments()) {
        Slot &slot = slots[e.name];
        slot.cmd = app.add_subcommand(e.name, e.description);
        for (const auto &p : e.params) {
            slot.cmd->add_option("--" + p.name, slot.values[p.name], p.help)
                ->default_str(p.default_value)
                ->type_name(std::string(kind_name(p.kind)));
        }
        slot.cmd->add_option("--seed", seed, "64-bit seed")->capture_default_str();
        slot.cmd->add_option("--trials", trials, "trial count (default per experiment)");
        slot.cmd->add_option("--out", out_path, "report path; stdout when omitted");
        slot.cmd->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
        slot.cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        slot.cmd->add_flag("--timing", timing, "write wall-clock seconds into the report");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return mclab::kExitConfigError;
    }

    if (app.got_subcommand("list")) {
        print_list();
        return 0;
    }

    for (auto &[name, slot] : slots) {
        if (!slot.cmd->parsed()) {
            continue;
        }
        mclab::ExperimentConfig config;
        config.experiment = name;
        for (const auto &[key, value] : slot.values) {
            if (slot.cmd->count("--" + key) > 0) {
                config.params[key] = value;
            }
        }
        config.seed = seed;
        if (slot.cmd->count("--trials") > 0) {
            config.trials = trials;
        }
        config.format = format == "csv" ? mclab::ReportFormat::Csv : mclab::ReportFormat::Json;
        config.threads = threads;
        config.record_timing = timing;
        if (!out_path.empty()) {
            config.out_path = out_path;
        }
        try {
            const auto report = mclab::run(config);
            if (out_path.empty()) {
                std::cout << (config.format == mclab::ReportFormat::Json ? mclab::report_to_json(report, timing)
                                                                         : mclab::report_to_csv(report, timing));
            }
            for (const auto &v : report.verdicts) {
                std::cerr << '[' << mclab::verdict_name(v.verdict) << "] " << v.name << ": " << v.detail << '\n';
            }
            std::fprintf(stderr, "%s: %s in %.2f s\n", name.c_str(), report.passed() ? "PASS" : "FAIL",
                         report.wall_seconds);
            return mclab::exit_code(report);
        } catch (const mclab::Error &e) {
            std::cerr << "mclab: " << e.what() << '\n';
            return mclab::kExitConfigError;
        }
    }
    return mclab::kExitConfigError;
}
