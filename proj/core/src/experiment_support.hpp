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

// Internal plumbing shared by the experiment implementations.

#ifndef MCLAB_SRC_EXPERIMENT_SUPPORT_HPP
#define MCLAB_SRC_EXPERIMENT_SUPPORT_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mclab/concentration.hpp"
#include "mclab/error.hpp"
#include "mclab/harness.hpp"
#include "mclab/rng.hpp"

namespace mclab::detail {

/// Typed view of resolved parameter text.
class Params {
   public:
    explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    std::int64_t integer(const std::string &name) const;
    std::size_t count(const std::string &name) const;  // integer >= 0
    double real(const std::string &name) const;
    const std::string &text(const std::string &name) const;
    std::vector<std::size_t> counts(const std::string &name) const;

   private:
    std::map<std::string, std::string> values_;
};

struct RunContext {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    unsigned threads = 1;
};

/// Throws BadParams with `message` unless `ok`.
void require(bool ok, const std::string &message);

/// %.6g
std::string num(double x);

/// Evaluates fn(t, stream) for t = 0..trials-1 with stream
/// RandomStream::for_trial(seed, t). Each trial writes only its own slot, so
/// the result does not depend on the thread count. The first exception in
/// trial order is rethrown.
template <typename T, typename F>
std::vector<T> run_trials(const RunContext &ctx, F &&fn) {
    std::vector<T> out(ctx.trials);
    std::vector<std::exception_ptr> errors(ctx.trials);
    auto one = [&](std::size_t t) {
        try {
            RandomStream rng = RandomStream::for_trial(ctx.seed, t);
            out[t] = fn(t, rng);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    const unsigned workers = std::min<std::size_t>(std::max(1U, ctx.threads), ctx.trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < ctx.trials; ++t) {
            one(t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < ctx.trials; t = next++) {
                    one(t);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

/// Appends to a report; all helpers keep insertion order.
class ReportBuilder {
   public:
    explicit ReportBuilder(ExperimentReport &report) : r_(report) {}

    void trial(std::size_t t, std::vector<NamedValue> values) { r_.trial_records.push_back({t, std::move(values)}); }
    void aggregate(std::string name, double value) { r_.aggregates.push_back({std::move(name), value}); }
    void bound(std::string name, double value, std::string anchor) {
        r_.bounds.push_back({std::move(name), value, std::move(anchor)});
    }
    void check(std::string name, bool ok, std::string detail) {
        r_.verdicts.push_back({std::move(name), ok ? Verdict::Pass : Verdict::Fail, std::move(detail)});
    }
    /// Non-gating diagnostic: Pass or Flag.
    void diagnose(std::string name, bool ok, std::string detail) {
        r_.verdicts.push_back({std::move(name), ok ? Verdict::Pass : Verdict::Flag, std::move(detail)});
    }
    TailRecord tail(std::string statistic, std::span<const double> values, double threshold);

    /// fraction <= p_ref + 3 sigma(p_ref, n), recorded as a verdict.
    void tail_check(std::string name, const TailRecord &tail, double p_ref);
    /// mean - 3 sem <= bound, recorded as a verdict.
    void mean_below(std::string name, const SampleSummary &s, double bound);

   private:
    ExperimentReport &r_;
};

using ExperimentFn = void (*)(const Params &, const RunContext &, ReportBuilder &);

void bernstein_diag(const Params &, const RunContext &, ReportBuilder &);
void bernstein_ginibre(const Params &, const RunContext &, ReportBuilder &);
void khinchin_ginibre(const Params &, const RunContext &, ReportBuilder &);
void active_subspace_experiment(const Params &, const RunContext &, ReportBuilder &);
void sr_round(const Params &, const RunContext &, ReportBuilder &);
void sr_cholesky_experiment(const Params &, const RunContext &, ReportBuilder &);
void sparsify_experiment(const Params &, const RunContext &, ReportBuilder &);
void sparse_cholesky_experiment(const Params &, const RunContext &, ReportBuilder &);
void laplacian_solve(const Params &, const RunContext &, ReportBuilder &);
void tomography_experiment(const Params &, const RunContext &, ReportBuilder &);
void covariance_seq(const Params &, const RunContext &, ReportBuilder &);
void trotter_experiment(const Params &, const RunContext &, ReportBuilder &);

}  // namespace mclab::detail

#endif  // MCLAB_SRC_EXPERIMENT_SUPPORT_HPP
