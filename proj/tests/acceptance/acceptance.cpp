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


// Acceptance suite: one line per criterion, exit status 0 iff all selected
// criteria pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mclab/error.hpp"
#include "mclab/graphs.hpp"
#include "mclab/harness.hpp"
#include "mclab/linalg.hpp"
#include "mclab/quantum.hpp"

namespace {

using mclab::ExperimentConfig;
using mclab::ExperimentReport;

struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, std::string note) {
        if (!cond) {
            ok = false;
        }
        notes.push_back((cond ? "  ok    " : "  FAIL  ") + std::move(note));
    }
};

ExperimentReport run_experiment(const std::string &name, std::map<std::string, std::string> params = {},
                                std::optional<std::size_t> trials = std::nullopt) {
    ExperimentConfig c;
    c.experiment = name;
    c.params = std::move(params);
    c.trials = trials;
    c.threads = std::max(1U, std::thread::hardware_concurrency());
    return mclab::run(c);
}

// Requires every gating verdict whose name starts with one of `prefixes`
// (all verdicts when empty) to pass, and at least one to match.
void gate(Outcome &out, const ExperimentReport &r, std::vector<std::string> prefixes = {}) {
    std::size_t matched = 0;
    for (const auto &v : r.verdicts) {
        bool selected = prefixes.empty();
        for (const auto &p : prefixes) {
            selected = selected || v.name.rfind(p, 0) == 0;
        }
        if (!selected) {
            continue;
        }
        ++matched;
        const std::string line = r.experiment + ": " + v.name + ": " + v.detail;
        if (v.verdict == mclab::Verdict::Flag) {
            out.notes.push_back("  flag  " + line);
        } else {
            out.require(v.verdict == mclab::Verdict::Pass, line);
        }
    }
    out.require(matched > 0, r.experiment + ": selected verdicts present");
}

struct Criterion {
    int id;
    const char *title;
    double limit_seconds;
    std::function<void(Outcome &)> body;
};

std::vector<Criterion> criteria() {
    return {
        {1, "Bernstein expectation, diagonal Rademacher d=32", 10.0,
         [](Outcome &o) { gate(o, run_experiment("bernstein-diag"), {"expectation", "norm at least one"}); }},
        {2, "Bernstein tail, t in {1,2,3,4}", 10.0,
         [](Outcome &o) { gate(o, run_experiment("bernstein-diag"), {"tail"}); }},
        {3, "Khinchin bracket, Ginibre d=64", 60.0,
         [](Outcome &o) { gate(o, run_experiment("khinchin-ginibre"), {"bracket", "within"}); }},
        {4, "Active subspaces, quadratic d=10, n in {50,200}", 30.0,
         [](Outcome &o) { gate(o, run_experiment("active-subspace")); }},
        {5, "Stochastic rounding, 64x64, p=8", 30.0,
         [](Outcome &o) { gate(o, run_experiment("sr-round")); }},
        {6, "Graph sparsification, K50 and G(50, 0.2)", 60.0,
         [](Outcome &o) {
             gate(o, run_experiment("sparsify", {{"graph", "complete"}}));
             gate(o, run_experiment("sparsify", {{"graph", "erdos-renyi"}}));
         }},
        {7, "Tomography, d=2 mub2, n=148", 30.0, [](Outcome &o) { gate(o, run_experiment("tomography")); }},
        {8, "Uniform covariance, axis model d=4, N=2048", 60.0,
         [](Outcome &o) { gate(o, run_experiment("covariance-seq")); }},
        {9, "SR-Cholesky, d=16, p=8", 30.0, [](Outcome &o) { gate(o, run_experiment("sr-cholesky")); }},
        {10, "Sparse Cholesky and PCG, K30", 120.0,
         [](Outcome &o) { gate(o, run_experiment("sparse-cholesky")); }},
        {11, "Random product formulas, H = X + Z", 60.0, [](Outcome &o) { gate(o, run_experiment("trotter")); }},
        {12, "Structural identities", 10.0, [](Outcome &o) {
             using namespace mclab;
             RandomStream setup(0, 0);
             const std::vector<std::pair<std::string, WeightedGraph>> graphs{
                 {"K50", WeightedGraph::complete(50)},
                 {"K30", WeightedGraph::complete(30)},
                 {"G(50,0.2)", WeightedGraph::erdos_renyi(50, 0.2, setup)},
                 {"path(40)", WeightedGraph::path(40, 2.5)}};
             for (const auto &[name, g] : graphs) {
                 const auto l = laplacian(g);
                 const auto rho = effective_resistances(l);
                 double s = 0.0;
                 for (std::size_t k = 0; k < rho.size(); ++k) {
                     s += g.edges()[k].w * rho[k];
                 }
                 const double gap = std::abs(s - static_cast<double>(g.n() - 1));
                 o.require(gap <= 1e-8, "sum w rho = n - 1 on " + name + " (gap " + std::to_string(gap) + ")");
             }

             RandomStream rng(0, 1);
             Matrix a(5, 7);
             for (auto &z : a.entries()) {
                 z = cplx(rng.normal(), rng.normal());
             }
             const auto sv = singular_values(a);
             std::vector<double> expected;
             for (double x : sv) {
                 expected.push_back(x);
                 expected.push_back(-x);
             }
             expected.resize(expected.size() + 2, 0.0);
             std::sort(expected.begin(), expected.end());
             const auto vals = eigvalsh(hermitian_dilation(a));
             double dil = 0.0;
             for (std::size_t k = 0; k < vals.size(); ++k) {
                 dil = std::max(dil, std::abs(vals[k] - expected[k]));
             }
             o.require(dil <= 1e-9, "dilation spectrum is +-singular values (gap " + std::to_string(dil) + ")");

             const auto design = builtin_design("mub2");
             o.require(validate_design(design, 1e-9), "mub2 2-design reconstruction at 1e-9");

             const std::vector<cplx> e1{0.0, 1.0};
             const auto v = random_unit_vector(2, rng);
             const std::vector<DensityMatrix> states{DensityMatrix::maximally_mixed(2), DensityMatrix::pure(e1),
                                                     DensityMatrix::pure(v)};
             double worst = 0.0;
             for (const auto &rho : states) {
                 const auto p = born_probabilities(design, rho);
                 Matrix mean(2, 2);
                 for (std::size_t j = 0; j < design.m(); ++j) {
                     mean += p[j] * single_measurement_estimator(design, j);
                 }
                 worst = std::max(worst, max_abs_diff(mean, rho.matrix()));
             }
             o.require(worst <= 1e-10, "E[Y] = rho by exact sum (gap " + std::to_string(worst) + ")");
         }},
    };
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"mclab acceptance suite"};
    std::vector<int> selected;
    bool verbose = false;
    app.add_option("--criterion,-c", selected, "criterion numbers to run (default: all)")->check(CLI::Range(1, 12));
    app.add_flag("--verbose,-v", verbose, "print every check, not only failures");
    CLI11_PARSE(app, argc, argv);

    bool all_ok = true;
    for (const auto &c : criteria()) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(out);
        } catch (const mclab::Error &e) {
            out.require(false, std::string("error: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char timing[96];
        std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, c.limit_seconds);
        out.require(secs < c.limit_seconds, std::string("runtime ") + timing);

        std::printf("criterion %2d %s  %s (%s)\n", c.id, out.ok ? "PASS" : "FAIL", c.title, timing);
        for (const auto &n : out.notes) {
            if (verbose || n.rfind("  ok", 0) != 0) {
                std::printf("%s\n", n.c_str());
            }
        }
        all_ok = all_ok && out.ok;
    }
    return all_ok ? 0 : 1;
}
