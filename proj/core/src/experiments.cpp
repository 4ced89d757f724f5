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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "experiment_support.hpp"
#include "mclab/concentration.hpp"
#include "mclab/estimation.hpp"
#include "mclab/graphs.hpp"
#include "mclab/linalg.hpp"
#include "mclab/matrix_io.hpp"
#include "mclab/quantum.hpp"
#include "mclab/rounding.hpp"

namespace mclab::detail {

namespace {

// Stream index reserved for setup draws that are shared by all trials.
constexpr std::uint64_t kSetupStream = std::numeric_limits<std::uint64_t>::max();

std::vector<double> column(const std::vector<std::vector<double>> &rows, std::size_t k) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(r[k]);
    }
    return out;
}

void add_stats(ReportBuilder &rb, const ConcentrationStats &s) {
    rb.aggregate("stats.v", s.v);
    rb.aggregate("stats.B", s.B);
    rb.aggregate("stats.B2", s.B2);
    rb.aggregate("stats.d1", static_cast<double>(s.d1));
    rb.aggregate("stats.d2", static_cast<double>(s.d2));
}

void add_summary(ReportBuilder &rb, const std::string &prefix, const SampleSummary &s) {
    rb.aggregate(prefix + ".mean", s.mean);
    rb.aggregate(prefix + ".stddev", s.stddev);
    rb.aggregate(prefix + ".sem", s.sem);
    rb.aggregate(prefix + ".min", s.min);
    rb.aggregate(prefix + ".max", s.max);
}

// Expected norm and tail checks shared by the two Bernstein experiments.
void bernstein_checks(ReportBuilder &rb, const ConcentrationStats &stats, const std::vector<double> &norms,
                      const std::vector<double> &thresholds, const std::string &anchor) {
    const SampleSummary s = summarize(norms);
    add_summary(rb, "norm", s);
    const double expect = bernstein_expectation_bound(stats);
    rb.bound("expectation", expect, anchor);
    const auto ros = rosenthal_diagnostic(stats);
    rb.aggregate("rosenthal.lower", ros.lower);
    rb.aggregate("rosenthal.upper", ros.upper);
    rb.mean_below("expectation", s, expect);
    for (double t : thresholds) {
        const double bound = bernstein_tail_bound(stats, t);
        const std::string name = "tail(t=" + num(t) + ")";
        rb.bound(name, bound, anchor);
        const auto tail = rb.tail("norm", norms, t);
        rb.tail_check(name, tail, std::min(1.0, bound));
    }
}

WeightedGraph make_graph(const Params &p) {
    const std::string &kind = p.text("graph");
    if (kind == "complete" || kind == "erdos-renyi") {
        const std::size_t n = p.count("vertices");
        require(n >= 2, "vertices must be >= 2");
        if (kind == "complete") {
            return WeightedGraph::complete(n);
        }
        const double prob = p.real("edge-prob");
        require(prob > 0.0 && prob <= 1.0, "edge-prob must lie in (0, 1]");
        RandomStream rng(static_cast<std::uint64_t>(p.integer("graph-seed")), 0);
        return WeightedGraph::erdos_renyi(n, prob, rng);
    }
    return load_graph(kind);
}

std::vector<double> random_balanced_vector(std::size_t n, RandomStream &rng) {
    std::vector<double> f(n);
    for (auto &x : f) {
        x = rng.normal();
    }
    const double mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(n);
    for (auto &x : f) {
        x -= mean;
    }
    return f;
}

}  // namespace

void bernstein_diag(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const std::size_t d = p.count("dim");
    require(d >= 1, "dim must be >= 1");
    std::vector<double> thresholds;
    for (auto t : p.counts("thresholds")) {
        thresholds.push_back(static_cast<double>(t));
    }
    const auto rows = run_trials<std::vector<double>>(ctx, [d](std::size_t, RandomStream &rng) {
        // S = sum_i eps_i E_ii is diagonal, so its norm is the largest |eps_i|.
        double nrm = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            nrm = std::max(nrm, std::abs(rng.rademacher()));
        }
        return std::vector<double>{nrm, 1.0};
    });
    const auto norms = column(rows, 0);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        rb.trial(t, {{"norm", rows[t][0]}, {"max_summand_norm", rows[t][1]}});
    }
    ConcentrationStats stats{1.0, 1.0, tail_content(column(rows, 1)), d, d};
    stats.validate();
    add_stats(rb, stats);
    bernstein_checks(rb, stats, norms, thresholds, find_experiment("bernstein-diag").anchor);
    rb.check("norm at least one", summarize(norms).mean >= 1.0 - 1e-12, "mean " + num(summarize(norms).mean));
}

void bernstein_ginibre(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const std::size_t d = p.count("dim");
    require(d >= 1, "dim must be >= 1");
    const auto norms = run_trials<double>(ctx, [d](std::size_t, RandomStream &rng) {
        Matrix z(d, d);
        for (auto &x : z.entries()) {
            x = rng.rademacher();
        }
        return spectral_norm(z);
    });
    for (std::size_t t = 0; t < norms.size(); ++t) {
        rb.trial(t, {{"norm", norms[t]}});
    }
    // Every summand eps_ij E_ij has norm one, so B = B2 = 1.
    const ConcentrationStats stats{static_cast<double>(d), 1.0, 1.0, d, d};
    add_stats(rb, stats);
    const double root = std::sqrt(static_cast<double>(d));
    bernstein_checks(rb, stats, norms, {2.0 * root, 2.5 * root, 3.0 * root, 3.5 * root},
                     find_experiment("bernstein-ginibre").anchor);
}

void khinchin_ginibre(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const std::size_t d = p.count("dim");
    require(d >= 1, "dim must be >= 1");
    const auto norms = run_trials<double>(ctx, [d](std::size_t, RandomStream &rng) {
        Matrix g(d, d);
        for (auto &x : g.entries()) {
            x = rng.normal();
        }
        return spectral_norm(g);
    });
    for (std::size_t t = 0; t < norms.size(); ++t) {
        rb.trial(t, {{"norm", norms[t]}});
    }
    const auto vf = VarianceFunction::ginibre(d);
    const double v = static_cast<double>(d);
    rb.aggregate("weak_variance", vf.weak_variance());
    rb.aggregate("interaction_energy", vf.interaction_energy().value_or(std::nan("")));
    rb.aggregate("stats.v", v);
    const SampleSummary s = summarize(norms);
    add_summary(rb, "norm", s);
    const auto kb = khinchin_bounds(v, d, d);
    const std::string &anchor = find_experiment("khinchin-ginibre").anchor;
    rb.bound("khinchin.lower", kb.lower, anchor);
    rb.bound("khinchin.upper", kb.upper, anchor);
    rb.check("bracket", s.mean >= kb.lower - 3.0 * s.sem && s.mean <= kb.upper + 3.0 * s.sem,
             "mean " + num(s.mean) + " in [" + num(kb.lower) + ", " + num(kb.upper) + "] +- 3*" + num(s.sem));
    const double sharp = 2.0 * std::sqrt(v);
    rb.bound("second-order leading term", sharp, anchor);
    rb.diagnose("within 10% of 2 sqrt(d)", std::abs(s.mean - sharp) <= 0.1 * sharp,
                "mean " + num(s.mean) + " vs " + num(sharp));
}

void active_subspace_experiment(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const std::size_t d = p.count("dim");
    require(d >= 1, "dim must be >= 1");
    require(p.text("model") == "quadratic", "model must be 'quadratic'");
    const auto sizes = p.counts("samples");
    require(!sizes.empty() && std::all_of(sizes.begin(), sizes.end(), [](auto n) { return n >= 1; }),
            "samples must list positive sizes");
    const GradientModel model = GradientModel::builtin_quadratic(d);
    const Matrix sigma = *model.analytic_sigma();
    const double norm_sigma = spectral_norm(sigma);
    rb.aggregate("lipschitz", model.lipschitz());
    rb.aggregate("norm_sigma", norm_sigma);

    const auto rows = run_trials<std::vector<double>>(ctx, [&](std::size_t, RandomStream &rng) {
        std::vector<double> errs;
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            RandomStream sub = rng.split(k);
            const Matrix hat = empirical_sensitivity(model, sizes[k], sub);
            errs.push_back(spectral_norm(hat - sigma) / norm_sigma);
        }
        return errs;
    });
    for (std::size_t t = 0; t < rows.size(); ++t) {
        std::vector<NamedValue> vals;
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            vals.push_back({"rel_error_n" + std::to_string(sizes[k]), rows[t][k]});
        }
        rb.trial(t, std::move(vals));
    }
    const std::string &anchor = find_experiment("active-subspace").anchor;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const std::string tag = "n=" + std::to_string(sizes[k]);
        const SampleSummary s = summarize(column(rows, k));
        add_summary(rb, "rel_error(" + tag + ")", s);
        const double bound = active_subspace_error_bound(model.lipschitz(), norm_sigma, d, sizes[k]);
        rb.bound("relative error(" + tag + ")", bound, anchor);
        rb.mean_below("relative error(" + tag + ")", s, bound);
    }
}

void sr_round(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const std::size_t d = p.count("dim");
    require(d >= 1, "dim must be >= 1");
    const int bits = static_cast<int>(p.integer("precision-bits"));
    require(bits >= 2 && bits <= 53, "precision-bits must lie in [2, 53]");
    const FloatSystem sys(bits);
    const std::string &which = p.text("matrix");
    const std::uint64_t fixture_seed = static_cast<std::uint64_t>(p.integer("fixture-seed"));

    std::vector<std::pair<std::string, Matrix>> inputs;
    auto add_ones = [&] { inputs.emplace_back("ones", Matrix(d, d, std::vector<cplx>(d * d, 1.0))); };
    auto add_signs = [&] {
        RandomStream rng(fixture_seed, 1);
        Matrix a(d, d);
        for (auto &x : a.entries()) {
            x = rng.rademacher();
        }
        inputs.emplace_back("signs", std::move(a));
    };
    auto add_uniform = [&] {
        RandomStream rng(fixture_seed, 2);
        Matrix a(d, d);
        for (auto &x : a.entries()) {
            x = 1.0 + rng.uniform();
        }
        inputs.emplace_back("uniform", std::move(a));
    };
    if (which == "ones") {
        add_ones();
    } else if (which == "signs") {
        add_signs();
    } else if (which == "uniform") {
        add_uniform();
    } else if (which == "all") {
        add_ones();
        add_signs();
        add_uniform();
    } else {
        Matrix a = load_matrix(which);
        require(a.is_real(), "sr-round needs a real matrix");
        inputs.emplace_back("input", std::move(a));
    }

    const auto rows = run_trials<std::vector<double>>(ctx, [&](std::size_t, RandomStream &rng) {
        std::vector<double> errs;
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            RandomStream sub = rng.split(k);
            const Matrix diff = inputs[k].second - round_matrix(sys, inputs[k].second, RoundingMode::Stochastic, sub);
            errs.push_back(max_abs_entry(diff) == 0.0 ? 0.0 : spectral_norm(diff));
        }
        return errs;
    });
    for (std::size_t t = 0; t < rows.size(); ++t) {
        std::vector<NamedValue> vals;
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            vals.push_back({"error_" + inputs[k].first, rows[t][k]});
        }
        rb.trial(t, std::move(vals));
    }
    rb.aggregate("unit_roundoff", sys.unit_roundoff());
    const std::string &anchor = find_experiment("sr-round").anchor;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const std::string &name = inputs[k].first;
        const SampleSummary s = summarize(column(rows, k));
        add_summary(rb, "error(" + name + ")", s);
        const RoundingBound b = stochastic_rounding_bound(sys, inputs[k].second);
        rb.bound("stochastic(" + name + ")", b.stochastic, anchor);
        rb.bound("deterministic(" + name + ")", b.deterministic, "worst case of round-to-nearest");
        rb.mean_below("stochastic bound(" + name + ")", s, b.stochastic);
        rb.check("below deterministic(" + name + ")", s.mean < b.deterministic,
                 "mean " + num(s.mean) + " < " + num(b.deterministic));
    }
}

void sr_cholesky_experiment(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const int bits = static_cast<int>(p.integer("precision-bits"));
    require(bits >= 2 && bits <= 53, "precision-bits must lie in [2, 53]");
    const double delta = p.real("delta");
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    const FloatSystem sys(bits);
    Matrix a;
    if (p.text("input").empty()) {
        const std::size_t d = p.count("dim");
        require(d >= 1, "dim must be >= 1");
        a = correlation_fixture(d, sys, static_cast<std::uint64_t>(p.integer("fixture-seed")));
    } else {
        a = load_matrix(p.text("input"));
    }
    const std::size_t d = a.rows();
    const double u = sys.unit_roundoff();
    const double norm_a = spectral_norm(a);
    const double t = std::log(2.0 * static_cast<double>(d) / delta);
    const SrCholeskyBound bound = sr_cholesky_bound(d, norm_a, u, t);
    const std::string &anchor = find_experiment("sr-cholesky").anchor;
    rb.aggregate("norm_a", norm_a);
    rb.aggregate("unit_roundoff", u);
    rb.aggregate("t", t);
    rb.aggregate("qv_final", 2.0 * u * u * static_cast<double>(d) * norm_a);
    rb.bound("threshold", bound.threshold, anchor);
    rb.bound("probability", bound.prob_bound, anchor);

    struct Outcome {
        double error = 0.0;
        double flagged = 0.0;
        double breakdown = 0.0;
    };
    const auto outcomes = run_trials<Outcome>(ctx, [&](std::size_t, RandomStream &rng) {
        try {
            const auto res = sr_cholesky(sys, a, rng);
            return Outcome{spectral_norm(res.error), res.flagged ? 1.0 : 0.0, 0.0};
        } catch (const Error &e) {
            if (e.code() != ErrorCode::BreakdownNonpositivePivot) {
                throw;
            }
            return Outcome{std::nan(""), 1.0, 1.0};
        }
    });
    std::vector<double> unflagged;
    std::size_t flagged = 0, breakdowns = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const auto &o = outcomes[k];
        rb.trial(k, {{"error", o.error}, {"flagged", o.flagged}, {"breakdown", o.breakdown}});
        if (o.flagged != 0.0) {
            ++flagged;
            breakdowns += o.breakdown != 0.0;
        } else {
            unflagged.push_back(o.error);
        }
    }
    rb.aggregate("flagged", static_cast<double>(flagged));
    rb.aggregate("breakdowns", static_cast<double>(breakdowns));
    rb.aggregate("unflagged", static_cast<double>(unflagged.size()));
    rb.diagnose("no flagged trials", flagged == 0, std::to_string(flagged) + " flagged");
    if (unflagged.empty()) {
        rb.check("tail", false, "every trial was flagged");
    } else {
        add_summary(rb, "error", summarize(unflagged));
        const auto tail = rb.tail("error", unflagged, bound.threshold);
        rb.tail_check("tail", tail, std::min(1.0, bound.prob_bound));
    }

    RandomStream unused(ctx.seed, kSetupStream);
    const auto exact = sr_cholesky(FloatSystem::exact(), a, unused);
    const double exact_err = spectral_norm(exact.error);
    rb.aggregate("exact_mode_error", exact_err);
    rb.check("exact mode", exact_err <= 1e-12, "||CC* - A|| = " + num(exact_err));
}

void sparsify_experiment(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const double eps = p.real("eps");
    const double delta = p.real("delta");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    const Laplacian l = laplacian(make_graph(p));
    const std::size_t n = l.n();
    const auto &edges = l.graph.edges();
    const auto rho = effective_resistances(l);
    double total = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        total += edges[k].w * rho[k];
    }
    rb.aggregate("sum_w_rho", total);
    rb.check("resistance identity", std::abs(total - static_cast<double>(n - 1)) <= 1e-8,
             "sum w rho = " + num(total) + ", n - 1 = " + std::to_string(n - 1));
    const std::size_t q = sparsifier_sample_count(n, eps, delta);
    rb.aggregate("q", static_cast<double>(q));
    rb.aggregate("edges", static_cast<double>(edges.size()));
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        index[{edges[k].i, edges[k].j}] = k;
    }
    const SpectralWhitener whitener(l.matrix);

    struct Outcome {
        double mu_min = 0.0, mu_max = 0.0, failed = 0.0, kept = 0.0;
        std::vector<double> weights;
    };
    const auto outcomes = run_trials<Outcome>(ctx, [&](std::size_t, RandomStream &rng) {
        const WeightedGraph h = sparsify(l.graph, rho, q, rng);
        Outcome o;
        o.weights.assign(edges.size(), 0.0);
        for (const auto &e : h.edges()) {
            o.weights[index.at({e.i, e.j})] = e.w;
        }
        const auto mu = whitener.relative_eigenvalues(laplacian_matrix(h));
        o.mu_min = mu.front();
        o.mu_max = mu.back();
        o.failed = (o.mu_min >= 1.0 - eps - 1e-9 && o.mu_max <= 1.0 + eps + 1e-9) ? 0.0 : 1.0;
        o.kept = static_cast<double>(h.edge_count());
        return o;
    });
    std::vector<double> failed;
    std::vector<double> mean_w(edges.size(), 0.0);
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        const auto &o = outcomes[t];
        rb.trial(t, {{"mu_min", o.mu_min}, {"mu_max", o.mu_max}, {"failed", o.failed}, {"edges_kept", o.kept}});
        failed.push_back(o.failed);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            mean_w[k] += o.weights[k];
        }
    }
    const double trials = static_cast<double>(ctx.trials);
    const std::string &anchor = find_experiment("sparsify").anchor;
    rb.bound("failure probability", delta, anchor);
    const auto tail = rb.tail("failed", failed, 0.5);
    rb.tail_check("spectral equivalence", tail, delta);

    // Each edge weight is (n-1)/(q rho) times a Binomial(q, w rho / (n-1)) count.
    double max_z = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        mean_w[k] /= trials;
        const double pk = edges[k].w * rho[k] / static_cast<double>(n - 1);
        const double unit = static_cast<double>(n - 1) / (static_cast<double>(q) * rho[k]);
        const double sd = unit * std::sqrt(static_cast<double>(q) * pk * (1.0 - pk) / trials);
        if (sd > 0.0) {
            max_z = std::max(max_z, std::abs(mean_w[k] - edges[k].w) / sd);
        }
    }
    rb.aggregate("unbiasedness.max_z", max_z);
    rb.check("unbiasedness", max_z <= 5.0, "max |z| over edge-weight means = " + num(max_z) + " (band 5)");
}

void sparse_cholesky_experiment(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const double lower = p.real("lower");
    const double upper = p.real("upper");
    const double target = p.real("target");
    const double tol = p.real("tol");
    const std::size_t maxit = p.count("maxit");
    const std::size_t oversampling = p.count("oversampling");
    require(oversampling >= 1, "oversampling must be >= 1");
    require(lower > 0.0 && lower <= 1.0 && upper >= 1.0, "need 0 < lower <= 1 <= upper");
    require(tol > 0.0 && maxit >= 1, "need tol > 0 and maxit >= 1");
    const Laplacian l = laplacian(make_graph(p));
    const std::size_t n = l.n();
    const SpectralWhitener whitener(l.matrix);
    RandomStream setup(ctx.seed, kSetupStream);
    const auto f = random_balanced_vector(n, setup);
    const std::string &anchor = find_experiment("sparse-cholesky").anchor;

    const auto exact = sparse_cholesky(l, setup, true);
    const double exact_gap = max_abs_diff(exact.approximation(), l.matrix);
    rb.aggregate("exact.max_abs_diff", exact_gap);
    rb.check("exact elimination", exact_gap <= 1e-8, "max |CC* - L| = " + num(exact_gap));
    const auto exact_solve = pcg_solve(l, &exact, f, tol, maxit);
    rb.aggregate("exact.pcg_iterations", static_cast<double>(exact_solve.iterations));
    rb.check("exact preconditioner", exact_solve.converged && exact_solve.iterations <= 2,
             std::to_string(exact_solve.iterations) + " iterations");

    struct Outcome {
        double mu_min = std::nan(""), mu_max = std::nan(""), success = 0.0, zero_pivot = 0.0;
        double iterations = std::nan(""), converged = 0.0;
    };
    const auto outcomes = run_trials<Outcome>(ctx, [&](std::size_t, RandomStream &rng) {
        Outcome o;
        try {
            const auto pc = sparse_cholesky(l, rng, false, oversampling);
            const auto mu = whitener.relative_eigenvalues(pc.approximation());
            o.mu_min = mu.front();
            o.mu_max = mu.back();
            o.success = (o.mu_min >= lower && o.mu_max <= upper) ? 1.0 : 0.0;
            if (o.success != 0.0) {
                const auto sol = pcg_solve(l, &pc, f, tol, maxit);
                o.iterations = static_cast<double>(sol.iterations);
                o.converged = sol.converged ? 1.0 : 0.0;
            }
        } catch (const Error &e) {
            if (e.code() != ErrorCode::ZeroPivot) {
                throw;
            }
            o.zero_pivot = 1.0;
        }
        return o;
    });
    std::size_t successes = 0, solved = 0;
    double worst_iterations = 0.0;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        const auto &o = outcomes[t];
        rb.trial(t, {{"mu_min", o.mu_min},
                     {"mu_max", o.mu_max},
                     {"success", o.success},
                     {"zero_pivot", o.zero_pivot},
                     {"pcg_iterations", o.iterations},
                     {"pcg_converged", o.converged}});
        if (o.success != 0.0) {
            ++successes;
            solved += o.converged != 0.0;
            worst_iterations = std::max(worst_iterations, o.iterations);
        }
    }
    const double fraction = static_cast<double>(successes) / static_cast<double>(ctx.trials);
    rb.aggregate("success_fraction", fraction);
    rb.aggregate("pcg.max_iterations", worst_iterations);
    rb.bound("success target", target, anchor);
    rb.check("spectral sandwich", fraction >= target,
             num(fraction) + " of runs within [" + num(lower) + ", " + num(upper) + "]");
    rb.check("sampled preconditioner", solved == successes,
             std::to_string(solved) + "/" + std::to_string(successes) + " reached " + num(tol) + " within " +
                 std::to_string(maxit) + " iterations");
}

void laplacian_solve(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const double tol = p.real("tol");
    const std::size_t maxit = p.count("maxit");
    require(tol > 0.0 && maxit >= 1, "need tol > 0 and maxit >= 1");
    const Laplacian l = laplacian(make_graph(p));
    const std::size_t n = l.n();
    RandomStream setup(ctx.seed, kSetupStream);
    const auto f = random_balanced_vector(n, setup);
    const Matrix pinv = pseudo_inverse_psd(l.matrix);
    std::vector<double> reference(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            reference[i] += pinv(i, j).real() * f[j];
        }
    }
    const std::vector<double> zero(n, 0.0);
    const double scale = energy_distance(l, reference, zero);
    const auto plain = pcg_solve(l, nullptr, f, tol, maxit);
    rb.aggregate("unpreconditioned.iterations", static_cast<double>(plain.iterations));

    struct Outcome {
        double iterations = std::nan(""), converged = 0.0, energy_error = std::nan(""), zero_pivot = 0.0;
    };
    const auto outcomes = run_trials<Outcome>(ctx, [&](std::size_t, RandomStream &rng) {
        Outcome o;
        try {
            const auto pc = sparse_cholesky(l, rng, false);
            const auto sol = pcg_solve(l, &pc, f, tol, maxit);
            o.iterations = static_cast<double>(sol.iterations);
            o.converged = sol.converged ? 1.0 : 0.0;
            o.energy_error = energy_distance(l, sol.u, reference) / scale;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::ZeroPivot) {
                throw;
            }
            o.zero_pivot = 1.0;
        }
        return o;
    });
    std::size_t converged = 0;
    double worst_error = 0.0;
    std::vector<double> iterations;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        const auto &o = outcomes[t];
        rb.trial(t, {{"iterations", o.iterations},
                     {"converged", o.converged},
                     {"energy_error", o.energy_error},
                     {"zero_pivot", o.zero_pivot}});
        if (o.converged != 0.0) {
            ++converged;
            worst_error = std::max(worst_error, o.energy_error);
            iterations.push_back(o.iterations);
        }
    }
    rb.check("converged", converged == ctx.trials,
             std::to_string(converged) + "/" + std::to_string(ctx.trials) + " runs reached " + num(tol));
    rb.aggregate("energy_error.max", worst_error);
    rb.check("energy error", worst_error <= 1e-6, "max relative energy error " + num(worst_error));
    if (!iterations.empty()) {
        const SampleSummary s = summarize(iterations);
        add_summary(rb, "iterations", s);
        rb.diagnose("preconditioner helps", s.mean <= static_cast<double>(plain.iterations),
                    "mean " + num(s.mean) + " vs " + std::to_string(plain.iterations) + " unpreconditioned");
    }
}

void tomography_experiment(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const double eps = p.real("eps");
    const double delta = p.real("delta");
    require(eps > 0.0 && delta > 0.0 && delta < 1.0, "need eps > 0 and delta in (0, 1)");
    const std::string &design_name = p.text("design");
    const MeasurementDesign design = design_name == "mub2" ? builtin_design("mub2") : load_design(design_name);
    const std::size_t d = design.d;
    require(p.count("dim") == d, "dim does not match the design dimension " + std::to_string(d));
    const std::size_t n = p.count("samples") == 0 ? tomography_sample_count(d, eps, delta) : p.count("samples");
    rb.aggregate("samples", static_cast<double>(n));

    std::vector<std::pair<std::string, DensityMatrix>> states;
    const std::string &which = p.text("state");
    auto add_mixed = [&] { states.emplace_back("mixed", DensityMatrix::maximally_mixed(d)); };
    auto add_basis = [&] {
        std::vector<cplx> e(d, 0.0);
        e[d > 1 ? 1 : 0] = 1.0;
        states.emplace_back("basis", DensityMatrix::pure(e));
    };
    auto add_random = [&] {
        RandomStream rng(static_cast<std::uint64_t>(p.integer("state-seed")), 0);
        states.emplace_back("random", DensityMatrix::pure(random_unit_vector(d, rng)));
    };
    if (which == "mixed") {
        add_mixed();
    } else if (which == "basis") {
        add_basis();
    } else if (which == "random") {
        add_random();
    } else if (which == "all") {
        add_mixed();
        add_basis();
        add_random();
    } else {
        states.emplace_back("input", DensityMatrix(load_matrix(which)));
    }

    rb.check("design", validate_design(design, 1e-9), "2-design identity at tolerance 1e-9");
    for (const auto &[name, rho] : states) {
        const auto probs = born_probabilities(design, rho);
        Matrix mean(d, d);
        for (std::size_t j = 0; j < design.m(); ++j) {
            mean += single_measurement_estimator(design, j) * cplx(probs[j]);
        }
        const double gap = max_abs_diff(mean, rho.matrix());
        rb.check("unbiased(" + name + ")", gap <= 1e-10, "max |E[Y] - rho| = " + num(gap));
    }

    const auto rows = run_trials<std::vector<double>>(ctx, [&](std::size_t, RandomStream &rng) {
        std::vector<double> out;
        for (std::size_t k = 0; k < states.size(); ++k) {
            RandomStream sub = rng.split(k);
            const auto &rho = states[k].second;
            const auto est = tomography_estimate(design, rho, n, sub);
            const double dev = spectral_norm(est.S_n - rho.matrix());
            const double lhs = trace_norm(est.rho_hat.matrix() - rho.matrix());
            const double rhs = 4.0 * static_cast<double>(rho.rank()) * dev;
            out.push_back(dev);
            out.push_back(lhs);
            out.push_back(lhs <= rhs + 1e-12 ? 1.0 : 0.0);
        }
        return out;
    });
    for (std::size_t t = 0; t < rows.size(); ++t) {
        std::vector<NamedValue> vals;
        for (std::size_t k = 0; k < states.size(); ++k) {
            vals.push_back({"deviation_" + states[k].first, rows[t][3 * k]});
            vals.push_back({"projected_trace_error_" + states[k].first, rows[t][3 * k + 1]});
            vals.push_back({"projection_inequality_" + states[k].first, rows[t][3 * k + 2]});
        }
        rb.trial(t, std::move(vals));
    }
    const std::string &anchor = find_experiment("tomography").anchor;
    rb.bound("failure probability", delta, anchor);
    for (std::size_t k = 0; k < states.size(); ++k) {
        const std::string &name = states[k].first;
        const auto devs = column(rows, 3 * k);
        add_summary(rb, "deviation(" + name + ")", summarize(devs));
        const auto tail = rb.tail("deviation(" + name + ")", devs, eps);
        rb.tail_check("tail(" + name + ")", tail, delta);
        const auto held = column(rows, 3 * k + 2);
        const auto count = static_cast<std::size_t>(std::count(held.begin(), held.end(), 1.0));
        rb.check("projection inequality(" + name + ")", count == held.size(),
                 std::to_string(count) + "/" + std::to_string(held.size()) + " runs");
    }
}

void covariance_seq(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const std::size_t d = p.count("dim");
    const std::size_t horizon = p.count("horizon");
    const double delta = p.real("delta");
    const double L = p.real("bound");
    require(d >= 1 && horizon >= 1, "need dim >= 1 and horizon >= 1");
    require(delta > 0.0 && delta < 1.0 && L > 0.0, "need delta in (0, 1) and bound > 0");
    require(p.text("model") == "axis", "model must be 'axis'");
    const BoundedVectorModel model = BoundedVectorModel::axis(d, L);
    const Matrix &sigma = model.analytic_sigma();
    const double norm_sigma = spectral_norm(sigma);
    std::vector<double> radii(horizon);
    for (std::size_t n = 1; n <= horizon; ++n) {
        radii[n - 1] = covariance_confidence_radius(L, norm_sigma, d, delta, n);
    }
    const std::string &anchor = find_experiment("covariance-seq").anchor;
    rb.bound("radius(n=1)", radii.front(), anchor);
    rb.bound("radius(n=N)", radii.back(), anchor);

    const auto rows = run_trials<std::vector<double>>(ctx, [&](std::size_t, RandomStream &rng) {
        const auto path = covariance_sequence(model, horizon, rng);
        double worst = 0.0;
        for (std::size_t n = 0; n < horizon; ++n) {
            worst = std::max(worst, spectral_norm(path[n] - sigma) / norm_sigma / radii[n]);
        }
        const bool covered = coverage_check(path, sigma, radii);
        return std::vector<double>{covered ? 0.0 : 1.0, worst};
    });
    for (std::size_t t = 0; t < rows.size(); ++t) {
        rb.trial(t, {{"violated", rows[t][0]}, {"max_ratio", rows[t][1]}});
    }
    const auto violated = column(rows, 0);
    add_summary(rb, "max_ratio", summarize(column(rows, 1)));
    rb.bound("failure probability", delta, anchor);
    const auto tail = rb.tail("violated", violated, 0.5);
    rb.aggregate("coverage", 1.0 - tail.fraction);
    rb.tail_check("uniform coverage", tail, delta);
}

void trotter_experiment(const Params &p, const RunContext &ctx, ReportBuilder &rb) {
    const double eps = p.real("eps");
    const double delta = p.real("delta");
    require(eps > 0.0 && delta > 0.0 && delta < 1.0, "need eps > 0 and delta in (0, 1)");
    require(p.text("hamiltonian") == "x+z", "hamiltonian must be 'x+z'");
    const HamiltonianSum h({pauli_x(), pauli_z()});
    const double L = h.interaction_strength();
    const std::size_t n = p.count("samples") == 0 ? trotter_sample_count(L, eps, delta, h.dim()) : p.count("samples");
    require(n >= 1, "samples must be positive");
    const Matrix u = h.target_unitary();
    const std::string &anchor = find_experiment("trotter").anchor;
    rb.aggregate("L", L);
    rb.aggregate("samples", static_cast<double>(n));

    const Matrix ey = trotter_mean_factor(h, n);
    double flux = 0.0;
    for (std::size_t j = 0; j < h.terms().size(); ++j) {
        const double scale = L / (h.norms()[j] * static_cast<double>(n));
        flux = std::max(flux, spectral_norm(expm_hermitian(h.terms()[j], cplx(0.0, -scale)) - ey));
    }
    rb.aggregate("flux.max", flux);
    rb.bound("flux", 2.0 * L / static_cast<double>(n), anchor);
    rb.check("flux", flux <= 2.0 * L / static_cast<double>(n) + 1e-12,
             "max ||Y - EY|| = " + num(flux) + " vs 2L/n = " + num(2.0 * L / static_cast<double>(n)));

    for (std::size_t m : p.counts("bias-grid")) {
        require(m >= 1, "bias-grid entries must be positive");
        const auto b = trotter_bias(h, m);
        const double md = static_cast<double>(m);
        const std::string tag = "n=" + std::to_string(m);
        rb.aggregate("bias(" + tag + ")", b.bias);
        rb.aggregate("factor_gap(" + tag + ")", b.factor_gap);
        rb.bound("bias(" + tag + ")", L * L / md, anchor);
        rb.bound("factor gap(" + tag + ")", (L / md) * (L / md), anchor);
        rb.check("bias(" + tag + ")", b.bias <= L * L / md, num(b.bias) + " <= " + num(L * L / md));
        rb.check("factor gap(" + tag + ")", b.factor_gap <= (L / md) * (L / md),
                 num(b.factor_gap) + " <= " + num((L / md) * (L / md)));
    }

    const auto errors = run_trials<double>(ctx, [&](std::size_t, RandomStream &rng) {
        return channel_error(random_product(h, n, rng), u);
    });
    for (std::size_t t = 0; t < errors.size(); ++t) {
        rb.trial(t, {{"channel_error", errors[t]}});
    }
    add_summary(rb, "channel_error", summarize(errors));
    rb.bound("failure probability", delta, anchor);
    const auto tail = rb.tail("channel_error", errors, 2.0 * eps);
    rb.tail_check("channel error tail", tail, delta);
}

}  // namespace mclab::detail
