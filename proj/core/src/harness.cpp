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

#include "mclab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "experiment_support.hpp"
#include "mclab/error.hpp"

namespace mclab {

namespace detail {

namespace {

const std::string &lookup(const std::map<std::string, std::string> &values, const std::string &name) {
    auto it = values.find(name);
    if (it == values.end()) {
        throw Error(ErrorCode::BadParams, "missing parameter '" + name + "'");
    }
    return it->second;
}

std::int64_t parse_int(const std::string &name, std::string_view text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorCode::BadParams, "parameter '" + name + "' expects an integer, got '" + std::string(text) + "'");
    }
    return v;
}

double parse_real(const std::string &name, std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
        throw Error(ErrorCode::BadParams, "parameter '" + name + "' expects a real number, got '" + std::string(text) +
                                              "'");
    }
    return v;
}

std::vector<std::int64_t> parse_int_list(const std::string &name, std::string_view text) {
    std::vector<std::int64_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        out.push_back(parse_int(name, text.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::int64_t Params::integer(const std::string &name) const { return parse_int(name, lookup(values_, name)); }

std::size_t Params::count(const std::string &name) const {
    const auto v = integer(name);
    require(v >= 0, "parameter '" + name + "' must be nonnegative");
    return static_cast<std::size_t>(v);
}

double Params::real(const std::string &name) const { return parse_real(name, lookup(values_, name)); }

const std::string &Params::text(const std::string &name) const { return lookup(values_, name); }

std::vector<std::size_t> Params::counts(const std::string &name) const {
    std::vector<std::size_t> out;
    for (auto v : parse_int_list(name, lookup(values_, name))) {
        require(v >= 0, "parameter '" + name + "' must hold nonnegative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw Error(ErrorCode::BadParams, message);
    }
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

TailRecord ReportBuilder::tail(std::string statistic, std::span<const double> values, double threshold) {
    const TailEstimate est = empirical_tail(values, threshold);
    TailRecord rec{std::move(statistic), threshold, est.exceed, est.trials, est.fraction, est.wilson.lower,
                   est.wilson.upper};
    r_.tails.push_back(rec);
    return rec;
}

void ReportBuilder::tail_check(std::string name, const TailRecord &tail, double p_ref) {
    const double sigma = binomial_sigma(p_ref, tail.trials);
    const double limit = p_ref + 3.0 * sigma;
    check(std::move(name), tail.fraction <= limit,
          "fraction " + num(tail.fraction) + " <= " + num(p_ref) + " + 3*" + num(sigma) + " = " + num(limit));
}

void ReportBuilder::mean_below(std::string name, const SampleSummary &s, double bound) {
    check(std::move(name), s.mean - 3.0 * s.sem <= bound,
          "mean " + num(s.mean) + " (sem " + num(s.sem) + ") vs bound " + num(bound));
}

}  // namespace detail

namespace {

using detail::ExperimentFn;

struct Entry {
    ExperimentInfo info;
    ExperimentFn fn;
};

ParamSpec int_param(std::string name, std::string def, std::string help) {
    return {std::move(name), ParamKind::Int, std::move(def), std::move(help)};
}
ParamSpec real_param(std::string name, std::string def, std::string help) {
    return {std::move(name), ParamKind::Real, std::move(def), std::move(help)};
}
ParamSpec text_param(std::string name, std::string def, std::string help) {
    return {std::move(name), ParamKind::String, std::move(def), std::move(help)};
}
ParamSpec list_param(std::string name, std::string def, std::string help) {
    return {std::move(name), ParamKind::IntList, std::move(def), std::move(help)};
}

std::vector<ParamSpec> graph_params(std::string graph, std::string vertices) {
    return {text_param("graph", std::move(graph), "complete, erdos-renyi, or a graph file"),
            int_param("vertices", std::move(vertices), "vertex count for generated graphs"),
            real_param("edge-prob", "0.2", "edge probability for erdos-renyi"),
            int_param("graph-seed", "11", "seed of the generated graph")};
}

std::vector<ParamSpec> concat(std::vector<ParamSpec> a, std::vector<ParamSpec> b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::vector<Entry> &registry() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        e.push_back({{"bernstein-diag", "diagonal Rademacher series, expected norm and tail",
                      "matrix Bernstein inequality: expectation and tail bounds", 2000,
                      {int_param("dim", "32", "matrix dimension d"),
                       list_param("thresholds", "1,2,3,4", "tail thresholds t")}},
                     detail::bernstein_diag});
        e.push_back({{"bernstein-ginibre", "Rademacher series over all matrix units, expected norm and tail",
                      "matrix Bernstein inequality: expectation and tail bounds", 1000,
                      {int_param("dim", "16", "matrix dimension d")}},
                     detail::bernstein_ginibre});
        e.push_back({{"khinchin-ginibre", "real Gaussian matrix, expected norm bracket",
                      "matrix Khinchin inequality for Gaussian series", 300,
                      {int_param("dim", "64", "matrix dimension d")}},
                     detail::khinchin_ginibre});
        e.push_back({{"active-subspace", "empirical sensitivity matrix of a quadratic on the sphere",
                      "expected relative error of the sampled sensitivity matrix", 500,
                      {int_param("dim", "10", "ambient dimension d"),
                       list_param("samples", "50,200", "sample sizes n"),
                       text_param("model", "quadratic", "gradient model (quadratic)")}},
                     detail::active_subspace_experiment});
        e.push_back({{"sr-round", "entrywise stochastic rounding of fixed matrices",
                      "stochastic rounding error bound for matrices", 500,
                      {int_param("dim", "64", "matrix dimension"),
                       int_param("precision-bits", "8", "significand bits p"),
                       text_param("matrix", "all", "ones, signs, uniform, all, or a matrix file"),
                       int_param("fixture-seed", "7", "seed of the random fixtures")}},
                     detail::sr_round});
        e.push_back({{"sr-cholesky", "Cholesky factorization with stochastic rounding of each update",
                      "Cholesky factorization with stochastic rounding: tail bound", 500,
                      {int_param("dim", "16", "matrix dimension d"),
                       int_param("precision-bits", "8", "significand bits p"),
                       real_param("delta", "0.1", "failure probability setting t = log(2d/delta)"),
                       text_param("input", "", "matrix file; empty selects the correlation fixture"),
                       int_param("fixture-seed", "1", "seed of the correlation fixture")}},
                     detail::sr_cholesky_experiment});
        e.push_back({{"sparsify", "effective-resistance edge sampling",
                      "spectral sparsification by effective-resistance sampling", 100,
                      concat(graph_params("complete", "50"),
                             {real_param("eps", "0.5", "spectral accuracy"),
                              real_param("delta", "0.1", "failure probability")})},
                     detail::sparsify_experiment});
        e.push_back({{"sparse-cholesky", "vertex elimination with exact and sampled cliques",
                      "randomized sparse Cholesky approximation of a Laplacian", 100,
                      concat(graph_params("complete", "30"),
                             {real_param("lower", "0.5", "lower spectral factor"),
                              real_param("upper", "1.5", "upper spectral factor"),
                              real_param("target", "0.8", "required success fraction"),
                              real_param("tol", "1e-8", "PCG relative residual"),
                              int_param("maxit", "50", "PCG iteration cap"),
                              int_param("oversampling", "1", "clique samples per pivot neighbour")})},
                     detail::sparse_cholesky_experiment});
        e.push_back({{"laplacian-solve", "PCG on a Laplacian with a sampled sparse Cholesky preconditioner",
                      "preconditioned conjugate gradient Laplacian solver", 20,
                      concat(graph_params("erdos-renyi", "50"),
                             {real_param("tol", "1e-8", "PCG relative residual"),
                              int_param("maxit", "200", "PCG iteration cap")})},
                     detail::laplacian_solve});
        e.push_back({{"tomography", "state estimation from single-copy 2-design measurements",
                      "quantum state tomography sample complexity", 500,
                      {int_param("dim", "2", "Hilbert space dimension"),
                       text_param("design", "mub2", "mub2 or a design file"),
                       text_param("state", "all", "mixed, basis, random, all, or a matrix file"),
                       real_param("eps", "0.5", "spectral accuracy"),
                       real_param("delta", "0.1", "failure probability"),
                       int_param("samples", "0", "measurements per run; 0 uses the sample-count formula"),
                       int_param("state-seed", "5", "seed of the random pure state")}},
                     detail::tomography_experiment});
        e.push_back({{"covariance-seq", "running covariance estimates along one sample path",
                      "time-uniform covariance confidence sequence", 400,
                      {int_param("dim", "4", "dimension d"),
                       int_param("horizon", "2048", "path length N"),
                       real_param("delta", "0.1", "failure probability"),
                       real_param("bound", "1", "almost-sure norm bound L"),
                       text_param("model", "axis", "vector model (axis)")}},
                     detail::covariance_seq});
        e.push_back({{"trotter", "random product formula for exp(-i(X+Z))",
                      "random product formula for Hamiltonian simulation", 200,
                      {real_param("eps", "1", "target accuracy"),
                       real_param("delta", "0.2", "failure probability"),
                       text_param("hamiltonian", "x+z", "Hamiltonian (x+z)"),
                       int_param("samples", "0", "product length; 0 uses the sample-count formula"),
                       list_param("bias-grid", "10,100,1000", "product lengths for the bias check")}},
                     detail::trotter_experiment});
        return e;
    }();
    return entries;
}

const Entry &find_entry(std::string_view name) {
    for (const auto &e : registry()) {
        if (e.info.name == name) {
            return e;
        }
    }
    throw Error(ErrorCode::UnknownExperiment, "unknown experiment '" + std::string(name) + "'");
}

bool is_config_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::ParseError:
        case ErrorCode::UnknownDesign:
        case ErrorCode::HypothesisViolated:
        case ErrorCode::Disconnected:
        case ErrorCode::DimensionMismatch:
            return true;
        default:
            return false;
    }
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::ordered_json json_number(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return x;
}

nlohmann::ordered_json param_json(const ParamSpec &spec, const std::string &value) {
    switch (spec.kind) {
        case ParamKind::Int:
            return std::stoll(value);
        case ParamKind::Real:
            return json_number(std::stod(value));
        case ParamKind::IntList: {
            auto arr = nlohmann::ordered_json::array();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                arr.push_back(std::stoll(item));
            }
            return arr;
        }
        case ParamKind::String:
            break;
    }
    return value;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

}  // namespace

const std::vector<ExperimentInfo> &list_experiments() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> out;
        for (const auto &e : registry()) {
            out.push_back(e.info);
        }
        return out;
    }();
    return infos;
}

const ExperimentInfo &find_experiment(std::string_view name) { return find_entry(name).info; }

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::Fail:
            return "fail";
        case Verdict::Flag:
            return "flag";
    }
    return "fail";
}

bool ExperimentReport::passed() const {
    return std::none_of(verdicts.begin(), verdicts.end(), [](const Assertion &a) { return a.verdict == Verdict::Fail; });
}

const Assertion *ExperimentReport::find_verdict(std::string_view name) const {
    for (const auto &a : verdicts) {
        if (a.name == name) {
            return &a;
        }
    }
    return nullptr;
}

std::optional<double> ExperimentReport::aggregate(std::string_view name) const {
    for (const auto &a : aggregates) {
        if (a.name == name) {
            return a.value;
        }
    }
    return std::nullopt;
}

ExperimentReport run(const ExperimentConfig &config) {
    const Entry &entry = find_entry(config.experiment);
    std::set<std::string> known;
    for (const auto &p : entry.info.params) {
        known.insert(p.name);
    }
    for (const auto &[name, value] : config.params) {
        if (!known.count(name)) {
            throw Error(ErrorCode::BadParams, "experiment '" + entry.info.name + "' has no parameter '" + name + "'");
        }
    }
    const std::size_t trials = config.trials.value_or(entry.info.default_trials);
    if (trials == 0) {
        throw Error(ErrorCode::BadParams, "trials must be positive");
    }

    ExperimentReport report;
    report.experiment = entry.info.name;
    report.seed = config.seed;
    report.trials = trials;
    std::map<std::string, std::string> resolved;
    for (const auto &spec : entry.info.params) {
        auto it = config.params.find(spec.name);
        const std::string value = it == config.params.end() ? spec.default_value : it->second;
        resolved[spec.name] = value;
        report.params.emplace_back(spec, value);
    }
    detail::Params params(resolved);
    // Parse every typed parameter up front so bad values fail before any trial runs.
    for (const auto &spec : entry.info.params) {
        switch (spec.kind) {
            case ParamKind::Int:
                params.integer(spec.name);
                break;
            case ParamKind::Real:
                params.real(spec.name);
                break;
            case ParamKind::IntList:
                params.counts(spec.name);
                break;
            case ParamKind::String:
                break;
        }
    }

    const detail::RunContext ctx{config.seed, trials, config.threads};
    detail::ReportBuilder builder(report);
    const auto start = std::chrono::steady_clock::now();
    try {
        entry.fn(params, ctx, builder);
    } catch (const Error &e) {
        if (is_config_code(e.code())) {
            throw Error(ErrorCode::BadParams, e.what());
        }
        throw;
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (config.out_path) {
        write_report(report, *config.out_path, config.format, config.record_timing);
    }
    return report;
}

std::string report_to_json(const ExperimentReport &report, bool include_timing) {
    using json = nlohmann::ordered_json;
    json j;
    j["spec_version"] = std::string(kReportSchemaVersion);
    j["experiment"] = report.experiment;
    j["anchor"] = find_experiment(report.experiment).anchor;
    j["seed"] = report.seed;
    j["trials"] = report.trials;
    json params = json::object();
    for (const auto &[spec, value] : report.params) {
        params[spec.name] = param_json(spec, value);
    }
    j["params"] = params;
    json records = json::array();
    for (const auto &rec : report.trial_records) {
        json values = json::object();
        for (const auto &v : rec.values) {
            values[v.name] = json_number(v.value);
        }
        records.push_back({{"trial", rec.trial}, {"values", values}});
    }
    j["trial_records"] = records;
    json aggregates = json::object();
    for (const auto &a : report.aggregates) {
        aggregates[a.name] = json_number(a.value);
    }
    j["aggregates"] = aggregates;
    json tails = json::array();
    for (const auto &t : report.tails) {
        tails.push_back({{"statistic", t.statistic},
                         {"threshold", json_number(t.threshold)},
                         {"exceedances", t.exceedances},
                         {"trials", t.trials},
                         {"fraction", json_number(t.fraction)},
                         {"wilson", {json_number(t.wilson_lower), json_number(t.wilson_upper)}}});
    }
    j["tails"] = tails;
    json bounds = json::array();
    for (const auto &b : report.bounds) {
        bounds.push_back({{"name", b.name}, {"value", json_number(b.value)}, {"anchor", b.anchor}});
    }
    j["bounds"] = bounds;
    json verdicts = json::array();
    for (const auto &v : report.verdicts) {
        verdicts.push_back({{"name", v.name}, {"status", std::string(verdict_name(v.verdict))}, {"detail", v.detail}});
    }
    j["verdicts"] = verdicts;
    j["passed"] = report.passed();
    if (include_timing) {
        j["wall_clock_seconds"] = report.wall_seconds;
    }
    return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport &report, bool include_timing) {
    std::ostringstream out;
    out << "section,name,index,value,detail\n";
    out << "meta,spec_version,,," << kReportSchemaVersion << '\n';
    out << "meta,experiment,,," << csv_field(report.experiment) << '\n';
    out << "meta,seed,," << report.seed << ",\n";
    out << "meta,trials,," << report.trials << ",\n";
    for (const auto &[spec, value] : report.params) {
        out << "param," << csv_field(spec.name) << ",,," << csv_field(value) << '\n';
    }
    for (const auto &rec : report.trial_records) {
        for (const auto &v : rec.values) {
            out << "trial," << csv_field(v.name) << ',' << rec.trial << ',' << format_double(v.value) << ",\n";
        }
    }
    for (const auto &a : report.aggregates) {
        out << "aggregate," << csv_field(a.name) << ",," << format_double(a.value) << ",\n";
    }
    for (std::size_t k = 0; k < report.tails.size(); ++k) {
        const auto &t = report.tails[k];
        out << "tail," << csv_field(t.statistic) << ',' << k << ',' << format_double(t.fraction) << ','
            << csv_field("threshold=" + format_double(t.threshold) + " exceed=" + std::to_string(t.exceedances) +
                         "/" + std::to_string(t.trials) + " wilson=[" + format_double(t.wilson_lower) + "," +
                         format_double(t.wilson_upper) + "]")
            << '\n';
    }
    for (const auto &b : report.bounds) {
        out << "bound," << csv_field(b.name) << ",," << format_double(b.value) << ',' << csv_field(b.anchor) << '\n';
    }
    for (const auto &v : report.verdicts) {
        out << "verdict," << csv_field(v.name) << ",," << verdict_name(v.verdict) << ',' << csv_field(v.detail)
            << '\n';
    }
    out << "meta,passed,," << (report.passed() ? "true" : "false") << ",\n";
    if (include_timing) {
        out << "meta,wall_clock_seconds,," << format_double(report.wall_seconds) << ",\n";
    }
    return out.str();
}

void write_report(const ExperimentReport &report, const std::filesystem::path &path, ReportFormat format,
                  bool include_timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    out << (format == ReportFormat::Json ? report_to_json(report, include_timing)
                                         : report_to_csv(report, include_timing));
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for " + path.string());
    }
}

int exit_code(const ExperimentReport &report) { return report.passed() ? 0 : 2; }

}  // namespace mclab
