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

#include "mclab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "mclab/error.hpp"
#include "mclab/linalg.hpp"
#include "mclab/rng.hpp"

namespace mclab {

void ConcentrationStats::validate() const {
    const bool finite = std::isfinite(v) && std::isfinite(B) && std::isfinite(B2);
    if (!finite || v < 0.0 || B < 0.0 || B2 < 0.0 || d1 == 0 || d2 == 0) {
        throw Error(ErrorCode::InvalidArgument, "concentration statistics must be finite and nonnegative");
    }
    if (B2 > B + 1e-9) {
        throw Error(ErrorCode::InvalidArgument,
                    "tail content B2 = " + std::to_string(B2) + " exceeds B = " + std::to_string(B));
    }
}

namespace {

Matrix checked_sum(std::span<const Matrix> terms, const char *side) {
    if (terms.empty()) {
        throw Error(ErrorCode::EmptyInput, std::string(side) + " second-moment list is empty");
    }
    const std::size_t d = terms.front().rows();
    Matrix sum(d, d);
    for (const auto &m : terms) {
        if (m.rows() != d || m.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, std::string(side) + " second moments must all be " +
                                                          std::to_string(d) + "x" + std::to_string(d));
        }
        auto ev = eigvalsh(m);
        if (!ev.empty() && ev.front() < -1e-8 * (1.0 + std::abs(ev.back()))) {
            throw Error(ErrorCode::NotPSD, std::string(side) + " second moment is not PSD");
        }
        sum += m;
    }
    return sum;
}

}  // namespace

double matrix_variance(std::span<const Matrix> second_moments_left, std::span<const Matrix> second_moments_right) {
    const Matrix left = checked_sum(second_moments_left, "left");
    const Matrix right = checked_sum(second_moments_right, "right");
    return std::max(spectral_norm(left), spectral_norm(right));
}

double bernstein_expectation_bound(const ConcentrationStats &s) {
    s.validate();
    const double log_d = std::log(static_cast<double>(s.d1 + s.d2));
    return std::sqrt(2.0 * s.v * log_d) + s.B * log_d / 3.0;
}

double bernstein_tail_bound(const ConcentrationStats &s, double t) {
    s.validate();
    return freedman_tail_bound(s.v, s.B, s.d1, s.d2, t);
}

double freedman_threshold(double v, double B, double t) {
    if (v < 0.0 || B < 0.0 || t < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "freedman_threshold arguments must be nonnegative");
    }
    return std::sqrt(2.0 * v * t) + B * t / 3.0;
}

double freedman_tail_bound(double v, double B, std::size_t d1, std::size_t d2, double t) {
    if (v < 0.0 || B < 0.0 || t < 0.0 || d1 == 0 || d2 == 0) {
        throw Error(ErrorCode::InvalidArgument, "tail bound arguments out of range");
    }
    const double dim = static_cast<double>(d1 + d2);
    if (t == 0.0) {
        return dim;
    }
    if (v == 0.0 && B == 0.0) {
        return 0.0;
    }
    return dim * std::exp(-(t * t / 2.0) / (v + B * t / 3.0));
}

KhinchinBounds khinchin_bounds(double v, std::size_t d1, std::size_t d2) {
    if (v < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "variance must be nonnegative");
    }
    const double log_d = std::log(static_cast<double>(d1 + d2));
    return {std::sqrt(2.0 / std::numbers::pi * v), std::sqrt(2.0 * v * log_d)};
}

RosenthalDiagnostic rosenthal_diagnostic(const ConcentrationStats &s) {
    s.validate();
    const double log_d = std::log(static_cast<double>(s.d1 + s.d2));
    return {std::sqrt(s.v) + s.B2, std::sqrt(s.v * log_d) + s.B2 * log_d};
}

double tail_content(std::span<const double> sample_max_norms) {
    if (sample_max_norms.empty()) {
        throw Error(ErrorCode::EmptyInput, "tail_content needs at least one trial");
    }
    double s = 0.0;
    for (double x : sample_max_norms) {
        s += x * x;
    }
    return std::sqrt(s / static_cast<double>(sample_max_norms.size()));
}

Matrix MartingaleTrace::total() const {
    if (increments.empty()) {
        return Matrix();
    }
    Matrix s(increments.front().rows(), increments.front().cols());
    for (const auto &x : increments) {
        s += x;
    }
    return s;
}

MartingaleTrace record_trace(std::vector<Matrix> increments, const std::function<double(std::size_t)> &qv_fn,
                             double B) {
    MartingaleTrace trace;
    trace.B = B;
    trace.qv.reserve(increments.size());
    double previous = 0.0;
    for (std::size_t k = 0; k < increments.size(); ++k) {
        const double q = qv_fn(k);
        if (!(q >= previous) || !std::isfinite(q)) {
            throw Error(ErrorCode::NonMonotoneQV, "V_" + std::to_string(k + 1) + " = " + std::to_string(q) +
                                                      " after " + std::to_string(previous));
        }
        const double norm = spectral_norm(increments[k]);
        if (norm > B + 1e-9) {
            throw Error(ErrorCode::BoundViolated, "||X_" + std::to_string(k + 1) + "|| = " + std::to_string(norm) +
                                                      " exceeds B = " + std::to_string(B));
        }
        trace.qv.push_back(q);
        previous = q;
    }
    trace.increments = std::move(increments);
    return trace;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

TailEstimate empirical_tail(std::span<const double> trials, double t) {
    if (trials.empty()) {
        throw Error(ErrorCode::EmptyInput, "empirical_tail needs at least one trial");
    }
    TailEstimate out;
    out.trials = trials.size();
    out.exceed = static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [t](double x) { return x >= t; }));
    out.fraction = static_cast<double>(out.exceed) / static_cast<double>(out.trials);
    out.wilson = wilson_interval(out.exceed, out.trials);
    return out;
}

double binomial_sigma(double p, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    p = std::clamp(p, 0.0, 1.0);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

SampleSummary summarize(std::span<const double> values) {
    SampleSummary s;
    s.count = values.size();
    if (values.empty()) {
        return s;
    }
    double sum = 0.0;
    s.min = values.front();
    s.max = values.front();
    for (double x : values) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double x : values) {
            ss += (x - s.mean) * (x - s.mean);
        }
        s.stddev = std::sqrt(ss / static_cast<double>(s.count - 1));
        s.sem = s.stddev / std::sqrt(static_cast<double>(s.count));
    }
    return s;
}

namespace {

// Real embedding of a complex d1 x d2 matrix so that
// Re(x* A y) = [xr; xi]^T [[Ar, -Ai], [Ai, Ar]] [yr; yi].
std::vector<double> real_embedding(const Matrix &a, bool complex_mode, std::size_t &rows, std::size_t &cols) {
    rows = complex_mode ? 2 * a.rows() : a.rows();
    cols = complex_mode ? 2 * a.cols() : a.cols();
    std::vector<double> r(rows * cols, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            r[i * cols + j] = a(i, j).real();
            if (complex_mode) {
                r[i * cols + (j + a.cols())] = -a(i, j).imag();
                r[(i + a.rows()) * cols + j] = a(i, j).imag();
                r[(i + a.rows()) * cols + (j + a.cols())] = a(i, j).real();
            }
        }
    }
    return r;
}

std::vector<double> top_eigenvector(const Matrix &m, double &value) {
    auto eig = eigh(m);
    value = eig.max();
    std::vector<double> x(m.rows());
    const std::size_t last = m.rows() - 1;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        x[i] = eig.eigenvectors(i, last).real();
    }
    return x;
}

// sup over unit x, y of sum_k (x^T R_k y)^2 by alternating top-eigenvector
// updates from several starting directions.
double weak_variance_search(const std::vector<std::vector<double>> &embedded, std::size_t rows, std::size_t cols) {
    RandomStream rng(0x7765616b, 0);
    std::vector<std::vector<double>> starts;
    for (std::size_t j = 0; j < std::min<std::size_t>(cols, 4); ++j) {
        std::vector<double> e(cols, 0.0);
        e[j] = 1.0;
        starts.push_back(e);
    }
    for (int r = 0; r < 4; ++r) {
        std::vector<double> g(cols);
        for (auto &x : g) {
            x = rng.normal();
        }
        const double n = norm2(g);
        for (auto &x : g) {
            x /= n;
        }
        starts.push_back(g);
    }

    double best = 0.0;
    for (auto y : starts) {
        double value = 0.0;
        double previous = -1.0;
        for (int it = 0; it < 200; ++it) {
            Matrix mx(rows, rows);
            for (const auto &r : embedded) {
                std::vector<double> b(rows, 0.0);
                for (std::size_t i = 0; i < rows; ++i) {
                    for (std::size_t j = 0; j < cols; ++j) {
                        b[i] += r[i * cols + j] * y[j];
                    }
                }
                for (std::size_t i = 0; i < rows; ++i) {
                    for (std::size_t j = 0; j < rows; ++j) {
                        mx(i, j) += b[i] * b[j];
                    }
                }
            }
            auto x = top_eigenvector(mx, value);
            Matrix my(cols, cols);
            for (const auto &r : embedded) {
                std::vector<double> c(cols, 0.0);
                for (std::size_t i = 0; i < rows; ++i) {
                    for (std::size_t j = 0; j < cols; ++j) {
                        c[j] += r[i * cols + j] * x[i];
                    }
                }
                for (std::size_t i = 0; i < cols; ++i) {
                    for (std::size_t j = 0; j < cols; ++j) {
                        my(i, j) += c[i] * c[j];
                    }
                }
            }
            y = top_eigenvector(my, value);
            if (value - previous <= 1e-13 * std::max(1.0, value)) {
                break;
            }
            previous = value;
        }
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

VarianceFunction VarianceFunction::from_series(std::vector<Matrix> coefficients) {
    if (coefficients.empty()) {
        throw Error(ErrorCode::EmptyInput, "variance function needs at least one coefficient");
    }
    const std::size_t d1 = coefficients.front().rows();
    const std::size_t d2 = coefficients.front().cols();
    bool complex_mode = false;
    for (const auto &a : coefficients) {
        if (a.rows() != d1 || a.cols() != d2) {
            throw Error(ErrorCode::DimensionMismatch, "series coefficients must share a shape");
        }
        complex_mode = complex_mode || !a.is_real();
    }

    std::vector<std::vector<double>> embedded;
    std::size_t rows = 0, cols = 0;
    for (const auto &a : coefficients) {
        embedded.push_back(real_embedding(a, complex_mode, rows, cols));
    }
    const double weak = weak_variance_search(embedded, rows, cols);

    std::optional<double> energy;
    if (coefficients.size() <= 256) {
        const std::size_t k = coefficients.size();
        Matrix gram(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                double s = 0.0;
                auto ei = coefficients[i].entries();
                auto ej = coefficients[j].entries();
                for (std::size_t t = 0; t < ei.size(); ++t) {
                    s += (std::conj(ei[t]) * ej[t]).real();
                }
                gram(i, j) = s;
                gram(j, i) = s;
            }
        }
        energy = 2.0 * eigvalsh(gram).back();
    }

    auto shared = std::make_shared<std::vector<Matrix>>(std::move(coefficients));
    Evaluator eval = [shared](const Matrix &direction) {
        double var = 0.0;
        for (const auto &a : *shared) {
            if (a.rows() != direction.rows() || a.cols() != direction.cols()) {
                throw Error(ErrorCode::DimensionMismatch, "direction shape does not match the series");
            }
            double ip = 0.0;
            auto ea = a.entries();
            auto ed = direction.entries();
            for (std::size_t t = 0; t < ea.size(); ++t) {
                ip += (std::conj(ea[t]) * ed[t]).real();
            }
            var += ip * ip;
        }
        return var;
    };
    return VarianceFunction(std::move(eval), weak, energy, d1, d2);
}

VarianceFunction VarianceFunction::ginibre(std::size_t d) {
    Evaluator eval = [d](const Matrix &direction) {
        if (direction.rows() != d || direction.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, "direction shape does not match the Ginibre model");
        }
        double s = 0.0;
        for (const auto &z : direction.entries()) {
            s += z.real() * z.real();
        }
        return s;
    };
    return VarianceFunction(std::move(eval), 1.0, 2.0, d, d);
}

}  // namespace mclab
