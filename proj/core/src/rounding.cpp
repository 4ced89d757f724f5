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

#include "mclab/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mclab/error.hpp"
#include "mclab/linalg.hpp"

namespace mclab {

FloatSystem::FloatSystem(int precision_bits) : precision_bits_(precision_bits) {
    if (precision_bits < 2) {
        throw Error(ErrorCode::InvalidArgument, "precision_bits must be >= 2");
    }
    u_ = std::ldexp(1.0, 1 - precision_bits);
}

namespace {

struct Split {
    double scaled;  // |a| * 2^{p - e}, in [2^{p-1}, 2^p)
    double floor;   // integer part
    int shift;      // p - e
};

Split split(double magnitude, int p) {
    int e = 0;
    std::frexp(magnitude, &e);
    const int shift = p - e;
    const double scaled = std::ldexp(magnitude, shift);
    return {scaled, std::floor(scaled), shift};
}

}  // namespace

bool FloatSystem::contains(double a) const {
    if (!std::isfinite(a)) {
        return false;
    }
    if (is_exact() || precision_bits_ >= 53 || a == 0.0) {
        return true;
    }
    const Split s = split(std::abs(a), precision_bits_);
    return s.scaled == s.floor;
}

std::optional<FloatSystem::Bracket> FloatSystem::bracket(double a) const {
    if (!std::isfinite(a)) {
        throw Error(ErrorCode::InvalidArgument, "cannot round a non-finite value");
    }
    if (contains(a)) {
        return std::nullopt;
    }
    const Split s = split(std::abs(a), precision_bits_);
    const double lo = std::ldexp(s.floor, -s.shift);
    const double hi = std::ldexp(s.floor + 1.0, -s.shift);
    const double frac = s.scaled - s.floor;
    if (a > 0.0) {
        return Bracket{lo, hi, frac};
    }
    return Bracket{-hi, -lo, 1.0 - frac};
}

double round_nearest(const FloatSystem &sys, double a) {
    auto b = sys.bracket(a);
    if (!b) {
        return a;
    }
    // Work on the magnitude so "even" refers to the significand of |a|.
    const Split s = split(std::abs(a), sys.precision_bits());
    const double frac = s.scaled - s.floor;
    double k = s.floor;
    if (frac > 0.5 || (frac == 0.5 && std::fmod(s.floor, 2.0) != 0.0)) {
        k += 1.0;
    }
    const double mag = std::ldexp(k, -s.shift);
    return a < 0.0 ? -mag : mag;
}

double round_stochastic(const FloatSystem &sys, double a, RandomStream &rng) {
    auto b = sys.bracket(a);
    if (!b) {
        return a;
    }
    return rng.uniform() < b->fraction ? b->above : b->below;
}

double stochastic_rounding_mean(const FloatSystem &sys, double a) {
    auto b = sys.bracket(a);
    if (!b) {
        return a;
    }
    return b->below + b->fraction * (b->above - b->below);
}

Matrix round_matrix(const FloatSystem &sys, const Matrix &a, RoundingMode mode, RandomStream &rng) {
    if (!a.is_real()) {
        throw Error(ErrorCode::InvalidArgument, "round_matrix expects a real matrix");
    }
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double x = a(i, j).real();
            out(i, j) = mode == RoundingMode::Nearest ? round_nearest(sys, x) : round_stochastic(sys, x, rng);
        }
    }
    return out;
}

RoundingBound stochastic_rounding_bound(const FloatSystem &sys, const Matrix &a) {
    const MatrixNorms n = norms(a);
    const double log_d = std::log(static_cast<double>(a.rows() + a.cols()));
    const double u = sys.unit_roundoff();
    return {u * (std::sqrt(2.0 * n.rc2 * n.rc2 * log_d) + n.max_norm * log_d / 3.0), u * n.rc1};
}

SrCholeskyResult sr_cholesky(const FloatSystem &sys, const Matrix &a, RandomStream &rng) {
    const std::size_t d = a.rows();
    if (!a.is_square() || d == 0) {
        throw Error(ErrorCode::DimensionMismatch, "sr_cholesky needs a nonempty square matrix");
    }
    if (!a.is_real() || hermitian_defect(a) > 0.0) {
        throw Error(ErrorCode::InvalidArgument, "sr_cholesky needs a real symmetric matrix");
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (std::abs(a(i, i).real() - 1.0) > 1e-12) {
            throw Error(ErrorCode::InvalidArgument, "diag(A) must equal I");
        }
        for (std::size_t j = 0; j < d; ++j) {
            if (!sys.contains(a(i, j).real())) {
                throw Error(ErrorCode::InvalidArgument, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                            ") is not representable");
            }
        }
    }

    const double u = sys.unit_roundoff();
    const double norm_a = spectral_norm(a);

    SrCholeskyResult out;
    out.C = Matrix(d, d);
    std::vector<double> r(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            r[i * d + j] = a(i, j).real();
        }
    }
    auto flag = [&out](std::string why) {
        out.flagged = true;
        out.flags.push_back(std::move(why));
    };

    std::vector<Matrix> increments;
    increments.reserve(d);
    double max_y = 0.0;
    std::vector<double> c(d);
    std::vector<double> t(d * d);

    std::vector<double> prev_diag(d);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            prev_diag[i] = r[i * d + i];
        }
        const double pivot = r[k * d + k];
        if (!(pivot > 0.0)) {
            throw Error(ErrorCode::BreakdownNonpositivePivot,
                        "step " + std::to_string(k + 1) + ": pivot " + std::to_string(pivot));
        }
        const double root = std::sqrt(pivot);
        for (std::size_t i = 0; i < d; ++i) {
            c[i] = i < k ? 0.0 : r[i * d + k] / root;
            out.C(i, k) = c[i];
        }
        // Exact update; the eliminated row and column vanish identically.
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                t[i * d + j] = (i <= k || j <= k) ? 0.0 : r[i * d + j] - c[i] * c[j];
            }
        }
        Matrix y(d, d);
        for (std::size_t i = k + 1; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                const double exact = t[i * d + j];
                double rounded = exact;
                if (auto b = sys.bracket(exact)) {
                    rounded = rng.uniform() < b->fraction ? b->above : b->below;
                }
                r[i * d + j] = rounded;
                r[j * d + i] = rounded;
                const double err = rounded - exact;
                y(i, j) = err;
                y(j, i) = err;
                max_y = std::max(max_y, std::abs(err));
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                if (i <= k || j <= k) {
                    r[i * d + j] = 0.0;
                }
            }
        }
        increments.push_back(std::move(y));

        if (k + 1 < d) {
            const std::size_t m = d - k - 1;
            Matrix trailing(m, m);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    trailing(i, j) = r[(i + k + 1) * d + (j + k + 1)];
                }
            }
            auto ev = eigvalsh(trailing);
            if (ev.front() < -1e-12) {
                flag("step " + std::to_string(k + 1) + ": residual not psd");
            }
            if (std::max(std::abs(ev.front()), std::abs(ev.back())) > 2.0 * norm_a) {
                flag("step " + std::to_string(k + 1) + ": ||R_k|| > 2||A||");
            }
            for (std::size_t i = k + 1; i < d; ++i) {
                if (r[i * d + i] > prev_diag[i]) {
                    flag("step " + std::to_string(k + 1) + ": diagonal increased");
                    break;
                }
            }
        }
    }
    if (max_y > u) {
        flag("||Y_k||_max exceeds u");
    }

    out.residual = Matrix(d, d);
    for (std::size_t i = 0; i < d * d; ++i) {
        out.residual.entries()[i] = r[i];
    }
    out.error = out.C * out.C.transpose() - a;
    const double qv_step = 2.0 * u * u * norm_a;
    const double trace_bound = static_cast<double>(d) * std::max(u, max_y);
    out.trace = record_trace(
        std::move(increments), [qv_step](std::size_t k) { return qv_step * static_cast<double>(k + 1); },
        trace_bound);
    return out;
}

SrCholeskyBound sr_cholesky_bound(std::size_t d, double norm_a, double u, double t) {
    if (norm_a < 0.0 || u < 0.0 || t < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "sr_cholesky_bound arguments must be nonnegative");
    }
    const double dd = static_cast<double>(d);
    return {u * (2.0 * std::sqrt(dd * norm_a * t) + t / 3.0), 2.0 * dd * std::exp(-t)};
}

Matrix correlation_fixture(std::size_t d, const FloatSystem &sys, std::uint64_t seed) {
    RandomStream rng(seed, 0);
    const std::size_t dof = 4 * d;
    std::vector<double> w(d * dof);
    for (auto &x : w) {
        x = rng.normal();
    }
    Matrix cov(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dof; ++k) {
                s += w[i * dof + k] * w[j * dof + k];
            }
            cov(i, j) = s;
        }
    }
    Matrix corr(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (i == j) {
                corr(i, j) = 1.0;
            } else {
                const double rho = cov(i, j).real() / std::sqrt(cov(i, i).real() * cov(j, j).real());
                corr(i, j) = round_nearest(sys, rho);
            }
        }
    }
    return corr;
}

}  // namespace mclab
