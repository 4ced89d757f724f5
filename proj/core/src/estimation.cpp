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

#include "mclab/estimation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mclab/error.hpp"
#include "mclab/linalg.hpp"

namespace mclab {

namespace {

constexpr double kBoundSlack = 1e-12;

Matrix real_outer_mean(const std::vector<double> &acc, std::size_t d, double n) {
    Matrix out(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out(i, j) = acc[i * d + j] / n;
        }
    }
    return out;
}

void accumulate_outer(std::vector<double> &acc, std::span<const double> g) {
    const std::size_t d = g.size();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            acc[i * d + j] += g[i] * g[j];
        }
    }
}

}  // namespace

GradientModel::GradientModel(std::size_t d, double lipschitz, Sampler sampler, Gradient gradient,
                             std::optional<Matrix> analytic_sigma)
    : d_(d), L_(lipschitz), sampler_(std::move(sampler)), gradient_(std::move(gradient)),
      sigma_(std::move(analytic_sigma)) {
    if (d_ == 0 || !(L_ >= 0.0) || !sampler_ || !gradient_) {
        throw Error(ErrorCode::InvalidArgument, "gradient model needs d >= 1, L >= 0 and both oracles");
    }
    if (sigma_ && (sigma_->rows() != d_ || sigma_->cols() != d_)) {
        throw Error(ErrorCode::DimensionMismatch, "analytic Sigma must be d x d");
    }
}

GradientModel GradientModel::linear(std::vector<double> b) {
    const std::size_t d = b.size();
    Matrix sigma = Matrix::outer(std::span<const double>(b), std::span<const double>(b));
    const double L = norm2(b);
    return GradientModel(
        d, L,
        [d](RandomStream &rng) {
            std::vector<double> z(d);
            for (auto &x : z) {
                x = rng.normal();
            }
            return z;
        },
        [b = std::move(b)](std::span<const double>) { return b; }, std::move(sigma));
}

GradientModel GradientModel::quadratic(const Matrix &q, double radius) {
    if (!q.is_square() || !q.is_real() || hermitian_defect(q) > 0.0) {
        throw Error(ErrorCode::InvalidArgument, "Q must be real symmetric");
    }
    if (!(radius > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sphere radius must be positive");
    }
    const std::size_t d = q.rows();
    std::vector<double> qd(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            qd[i * d + j] = q(i, j).real();
        }
    }
    Matrix sigma = (q * q) * cplx(radius * radius / static_cast<double>(d));
    return GradientModel(
        d, radius * spectral_norm(q),
        [d, radius](RandomStream &rng) {
            std::vector<double> z(d);
            double nrm = 0.0;
            while (!(nrm > 0.0)) {
                for (auto &x : z) {
                    x = rng.normal();
                }
                nrm = norm2(z);
            }
            for (auto &x : z) {
                x *= radius / nrm;
            }
            return z;
        },
        [d, qd = std::move(qd)](std::span<const double> z) {
            std::vector<double> g(d, 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    g[i] += qd[i * d + j] * z[j];
                }
            }
            return g;
        },
        std::move(sigma));
}

GradientModel GradientModel::builtin_quadratic(std::size_t d, std::uint64_t seed) {
    RandomStream rng(seed, 0);
    Matrix g(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const double x = rng.normal();
            g(i, j) = x;
            g(j, i) = x;
        }
    }
    const Matrix v = eigh(g).eigenvectors;
    std::vector<double> spectrum(d);
    for (std::size_t k = 0; k < d; ++k) {
        spectrum[k] = std::ldexp(1.0, -static_cast<int>(k));
    }
    Matrix q = v * Matrix::diagonal(spectrum) * v.transpose();
    q = (0.5 * (q + q.transpose())).real_part();
    return quadratic(q, 1.0);
}

Matrix empirical_sensitivity(const GradientModel &model, std::size_t n, RandomStream &rng) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "need n >= 1 samples");
    }
    const std::size_t d = model.dim();
    const double limit = model.lipschitz() * (1.0 + kBoundSlack);
    std::vector<double> acc(d * d, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto z = model.sample_point(rng);
        const auto g = model.gradient(z);
        if (g.size() != d) {
            throw Error(ErrorCode::DimensionMismatch, "gradient has the wrong length");
        }
        if (norm2(g) > limit) {
            throw Error(ErrorCode::LipschitzViolated, "gradient norm " + std::to_string(norm2(g)) + " exceeds L = " +
                                                          std::to_string(model.lipschitz()));
        }
        accumulate_outer(acc, g);
    }
    return real_outer_mean(acc, d, static_cast<double>(n));
}

double active_subspace_error_bound(double L, double norm_sigma, std::size_t d, std::size_t n) {
    if (!(norm_sigma > 0.0) || n == 0 || d == 0 || !(L >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "need ||Sigma|| > 0, n >= 1, d >= 1");
    }
    const double beta = L * L * std::log(2.0 * static_cast<double>(d)) / (norm_sigma * static_cast<double>(n));
    return std::sqrt(2.0 * beta) + beta / 3.0;
}

std::size_t active_subspace_sample_count(double L, double norm_sigma, std::size_t d, double eps) {
    if (!(norm_sigma > 0.0) || !(eps > 0.0) || d == 0) {
        throw Error(ErrorCode::InvalidArgument, "need ||Sigma|| > 0, eps > 0, d >= 1");
    }
    return static_cast<std::size_t>(
        std::ceil(4.0 / (eps * eps) * L * L * std::log(2.0 * static_cast<double>(d)) / norm_sigma));
}

Matrix active_subspace(const Matrix &sigma_hat, std::size_t k) {
    const std::size_t d = sigma_hat.rows();
    if (k == 0 || k > d) {
        throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= d");
    }
    const auto eig = eigh(sigma_hat);
    Matrix out(d, k);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < d; ++i) {
            out(i, c) = eig.eigenvectors(i, d - 1 - c);
        }
    }
    return out;
}

BoundedVectorModel::BoundedVectorModel(std::size_t d, double bound, Sampler sampler, Matrix analytic_sigma)
    : d_(d), L_(bound), sampler_(std::move(sampler)), sigma_(std::move(analytic_sigma)) {
    if (d_ == 0 || !(L_ > 0.0) || !sampler_) {
        throw Error(ErrorCode::InvalidArgument, "bounded model needs d >= 1, L > 0 and a sampler");
    }
    if (sigma_.rows() != d_ || sigma_.cols() != d_) {
        throw Error(ErrorCode::DimensionMismatch, "analytic Sigma must be d x d");
    }
}

BoundedVectorModel BoundedVectorModel::axis(std::size_t d, double L) {
    if (d == 0) {
        throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    }
    Matrix sigma = Matrix::identity(d) * cplx(L * L / static_cast<double>(d));
    return BoundedVectorModel(
        d, L,
        [d, L](RandomStream &rng) {
            std::vector<double> y(d, 0.0);
            const auto k = rng.index(2 * d);
            y[k / 2] = (k % 2 == 0) ? L : -L;
            return y;
        },
        std::move(sigma));
}

BoundedVectorModel BoundedVectorModel::two_point(std::vector<double> y0) {
    const std::size_t d = y0.size();
    Matrix sigma = Matrix::outer(std::span<const double>(y0), std::span<const double>(y0));
    const double L = norm2(y0);
    return BoundedVectorModel(
        d, L,
        [y0 = std::move(y0)](RandomStream &rng) {
            std::vector<double> y = y0;
            if (rng.bernoulli(0.5)) {
                for (auto &x : y) {
                    x = -x;
                }
            }
            return y;
        },
        std::move(sigma));
}

std::vector<Matrix> covariance_sequence(const BoundedVectorModel &model, std::size_t N, RandomStream &rng) {
    if (N == 0) {
        throw Error(ErrorCode::InvalidArgument, "need a horizon N >= 1");
    }
    const std::size_t d = model.dim();
    const double limit = model.bound() * (1.0 + kBoundSlack);
    std::vector<double> acc(d * d, 0.0);
    std::vector<Matrix> path;
    path.reserve(N);
    for (std::size_t n = 1; n <= N; ++n) {
        const auto y = model.sample(rng);
        if (y.size() != d) {
            throw Error(ErrorCode::DimensionMismatch, "sample has the wrong length");
        }
        if (norm2(y) > limit) {
            throw Error(ErrorCode::BoundViolated, "sample norm exceeds L at n = " + std::to_string(n));
        }
        accumulate_outer(acc, y);
        path.push_back(real_outer_mean(acc, d, static_cast<double>(n)));
    }
    return path;
}

double covariance_confidence_radius(double L, double norm_sigma, std::size_t d, double delta, std::size_t n) {
    if (!(norm_sigma > 0.0) || n == 0 || d == 0 || !(delta > 0.0 && delta < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "need ||Sigma|| > 0, n >= 1, d >= 1, delta in (0,1)");
    }
    const double nn = static_cast<double>(n);
    const double loglog = std::log(std::log(std::numbers::e * nn));
    const double beta =
        L * L / norm_sigma * (std::log(2.0 * static_cast<double>(d) / delta) + loglog) / nn;
    return std::sqrt(8.0 * beta) + 2.0 * beta / 3.0;
}

bool coverage_check(std::span<const Matrix> path, const Matrix &sigma, std::span<const double> radii) {
    if (path.size() != radii.size()) {
        throw Error(ErrorCode::LengthMismatch, "path and radii lengths differ");
    }
    const double scale = spectral_norm(sigma);
    if (!(scale > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Sigma must be nonzero");
    }
    for (std::size_t n = 0; n < path.size(); ++n) {
        if (!(spectral_norm(path[n] - sigma) / scale <= radii[n])) {
            return false;
        }
    }
    return true;
}

}  // namespace mclab
