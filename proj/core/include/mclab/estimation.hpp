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

#ifndef MCLAB_ESTIMATION_HPP
#define MCLAB_ESTIMATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mclab/matrix.hpp"
#include "mclab/rng.hpp"

namespace mclab {

/// Gradient oracle for an L-Lipschitz function together with the law of
/// the input point z.
class GradientModel {
   public:
    using Sampler = std::function<std::vector<double>(RandomStream &)>;
    using Gradient = std::function<std::vector<double>(std::span<const double>)>;

    GradientModel(std::size_t d, double lipschitz, Sampler sampler, Gradient gradient,
                  std::optional<Matrix> analytic_sigma = std::nullopt);

    /// f(z) = b* z; every gradient is b.
    static GradientModel linear(std::vector<double> b);
    /// f(z) = z* Q z / 2 with z uniform on the sphere of radius R. Then
    /// L = R ||Q|| and, since E[z z*] = (R^2 / d) I, Sigma = (R^2 / d) Q^2.
    static GradientModel quadratic(const Matrix &q, double radius);
    /// The d = 10 quadratic used by the experiments: Q = V diag(2^{-k}) V*
    /// with V a seeded random rotation, R = 1.
    static GradientModel builtin_quadratic(std::size_t d = 10, std::uint64_t seed = 20260101);

    std::size_t dim() const noexcept { return d_; }
    double lipschitz() const noexcept { return L_; }
    const std::optional<Matrix> &analytic_sigma() const noexcept { return sigma_; }

    std::vector<double> sample_point(RandomStream &rng) const { return sampler_(rng); }
    std::vector<double> gradient(std::span<const double> z) const { return gradient_(z); }

   private:
    std::size_t d_;
    double L_;
    Sampler sampler_;
    Gradient gradient_;
    std::optional<Matrix> sigma_;
};

/// (1/n) sum_k grad f(z_k) grad f(z_k)*. Throws LipschitzViolated when a
/// gradient norm exceeds L (relative slack 1e-12).
Matrix empirical_sensitivity(const GradientModel &model, std::size_t n, RandomStream &rng);

/// sqrt(2 beta) + beta / 3 with beta = L^2 log(2d) / (||Sigma|| n).
double active_subspace_error_bound(double L, double norm_sigma, std::size_t d, std::size_t n);

/// ceil(4 eps^-2 L^2 log(2d) / ||Sigma||)
std::size_t active_subspace_sample_count(double L, double norm_sigma, std::size_t d, double eps);

/// Top-k eigenvectors of a Hermitian matrix as orthonormal columns, by
/// descending eigenvalue.
Matrix active_subspace(const Matrix &sigma_hat, std::size_t k);

/// Centered random vector with ||y|| <= L and known covariance. Centering
/// is a property of the sampler; both factories draw symmetric laws.
class BoundedVectorModel {
   public:
    using Sampler = std::function<std::vector<double>(RandomStream &)>;

    BoundedVectorModel(std::size_t d, double bound, Sampler sampler, Matrix analytic_sigma);

    /// Uniform over {+-L e_i}; Sigma = (L^2 / d) I.
    static BoundedVectorModel axis(std::size_t d, double L);
    /// +-y0 with equal probability; Sigma = y0 y0*.
    static BoundedVectorModel two_point(std::vector<double> y0);

    std::size_t dim() const noexcept { return d_; }
    double bound() const noexcept { return L_; }
    const Matrix &analytic_sigma() const noexcept { return sigma_; }
    std::vector<double> sample(RandomStream &rng) const { return sampler_(rng); }

   private:
    std::size_t d_;
    double L_;
    Sampler sampler_;
    Matrix sigma_;
};

/// Running covariances Sigma_n = (1/n) sum_{k<=n} y_k y_k* for n = 1..N
/// along one path. Throws BoundViolated when ||y_k|| > L.
std::vector<Matrix> covariance_sequence(const BoundedVectorModel &model, std::size_t N, RandomStream &rng);

/// sqrt(8 beta) + 2 beta / 3 with
/// beta = (L^2 / ||Sigma||) (log(2d / delta) + log log(e n)) / n.
double covariance_confidence_radius(double L, double norm_sigma, std::size_t d, double delta, std::size_t n);

/// ||Sigma_n - Sigma|| / ||Sigma|| <= radii[n] for every n.
bool coverage_check(std::span<const Matrix> path, const Matrix &sigma, std::span<const double> radii);

}  // namespace mclab

#endif  // MCLAB_ESTIMATION_HPP
