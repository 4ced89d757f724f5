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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mclab/error.hpp"
#include "mclab/estimation.hpp"
#include "mclab/linalg.hpp"

namespace mclab {
namespace {

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

TEST(ActiveSubspace, BoundValues) {
    EXPECT_NEAR(active_subspace_error_bound(1.0, 1.0, 2, 100), 0.17113190343527251, 1e-14);
    EXPECT_EQ(active_subspace_sample_count(1.0, 1.0, 10, 0.1), 1199U);
}

TEST(ActiveSubspace, BuiltinQuadraticConstants) {
    const auto m = GradientModel::builtin_quadratic();
    EXPECT_EQ(m.dim(), 10U);
    EXPECT_NEAR(m.lipschitz(), 1.0, 1e-12);
    ASSERT_TRUE(m.analytic_sigma().has_value());
    EXPECT_NEAR(spectral_norm(*m.analytic_sigma()), 0.1, 1e-12);
}

// Monte Carlo check of the closed-form Sigma for the sphere quadratic.
TEST(ActiveSubspace, QuadraticSigmaAgainstMonteCarlo) {
    const auto m = GradientModel::builtin_quadratic();
    RandomStream rng(17, 0);
    const std::size_t n = 200000;
    const Matrix mc = empirical_sensitivity(m, n, rng);
    EXPECT_LT(max_abs_diff(mc, *m.analytic_sigma()), 0.004);
}

TEST(ActiveSubspace, LinearModelIsExact) {
    const auto m = GradientModel::linear({3.0, 4.0});
    EXPECT_EQ(m.lipschitz(), 5.0);
    RandomStream rng(1, 0);
    const Matrix s = empirical_sensitivity(m, 5, rng);
    EXPECT_LT(max_abs_diff(s, Matrix::from_rows({{9, 12}, {12, 16}})), 1e-13);
    const Matrix w = active_subspace(s, 1);
    EXPECT_NEAR(std::abs(w(0, 0)), 0.6, 1e-12);
    EXPECT_NEAR(std::abs(w(1, 0)), 0.8, 1e-12);
}

TEST(ActiveSubspace, TopEigenvectorsDescending) {
    const Matrix s = Matrix::diagonal(std::vector<double>{1.0, 3.0, 2.0});
    const Matrix w = active_subspace(s, 2);
    ASSERT_EQ(w.cols(), 2U);
    EXPECT_NEAR(std::abs(w(1, 0)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(w(2, 1)), 1.0, 1e-14);
}

TEST(ActiveSubspace, LipschitzViolation) {
    GradientModel bad(
        1, 0.5, [](RandomStream &) { return std::vector<double>{0.0}; },
        [](std::span<const double>) { return std::vector<double>{1.0}; });
    RandomStream rng(0, 0);
    EXPECT_EQ(code_of([&] { (void)empirical_sensitivity(bad, 3, rng); }), ErrorCode::LipschitzViolated);
}

TEST(Covariance, RadiusValues) {
    EXPECT_NEAR(covariance_confidence_radius(1.0, 1.0, 2, 0.1, 1), 7.891659032371769, 1e-12);
    // Axis model d = 4, L = 1: L^2 / ||Sigma|| = 4, at n = 100 and delta 0.1 with d = 4.
    const double beta = 4.0 * (std::log(80.0) + std::log(std::log(std::exp(1.0) * 100.0))) / 100.0;
    EXPECT_NEAR(covariance_confidence_radius(1.0, 0.25, 4, 0.1, 100),
                std::sqrt(8.0 * beta) + 2.0 * beta / 3.0, 1e-13);
}

TEST(Covariance, SequenceAverages) {
    const auto m = BoundedVectorModel::two_point({1.0, 1.0});
    RandomStream rng(2, 0);
    const auto path = covariance_sequence(m, 10, rng);
    ASSERT_EQ(path.size(), 10U);
    // +-y0 gives y y* = y0 y0* every step.
    for (const auto &s : path) {
        EXPECT_LT(max_abs_diff(s, m.analytic_sigma()), 1e-15);
    }
}

TEST(Covariance, AxisModelLaw) {
    const auto m = BoundedVectorModel::axis(4, 2.0);
    EXPECT_LT(max_abs_diff(m.analytic_sigma(), Matrix::identity(4)), 1e-15);
    RandomStream rng(3, 0);
    const auto path = covariance_sequence(m, 4000, rng);
    EXPECT_LT(spectral_norm(path.back() - m.analytic_sigma()), 0.15);
}

TEST(Covariance, BoundViolation) {
    BoundedVectorModel bad(1, 0.5, [](RandomStream &) { return std::vector<double>{1.0}; },
                           Matrix::identity(1));
    RandomStream rng(0, 0);
    EXPECT_EQ(code_of([&] { (void)covariance_sequence(bad, 3, rng); }), ErrorCode::BoundViolated);
}

TEST(Covariance, CoverageCheck) {
    const Matrix sigma = Matrix::identity(2);
    const std::vector<Matrix> path{2.0 * sigma, 1.1 * sigma};
    EXPECT_TRUE(coverage_check(path, sigma, std::vector<double>{1.0, 0.2}));
    EXPECT_FALSE(coverage_check(path, sigma, std::vector<double>{0.5, 0.2}));
    EXPECT_EQ(code_of([&] { (void)coverage_check(path, sigma, std::vector<double>{1.0}); }),
              ErrorCode::LengthMismatch);
}

}  // namespace
}  // namespace mclab
