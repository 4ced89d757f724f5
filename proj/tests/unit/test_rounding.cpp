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
#include "mclab/linalg.hpp"
#include "mclab/rounding.hpp"

namespace mclab {
namespace {

TEST(FloatSystem, UnitRoundoffAndMembership) {
    const FloatSystem f(8);
    EXPECT_EQ(f.unit_roundoff(), 1.0 / 128.0);
    EXPECT_TRUE(f.contains(1.0 + 3.0 / 128.0));
    EXPECT_TRUE(f.contains(-0.75));
    EXPECT_TRUE(f.contains(0.0));
    EXPECT_FALSE(f.contains(1.0 + 1.0 / 256.0));
    EXPECT_FALSE(f.contains(std::nan("")));
    EXPECT_TRUE(FloatSystem::exact().contains(0.1));
    EXPECT_EQ(FloatSystem::exact().unit_roundoff(), 0.0);
    EXPECT_THROW(FloatSystem(1), Error);
}

TEST(FloatSystem, BracketNeighbours) {
    const FloatSystem f(8);
    const auto b = f.bracket(1.0 + 1.0 / 512.0);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->below, 1.0);
    EXPECT_EQ(b->above, 1.0 + 1.0 / 128.0);
    EXPECT_DOUBLE_EQ(b->fraction, 0.25);
    const auto n = f.bracket(-(1.0 + 1.0 / 512.0));
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(n->below, -(1.0 + 1.0 / 128.0));
    EXPECT_EQ(n->above, -1.0);
    EXPECT_FALSE(f.bracket(2.0).has_value());
}

TEST(Rounding, NearestTiesToEven) {
    const FloatSystem f(8);
    EXPECT_EQ(round_nearest(f, 1.0 + 1.0 / 256.0), 1.0);
    EXPECT_EQ(round_nearest(f, 1.0 + 3.0 / 256.0), 1.0 + 2.0 / 128.0);
    EXPECT_EQ(round_nearest(f, 1.0 + 0.9 / 128.0), 1.0 + 1.0 / 128.0);
    // Carry into the next binade.
    EXPECT_EQ(round_nearest(f, 2.0 - 1.0 / 512.0), 2.0);
}

TEST(Rounding, StochasticIsUnbiasedAndRelativelyAccurate) {
    const FloatSystem f(8);
    RandomStream rng(21, 0);
    for (double a : {1.0 + 1.0 / 512.0, -3.3, 0.0123, 1e5 + 0.3}) {
        EXPECT_NEAR(stochastic_rounding_mean(f, a), a, 1e-15 * std::abs(a));
        const auto b = f.bracket(a).value();
        const int n = 40000;
        int up = 0;
        for (int i = 0; i < n; ++i) {
            const double r = round_stochastic(f, a, rng);
            ASSERT_TRUE(r == b.below || r == b.above);
            ASSERT_LE(std::abs(r - a), f.unit_roundoff() * std::abs(a));
            up += r == b.above;
        }
        const double p = b.fraction;
        EXPECT_NEAR(static_cast<double>(up) / n, p, 5.0 * std::sqrt(p * (1 - p) / n) + 1e-12);
    }
    EXPECT_EQ(round_stochastic(f, 1.5, rng), 1.5);
}

TEST(Rounding, MatrixRejectsComplex) {
    RandomStream rng(1, 0);
    Matrix a = Matrix::from_rows({{cplx(1.0, 1.0)}});
    EXPECT_THROW((void)round_matrix(FloatSystem(8), a, RoundingMode::Nearest, rng), Error);
}

TEST(RoundingBound, AllOnes) {
    Matrix ones(64, 64);
    for (auto &z : ones.entries()) {
        z = 1.0;
    }
    const auto b = stochastic_rounding_bound(FloatSystem(8), ones);
    EXPECT_NEAR(b.stochastic, 0.20733137739963897, 1e-14);
    EXPECT_NEAR(b.deterministic, 0.5, 1e-15);
}

TEST(SrCholesky, BoundValues) {
    const auto b = sr_cholesky_bound(16, 1.5, 1.0 / 128.0, 3.0);
    EXPECT_NEAR(b.threshold, 0.14039502147247765, 1e-15);
    EXPECT_NEAR(b.prob_bound, 1.5931861877716462, 1e-14);
}

TEST(SrCholesky, FixtureIsRepresentableCorrelation) {
    const FloatSystem f(8);
    Matrix a = correlation_fixture(16, f, 1);
    EXPECT_EQ(hermitian_defect(a), 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_EQ(a(i, i), cplx(1.0));
        for (std::size_t j = 0; j < 16; ++j) {
            EXPECT_TRUE(f.contains(a(i, j).real()));
        }
    }
    EXPECT_GT(eigvalsh(a).front(), 0.1);
    EXPECT_EQ(correlation_fixture(16, f, 1), a);
}

TEST(SrCholesky, ExactModeFactorsExactly) {
    Matrix a = correlation_fixture(16, FloatSystem(8), 1);
    RandomStream rng(0, 0);
    const auto r = sr_cholesky(FloatSystem::exact(), a, rng);
    EXPECT_LT(max_abs_entry(r.C * r.C.adjoint() - a), 1e-12);
    EXPECT_LT(max_abs_entry(r.error), 1e-12);
    EXPECT_FALSE(r.flagged);
    for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t j = i + 1; j < 16; ++j) {
            EXPECT_EQ(r.C(i, j), cplx(0.0));
        }
    }
}

TEST(SrCholesky, RoundedRunStaysNearA) {
    const FloatSystem f(8);
    Matrix a = correlation_fixture(16, f, 1);
    RandomStream rng(3, 0);
    const auto r = sr_cholesky(f, a, rng);
    EXPECT_EQ(r.trace.size(), 16U);
    EXPECT_LT(spectral_norm(r.error), 0.5);
    EXPECT_LT(max_abs_diff(r.C * r.C.adjoint() - a, r.error), 1e-12);
}

TEST(SrCholesky, InputChecks) {
    RandomStream rng(0, 0);
    const FloatSystem f(8);
    EXPECT_THROW((void)sr_cholesky(f, Matrix::from_rows({{2.0}}), rng), Error);
    EXPECT_THROW((void)sr_cholesky(f, Matrix::from_rows({{1.0, 0.1}, {0.1, 1.0}}), rng), Error);
    try {
        (void)sr_cholesky(f, Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}), rng);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BreakdownNonpositivePivot);
    }
}

}  // namespace
}  // namespace mclab
