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

#include <algorithm>
#include <cmath>
#include <vector>

#include "mclab/error.hpp"
#include "mclab/linalg.hpp"
#include "mclab/rng.hpp"

namespace mclab {
namespace {

// Eigenvalues below x, by Sylvester inertia of the LDL* pivots of A - xI.
std::size_t count_below(const Matrix &a, double x) {
    const std::size_t n = a.rows();
    std::vector<std::vector<cplx>> m(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = a(i, j) - (i == j ? x : 0.0);
        }
    }
    std::size_t neg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = m[k][k].real();
        if (p < 0.0) {
            ++neg;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = m[i][k] / p;
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    return neg;
}

// k-th smallest eigenvalue by bisection on count_below.
double bisect_eigenvalue(const Matrix &a, std::size_t k, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(a, mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Matrix random_hermitian(std::size_t n, RandomStream &rng, bool complex) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cplx z(rng.normal(), (complex && i != j) ? rng.normal() : 0.0);
            a(i, j) = z;
            a(j, i) = std::conj(z);
        }
    }
    return a;
}

TEST(Eigh, RealSymmetricMatchesReference) {
    Matrix a = Matrix::from_rows({{4, 1, -2, 0.5}, {1, 3, 0, 1}, {-2, 0, 5, -1}, {0.5, 1, -1, 2}});
    const std::vector<double> expected{1.0471386409290873, 2.3609454269745447, 3.6025744003397637,
                                       6.9893415317566046};
    const auto e = eigh(a);
    ASSERT_EQ(e.dimension(), 4U);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(e.eigenvalues[k], expected[k], 1e-13);
    }
    EXPECT_LT(max_abs_diff(e.apply([](double x) { return x; }), a), 1e-13);
}

TEST(Eigh, ComplexHermitianMatchesReference) {
    Matrix h = Matrix::from_rows(
        {{2, cplx(1, -1), cplx(0, 0.5)}, {cplx(1, 1), -1, 0.25}, {cplx(0, -0.5), 0.25, 3}});
    const std::vector<double> expected{-1.5941934784230627, 2.3301669712925137, 3.2640265071305476};
    const auto vals = eigvalsh(h);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(vals[k], expected[k], 1e-13);
    }
}

TEST(Eigh, AgreesWithBisectionOracle) {
    RandomStream rng(3, 0);
    for (bool complex : {false, true}) {
        for (std::size_t n : {5U, 12U, 24U}) {
            Matrix a = random_hermitian(n, rng, complex);
            const auto e = eigh(a);
            const double r = frobenius_norm(a) + 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                EXPECT_NEAR(e.eigenvalues[k], bisect_eigenvalue(a, k, -r, r), 1e-10 * r);
            }
            Matrix vv = e.eigenvectors.adjoint() * e.eigenvectors;
            EXPECT_LT(max_abs_diff(vv, Matrix::identity(n)), 1e-12);
            EXPECT_LT(max_abs_diff(e.apply([](double x) { return x; }), a), 1e-11 * r);
        }
    }
}

TEST(Eigh, RejectsNonHermitian) {
    Matrix a = Matrix::from_rows({{1, 2}, {0, 1}});
    try {
        (void)eigh(a);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
    }
}

TEST(Eigh, SweepBudgetExhaustionIsNoConvergence) {
    RandomStream rng(4, 0);
    Matrix a = random_hermitian(8, rng, true);
    JacobiOptions opts;
    opts.max_sweeps = 1;
    opts.relative_tol = 1e-300;
    try {
        (void)eigh(a, opts);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    }
}

TEST(Norms, SingularValuesAndSpectralNorm) {
    Matrix m = Matrix::from_rows({{1, 2, 0}, {0, 1, -1}});
    const auto sv = singular_values(m);
    ASSERT_EQ(sv.size(), 2U);
    EXPECT_NEAR(sv[0], std::sqrt(6.0), 1e-13);
    EXPECT_NEAR(sv[1], 1.0, 1e-13);
    EXPECT_NEAR(spectral_norm(m), std::sqrt(6.0), 1e-13);
    EXPECT_NEAR(trace_norm(m), std::sqrt(6.0) + 1.0, 1e-13);

    const auto n = norms(m);
    EXPECT_DOUBLE_EQ(n.max_norm, 2.0);
    EXPECT_DOUBLE_EQ(n.rc1, 3.0);              // row 0
    EXPECT_NEAR(n.rc2, std::sqrt(5.0), 1e-15);  // row 0 and column 1
    EXPECT_NEAR(n.frobenius, std::sqrt(7.0), 1e-15);
}

TEST(Dilation, SpectrumIsPlusMinusSingularValues) {
    RandomStream rng(5, 0);
    Matrix a(3, 5);
    for (auto &z : a.entries()) {
        z = cplx(rng.normal(), rng.normal());
    }
    const auto sv = singular_values(a);
    auto vals = eigvalsh(hermitian_dilation(a));
    ASSERT_EQ(vals.size(), 8U);
    std::vector<double> expected;
    for (double s : sv) {
        expected.push_back(s);
        expected.push_back(-s);
    }
    expected.push_back(0.0);
    expected.push_back(0.0);
    std::sort(expected.begin(), expected.end());
    for (std::size_t k = 0; k < 8; ++k) {
        EXPECT_NEAR(vals[k], expected[k], 1e-9);
    }
}

TEST(Functions, PseudoInverseOfLaplacianPath) {
    Matrix l = Matrix::from_rows({{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}});
    Matrix p = pseudo_inverse_psd(l);
    EXPECT_LT(max_abs_diff(l * p * l, l), 1e-12);
    EXPECT_LT(max_abs_diff(p * l * p, p), 1e-12);
    Matrix s = pseudo_inv_sqrt(l);
    EXPECT_LT(max_abs_diff(s * s, p), 1e-12);
}

TEST(Functions, PseudoInverseRejectsIndefinite) {
    Matrix a = Matrix::from_rows({{1, 0}, {0, -1}});
    EXPECT_THROW((void)pseudo_inverse_psd(a), Error);
}

TEST(Functions, ExponentialOfPauliSum) {
    // exp(-i(X + Z)) = cos(sqrt2) I - i sin(sqrt2) (X + Z) / sqrt2
    Matrix h = Matrix::from_rows({{1, 1}, {1, -1}});
    Matrix u = expm_hermitian(h, cplx(0.0, -1.0));
    const double c = std::cos(std::sqrt(2.0));
    const double s = std::sin(std::sqrt(2.0)) / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(u(0, 0) - cplx(c, -s)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(u(0, 1) - cplx(0.0, -s)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(u(1, 1) - cplx(c, s)), 0.0, 1e-14);
}

TEST(Functions, LoewnerOrder) {
    Matrix a = Matrix::identity(2);
    Matrix b = Matrix::from_rows({{2, 0.5}, {0.5, 2}});
    EXPECT_TRUE(psd_order_holds(a, b, 0.0));
    EXPECT_FALSE(psd_order_holds(b, a, 1e-12));
}

}  // namespace
}  // namespace mclab
