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

#ifndef MCLAB_LINALG_HPP
#define MCLAB_LINALG_HPP

#include <cstddef>
#include <vector>

#include "mclab/matrix.hpp"

namespace mclab {

/// Eigendecomposition A = V diag(eigenvalues) V* of a Hermitian matrix.
/// Eigenvalues are ascending; column k of `eigenvectors` pairs with
/// eigenvalues[k].
struct HermitianEigen {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;

    std::size_t dimension() const noexcept { return eigenvalues.size(); }
    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }
    /// V diag(f(lambda)) V* for a scalar map f applied to the eigenvalues.
    template <typename F>
    Matrix apply(F &&f) const;
};

struct JacobiOptions {
    /// Stop when the off-diagonal Frobenius mass falls below tol * ||A||_F.
    double relative_tol = 1e-14;
    int max_sweeps = 64;
};

/// Cyclic Jacobi eigensolver. Real input runs real plane rotations, complex
/// input runs complex (phase + rotation) updates.
///
/// Throws NotHermitian when ||A - A*||_max > 1e-12 (1 + ||A||_max) and
/// NoConvergence if the sweep budget runs out.
HermitianEigen eigh(const Matrix &a, const JacobiOptions &options = {});

/// Eigenvalues only; same algorithm as eigh without accumulating vectors.
std::vector<double> eigvalsh(const Matrix &a, const JacobiOptions &options = {});

/// [[0, A], [A*, 0]].
Matrix hermitian_dilation(const Matrix &a);

/// Largest singular value, sqrt(lambda_max) of the smaller Gram matrix.
/// Intended for min(rows, cols) <= 512.
double spectral_norm(const Matrix &a);

/// Singular values in descending order.
std::vector<double> singular_values(const Matrix &a);

struct MatrixNorms {
    double frobenius = 0.0;
    double trace_norm = 0.0;
    double max_norm = 0.0;
    /// max row 1-norm vee max column 1-norm
    double rc1 = 0.0;
    /// max row 2-norm vee max column 2-norm
    double rc2 = 0.0;
};

MatrixNorms norms(const Matrix &a);
double trace_norm(const Matrix &a);

inline constexpr double kDefaultRankTol = 1e-10;

/// A^{+1/2}: inverse square root on the range of a PSD matrix, zero on
/// eigenvalues at or below rank_tol * lambda_max. Throws NotPSD when
/// lambda_min < -1e-8 lambda_max.
Matrix pseudo_inv_sqrt(const Matrix &a, double rank_tol = kDefaultRankTol);

/// Moore-Penrose pseudoinverse of a PSD matrix, same thresholding.
Matrix pseudo_inverse_psd(const Matrix &a, double rank_tol = kDefaultRankTol);

/// exp(scale * H) through the eigendecomposition of H.
Matrix expm_hermitian(const Matrix &h, cplx scale);

/// True iff lambda_min(B - A) >= -tol.
bool psd_order_holds(const Matrix &a, const Matrix &b, double tol);

/// Euclidean norm of a real vector.
double norm2(std::span<const double> x);
double norm2(std::span<const cplx> x);

template <typename F>
Matrix HermitianEigen::apply(F &&f) const {
    const std::size_t n = eigenvalues.size();
    std::vector<cplx> fl(n);
    for (std::size_t k = 0; k < n; ++k) {
        fl[k] = f(eigenvalues[k]);
    }
    Matrix out(n, n);
    const Matrix &v = eigenvectors;
    for (std::size_t k = 0; k < n; ++k) {
        if (fl[k] == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = v(i, k) * fl[k];
            if (vik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += vik * std::conj(v(j, k));
            }
        }
    }
    return out;
}

}  // namespace mclab

#endif  // MCLAB_LINALG_HPP
