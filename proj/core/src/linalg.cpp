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

#include "mclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mclab/error.hpp"

namespace mclab {

namespace {

inline double conj_(double x) { return x; }
inline cplx conj_(cplx z) { return std::conj(z); }
inline double real_(double x) { return x; }
inline double real_(cplx z) { return z.real(); }
inline double abs2_(double x) { return x * x; }
inline double abs2_(cplx z) { return std::norm(z); }

/// Dense n x n working copy for the rotation loop.
template <typename T>
struct JacobiWork {
    std::size_t n;
    std::vector<T> a;
    std::vector<T> v;  // empty when vectors are not requested

    T &at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    T &vec(std::size_t i, std::size_t j) { return v[i * n + j]; }
};

template <typename T>
double off_diagonal_mass(JacobiWork<T> &w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.n; ++i) {
        for (std::size_t j = 0; j < w.n; ++j) {
            if (i != j) {
                s += abs2_(w.at(i, j));
            }
        }
    }
    return std::sqrt(s);
}

// One similarity transform A <- U* A U zeroing a_pq, with U = D R where
// D = diag(1, conj(phase)) makes the (p,q) entry real and R is the classical
// real Jacobi rotation.
template <typename T>
void rotate(JacobiWork<T> &w, std::size_t p, std::size_t q) {
    const T g = w.at(p, q);
    const double mag = std::sqrt(abs2_(g));
    if (mag == 0.0) {
        return;
    }
    const T e = g / mag;
    const T ec = conj_(e);
    const double app = real_(w.at(p, p));
    const double aqq = real_(w.at(q, q));
    const double theta = (aqq - app) / (2.0 * mag);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const std::size_t n = w.n;

    // columns: A <- A U
    for (std::size_t k = 0; k < n; ++k) {
        const T akp = w.at(k, p);
        const T akq = w.at(k, q);
        w.at(k, p) = c * akp - s * ec * akq;
        w.at(k, q) = s * akp + c * ec * akq;
    }
    // rows: A <- U* A
    for (std::size_t k = 0; k < n; ++k) {
        const T apk = w.at(p, k);
        const T aqk = w.at(q, k);
        w.at(p, k) = c * apk - s * e * aqk;
        w.at(q, k) = s * apk + c * e * aqk;
    }
    w.at(p, q) = T(0.0);
    w.at(q, p) = T(0.0);
    w.at(p, p) = T(real_(w.at(p, p)));
    w.at(q, q) = T(real_(w.at(q, q)));

    if (!w.v.empty()) {
        for (std::size_t k = 0; k < n; ++k) {
            const T vkp = w.vec(k, p);
            const T vkq = w.vec(k, q);
            w.vec(k, p) = c * vkp - s * ec * vkq;
            w.vec(k, q) = s * vkp + c * ec * vkq;
        }
    }
}

template <typename T>
void run_jacobi(JacobiWork<T> &w, const JacobiOptions &options) {
    double scale = 0.0;
    for (const auto &x : w.a) {
        scale += abs2_(x);
    }
    scale = std::sqrt(scale);
    if (scale == 0.0) {
        return;
    }
    const double target = options.relative_tol * scale;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        if (off_diagonal_mass(w) <= target) {
            return;
        }
        for (std::size_t p = 0; p + 1 < w.n; ++p) {
            for (std::size_t q = p + 1; q < w.n; ++q) {
                rotate(w, p, q);
            }
        }
    }
    if (off_diagonal_mass(w) > target) {
        throw Error(ErrorCode::NoConvergence,
                    "Jacobi did not converge in " + std::to_string(options.max_sweeps) + " sweeps");
    }
}

void check_hermitian(const Matrix &a) {
    if (!a.is_square()) {
        throw Error(ErrorCode::NotHermitian,
                    "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!a.all_finite()) {
        throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    }
    const double defect = hermitian_defect(a);
    if (defect > 1e-12 * (1.0 + max_abs_entry(a))) {
        throw Error(ErrorCode::NotHermitian, "||A - A*||_max = " + std::to_string(defect));
    }
}

template <typename T>
T entry_as(const cplx &z);
template <>
double entry_as<double>(const cplx &z) {
    return z.real();
}
template <>
cplx entry_as<cplx>(const cplx &z) {
    return z;
}

// Solves with the Hermitian part (A + A*)/2 so the tolerated defect does not
// leak into the result.
template <typename T>
HermitianEigen solve(const Matrix &a, bool want_vectors, const JacobiOptions &options) {
    const std::size_t n = a.rows();
    JacobiWork<T> w{n, std::vector<T>(n * n), {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            w.at(i, j) = entry_as<T>(0.5 * (a(i, j) + std::conj(a(j, i))));
        }
    }
    if (want_vectors) {
        w.v.assign(n * n, T(0.0));
        for (std::size_t i = 0; i < n; ++i) {
            w.vec(i, i) = T(1.0);
        }
    }
    run_jacobi(w, options);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&w](std::size_t x, std::size_t y) {
        return real_(w.at(x, x)) < real_(w.at(y, y));
    });
    HermitianEigen out;
    out.eigenvalues.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = real_(w.at(order[k], order[k]));
    }
    if (want_vectors) {
        out.eigenvectors = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                out.eigenvectors(i, k) = cplx(w.vec(i, order[k]));
            }
        }
    }
    return out;
}

HermitianEigen dispatch(const Matrix &a, bool want_vectors, const JacobiOptions &options) {
    check_hermitian(a);
    if (a.rows() == 0) {
        return HermitianEigen{{}, Matrix()};
    }
    if (a.is_real()) {
        return solve<double>(a, want_vectors, options);
    }
    return solve<cplx>(a, want_vectors, options);
}

// A A* when rows <= cols, else A* A.
Matrix small_gram(const Matrix &a) {
    const bool left = a.rows() <= a.cols();
    const std::size_t n = left ? a.rows() : a.cols();
    const std::size_t inner = left ? a.cols() : a.rows();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < inner; ++k) {
                s += left ? a(i, k) * std::conj(a(j, k)) : std::conj(a(k, i)) * a(k, j);
            }
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
        g(i, i) = g(i, i).real();
    }
    return g;
}

}  // namespace

HermitianEigen eigh(const Matrix &a, const JacobiOptions &options) { return dispatch(a, true, options); }

std::vector<double> eigvalsh(const Matrix &a, const JacobiOptions &options) {
    return dispatch(a, false, options).eigenvalues;
}

Matrix hermitian_dilation(const Matrix &a) {
    return block2x2(Matrix(a.rows(), a.rows()), a, a.adjoint(), Matrix(a.cols(), a.cols()));
}

std::vector<double> singular_values(const Matrix &a) {
    if (a.empty()) {
        return {};
    }
    auto ev = eigvalsh(small_gram(a));
    std::vector<double> sv(ev.size());
    for (std::size_t k = 0; k < ev.size(); ++k) {
        sv[k] = std::sqrt(std::max(ev[ev.size() - 1 - k], 0.0));
    }
    return sv;
}

double spectral_norm(const Matrix &a) {
    if (a.empty()) {
        return 0.0;
    }
    if (a.rows() == 1 || a.cols() == 1) {
        return frobenius_norm(a);
    }
    return singular_values(a).front();
}

double trace_norm(const Matrix &a) {
    auto sv = singular_values(a);
    return std::accumulate(sv.begin(), sv.end(), 0.0);
}

MatrixNorms norms(const Matrix &a) {
    MatrixNorms out;
    out.frobenius = frobenius_norm(a);
    out.trace_norm = trace_norm(a);
    out.max_norm = max_abs_entry(a);
    double row1 = 0.0, row2 = 0.0, col1 = 0.0, col2 = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s1 += std::abs(a(i, j));
            s2 += std::norm(a(i, j));
        }
        row1 = std::max(row1, s1);
        row2 = std::max(row2, std::sqrt(s2));
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            s1 += std::abs(a(i, j));
            s2 += std::norm(a(i, j));
        }
        col1 = std::max(col1, s1);
        col2 = std::max(col2, std::sqrt(s2));
    }
    out.rc1 = std::max(row1, col1);
    out.rc2 = std::max(row2, col2);
    return out;
}

namespace {

HermitianEigen checked_psd_eigen(const Matrix &a) {
    auto eig = eigh(a);
    if (eig.dimension() == 0) {
        return eig;
    }
    const double top = std::max(eig.max(), 0.0);
    if (eig.min() < -1e-8 * top || (top == 0.0 && eig.min() < 0.0)) {
        throw Error(ErrorCode::NotPSD, "lambda_min = " + std::to_string(eig.min()) +
                                           ", lambda_max = " + std::to_string(eig.max()));
    }
    return eig;
}

}  // namespace

Matrix pseudo_inv_sqrt(const Matrix &a, double rank_tol) {
    auto eig = checked_psd_eigen(a);
    if (eig.dimension() == 0) {
        return Matrix();
    }
    const double cut = rank_tol * eig.max();
    return eig.apply([cut](double lam) { return lam > cut ? 1.0 / std::sqrt(lam) : 0.0; });
}

Matrix pseudo_inverse_psd(const Matrix &a, double rank_tol) {
    auto eig = checked_psd_eigen(a);
    if (eig.dimension() == 0) {
        return Matrix();
    }
    const double cut = rank_tol * eig.max();
    return eig.apply([cut](double lam) { return lam > cut ? 1.0 / lam : 0.0; });
}

Matrix expm_hermitian(const Matrix &h, cplx scale) {
    auto eig = eigh(h);
    return eig.apply([scale](double lam) { return std::exp(scale * lam); });
}

bool psd_order_holds(const Matrix &a, const Matrix &b, double tol) {
    auto ev = eigvalsh(b - a);
    return ev.empty() || ev.front() >= -tol;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

double norm2(std::span<const cplx> x) {
    double s = 0.0;
    for (const auto &v : x) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

}  // namespace mclab
