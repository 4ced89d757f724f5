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

#include "mclab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mclab/error.hpp"

namespace mclab {

namespace {

void require_same_shape(const Matrix &a, const Matrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch, "entry count " + std::to_string(data_.size()) +
                                                      " does not match " + std::to_string(rows_) + "x" +
                                                      std::to_string(cols_));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<cplx> data;
    data.reserve(r * c);
    for (const auto &row : rows) {
        if (row.size() != c) {
            throw Error(ErrorCode::DimensionMismatch, "ragged row list");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::outer(std::span<const cplx> x, std::span<const cplx> y) {
    Matrix m(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            m(i, j) = x[i] * std::conj(y[j]);
        }
    }
    return m;
}

Matrix Matrix::outer(std::span<const double> x, std::span<const double> y) {
    Matrix m(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            m(i, j) = x[i] * y[j];
        }
    }
    return m;
}

bool Matrix::is_real() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const cplx &z) { return z.imag() == 0.0; });
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            m(j, i) = std::conj((*this)(i, j));
        }
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            m(j, i) = (*this)(i, j);
        }
    }
    return m;
}

Matrix Matrix::real_part() const {
    Matrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        m.data_[k] = data_[k].real();
    }
    return m;
}

cplx Matrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

Matrix &Matrix::operator+=(const Matrix &other) {
    require_same_shape(*this, other, "matrix addition");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &other) {
    require_same_shape(*this, other, "matrix subtraction");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix &Matrix::operator*=(cplx scale) {
    for (auto &z : data_) {
        z *= scale;
    }
    return *this;
}

Matrix &Matrix::operator/=(cplx scale) {
    for (auto &z : data_) {
        z /= scale;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, cplx s) { return a *= s; }
Matrix operator/(Matrix a, cplx s) { return a /= s; }

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions " + std::to_string(a.cols()) +
                                                      " and " + std::to_string(b.rows()));
    }
    Matrix c(a.rows(), b.cols());
    bool real = a.is_real() && b.is_real();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            if (real) {
                const double r = aik.real();
                for (std::size_t j = 0; j < b.cols(); ++j) {
                    c(i, j).real(c(i, j).real() + r * b(k, j).real());
                }
            } else {
                for (std::size_t j = 0; j < b.cols(); ++j) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
    }
    return c;
}

std::vector<cplx> operator*(const Matrix &a, std::span<const cplx> x) {
    if (a.cols() != x.size()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
    }
    std::vector<cplx> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t k = 0; k < ea.size(); ++k) {
        m = std::max(m, std::abs(ea[k] - eb[k]));
    }
    return m;
}

double hermitian_defect(const Matrix &a) {
    if (!a.is_square()) {
        return std::numeric_limits<double>::infinity();
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return m;
}

double max_abs_entry(const Matrix &a) {
    double m = 0.0;
    for (const auto &z : a.entries()) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double frobenius_norm(const Matrix &a) {
    double s = 0.0;
    for (const auto &z : a.entries()) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

Matrix block2x2(const Matrix &a, const Matrix &b, const Matrix &c, const Matrix &d) {
    if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "block2x2: incompatible blocks");
    }
    Matrix m(a.rows() + c.rows(), a.cols() + b.cols());
    auto place = [&m](const Matrix &blk, std::size_t r0, std::size_t c0) {
        for (std::size_t i = 0; i < blk.rows(); ++i) {
            for (std::size_t j = 0; j < blk.cols(); ++j) {
                m(r0 + i, c0 + j) = blk(i, j);
            }
        }
    };
    place(a, 0, 0);
    place(b, 0, a.cols());
    place(c, a.rows(), 0);
    place(d, a.rows(), a.cols());
    return m;
}

}  // namespace mclab
