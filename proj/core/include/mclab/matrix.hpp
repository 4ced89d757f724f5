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

#ifndef MCLAB_MATRIX_HPP
#define MCLAB_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mclab {

using cplx = std::complex<double>;

/// Dense row-major matrix of complex doubles. Real matrices are ordinary
/// values whose imaginary parts are all zero; `is_real()` detects them.
class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> values);
    static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    /// Outer product x y*.
    static Matrix outer(std::span<const cplx> x, std::span<const cplx> y);
    static Matrix outer(std::span<const double> x, std::span<const double> y);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> entries() noexcept { return data_; }
    std::span<const cplx> entries() const noexcept { return data_; }

    /// True when every imaginary part is exactly zero.
    bool is_real() const noexcept;
    bool all_finite() const noexcept;

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix real_part() const;
    cplx trace() const;

    Matrix &operator+=(const Matrix &other);
    Matrix &operator-=(const Matrix &other);
    Matrix &operator*=(cplx scale);
    Matrix &operator/=(cplx scale);

    bool operator==(const Matrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix &b);
Matrix operator-(Matrix a, const Matrix &b);
Matrix operator-(Matrix a);
Matrix operator*(const Matrix &a, const Matrix &b);
Matrix operator*(cplx s, Matrix a);
Matrix operator*(Matrix a, cplx s);
Matrix operator/(Matrix a, cplx s);

std::vector<cplx> operator*(const Matrix &a, std::span<const cplx> x);

/// max_ij |a_ij - b_ij|; dimensions must agree.
double max_abs_diff(const Matrix &a, const Matrix &b);
/// max_ij |a_ij - conj(a_ji)|.
double hermitian_defect(const Matrix &a);
double max_abs_entry(const Matrix &a);
double frobenius_norm(const Matrix &a);

/// Block matrix [[a, b], [c, d]].
Matrix block2x2(const Matrix &a, const Matrix &b, const Matrix &c, const Matrix &d);

}  // namespace mclab

#endif  // MCLAB_MATRIX_HPP
