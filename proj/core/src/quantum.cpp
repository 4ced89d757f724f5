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

#include "mclab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "mclab/error.hpp"
#include "mclab/linalg.hpp"

namespace mclab {

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
    if (!rho_.is_square() || rho_.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "density matrix must be square and nonempty");
    }
    if (hermitian_defect(rho_) > 1e-12) {
        throw Error(ErrorCode::NotHermitian, "density matrix is not Hermitian");
    }
    const cplx tr = rho_.trace();
    if (std::abs(tr - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidArgument, "density matrix trace is not one");
    }
    if (eigvalsh(rho_).front() < -1e-10) {
        throw Error(ErrorCode::NotPSD, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> x) {
    const double nrm = norm2(x);
    if (!(nrm > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "pure state needs a nonzero vector");
    }
    Matrix p = Matrix::outer(x, x) / cplx(nrm * nrm);
    // Exact Hermitian symmetry regardless of rounding in the division.
    return DensityMatrix(0.5 * (p + p.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
    if (d == 0) {
        throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    }
    return DensityMatrix(Matrix::identity(d) / cplx(static_cast<double>(d)));
}

std::size_t DensityMatrix::rank(double tol) const {
    const auto ev = eigvalsh(rho_);
    return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [tol](double l) { return l > tol; }));
}

std::vector<cplx> random_unit_vector(std::size_t d, RandomStream &rng) {
    std::vector<cplx> x(d);
    double nrm = 0.0;
    while (!(nrm > 0.0)) {
        for (auto &v : x) {
            v = cplx(rng.normal(), rng.normal());
        }
        nrm = norm2(x);
    }
    for (auto &v : x) {
        v /= nrm;
    }
    return x;
}

Matrix MeasurementDesign::effect(std::size_t j) const {
    const auto &u = vectors.at(j);
    return Matrix::outer(u, u) * cplx(static_cast<double>(d) / static_cast<double>(m()));
}

MeasurementDesign builtin_design(std::string_view name) {
    if (name != "mub2") {
        throw Error(ErrorCode::UnknownDesign, "unknown design '" + std::string(name) + "'");
    }
    const double s = 1.0 / std::numbers::sqrt2;
    const cplx i(0.0, 1.0);
    MeasurementDesign out;
    out.d = 2;
    out.vectors = {{1.0, 0.0}, {0.0, 1.0}, {s, s}, {s, -s}, {s, s * i}, {s, -s * i}};
    return out;
}

namespace {

bool shapes_ok(const MeasurementDesign &design) {
    if (design.d == 0 || design.vectors.empty()) {
        return false;
    }
    return std::all_of(design.vectors.begin(), design.vectors.end(),
                       [&design](const auto &u) { return u.size() == design.d; });
}

// Visits the d^2 Hermitian basis matrices E_kk, E_kl + E_lk, i(E_kl - E_lk).
void for_each_hermitian_basis(std::size_t d, const std::function<void(const Matrix &)> &fn) {
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = k; l < d; ++l) {
            Matrix a(d, d);
            if (k == l) {
                a(k, k) = 1.0;
                fn(a);
                continue;
            }
            a(k, l) = 1.0;
            a(l, k) = 1.0;
            fn(a);
            a(k, l) = cplx(0.0, 1.0);
            a(l, k) = cplx(0.0, -1.0);
            fn(a);
        }
    }
}

}  // namespace

bool validate_design(const MeasurementDesign &design, double tol) {
    if (!shapes_ok(design)) {
        return false;
    }
    const std::size_t d = design.d;
    const double m = static_cast<double>(design.m());
    std::vector<Matrix> projectors;
    projectors.reserve(design.m());
    for (const auto &u : design.vectors) {
        projectors.push_back(Matrix::outer(u, u));
    }
    const double norm = 1.0 / (static_cast<double>(d) * static_cast<double>(d + 1));
    bool ok = true;
    for_each_hermitian_basis(d, [&](const Matrix &a) {
        if (!ok) {
            return;
        }
        Matrix lhs(d, d);
        for (const auto &p : projectors) {
            cplx tr = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    tr += p(i, j) * a(j, i);
                }
            }
            lhs += p * (tr / m);
        }
        Matrix rhs = (a + Matrix::identity(d) * a.trace()) * cplx(norm);
        ok = max_abs_diff(lhs, rhs) <= tol;
    });
    return ok;
}

double partition_residual(const MeasurementDesign &design) {
    if (!shapes_ok(design)) {
        throw Error(ErrorCode::DimensionMismatch, "design vectors must have length d");
    }
    Matrix sum(design.d, design.d);
    for (std::size_t j = 0; j < design.m(); ++j) {
        sum += design.effect(j);
    }
    return max_abs_diff(sum, Matrix::identity(design.d));
}

MeasurementDesign read_design(std::istream &in) {
    MeasurementDesign out;
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    {
        std::istringstream header(line);
        if (!(header >> out.d) || out.d == 0) {
            throw Error(ErrorCode::ParseError, "design file must start with a positive dimension");
        }
    }
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream row(line);
        std::vector<cplx> u(out.d);
        for (auto &z : u) {
            double re = 0.0, im = 0.0;
            if (!(row >> re >> im)) {
                throw Error(ErrorCode::ParseError, "design row must hold " + std::to_string(2 * out.d) + " reals");
            }
            z = cplx(re, im);
        }
        out.vectors.push_back(std::move(u));
    }
    return out;
}

void write_design(std::ostream &out, const MeasurementDesign &design) {
    out << design.d << '\n';
    char buf[64];
    for (const auto &u : design.vectors) {
        for (std::size_t k = 0; k < u.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", u[k].real(), u[k].imag());
            out << (k ? " " : "") << buf;
        }
        out << '\n';
    }
}

MeasurementDesign load_design(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    MeasurementDesign design = read_design(in);
    if (!validate_design(design, 1e-9)) {
        throw Error(ErrorCode::InvalidArgument, path.string() + " is not a 2-design at tolerance 1e-9");
    }
    return design;
}

std::vector<double> born_probabilities(const MeasurementDesign &design, const DensityMatrix &rho) {
    if (rho.dim() != design.d || !shapes_ok(design)) {
        throw Error(ErrorCode::DimensionMismatch, "state and design dimensions differ");
    }
    const double scale = static_cast<double>(design.d) / static_cast<double>(design.m());
    std::vector<double> p(design.m());
    double total = 0.0;
    for (std::size_t j = 0; j < design.m(); ++j) {
        const auto &u = design.vectors[j];
        const auto ru = rho.matrix() * std::span<const cplx>(u);
        cplx q = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            q += std::conj(u[i]) * ru[i];
        }
        p[j] = scale * q.real();
        if (p[j] < -1e-9) {
            throw Error(ErrorCode::BadDistribution, "negative outcome probability");
        }
        p[j] = std::max(p[j], 0.0);
        total += p[j];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::BadDistribution, "outcome probabilities sum to " + std::to_string(total));
    }
    for (auto &x : p) {
        x /= total;
    }
    return p;
}

std::size_t born_sample(const MeasurementDesign &design, const DensityMatrix &rho, RandomStream &rng) {
    auto p = born_probabilities(design, rho);
    for (std::size_t j = 1; j < p.size(); ++j) {
        p[j] += p[j - 1];
    }
    return rng.discrete(p);
}

Matrix single_measurement_estimator(const MeasurementDesign &design, std::size_t j) {
    const auto &u = design.vectors.at(j);
    return Matrix::outer(u, u) * cplx(static_cast<double>(design.d + 1)) - Matrix::identity(design.d);
}

std::vector<double> simplex_projection(std::span<const double> x) {
    if (x.empty()) {
        throw Error(ErrorCode::EmptyInput, "cannot project an empty vector");
    }
    std::vector<double> sorted(x.begin(), x.end());
    // Stable descending sort keeps ties in index order.
    std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - t > 0.0) {
            theta = t;
        }
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::max(x[i] - theta, 0.0);
    }
    return out;
}

DensityMatrix project_to_density(const Matrix &s) {
    const auto eig = eigh(0.5 * (s + s.adjoint()));
    const auto lambda = simplex_projection(eig.eigenvalues);
    const std::size_t d = lambda.size();
    Matrix rho(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        if (lambda[k] == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                rho(i, j) += lambda[k] * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
            }
        }
    }
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

TomographyEstimate tomography_estimate(const MeasurementDesign &design, const DensityMatrix &rho, std::size_t n,
                                       RandomStream &rng) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "tomography needs n >= 1");
    }
    auto p = born_probabilities(design, rho);
    for (std::size_t j = 1; j < p.size(); ++j) {
        p[j] += p[j - 1];
    }
    std::vector<std::size_t> counts(design.m(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        ++counts[rng.discrete(p)];
    }
    Matrix s(design.d, design.d);
    for (std::size_t j = 0; j < design.m(); ++j) {
        if (counts[j] > 0) {
            s += single_measurement_estimator(design, j) * cplx(static_cast<double>(counts[j]));
        }
    }
    s /= cplx(static_cast<double>(n));
    return {s, project_to_density(s)};
}

std::size_t tomography_sample_count(std::size_t d, double eps, double delta) {
    if (d == 0 || !(eps > 0.0) || !(delta > 0.0 && delta < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "need d >= 1, eps > 0, delta in (0,1)");
    }
    const double dd = static_cast<double>(d);
    return static_cast<std::size_t>(std::ceil(5.0 / (eps * eps) * dd * std::log(2.0 * dd / delta)));
}

HamiltonianSum::HamiltonianSum(std::vector<Matrix> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw Error(ErrorCode::EmptyInput, "Hamiltonian needs at least one term");
    }
    dim_ = terms_.front().rows();
    for (const auto &h : terms_) {
        if (!h.is_square() || h.rows() != dim_ || dim_ == 0) {
            throw Error(ErrorCode::DimensionMismatch, "Hamiltonian terms must share a square dimension");
        }
        if (hermitian_defect(h) > 1e-12) {
            throw Error(ErrorCode::NotHermitian, "Hamiltonian term is not Hermitian");
        }
        norms_.push_back(spectral_norm(h));
        L_ += norms_.back();
    }
}

Matrix HamiltonianSum::total() const {
    Matrix h(dim_, dim_);
    for (const auto &t : terms_) {
        h += t;
    }
    return h;
}

Matrix HamiltonianSum::target_unitary() const { return expm_hermitian(total(), cplx(0.0, -1.0)); }

Matrix pauli_x() { return Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
Matrix pauli_y() { return Matrix::from_rows({{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}); }
Matrix pauli_z() { return Matrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }

namespace {

void check_trotter_args(const HamiltonianSum &h, std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "product length n must be >= 1");
    }
    if (!(h.interaction_strength() > 0.0)) {
        throw Error(ErrorCode::ZeroInteraction, "interaction strength L is zero");
    }
}

std::vector<double> term_cdf(const HamiltonianSum &h) {
    std::vector<double> cdf(h.norms());
    for (std::size_t j = 1; j < cdf.size(); ++j) {
        cdf[j] += cdf[j - 1];
    }
    return cdf;
}

// exp(-i (L / ||H_j||) H_j / n); terms of zero norm are never drawn.
Matrix factor_unitary(const HamiltonianSum &h, std::size_t j, std::size_t n) {
    const double nj = h.norms()[j];
    if (nj == 0.0) {
        return Matrix::identity(h.dim());
    }
    const double scale = h.interaction_strength() / (nj * static_cast<double>(n));
    return expm_hermitian(h.terms()[j], cplx(0.0, -scale));
}

}  // namespace

TrotterFactor trotter_factor(const HamiltonianSum &h, std::size_t n, RandomStream &rng) {
    check_trotter_args(h, n);
    const auto cdf = term_cdf(h);
    const std::size_t j = rng.discrete(cdf);
    return {j, factor_unitary(h, j, n)};
}

Matrix random_product(const HamiltonianSum &h, std::size_t n, RandomStream &rng) {
    check_trotter_args(h, n);
    const auto cdf = term_cdf(h);
    std::vector<Matrix> factors;
    for (std::size_t j = 0; j < h.terms().size(); ++j) {
        factors.push_back(factor_unitary(h, j, n));
    }
    Matrix q = Matrix::identity(h.dim());
    for (std::size_t k = 0; k < n; ++k) {
        q = factors[rng.discrete(cdf)] * q;
    }
    return q;
}

Matrix trotter_mean_factor(const HamiltonianSum &h, std::size_t n) {
    check_trotter_args(h, n);
    Matrix ey(h.dim(), h.dim());
    for (std::size_t j = 0; j < h.terms().size(); ++j) {
        if (h.norms()[j] > 0.0) {
            ey += factor_unitary(h, j, n) * cplx(h.norms()[j] / h.interaction_strength());
        }
    }
    return ey;
}

TrotterBias trotter_bias(const HamiltonianSum &h, std::size_t n) {
    const Matrix ey = trotter_mean_factor(h, n);
    Matrix power = Matrix::identity(h.dim());
    Matrix base = ey;
    for (std::size_t e = n; e > 0; e >>= 1) {
        if (e & 1U) {
            power = power * base;
        }
        if (e > 1) {
            base = base * base;
        }
    }
    const Matrix step = expm_hermitian(h.total(), cplx(0.0, -1.0 / static_cast<double>(n)));
    return {spectral_norm(power - h.target_unitary()), spectral_norm(ey - step)};
}

std::size_t trotter_sample_count(double L, double eps, double delta, std::size_t d) {
    if (!(L > 0.0) || !(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || d == 0) {
        throw Error(ErrorCode::InvalidArgument, "need L > 0, eps > 0, delta in (0,1), d >= 1");
    }
    if (eps > L) {
        throw Error(ErrorCode::HypothesisViolated, "sample count requires eps <= L");
    }
    const double dd = static_cast<double>(d);
    return static_cast<std::size_t>(std::ceil(40.0 / (eps * eps) * L * L * std::log(2.0 * dd / delta)));
}

double channel_error(const Matrix &q, const Matrix &u) {
    if (!q.is_square() || q.rows() != u.rows() || u.rows() != u.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "unitaries must be square of equal size");
    }
    const Matrix id = Matrix::identity(q.rows());
    if (max_abs_diff(q.adjoint() * q, id) > 1e-8 || max_abs_diff(u.adjoint() * u, id) > 1e-8) {
        throw Error(ErrorCode::NotUnitary, "channel_error needs unitary inputs");
    }
    return 2.0 * spectral_norm(q - u);
}

}  // namespace mclab
