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

#ifndef MCLAB_QUANTUM_HPP
#define MCLAB_QUANTUM_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "mclab/matrix.hpp"
#include "mclab/rng.hpp"

namespace mclab {

/// Hermitian PSD matrix with unit trace. Construction checks the Hermitian
/// defect (1e-12), lambda_min >= -1e-10 and |Tr - 1| <= 1e-10.
class DensityMatrix {
   public:
    explicit DensityMatrix(Matrix rho);

    /// x x* / ||x||^2
    static DensityMatrix pure(std::span<const cplx> x);
    static DensityMatrix maximally_mixed(std::size_t d);

    const Matrix &matrix() const noexcept { return rho_; }
    std::size_t dim() const noexcept { return rho_.rows(); }
    /// Number of eigenvalues above tol.
    std::size_t rank(double tol = 1e-10) const;

   private:
    Matrix rho_;
};

/// Haar-random unit vector in C^d.
std::vector<cplx> random_unit_vector(std::size_t d, RandomStream &rng);

/// Unit vectors u_1..u_m in C^d; outcome j has effect H_j = (d/m) u_j u_j*.
struct MeasurementDesign {
    std::size_t d = 0;
    std::vector<std::vector<cplx>> vectors;

    std::size_t m() const noexcept { return vectors.size(); }
    Matrix effect(std::size_t j) const;
};

/// Only "mub2" ships: the three mutually unbiased bases of C^2.
MeasurementDesign builtin_design(std::string_view name);

/// (1/m) sum_j Tr[u_j u_j* A] u_j u_j* == (A + Tr[A] I) / (d (d+1)) on the
/// d^2 Hermitian basis matrices, entrywise within tol.
bool validate_design(const MeasurementDesign &design, double tol);

/// Largest deviation of sum_j (d/m) u_j u_j* from I.
double partition_residual(const MeasurementDesign &design);

/// Design file: a line with d, then one row per vector holding 2d reals
/// (re, im interleaved). Loading requires validate_design at 1e-9.
MeasurementDesign read_design(std::istream &in);
void write_design(std::ostream &out, const MeasurementDesign &design);
MeasurementDesign load_design(const std::filesystem::path &path);

/// Tr[H_j rho] for every outcome. Throws BadDistribution unless the sum is
/// within 1e-9 of one; the result is renormalized.
std::vector<double> born_probabilities(const MeasurementDesign &design, const DensityMatrix &rho);
std::size_t born_sample(const MeasurementDesign &design, const DensityMatrix &rho, RandomStream &rng);

/// Y = (d+1) u_j u_j* - I
Matrix single_measurement_estimator(const MeasurementDesign &design, std::size_t j);

/// Euclidean projection onto the probability simplex (sort and threshold).
std::vector<double> simplex_projection(std::span<const double> x);

/// Frobenius-nearest density matrix to a Hermitian S.
DensityMatrix project_to_density(const Matrix &s);

struct TomographyEstimate {
    Matrix S_n;
    DensityMatrix rho_hat;
};

TomographyEstimate tomography_estimate(const MeasurementDesign &design, const DensityMatrix &rho, std::size_t n,
                                       RandomStream &rng);

/// ceil(5 eps^-2 d log(2d / delta))
std::size_t tomography_sample_count(std::size_t d, double eps, double delta);

/// H = sum_m H_m with Hermitian terms of a common dimension;
/// L = sum_m ||H_m||.
class HamiltonianSum {
   public:
    explicit HamiltonianSum(std::vector<Matrix> terms);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Matrix> &terms() const noexcept { return terms_; }
    const std::vector<double> &norms() const noexcept { return norms_; }
    double interaction_strength() const noexcept { return L_; }
    Matrix total() const;
    /// U = exp(-i H)
    Matrix target_unitary() const;

   private:
    std::vector<Matrix> terms_;
    std::vector<double> norms_;
    double L_ = 0.0;
    std::size_t dim_ = 0;
};

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

struct TrotterFactor {
    std::size_t index = 0;
    Matrix Y;
};

/// Term j with probability ||H_j|| / L and Y = exp(-i (L / ||H_j||) H_j / n).
/// Throws ZeroInteraction when L = 0.
TrotterFactor trotter_factor(const HamiltonianSum &h, std::size_t n, RandomStream &rng);

/// Q = Y_n ... Y_1 from n iid factors.
Matrix random_product(const HamiltonianSum &h, std::size_t n, RandomStream &rng);

/// E[Y] as the exact finite mixture over terms.
Matrix trotter_mean_factor(const HamiltonianSum &h, std::size_t n);

struct TrotterBias {
    double bias = 0.0;        ///< ||E[Y]^n - U||
    double factor_gap = 0.0;  ///< ||E[Y] - exp(-i H / n)||
};

TrotterBias trotter_bias(const HamiltonianSum &h, std::size_t n);

/// ceil(40 eps^-2 L^2 log(2d / delta)); throws HypothesisViolated when
/// eps > L.
std::size_t trotter_sample_count(double L, double eps, double delta, std::size_t d);

/// 2 ||Q - U||, an upper bound on the diamond-type channel distance. Both
/// inputs must be unitary within 1e-8 (NotUnitary).
double channel_error(const Matrix &q, const Matrix &u);

}  // namespace mclab

#endif  // MCLAB_QUANTUM_HPP
