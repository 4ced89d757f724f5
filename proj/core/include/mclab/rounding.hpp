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

#ifndef MCLAB_ROUNDING_HPP
#define MCLAB_ROUNDING_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mclab/concentration.hpp"
#include "mclab/matrix.hpp"
#include "mclab/rng.hpp"

namespace mclab {

/// Simulated binary floating-point system with p significand bits (leading
/// bit included) and an unbounded exponent range:
///
///   F = {0} u {+-(1 + j 2^{1-p}) 2^e : 0 <= j < 2^{p-1}, e integer}.
///
/// The unit roundoff u = 2^{1-p} is the relative gap, so both the
/// round-to-nearest and the stochastic rule satisfy |a - round(a)| <= u |a|.
/// Values are carried in doubles; for p >= 53 every finite double is in F.
class FloatSystem {
   public:
    explicit FloatSystem(int precision_bits);

    /// Rounding is the identity and u = 0.
    static FloatSystem exact() { return FloatSystem(); }

    int precision_bits() const noexcept { return precision_bits_; }
    bool is_exact() const noexcept { return precision_bits_ == 0; }
    double unit_roundoff() const noexcept { return u_; }

    bool contains(double a) const;

    /// Adjacent elements x < a < y of F around a value a not in F.
    struct Bracket {
        double below = 0.0;
        double above = 0.0;
        /// (a - below) / (above - below)
        double fraction = 0.0;
    };
    /// nullopt when a is already representable.
    std::optional<Bracket> bracket(double a) const;

   private:
    FloatSystem() = default;
    int precision_bits_ = 0;
    double u_ = 0.0;
};

enum class RoundingMode { Nearest, Stochastic };

/// Nearest element of F, ties to the even significand.
double round_nearest(const FloatSystem &sys, double a);

/// Upper neighbour with probability (a - x) / (y - x), lower otherwise.
double round_stochastic(const FloatSystem &sys, double a, RandomStream &rng);

/// E[sr(a)] computed from the two-point law, without sampling.
double stochastic_rounding_mean(const FloatSystem &sys, double a);

/// Entrywise rounding of a real matrix; one independent draw per entry in
/// stochastic mode. Throws InvalidArgument for complex input.
Matrix round_matrix(const FloatSystem &sys, const Matrix &a, RoundingMode mode, RandomStream &rng);

struct RoundingBound {
    /// u [sqrt(2 ||A||_{rc,2}^2 log(d1+d2)) + ||A||_max log(d1+d2) / 3]
    double stochastic = 0.0;
    /// u ||A||_{rc,1}, the worst case for round-to-nearest
    double deterministic = 0.0;
};

RoundingBound stochastic_rounding_bound(const FloatSystem &sys, const Matrix &a);

struct SrCholeskyResult {
    Matrix C;      ///< lower triangular factor
    Matrix error;  ///< C C* - A
    MartingaleTrace trace;  ///< rounding errors Y_k with V_k <= 2 u^2 k ||A||
    /// Final residual R_d; zero when no step was skipped.
    Matrix residual;
    /// Runtime checks of the modelling assumptions (residual PSD,
    /// ||R_k|| <= 2||A||, diagonal nonincreasing, ||Y_k||_max <= u). A
    /// flagged run is still returned.
    bool flagged = false;
    std::vector<std::string> flags;
};

/// Cholesky factorization R_k = sr(R_{k-1} - c_k c_k*) with exact column
/// extraction c_k = R_{k-1}(:, k) / sqrt(R_{k-1}(k, k)). Symmetric entry pairs
/// share one random draw.
///
/// Requires A real symmetric positive definite with unit diagonal (to 1e-12)
/// and entries in F. Throws BreakdownNonpositivePivot when a pivot is <= 0.
SrCholeskyResult sr_cholesky(const FloatSystem &sys, const Matrix &a, RandomStream &rng);

struct SrCholeskyBound {
    double threshold = 0.0;   ///< u (2 sqrt(d ||A|| t) + t / 3)
    double prob_bound = 0.0;  ///< 2 d e^{-t}
};

SrCholeskyBound sr_cholesky_bound(std::size_t d, double norm_a, double u, double t);

/// Deterministic well-conditioned d x d correlation matrix whose entries are
/// representable in `sys`: a normalized Wishart draw with 4d degrees of
/// freedom, off-diagonals rounded to nearest.
Matrix correlation_fixture(std::size_t d, const FloatSystem &sys, std::uint64_t seed);

}  // namespace mclab

#endif  // MCLAB_ROUNDING_HPP
