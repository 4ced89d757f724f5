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

#ifndef MCLAB_CONCENTRATION_HPP
#define MCLAB_CONCENTRATION_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mclab/matrix.hpp"

namespace mclab {

/// Summary statistics that drive the Bernstein-family bounds for a sum of
/// independent (or martingale) d1 x d2 random matrices.
struct ConcentrationStats {
    double v = 0.0;   ///< matrix variance ||E SS*|| vee ||E S*S||
    double B = 0.0;   ///< almost-sure bound on each summand's spectral norm
    double B2 = 0.0;  ///< tail content (E max_k ||X_k||^2)^{1/2}
    std::size_t d1 = 1;
    std::size_t d2 = 1;

    /// Throws InvalidArgument unless all fields are finite, v, B, B2 >= 0,
    /// d1, d2 >= 1, and B2 <= B + 1e-9.
    void validate() const;
};

/// ||sum left_k|| vee ||sum right_k|| where left_k = E[X_k X_k*] (d1 x d1) and
/// right_k = E[X_k* X_k] (d2 x d2).
double matrix_variance(std::span<const Matrix> second_moments_left, std::span<const Matrix> second_moments_right);

/// sqrt(2 v log(d1 + d2)) + B log(d1 + d2) / 3
double bernstein_expectation_bound(const ConcentrationStats &s);

/// (d1 + d2) exp(-(t^2 / 2) / (v + B t / 3)); 0 when v = B = 0 and t > 0.
double bernstein_tail_bound(const ConcentrationStats &s, double t);

/// sqrt(2 v t) + B t / 3: deviation level reached with probability at most
/// (d1 + d2) e^{-t} on the event V_k <= v.
double freedman_threshold(double v, double B, double t);

/// Same arithmetic as bernstein_tail_bound, read against the uniform-in-time
/// event {exists k: ||S_k - S_0|| >= t and V_k <= v}.
double freedman_tail_bound(double v, double B, std::size_t d1, std::size_t d2, double t);

struct KhinchinBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Two-sided bracket for E||Z - EZ|| of a Gaussian matrix with variance v.
KhinchinBounds khinchin_bounds(double v, std::size_t d1, std::size_t d2);

/// Both sides of the two-sided expected-norm estimate with the unspecified
/// constants set to one. Diagnostic output only; never asserted.
struct RosenthalDiagnostic {
    double lower = 0.0;  ///< sqrt(v) + B2
    double upper = 0.0;  ///< sqrt(v log(d1+d2)) + B2 log(d1+d2)
};
RosenthalDiagnostic rosenthal_diagnostic(const ConcentrationStats &s);

/// Monte Carlo tail content: sqrt(mean of squares) of per-trial max_k ||X_k||.
double tail_content(std::span<const double> sample_max_norms);

/// Martingale difference sequence with its running conditional quadratic
/// variation V_k (qv[k] covers steps 1..k+1).
struct MartingaleTrace {
    std::vector<Matrix> increments;
    std::vector<double> qv;
    double B = 0.0;

    std::size_t size() const noexcept { return increments.size(); }
    /// S_k - S_0 for k = size().
    Matrix total() const;
};

/// Builds a trace. `qv_fn(k)` returns V_{k+1} for zero-based step k: a closed
/// form or an almost-sure upper bound supplied by the model. Throws
/// NonMonotoneQV if the returned values decrease and BoundViolated if some
/// ||X_k|| exceeds B + 1e-9.
MartingaleTrace record_trace(std::vector<Matrix> increments, const std::function<double(std::size_t)> &qv_fn,
                             double B);

struct WilsonInterval {
    double lower = 0.0;
    double upper = 1.0;
};

/// Wilson score interval for a binomial proportion (z = 1.96 gives 95%).
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

struct TailEstimate {
    double fraction = 0.0;
    std::size_t exceed = 0;
    std::size_t trials = 0;
    WilsonInterval wilson;
};

/// Fraction of trials with value >= t.
TailEstimate empirical_tail(std::span<const double> trials, double t);

/// Binomial standard deviation sqrt(p (1 - p) / n), p clipped to [0, 1].
double binomial_sigma(double p, std::size_t n);

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation (n - 1)
    double sem = 0.0;     ///< stddev / sqrt(n)
    double min = 0.0;
    double max = 0.0;
};

/// Summation runs in index order so the result is reproducible.
SampleSummary summarize(std::span<const double> values);

/// Second-order statistics of a random matrix S, captured through its
/// variance function A -> Var[<S, A>_R] with <B, A>_R = Re Tr(B* A).
class VarianceFunction {
   public:
    using Evaluator = std::function<double(const Matrix &)>;

    VarianceFunction(Evaluator evaluator, double weak_variance, std::optional<double> interaction_energy,
                     std::size_t d1, std::size_t d2)
        : evaluator_(std::move(evaluator)),
          weak_variance_(weak_variance),
          interaction_energy_(interaction_energy),
          d1_(d1),
          d2_(d2) {}

    /// S = sum_k g_k A_k with independent, centered, unit-variance scalar
    /// coefficients g_k (Gaussian or Rademacher series). The weak variance is
    /// estimated by alternating maximization over rank-one directions, and the
    /// interaction energy is computed exactly from the Gram matrix of the
    /// coefficients (at most 256 of them).
    static VarianceFunction from_series(std::vector<Matrix> coefficients);

    /// Real d x d Ginibre matrix (iid standard normal entries): evaluator
    /// ||Re A||_F^2, weak variance 1, interaction energy 2.
    static VarianceFunction ginibre(std::size_t d);

    double operator()(const Matrix &direction) const { return evaluator_(direction); }
    double weak_variance() const noexcept { return weak_variance_; }
    std::optional<double> interaction_energy() const noexcept { return interaction_energy_; }
    std::size_t d1() const noexcept { return d1_; }
    std::size_t d2() const noexcept { return d2_; }

   private:
    Evaluator evaluator_;
    double weak_variance_;
    std::optional<double> interaction_energy_;
    std::size_t d1_;
    std::size_t d2_;
};

}  // namespace mclab

#endif  // MCLAB_CONCENTRATION_HPP
