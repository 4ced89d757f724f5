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

#ifndef MCLAB_GRAPHS_HPP
#define MCLAB_GRAPHS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "mclab/linalg.hpp"
#include "mclab/matrix.hpp"
#include "mclab/rng.hpp"

namespace mclab {

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double w = 0.0;
};

/// Undirected weighted simple graph on vertices 0..n-1. Edges are stored with
/// i < j, positive finite weight and no repeated pair. Connectivity is not
/// part of the invariant (sparsified graphs may lose it); laplacian() and
/// load_graph() enforce it.
class WeightedGraph {
   public:
    WeightedGraph() = default;
    WeightedGraph(std::size_t n, std::vector<Edge> edges);

    static WeightedGraph complete(std::size_t n, double weight = 1.0);
    static WeightedGraph path(std::size_t n, double weight = 1.0);
    /// G(n, p) with unit weights, redrawn from fresh substreams until
    /// connected.
    static WeightedGraph erdos_renyi(std::size_t n, double p, RandomStream &rng);

    std::size_t n() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge> &edges() const noexcept { return edges_; }
    bool is_connected() const;

   private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

/// Graph file: "n m" header then m lines "i j w" (0-indexed, i < j).
WeightedGraph read_graph(std::istream &in);
void write_graph(std::ostream &out, const WeightedGraph &g);
/// Reads and requires connectivity (throws Disconnected).
WeightedGraph load_graph(const std::filesystem::path &path);

/// sum_{edges} w_ij (e_i - e_j)(e_i - e_j)^T, no connectivity requirement.
Matrix laplacian_matrix(const WeightedGraph &g);

struct Laplacian {
    Matrix matrix;
    WeightedGraph graph;

    std::size_t n() const noexcept { return graph.n(); }
};

/// Throws Disconnected unless the graph is connected.
Laplacian laplacian(const WeightedGraph &g);

/// rho_ij = (e_i - e_j)^T L^+ (e_i - e_j), one entry per graph edge in
/// edge order.
std::vector<double> effective_resistances(const Laplacian &l);

/// ceil(3 eps^-2 n log(2n / delta))
std::size_t sparsifier_sample_count(std::size_t n, double eps, double delta);

/// q iid edge draws with probability w_ij rho_ij / (n - 1); each draw adds
/// weight (n - 1) / (q rho_ij) to its pair. The result may be disconnected.
WeightedGraph sparsify(const WeightedGraph &g, std::span<const double> resistances, std::size_t q,
                       RandomStream &rng);
WeightedGraph sparsify(const Laplacian &l, std::size_t q, RandomStream &rng);

/// Restriction of the L-geometry to range(L): eigenvalues of
/// L^{+/2} M L^{+/2} on range(L) for any symmetric M.
class SpectralWhitener {
   public:
    explicit SpectralWhitener(const Matrix &l, double rank_tol = kDefaultRankTol);

    std::size_t rank() const noexcept { return rank_; }
    /// Ascending eigenvalues of the whitened matrix on range(L).
    std::vector<double> relative_eigenvalues(const Matrix &m) const;

   private:
    std::size_t n_ = 0;
    std::size_t rank_ = 0;
    Matrix basis_;  // n x rank, columns v_k / sqrt(lambda_k)
};

/// (1 - eps) L <= Lhat <= (1 + eps) L on range(L), checked through the
/// whitened spectrum with 1e-9 slack.
bool spectral_equivalence(const Laplacian &l, const Matrix &lhat, double eps);
bool spectral_equivalence(const SpectralWhitener &whitener, const Matrix &lhat, double eps);

/// Neighbour list of a star: (vertex, weight) pairs.
using Star = std::vector<std::pair<std::size_t, double>>;

/// Schur complement of the star's centre: weights w_i w_j / W on every pair.
std::vector<Edge> exact_clique(const Star &star);

/// N iid ordered pairs (i ~ w_i, j ~ w_j, both redrawn while i == j), each emitted
/// as an edge of weight Z / (N W) with Z = sum_{i<j} w_i w_j; the expected
/// emitted Laplacian equals the exact clique. Repeated pairs are listed
/// separately. Throws DegenerateStar for fewer than two neighbours.
std::vector<Edge> clique_sample(const Star &star, std::size_t n_samples, RandomStream &rng);

struct SparseCholeskyResult {
    /// Lower triangular in elimination order: C(a, k) = c_k(order[a]).
    Matrix C;
    /// order[a] is the vertex eliminated at step a.
    std::vector<std::size_t> order;

    /// C C* mapped back to the original vertex numbering.
    Matrix approximation() const;
};

/// Vertex elimination in a uniformly random order. Each step removes the
/// pivot's star and adds either the exact clique or clique_sample with
/// N = oversampling * (current pivot degree). Throws ZeroPivot if a pivot
/// other than the last drops to <= 1e-12 (relative to the largest weighted
/// degree).
SparseCholeskyResult sparse_cholesky(const Laplacian &l, RandomStream &rng, bool exact_mode,
                                     std::size_t oversampling = 1);

struct PcgResult {
    std::vector<double> u;
    std::size_t iterations = 0;
    /// Relative residuals ||L u_k - f|| / ||f||, starting with k = 0.
    std::vector<double> residuals;
    bool converged = false;
    /// Set when some residual rose above its predecessor by more than
    /// ten machine epsilons.
    bool nonmonotone_residual = false;
};

/// Preconditioned conjugate gradient on the consistent system L u = f with
/// 1*f = 0, iterating in the complement of the constant vector. The
/// preconditioner applies (C C*)^+ by two triangular solves; nullptr means
/// identity. When maxit is reached the best iterate is returned with
/// converged = false.
PcgResult pcg_solve(const Laplacian &l, const SparseCholeskyResult *preconditioner, std::span<const double> f,
                    double tol, std::size_t maxit);

/// Energy seminorm sqrt((u - v)^T L (u - v)).
double energy_distance(const Laplacian &l, std::span<const double> u, std::span<const double> v);

}  // namespace mclab

#endif  // MCLAB_GRAPHS_HPP
