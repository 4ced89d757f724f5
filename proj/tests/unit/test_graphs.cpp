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
#include <numeric>
#include <sstream>
#include <vector>

#include "mclab/error.hpp"
#include "mclab/graphs.hpp"
#include "mclab/linalg.hpp"

#ifndef MCLAB_TEST_DATA
#define MCLAB_TEST_DATA "tests/data"
#endif

namespace mclab {
namespace {

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

double resistance_sum(const Laplacian &l) {
    const auto rho = effective_resistances(l);
    double s = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        s += l.graph.edges()[k].w * rho[k];
    }
    return s;
}

TEST(Graph, Validation) {
    EXPECT_EQ(code_of([] { WeightedGraph(3, {{0, 3, 1.0}}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { WeightedGraph(3, {{1, 0, 1.0}}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { WeightedGraph(3, {{0, 1, 0.0}}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { WeightedGraph(3, {{0, 1, 1.0}, {0, 1, 2.0}}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(WeightedGraph::complete(6).edge_count(), 15U);
    EXPECT_TRUE(WeightedGraph::path(4).is_connected());
    EXPECT_FALSE(WeightedGraph(4, {{0, 1, 1.0}, {2, 3, 1.0}}).is_connected());
}

TEST(Graph, ErdosRenyiIsConnectedAndSeeded) {
    RandomStream a(11, 0), b(11, 0);
    const auto g = WeightedGraph::erdos_renyi(50, 0.2, a);
    const auto h = WeightedGraph::erdos_renyi(50, 0.2, b);
    EXPECT_TRUE(g.is_connected());
    ASSERT_EQ(g.edge_count(), h.edge_count());
    EXPECT_GT(g.edge_count(), 150U);
    EXPECT_LT(g.edge_count(), 350U);
}

TEST(GraphIo, ReadWriteAndLoad) {
    const auto g = load_graph(MCLAB_TEST_DATA "/square.graph");
    EXPECT_EQ(g.n(), 4U);
    EXPECT_EQ(g.edge_count(), 4U);
    std::stringstream ss;
    write_graph(ss, g);
    const auto h = read_graph(ss);
    ASSERT_EQ(h.edge_count(), 4U);
    EXPECT_EQ(h.edges()[2].w, 0.5);
    EXPECT_EQ(code_of([] { (void)load_graph(MCLAB_TEST_DATA "/split.graph"); }), ErrorCode::Disconnected);
    EXPECT_EQ(code_of([] { (void)load_graph(MCLAB_TEST_DATA "/missing.graph"); }), ErrorCode::IoError);
    std::istringstream bad("3 2\n0 1 1\n");
    EXPECT_EQ(code_of([&] { (void)read_graph(bad); }), ErrorCode::ParseError);
}

TEST(Laplacian, StructureAndConnectivity) {
    const auto l = laplacian(WeightedGraph::path(3, 2.0));
    EXPECT_EQ(l.matrix, Matrix::from_rows({{2, -2, 0}, {-2, 4, -2}, {0, -2, 2}}));
    EXPECT_EQ(code_of([] { (void)laplacian(WeightedGraph(3, {{0, 1, 1.0}})); }), ErrorCode::Disconnected);
}

TEST(Resistance, ClosedForms) {
    const auto k = laplacian(WeightedGraph::complete(8));
    for (double r : effective_resistances(k)) {
        EXPECT_NEAR(r, 2.0 / 8.0, 1e-12);
    }
    const auto p = laplacian(WeightedGraph::path(5, 4.0));
    for (double r : effective_resistances(p)) {
        EXPECT_NEAR(r, 0.25, 1e-12);
    }
    // Unit 4-cycle: each edge is 1 in parallel with 3.
    const auto c = laplacian(WeightedGraph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}}));
    for (double r : effective_resistances(c)) {
        EXPECT_NEAR(r, 0.75, 1e-12);
    }
}

TEST(Resistance, FosterIdentity) {
    RandomStream rng(2, 0);
    std::vector<WeightedGraph> graphs{WeightedGraph::complete(50), WeightedGraph::erdos_renyi(50, 0.2, rng),
                                      load_graph(MCLAB_TEST_DATA "/square.graph"), WeightedGraph::path(7, 0.3)};
    for (const auto &g : graphs) {
        EXPECT_NEAR(resistance_sum(laplacian(g)), static_cast<double>(g.n() - 1), 1e-8);
    }
}

TEST(Sparsify, SampleCount) {
    EXPECT_EQ(sparsifier_sample_count(50, 0.5, 0.1), 4145U);
    EXPECT_EQ(code_of([] { (void)sparsifier_sample_count(50, 1.5, 0.1); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { (void)sparsifier_sample_count(50, 0.5, 0.0); }), ErrorCode::InvalidArgument);
}

TEST(Sparsify, UnbiasedInExpectation) {
    const auto l = laplacian(WeightedGraph(5, {{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {3, 4, 3}, {0, 4, 1}, {1, 3, 1}}));
    const std::size_t reps = 4000;
    Matrix sum(5, 5);
    RandomStream rng(8, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        RandomStream s = rng.split(r);
        sum += laplacian_matrix(sparsify(l, 12, s));
    }
    sum /= static_cast<double>(reps);
    EXPECT_LT(max_abs_diff(sum, l.matrix), 0.15);
}

TEST(Sparsify, ReturnsScaledSubgraph) {
    const auto l = laplacian(WeightedGraph::complete(10));
    RandomStream rng(5, 0);
    const auto h = sparsify(l, 30, rng);
    double total = 0.0;
    for (const auto &e : h.edges()) {
        total += e.w;
    }
    // Each draw adds (n-1)/(q rho) = 9 / (30 * 0.2).
    EXPECT_NEAR(total, 30.0 * 9.0 / (30.0 * 0.2), 1e-9);
}

TEST(Whitener, RelativeEigenvaluesOfScaledLaplacian) {
    const auto l = laplacian(WeightedGraph::complete(6));
    const SpectralWhitener w(l.matrix);
    EXPECT_EQ(w.rank(), 5U);
    for (double x : w.relative_eigenvalues(1.3 * l.matrix)) {
        EXPECT_NEAR(x, 1.3, 1e-12);
    }
    EXPECT_TRUE(spectral_equivalence(l, 1.3 * l.matrix, 0.3 + 1e-12));
    EXPECT_FALSE(spectral_equivalence(l, 1.3 * l.matrix, 0.29));
}

TEST(Clique, ExactSchurComplement) {
    const Star star{{0, 1.0}, {1, 2.0}, {2, 3.0}};
    const auto c = exact_clique(star);
    ASSERT_EQ(c.size(), 3U);
    double w01 = 0.0;
    for (const auto &e : c) {
        if (e.i == 0 && e.j == 1) {
            w01 = e.w;
        }
    }
    EXPECT_NEAR(w01, 2.0 / 6.0, 1e-15);
    RandomStream rng(0, 0);
    EXPECT_EQ(code_of([&] { (void)clique_sample(Star{{0, 1.0}}, 3, rng); }), ErrorCode::DegenerateStar);
}

TEST(Clique, SampledCliqueIsUnbiased) {
    const Star star{{0, 1.0}, {1, 2.0}, {2, 3.0}, {3, 0.5}};
    Matrix exact = laplacian_matrix(WeightedGraph(4, exact_clique(star)));
    Matrix mean(4, 4);
    RandomStream rng(9, 0);
    const std::size_t reps = 20000;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto edges = clique_sample(star, 4, rng);
        ASSERT_EQ(edges.size(), 4U);
        for (const auto &e : edges) {
            mean(e.i, e.i) += e.w;
            mean(e.j, e.j) += e.w;
            mean(e.i, e.j) -= e.w;
            mean(e.j, e.i) -= e.w;
        }
    }
    mean /= static_cast<double>(reps);
    EXPECT_LT(max_abs_diff(mean, exact), 0.02);
}

TEST(SparseCholesky, ExactModeReproducesLaplacian) {
    RandomStream g(3, 0);
    const auto l = laplacian(WeightedGraph::erdos_renyi(20, 0.3, g));
    RandomStream rng(4, 0);
    const auto f = sparse_cholesky(l, rng, true);
    EXPECT_LT(max_abs_diff(f.approximation(), l.matrix), 1e-8);
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = i + 1; j < 20; ++j) {
            EXPECT_EQ(f.C(i, j), cplx(0.0));
        }
    }
    std::vector<std::size_t> sorted = f.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_EQ(sorted[i], i);
    }
}

TEST(SparseCholesky, SampledModeIsLaplacianLike) {
    const auto l = laplacian(WeightedGraph::complete(12));
    RandomStream rng(5, 0);
    const auto f = sparse_cholesky(l, rng, false);
    Matrix a = f.approximation();
    EXPECT_LT(hermitian_defect(a), 1e-12);
    for (std::size_t i = 0; i < 12; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < 12; ++j) {
            row += a(i, j);
        }
        EXPECT_NEAR(std::abs(row), 0.0, 1e-10);
    }
    EXPECT_EQ(code_of([&] { (void)sparse_cholesky(l, rng, false, 0); }), ErrorCode::InvalidArgument);
}

TEST(Pcg, TriangleWithExactPreconditioner) {
    const auto l = laplacian(WeightedGraph::complete(3));
    RandomStream rng(1, 0);
    const auto f = sparse_cholesky(l, rng, true);
    const std::vector<double> b{1.0, -2.0, 1.0};
    const auto r = pcg_solve(l, &f, b, 1e-8, 50);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 2U);
    // L u = b with u mean-zero: u = b / 3.
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(r.u[i], b[i] / 3.0, 1e-10);
    }
}

TEST(Pcg, UnpreconditionedPathAndInputs) {
    const auto l = laplacian(WeightedGraph::path(10));
    std::vector<double> b(10, 0.0);
    b[0] = 1.0;
    b[9] = -1.0;
    const auto r = pcg_solve(l, nullptr, b, 1e-10, 100);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.residuals.back(), 1e-10);
    EXPECT_EQ(r.residuals.front(), 1.0);
    EXPECT_NEAR(r.u[0] - r.u[9], 9.0, 1e-8);
    EXPECT_NEAR(energy_distance(l, r.u, std::vector<double>(10, 0.0)), 3.0, 1e-8);

    const auto zero = pcg_solve(l, nullptr, std::vector<double>(10, 0.0), 1e-10, 100);
    EXPECT_TRUE(zero.converged);
    EXPECT_EQ(zero.iterations, 0U);

    EXPECT_EQ(code_of([&] { (void)pcg_solve(l, nullptr, std::vector<double>(10, 1.0), 1e-8, 10); }),
              ErrorCode::InvalidArgument);
    const auto capped = pcg_solve(l, nullptr, b, 1e-14, 2);
    EXPECT_FALSE(capped.converged);
    EXPECT_EQ(capped.iterations, 2U);
}

}  // namespace
}  // namespace mclab
