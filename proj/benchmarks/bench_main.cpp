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


#include <benchmark/benchmark.h>

#include "mclab/graphs.hpp"
#include "mclab/linalg.hpp"
#include "mclab/quantum.hpp"
#include "mclab/rng.hpp"
#include "mclab/rounding.hpp"

namespace {

mclab::Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    mclab::RandomStream rng(seed, 0);
    mclab::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double x = rng.normal();
            a(i, j) = x;
            a(j, i) = x;
        }
    }
    return a;
}

void BM_Philox(benchmark::State &state) {
    mclab::RandomStream rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.next_u64());
    }
}
BENCHMARK(BM_Philox);

void BM_Normal(benchmark::State &state) {
    mclab::RandomStream rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.normal());
    }
}
BENCHMARK(BM_Normal);

void BM_Eigh(benchmark::State &state) {
    const auto a = random_symmetric(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mclab::eigh(a));
    }
}
BENCHMARK(BM_Eigh)->Arg(8)->Arg(32)->Arg(64);

void BM_SpectralNorm(benchmark::State &state) {
    const auto a = random_symmetric(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mclab::spectral_norm(a));
    }
}
BENCHMARK(BM_SpectralNorm)->Arg(16)->Arg(64);

void BM_Sparsify(benchmark::State &state) {
    const auto l = mclab::laplacian(mclab::WeightedGraph::complete(50));
    const auto rho = mclab::effective_resistances(l);
    const std::size_t q = mclab::sparsifier_sample_count(50, 0.5, 0.1);
    mclab::RandomStream rng(4, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mclab::sparsify(l.graph, rho, q, rng));
    }
}
BENCHMARK(BM_Sparsify);

void BM_SparseCholesky(benchmark::State &state) {
    const auto l = mclab::laplacian(mclab::WeightedGraph::complete(30));
    mclab::RandomStream rng(5, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mclab::sparse_cholesky(l, rng, false));
    }
}
BENCHMARK(BM_SparseCholesky);

void BM_SrCholesky(benchmark::State &state) {
    const mclab::FloatSystem sys(8);
    const auto a = mclab::correlation_fixture(16, sys, 1);
    mclab::RandomStream rng(6, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mclab::sr_cholesky(sys, a, rng));
    }
}
BENCHMARK(BM_SrCholesky);

void BM_RandomProduct(benchmark::State &state) {
    const mclab::HamiltonianSum h({mclab::pauli_x(), mclab::pauli_z()});
    mclab::RandomStream rng(7, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mclab::random_product(h, 480, rng));
    }
}
BENCHMARK(BM_RandomProduct);

}  // namespace

BENCHMARK_MAIN();
