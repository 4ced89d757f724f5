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

#include "mclab/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "mclab/error.hpp"

namespace mclab {

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto &e : edges_) {
        if (!(e.i < e.j) || e.j >= n_) {
            throw Error(ErrorCode::InvalidArgument, "edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                                        ") must satisfy 0 <= i < j < n");
        }
        if (!(e.w > 0.0) || !std::isfinite(e.w)) {
            throw Error(ErrorCode::InvalidArgument, "edge weights must be positive and finite");
        }
        if (!seen.emplace(e.i, e.j).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate edge (" + std::to_string(e.i) + "," +
                                                        std::to_string(e.j) + ")");
        }
    }
}

WeightedGraph WeightedGraph::complete(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            edges.push_back({i, j, weight});
        }
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph WeightedGraph::path(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1, weight});
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph WeightedGraph::erdos_renyi(std::size_t n, double p, RandomStream &rng) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "edge probability must lie in (0, 1]");
    }
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        RandomStream draw = rng.split(attempt);
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (draw.bernoulli(p)) {
                    edges.push_back({i, j, 1.0});
                }
            }
        }
        WeightedGraph g(n, std::move(edges));
        if (g.is_connected()) {
            return g;
        }
    }
    throw Error(ErrorCode::Disconnected, "no connected G(n, p) draw in 1000 attempts");
}

bool WeightedGraph::is_connected() const {
    if (n_ <= 1) {
        return true;
    }
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = n_;
    for (const auto &e : edges_) {
        const std::size_t a = find(e.i), b = find(e.j);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

WeightedGraph read_graph(std::istream &in) {
    std::size_t n = 0, m = 0;
    if (!(in >> n >> m)) {
        throw Error(ErrorCode::ParseError, "expected graph header 'n m'");
    }
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        Edge e;
        if (!(in >> e.i >> e.j >> e.w)) {
            throw Error(ErrorCode::ParseError, "expected " + std::to_string(m) + " edge lines, got " +
                                                   std::to_string(k));
        }
        edges.push_back(e);
    }
    return WeightedGraph(n, std::move(edges));
}

void write_graph(std::ostream &out, const WeightedGraph &g) {
    out << g.n() << ' ' << g.edge_count() << '\n';
    char buf[64];
    for (const auto &e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%.17g", e.w);
        out << e.i << ' ' << e.j << ' ' << buf << '\n';
    }
}

WeightedGraph load_graph(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    WeightedGraph g = read_graph(in);
    if (!g.is_connected()) {
        throw Error(ErrorCode::Disconnected, path.string() + " is not connected");
    }
    return g;
}

Matrix laplacian_matrix(const WeightedGraph &g) {
    Matrix l(g.n(), g.n());
    for (const auto &e : g.edges()) {
        l(e.i, e.i) += e.w;
        l(e.j, e.j) += e.w;
        l(e.i, e.j) -= e.w;
        l(e.j, e.i) -= e.w;
    }
    return l;
}

Laplacian laplacian(const WeightedGraph &g) {
    if (g.n() == 0 || !g.is_connected()) {
        throw Error(ErrorCode::Disconnected, "Laplacian requires a connected graph");
    }
    return {laplacian_matrix(g), g};
}

std::vector<double> effective_resistances(const Laplacian &l) {
    const Matrix pinv = pseudo_inverse_psd(l.matrix);
    std::vector<double> rho;
    rho.reserve(l.graph.edge_count());
    for (const auto &e : l.graph.edges()) {
        rho.push_back((pinv(e.i, e.i) + pinv(e.j, e.j) - 2.0 * pinv(e.i, e.j)).real());
    }
    return rho;
}

std::size_t sparsifier_sample_count(std::size_t n, double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) || n == 0) {
        throw Error(ErrorCode::InvalidArgument, "need n >= 1, eps in (0,1), delta in (0,1)");
    }
    const double nn = static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(3.0 / (eps * eps) * nn * std::log(2.0 * nn / delta)));
}

WeightedGraph sparsify(const WeightedGraph &g, std::span<const double> resistances, std::size_t q,
                       RandomStream &rng) {
    if (resistances.size() != g.edge_count()) {
        throw Error(ErrorCode::DimensionMismatch, "one resistance per edge required");
    }
    if (q == 0) {
        throw Error(ErrorCode::InvalidArgument, "sample count q must be positive");
    }
    std::vector<double> cumulative(g.edge_count());
    double total = 0.0;
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        // Pairs with rho = 0 carry probability zero.
        if (resistances[k] > 0.0) {
            total += g.edges()[k].w * resistances[k];
        }
        cumulative[k] = total;
    }
    if (!(total > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "no edge with positive resistance");
    }
    const double scale = static_cast<double>(g.n() - 1) / static_cast<double>(q);
    std::vector<double> weight(g.edge_count(), 0.0);
    for (std::size_t s = 0; s < q; ++s) {
        const std::size_t k = rng.discrete(cumulative);
        weight[k] += scale / resistances[k];
    }
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        if (weight[k] > 0.0) {
            edges.push_back({g.edges()[k].i, g.edges()[k].j, weight[k]});
        }
    }
    return WeightedGraph(g.n(), std::move(edges));
}

WeightedGraph sparsify(const Laplacian &l, std::size_t q, RandomStream &rng) {
    const auto rho = effective_resistances(l);
    return sparsify(l.graph, rho, q, rng);
}

SpectralWhitener::SpectralWhitener(const Matrix &l, double rank_tol) : n_(l.rows()) {
    auto eig = eigh(l);
    const double cut = rank_tol * std::max(eig.max(), 0.0);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < eig.dimension(); ++k) {
        if (eig.eigenvalues[k] > cut) {
            keep.push_back(k);
        }
    }
    rank_ = keep.size();
    basis_ = Matrix(n_, rank_);
    for (std::size_t c = 0; c < rank_; ++c) {
        const double s = 1.0 / std::sqrt(eig.eigenvalues[keep[c]]);
        for (std::size_t i = 0; i < n_; ++i) {
            basis_(i, c) = eig.eigenvectors(i, keep[c]) * s;
        }
    }
}

std::vector<double> SpectralWhitener::relative_eigenvalues(const Matrix &m) const {
    if (m.rows() != n_ || m.cols() != n_) {
        throw Error(ErrorCode::DimensionMismatch, "whitened matrix must be " + std::to_string(n_) + "x" +
                                                      std::to_string(n_));
    }
    Matrix k = basis_.adjoint() * (m * basis_);
    // Symmetrize away product round-off before the Hermitian solve.
    Matrix sym = 0.5 * (k + k.adjoint());
    return eigvalsh(sym);
}

bool spectral_equivalence(const SpectralWhitener &whitener, const Matrix &lhat, double eps) {
    auto mu = whitener.relative_eigenvalues(lhat);
    if (mu.empty()) {
        return true;
    }
    return mu.front() >= 1.0 - eps - 1e-9 && mu.back() <= 1.0 + eps + 1e-9;
}

bool spectral_equivalence(const Laplacian &l, const Matrix &lhat, double eps) {
    if (lhat.rows() != l.n() || lhat.cols() != l.n()) {
        throw Error(ErrorCode::DimensionMismatch, "Laplacians must share the vertex count");
    }
    return spectral_equivalence(SpectralWhitener(l.matrix), lhat, eps);
}

std::vector<Edge> exact_clique(const Star &star) {
    double total = 0.0;
    for (const auto &[v, w] : star) {
        total += w;
    }
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < star.size(); ++a) {
        for (std::size_t b = a + 1; b < star.size(); ++b) {
            const auto [i, j] = std::minmax(star[a].first, star[b].first);
            edges.push_back({i, j, star[a].second * star[b].second / total});
        }
    }
    return edges;
}

std::vector<Edge> clique_sample(const Star &star, std::size_t n_samples, RandomStream &rng) {
    if (star.size() < 2) {
        throw Error(ErrorCode::DegenerateStar, "clique sampling needs at least two neighbours");
    }
    if (n_samples == 0) {
        throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
    }
    std::vector<double> cumulative(star.size());
    double total = 0.0, squares = 0.0;
    for (std::size_t a = 0; a < star.size(); ++a) {
        total += star[a].second;
        squares += star[a].second * star[a].second;
        cumulative[a] = total;
    }
    const double pair_mass = 0.5 * (total * total - squares);
    const double weight = pair_mass / (static_cast<double>(n_samples) * total);
    std::vector<Edge> edges;
    edges.reserve(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        std::size_t a = 0, b = 0;
        do {
            a = rng.discrete(cumulative);
            b = rng.discrete(cumulative);
        } while (a == b);
        const auto [i, j] = std::minmax(star[a].first, star[b].first);
        edges.push_back({i, j, weight});
    }
    return edges;
}

Matrix SparseCholeskyResult::approximation() const {
    const std::size_t n = order.size();
    Matrix cct = C * C.adjoint();
    Matrix out(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            out(order[a], order[b]) = cct(a, b);
        }
    }
    return out;
}

SparseCholeskyResult sparse_cholesky(const Laplacian &l, RandomStream &rng, bool exact_mode,
                                     std::size_t oversampling) {
    if (oversampling == 0) {
        throw Error(ErrorCode::InvalidArgument, "oversampling must be >= 1");
    }
    const std::size_t n = l.n();
    std::vector<double> r(n * n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            r[i * n + j] = l.matrix(i, j).real();
        }
        scale = std::max(scale, r[i * n + i]);
    }
    const double zero_pivot = 1e-12 * std::max(1.0, scale);

    SparseCholeskyResult out;
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    // Fisher-Yates with the stream's unbiased index draw.
    for (std::size_t k = n; k > 1; --k) {
        std::swap(out.order[k - 1], out.order[rng.index(k)]);
    }
    std::vector<std::size_t> position(n);
    for (std::size_t a = 0; a < n; ++a) {
        position[out.order[a]] = a;
    }
    out.C = Matrix(n, n);

    auto add_edge = [&r, n](const Edge &e) {
        r[e.i * n + e.i] += e.w;
        r[e.j * n + e.j] += e.w;
        r[e.i * n + e.j] -= e.w;
        r[e.j * n + e.i] -= e.w;
    };

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t v = out.order[k];
        const double pivot = r[v * n + v];
        if (k + 1 == n) {
            break;
        }
        if (!(pivot > zero_pivot)) {
            throw Error(ErrorCode::ZeroPivot, "pivot " + std::to_string(pivot) + " at step " + std::to_string(k + 1));
        }
        const double root = std::sqrt(pivot);
        Star star;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = r[i * n + v];
            if (x != 0.0) {
                out.C(position[i], k) = x / root;
            }
            if (i != v && x < 0.0) {
                star.emplace_back(i, -x);
            }
        }
        for (const auto &[i, w] : star) {
            r[i * n + i] -= w;
            r[i * n + v] = 0.0;
            r[v * n + i] = 0.0;
        }
        r[v * n + v] = 0.0;
        if (star.size() >= 2) {
            const auto clique = exact_mode ? exact_clique(star) : clique_sample(star, oversampling * star.size(), rng);
            for (const auto &e : clique) {
                add_edge(e);
            }
        }
    }
    return out;
}

namespace {

void project_out_mean(std::vector<double> &x) {
    if (x.empty()) {
        return;
    }
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (auto &v : x) {
        v -= mean;
    }
}

std::vector<double> apply_laplacian(const Matrix &l, std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += l(i, j).real() * x[j];
        }
        y[i] = s;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

// z = (C C*)^+ r in the complement of the constant vector. Rows with a zero
// diagonal (the final pivot) are skipped; consistency of those rows follows
// from 1*r = 0.
std::vector<double> apply_preconditioner(const SparseCholeskyResult &pc, std::span<const double> r) {
    const std::size_t n = r.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const double diag = pc.C(a, a).real();
        if (diag == 0.0) {
            continue;
        }
        double s = r[pc.order[a]];
        for (std::size_t b = 0; b < a; ++b) {
            s -= pc.C(a, b).real() * y[b];
        }
        y[a] = s / diag;
    }
    std::vector<double> zp(n, 0.0);
    for (std::size_t a = n; a-- > 0;) {
        const double diag = pc.C(a, a).real();
        if (diag == 0.0) {
            continue;
        }
        double s = y[a];
        for (std::size_t b = a + 1; b < n; ++b) {
            s -= pc.C(b, a).real() * zp[b];
        }
        zp[a] = s / diag;
    }
    std::vector<double> z(n);
    for (std::size_t a = 0; a < n; ++a) {
        z[pc.order[a]] = zp[a];
    }
    project_out_mean(z);
    return z;
}

}  // namespace

PcgResult pcg_solve(const Laplacian &l, const SparseCholeskyResult *preconditioner, std::span<const double> f,
                    double tol, std::size_t maxit) {
    const std::size_t n = l.n();
    if (f.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "right-hand side has the wrong length");
    }
    if (preconditioner != nullptr && (preconditioner->C.rows() != n || preconditioner->order.size() != n)) {
        throw Error(ErrorCode::DimensionMismatch, "preconditioner has the wrong size");
    }
    const double fnorm = norm2(f);
    const double fsum = std::accumulate(f.begin(), f.end(), 0.0);
    if (std::abs(fsum) > 1e-10 * fnorm) {
        throw Error(ErrorCode::InvalidArgument, "right-hand side must be orthogonal to the constant vector");
    }

    PcgResult out;
    out.u.assign(n, 0.0);
    if (fnorm == 0.0) {
        out.converged = true;
        out.residuals.push_back(0.0);
        return out;
    }
    auto precondition = [&](std::span<const double> r) {
        if (preconditioner == nullptr) {
            std::vector<double> z(r.begin(), r.end());
            project_out_mean(z);
            return z;
        }
        return apply_preconditioner(*preconditioner, r);
    };

    std::vector<double> u(n, 0.0);
    std::vector<double> r(f.begin(), f.end());
    std::vector<double> z = precondition(r);
    std::vector<double> p = z;
    double rz = dot(r, z);
    out.residuals.push_back(1.0);
    double best = 1.0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t it = 0; it < maxit; ++it) {
        const auto lp = apply_laplacian(l.matrix, p);
        const double curvature = dot(p, lp);
        if (!(curvature > 0.0)) {
            break;
        }
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += alpha * p[i];
            r[i] -= alpha * lp[i];
        }
        project_out_mean(u);
        out.iterations = it + 1;

        auto lu = apply_laplacian(l.matrix, u);
        for (std::size_t i = 0; i < n; ++i) {
            lu[i] -= f[i];
        }
        const double rel = norm2(lu) / fnorm;
        if (rel > out.residuals.back() * (1.0 + 10.0 * eps) && out.residuals.back() > 10.0 * eps) {
            out.nonmonotone_residual = true;
        }
        out.residuals.push_back(rel);
        if (rel < best) {
            best = rel;
            out.u = u;
        }
        if (rel <= tol) {
            out.converged = true;
            break;
        }
        z = precondition(r);
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    return out;
}

double energy_distance(const Laplacian &l, std::span<const double> u, std::span<const double> v) {
    if (u.size() != l.n() || v.size() != l.n()) {
        throw Error(ErrorCode::DimensionMismatch, "vectors must match the Laplacian size");
    }
    std::vector<double> diff(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        diff[i] = u[i] - v[i];
    }
    const auto ld = apply_laplacian(l.matrix, diff);
    return std::sqrt(std::max(0.0, dot(diff, ld)));
}

}  // namespace mclab
