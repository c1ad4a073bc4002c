#pragma once

// Shared test fixtures: small-graph builders and independent oracles that
// must not go through the library's evaluation paths.

#include <array>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "qwgtlab/gf2.hpp"
#include "qwgtlab/graph.hpp"
#include "qwgtlab/rng.hpp"

namespace testutil {

using qwgtlab::Gf2Matrix;
using qwgtlab::Gf2Vector;
using qwgtlab::Graph;
using qwgtlab::SplitMix64;

inline Graph path_graph(std::size_t n) {
    std::vector<Graph::Edge> e;
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return Graph(n, std::move(e));
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Graph::Edge> e;
    for (std::uint32_t i = 0; i < n; ++i)
        e.emplace_back(i, static_cast<std::uint32_t>((i + 1) % n));
    return Graph(n, std::move(e));
}

inline Graph triangle() { return cycle_graph(3); }

/// rows x cols open grid, row-major vertex numbering; horizontal edges first
/// within a vertex's row scan, so edge order is deterministic.
inline Graph grid_graph(std::size_t rows, std::size_t cols) {
    std::vector<Graph::Edge> e;
    auto id = [cols](std::size_t r, std::size_t c) {
        return static_cast<std::uint32_t>(r * cols + c);
    };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                e.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows)
                e.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph(rows * cols, std::move(e));
}

inline Graph torus_graph(std::size_t rows, std::size_t cols) {
    std::vector<Graph::Edge> e;
    auto id = [cols](std::size_t r, std::size_t c) {
        return static_cast<std::uint32_t>(r * cols + c);
    };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            e.emplace_back(id(r, c), id(r, (c + 1) % cols));
            e.emplace_back(id(r, c), id((r + 1) % rows, c));
        }
    return Graph(rows * cols, std::move(e));
}

inline Graph random_multigraph(SplitMix64& rng, std::size_t nv, std::size_t ne) {
    std::vector<Graph::Edge> e;
    for (std::size_t k = 0; k < ne; ++k) {
        auto i = static_cast<std::uint32_t>(rng.below(nv));
        auto j = static_cast<std::uint32_t>(rng.below(nv - 1));
        if (j >= i)
            ++j;
        e.emplace_back(i, j);
    }
    return Graph(nv, std::move(e));
}

inline Gf2Vector random_vector(SplitMix64& rng, std::size_t len) {
    Gf2Vector v(len);
    for (std::size_t i = 0; i < len; ++i)
        if (rng.bit())
            v.flip(i);
    return v;
}

inline Gf2Matrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
    Gf2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.bit())
                m.set(r, c, true);
    return m;
}

/// Kernel of M found the slow way: scan all 2^cols vectors.
inline std::set<std::string> kernel_by_scan(const Gf2Matrix& m) {
    std::set<std::string> out;
    Gf2Vector v(m.cols());
    const std::uint64_t total = std::uint64_t{1} << m.cols();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (mask)
            v.flip(static_cast<std::size_t>(std::countr_zero(mask)));
        if (qwgtlab::matvec(m, v).is_zero())
            out.insert(v.to_string());
    }
    return out;
}

/// Span of a basis by direct coefficient enumeration (no Gray code).
inline std::set<std::string> span_by_scan(const qwgtlab::KernelBasis& kb) {
    std::set<std::string> out;
    const std::uint64_t total = kb.span_size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        Gf2Vector v(kb.vector_len);
        for (std::size_t j = 0; j < kb.dim(); ++j)
            if ((mask >> j) & 1u)
                v ^= kb.basis[j];
        out.insert(v.to_string());
    }
    return out;
}

/// 1D Ising chain by 2x2 transfer-matrix products; couplings are
/// (-1)^(w_e) * beta_j per edge.
struct Transfer2 {
    std::array<std::array<double, 2>, 2> m;

    static Transfer2 bond(double beta_j) {
        Transfer2 t;
        t.m = {{{std::exp(beta_j), std::exp(-beta_j)}, {std::exp(-beta_j), std::exp(beta_j)}}};
        return t;
    }

    Transfer2 operator*(const Transfer2& o) const {
        Transfer2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
        return r;
    }
};

inline double chain_open_z(std::size_t n_spins, double beta_j, const Gf2Vector& w) {
    Transfer2 prod;
    prod.m = {{{1, 0}, {0, 1}}};
    for (std::size_t e = 0; e + 1 < n_spins; ++e)
        prod = prod * Transfer2::bond(w.get(e) ? -beta_j : beta_j);
    return prod.m[0][0] + prod.m[0][1] + prod.m[1][0] + prod.m[1][1];
}

inline double chain_closed_z(std::size_t n_spins, double beta_j, const Gf2Vector& w) {
    Transfer2 prod;
    prod.m = {{{1, 0}, {0, 1}}};
    for (std::size_t e = 0; e < n_spins; ++e)
        prod = prod * Transfer2::bond(w.get(e) ? -beta_j : beta_j);
    return prod.m[0][0] + prod.m[1][1];
}

/// Direct Gibbs sum with a per-vertex field of magnitude |J|:
/// Z = sum_s exp(beta J [sum_e q_e s_i s_j + sum_i (-1)^(f_i) s_i]).
inline double field_direct_z(const Graph& g, const Gf2Vector& w, double beta_j,
                             const Gf2Vector& field_signs) {
    const std::size_t nv = g.num_vertices();
    double z = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nv); ++mask) {
        auto sigma = [&](std::size_t i) { return ((mask >> i) & 1u) ? -1.0 : 1.0; };
        double h = 0.0;
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            auto [i, j] = g.edge(e);
            h += (w.get(e) ? -1.0 : 1.0) * sigma(i) * sigma(j);
        }
        for (std::size_t i = 0; i < nv; ++i)
            h += (field_signs.get(i) ? -1.0 : 1.0) * sigma(i);
        z += std::exp(beta_j * h);
    }
    return z;
}

} // namespace testutil
