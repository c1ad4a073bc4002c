#include "qwgtlab/graph.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace qwgtlab {

Graph::Graph(std::size_t num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto [i, j] = edges_[e];
        if (i >= num_vertices_ || j >= num_vertices_)
            throw std::invalid_argument("Graph: edge " + std::to_string(e) + " endpoint out of range");
        if (i == j)
            throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(i) +
                                        " (edge " + std::to_string(e) + ") is not allowed");
    }
}

Gf2Matrix incidence_matrix(const Graph& g) {
    Gf2Matrix a(g.num_vertices(), g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto [i, j] = g.edge(e);
        a.set(i, e, true);
        a.set(j, e, true);
    }
    return a;
}

Gf2Vector parity_vector(const Graph& g, const Gf2Vector& b) {
    if (b.size() != g.num_edges())
        throw std::invalid_argument("parity_vector: graph has " + std::to_string(g.num_edges()) +
                                    " edges, vector has " + std::to_string(b.size()) + " entries");
    Gf2Vector alpha(g.num_vertices());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (b.get(e)) {
            auto [i, j] = g.edge(e);
            alpha.flip(i);
            alpha.flip(j);
        }
    }
    return alpha;
}

std::size_t subgraph_degree(const Graph& g, const Gf2Vector& b, std::size_t vertex) {
    if (b.size() != g.num_edges())
        throw std::invalid_argument("subgraph_degree: graph has " + std::to_string(g.num_edges()) +
                                    " edges, vector has " + std::to_string(b.size()) + " entries");
    if (vertex >= g.num_vertices())
        throw std::out_of_range("subgraph_degree: vertex " + std::to_string(vertex) +
                                " out of range (|V| = " + std::to_string(g.num_vertices()) + ")");
    std::size_t deg = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (b.get(e)) {
            auto [i, j] = g.edge(e);
            deg += (i == vertex) + (j == vertex);
        }
    return deg;
}

std::size_t connected_components(const Graph& g) {
    std::vector<std::size_t> parent(g.num_vertices());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = g.num_vertices();
    for (auto [i, j] : g.edges()) {
        auto ri = find(i), rj = find(j);
        if (ri != rj) {
            parent[ri] = rj;
            --components;
        }
    }
    return components;
}

std::size_t cycle_space_dimension(const Graph& g) {
    return g.num_edges() - g.num_vertices() + connected_components(g);
}

StarAugmentation augment_star(const Graph& g, const Gf2Vector& field_signs) {
    if (field_signs.size() != g.num_vertices())
        throw std::invalid_argument("augment_star: graph has " + std::to_string(g.num_vertices()) +
                                    " vertices, field_signs has " +
                                    std::to_string(field_signs.size()) + " entries");
    const auto hub = static_cast<std::uint32_t>(g.num_vertices());
    auto edges = g.edges();
    edges.reserve(edges.size() + g.num_vertices());
    for (std::uint32_t i = 0; i < hub; ++i)
        edges.emplace_back(i, hub);
    return {Graph(g.num_vertices() + 1, std::move(edges)), field_signs};
}

BondConfig gauge_transform(const Graph& g, const BondConfig& bonds, const Gf2Vector& v) {
    if (bonds.w.size() != g.num_edges())
        throw std::invalid_argument("gauge_transform: graph has " + std::to_string(g.num_edges()) +
                                    " edges, w has " + std::to_string(bonds.w.size()) + " entries");
    if (v.size() != g.num_vertices())
        throw std::invalid_argument("gauge_transform: graph has " +
                                    std::to_string(g.num_vertices()) + " vertices, v has " +
                                    std::to_string(v.size()) + " entries");
    BondConfig out = bonds;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto [i, j] = g.edge(e);
        if (v.get(i) != v.get(j))
            out.w.flip(e);
    }
    return out;
}

} // namespace qwgtlab
