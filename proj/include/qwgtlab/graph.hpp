#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qwgtlab/gf2.hpp"

namespace qwgtlab {

/// Undirected multigraph. Vertices are dense indices 0..num_vertices()-1;
/// the edge order is fixed and defines bit position e of every length-|E|
/// bond/subgraph vector. Parallel edges are allowed, self-loops are not.
class Graph {
public:
    using Edge = std::pair<std::uint32_t, std::uint32_t>;

    Graph() = default;
    Graph(std::size_t num_vertices, std::vector<Edge> edges);

    std::size_t num_vertices() const { return num_vertices_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    Edge edge(std::size_t e) const { return edges_[e]; }

private:
    std::size_t num_vertices_ = 0;
    std::vector<Edge> edges_;
};

/// Per-edge bond signs: w_e = 0 ferromagnetic, w_e = 1 antiferromagnetic.
struct BondConfig {
    Gf2Vector w;

    static BondConfig ferromagnetic(std::size_t num_edges) { return {Gf2Vector(num_edges)}; }
};

/// |V| x |E| vertex-edge incidence matrix; every column has exactly two 1s.
Gf2Matrix incidence_matrix(const Graph& g);

/// Per-vertex degree parities of the subgraph b; equals incidence_matrix(g)*b.
Gf2Vector parity_vector(const Graph& g, const Gf2Vector& b);

/// Number of b-selected edges incident to vertex i.
std::size_t subgraph_degree(const Graph& g, const Gf2Vector& b, std::size_t vertex);

/// |E| - |V| + #components; equals the kernel dimension of the incidence matrix.
std::size_t cycle_space_dimension(const Graph& g);

std::size_t connected_components(const Graph& g);

/// Original graph plus one extra hub vertex (index |V|) adjacent to every
/// original vertex; star edges (i, |V|) are appended after the original
/// edges in vertex order. w_extension carries field_signs as the bond bits
/// of the new edges.
struct StarAugmentation {
    Graph graph;
    Gf2Vector w_extension;
};

StarAugmentation augment_star(const Graph& g, const Gf2Vector& field_signs);

/// w' = w xor A^T v: edge e flips iff exactly one endpoint is in v.
BondConfig gauge_transform(const Graph& g, const BondConfig& bonds, const Gf2Vector& v);

} // namespace qwgtlab
