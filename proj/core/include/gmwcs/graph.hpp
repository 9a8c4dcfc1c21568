#ifndef GMWCS_GRAPH_HPP
#define GMWCS_GRAPH_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmwcs {

struct VertexId {
    std::uint32_t value{};
    friend constexpr auto operator<=>(const VertexId &, const VertexId &) = default;
};

struct EdgeId {
    std::uint32_t value{};
    friend constexpr auto operator<=>(const EdgeId &, const EdgeId &) = default;
};

struct Vertex {
    VertexId id;
    double weight{};
};

struct Edge {
    EdgeId id;
    VertexId u;
    VertexId v;
    double weight{};
};

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class GraphBuilder;

/// Undirected multigraph with real weights on vertices and edges.
///
/// Vertices and edges are kept sorted by id; algorithms address them by dense
/// position ("index"), which is stable for the lifetime of the graph.
/// Self-loops are rejected. Parallel edges are allowed.
class WeightedGraph {
public:
    WeightedGraph() = default;

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return vertices_.empty(); }

    std::span<const Vertex> vertices() const { return vertices_; }
    std::span<const Edge> edges() const { return edges_; }

    const Vertex &vertex(std::size_t index) const { return vertices_[index]; }
    const Edge &edge(std::size_t index) const { return edges_[index]; }

    bool has_vertex(VertexId id) const { return find_vertex(id).has_value(); }
    bool has_edge(EdgeId id) const { return find_edge(id).has_value(); }
    std::optional<std::size_t> find_vertex(VertexId id) const;
    std::optional<std::size_t> find_edge(EdgeId id) const;
    // Throws GraphError when the id is unknown.
    std::size_t vertex_index(VertexId id) const;
    std::size_t edge_index(EdgeId id) const;

    double weight(VertexId id) const { return vertices_[vertex_index(id)].weight; }
    double weight(EdgeId id) const { return edges_[edge_index(id)].weight; }

    // Endpoint indices of an edge, as (index of u, index of v).
    std::pair<std::size_t, std::size_t> ends(std::size_t edge_index) const { return ends_[edge_index]; }
    std::size_t opposite(std::size_t edge_index, std::size_t vertex_index) const {
        const auto [a, b] = ends_[edge_index];
        return a == vertex_index ? b : a;
    }
    // Indices of edges incident to a vertex, in edge order.
    std::span<const std::size_t> incident(std::size_t vertex_index) const {
        return {incidence_.data() + offsets_[vertex_index], incidence_.data() + offsets_[vertex_index + 1]};
    }
    std::size_t degree(std::size_t vertex_index) const { return offsets_[vertex_index + 1] - offsets_[vertex_index]; }

    bool has_parallel_edges() const;

    // Smallest ids strictly greater than every id in use.
    VertexId next_vertex_id() const;
    EdgeId next_edge_id() const;

private:
    friend class GraphBuilder;

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::pair<std::size_t, std::size_t>> ends_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> incidence_;
};

/// Accumulates vertices and edges, validates them and produces a WeightedGraph.
class GraphBuilder {
public:
    GraphBuilder() = default;
    explicit GraphBuilder(const WeightedGraph &graph);

    VertexId add_vertex(double weight);
    void add_vertex(VertexId id, double weight);
    EdgeId add_edge(VertexId u, VertexId v, double weight);
    void add_edge(EdgeId id, VertexId u, VertexId v, double weight);

    WeightedGraph build() const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::uint32_t next_vertex_ = 0;
    std::uint32_t next_edge_ = 0;
};

/// A vertex set and an edge set over some parent graph. Both lists are kept
/// sorted and duplicate-free by normalize().
struct Subgraph {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;

    bool empty() const { return vertices.empty() && edges.empty(); }
    void normalize();
    friend bool operator==(const Subgraph &, const Subgraph &) = default;
};

struct Instance {
    WeightedGraph graph;
    std::optional<VertexId> root;

    bool rooted() const { return root.has_value(); }
};

// Throws GraphError if an element is missing from the graph or an edge's
// endpoint is not selected.
void validate_subgraph(const WeightedGraph &graph, const Subgraph &subgraph);
void validate_instance(const Instance &instance);

double total_weight(const WeightedGraph &graph, const Subgraph &subgraph);
bool is_connected(const WeightedGraph &graph, const Subgraph &subgraph);
bool is_connected(const WeightedGraph &graph);

Subgraph whole(const WeightedGraph &graph);
// Subgraph with the given vertices and every graph edge between them.
Subgraph induced(const WeightedGraph &graph, std::span<const VertexId> vertices);
// Materializes a subgraph as a graph of its own, keeping ids and weights.
WeightedGraph extract(const WeightedGraph &graph, const Subgraph &subgraph);

/// Maximal connected pieces, ordered by their smallest vertex id.
std::vector<WeightedGraph> connected_components(const WeightedGraph &graph);

struct BiconnectedDecomposition {
    // Edge sets of the biconnected components; every edge is in exactly one.
    std::vector<std::vector<EdgeId>> components;
    std::vector<VertexId> cut_vertices;
};

/// Biconnected components and articulation points from one depth-first
/// traversal. Throws GraphError when the graph is disconnected.
BiconnectedDecomposition biconnected_decomposition(const WeightedGraph &graph);

// Vertex ids touched by an edge set, sorted.
std::vector<VertexId> vertices_of(const WeightedGraph &graph, std::span<const EdgeId> edges);

std::string to_string(VertexId id);
std::string to_string(EdgeId id);

}  // namespace gmwcs

#endif  // GMWCS_GRAPH_HPP
