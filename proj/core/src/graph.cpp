#include "gmwcs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gmwcs {

namespace {

constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

}  // namespace

std::optional<std::size_t> WeightedGraph::find_vertex(VertexId id) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                               [](const Vertex &v, VertexId key) { return v.id < key; });
    if (it == vertices_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::optional<std::size_t> WeightedGraph::find_edge(EdgeId id) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                               [](const Edge &e, EdgeId key) { return e.id < key; });
    if (it == edges_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t WeightedGraph::vertex_index(VertexId id) const {
    if (auto index = find_vertex(id)) return *index;
    throw GraphError("unknown vertex " + to_string(id));
}

std::size_t WeightedGraph::edge_index(EdgeId id) const {
    if (auto index = find_edge(id)) return *index;
    throw GraphError("unknown edge " + to_string(id));
}

bool WeightedGraph::has_parallel_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(ends_.size());
    for (auto [a, b] : ends_) pairs.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(pairs.begin(), pairs.end());
    return std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end();
}

VertexId WeightedGraph::next_vertex_id() const {
    return vertices_.empty() ? VertexId{0} : VertexId{vertices_.back().id.value + 1};
}

EdgeId WeightedGraph::next_edge_id() const {
    return edges_.empty() ? EdgeId{0} : EdgeId{edges_.back().id.value + 1};
}

GraphBuilder::GraphBuilder(const WeightedGraph &graph)
    : vertices_(graph.vertices().begin(), graph.vertices().end()),
      edges_(graph.edges().begin(), graph.edges().end()),
      next_vertex_(graph.next_vertex_id().value),
      next_edge_(graph.next_edge_id().value) {}

VertexId GraphBuilder::add_vertex(double weight) {
    VertexId id{next_vertex_};
    add_vertex(id, weight);
    return id;
}

void GraphBuilder::add_vertex(VertexId id, double weight) {
    vertices_.push_back({id, weight});
    next_vertex_ = std::max(next_vertex_, id.value + 1);
}

EdgeId GraphBuilder::add_edge(VertexId u, VertexId v, double weight) {
    EdgeId id{next_edge_};
    add_edge(id, u, v, weight);
    return id;
}

void GraphBuilder::add_edge(EdgeId id, VertexId u, VertexId v, double weight) {
    edges_.push_back({id, u, v, weight});
    next_edge_ = std::max(next_edge_, id.value + 1);
}

WeightedGraph GraphBuilder::build() const {
    WeightedGraph graph;
    graph.vertices_ = vertices_;
    graph.edges_ = edges_;
    std::sort(graph.vertices_.begin(), graph.vertices_.end(),
              [](const Vertex &a, const Vertex &b) { return a.id < b.id; });
    std::sort(graph.edges_.begin(), graph.edges_.end(), [](const Edge &a, const Edge &b) { return a.id < b.id; });

    for (std::size_t i = 0; i < graph.vertices_.size(); ++i) {
        const auto &v = graph.vertices_[i];
        if (i > 0 && graph.vertices_[i - 1].id == v.id) throw GraphError("duplicate vertex " + to_string(v.id));
        if (!std::isfinite(v.weight)) throw GraphError("non-finite weight on vertex " + to_string(v.id));
    }

    const std::size_t n = graph.vertices_.size();
    graph.ends_.reserve(graph.edges_.size());
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t i = 0; i < graph.edges_.size(); ++i) {
        const auto &e = graph.edges_[i];
        if (i > 0 && graph.edges_[i - 1].id == e.id) throw GraphError("duplicate edge " + to_string(e.id));
        if (!std::isfinite(e.weight)) throw GraphError("non-finite weight on edge " + to_string(e.id));
        if (e.u == e.v) throw GraphError("self-loop on vertex " + to_string(e.u));
        auto a = graph.find_vertex(e.u);
        auto b = graph.find_vertex(e.v);
        if (!a) throw GraphError("edge " + to_string(e.id) + " references unknown vertex " + to_string(e.u));
        if (!b) throw GraphError("edge " + to_string(e.id) + " references unknown vertex " + to_string(e.v));
        graph.ends_.emplace_back(*a, *b);
        ++degree[*a];
        ++degree[*b];
    }

    graph.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) graph.offsets_[i + 1] = graph.offsets_[i] + degree[i];
    graph.incidence_.assign(graph.offsets_[n], 0);
    std::vector<std::size_t> fill(graph.offsets_.begin(), graph.offsets_.end() - 1);
    for (std::size_t i = 0; i < graph.ends_.size(); ++i) {
        auto [a, b] = graph.ends_[i];
        graph.incidence_[fill[a]++] = i;
        graph.incidence_[fill[b]++] = i;
    }
    return graph;
}

void Subgraph::normalize() {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void validate_subgraph(const WeightedGraph &graph, const Subgraph &subgraph) {
    std::vector<bool> selected(graph.vertex_count(), false);
    for (VertexId v : subgraph.vertices) selected[graph.vertex_index(v)] = true;
    for (EdgeId e : subgraph.edges) {
        auto [a, b] = graph.ends(graph.edge_index(e));
        if (!selected[a] || !selected[b]) throw GraphError("edge " + to_string(e) + " selected without its endpoints");
    }
}

void validate_instance(const Instance &instance) {
    if (instance.root && !instance.graph.has_vertex(*instance.root))
        throw GraphError("root " + to_string(*instance.root) + " is not a vertex of the graph");
}

double total_weight(const WeightedGraph &graph, const Subgraph &subgraph) {
    double sum = 0.0;
    for (VertexId v : subgraph.vertices) sum += graph.weight(v);
    for (EdgeId e : subgraph.edges) sum += graph.weight(e);
    return sum;
}

bool is_connected(const WeightedGraph &graph, const Subgraph &subgraph) {
    if (subgraph.vertices.empty()) return true;
    const std::size_t n = graph.vertex_count();
    std::vector<bool> member(n, false), edge_member(graph.edge_count(), false), seen(n, false);
    for (VertexId v : subgraph.vertices) member[graph.vertex_index(v)] = true;
    for (EdgeId e : subgraph.edges) edge_member[graph.edge_index(e)] = true;

    std::vector<std::size_t> stack{graph.vertex_index(subgraph.vertices.front())};
    seen[stack.back()] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t e : graph.incident(v)) {
            if (!edge_member[e]) continue;
            std::size_t u = graph.opposite(e, v);
            if (!member[u] || seen[u]) continue;
            seen[u] = true;
            ++reached;
            stack.push_back(u);
        }
    }
    std::size_t members = static_cast<std::size_t>(std::count(member.begin(), member.end(), true));
    return reached == members;
}

bool is_connected(const WeightedGraph &graph) { return is_connected(graph, whole(graph)); }

Subgraph whole(const WeightedGraph &graph) {
    Subgraph s;
    for (const auto &v : graph.vertices()) s.vertices.push_back(v.id);
    for (const auto &e : graph.edges()) s.edges.push_back(e.id);
    return s;
}

Subgraph induced(const WeightedGraph &graph, std::span<const VertexId> vertices) {
    Subgraph s;
    std::vector<bool> member(graph.vertex_count(), false);
    for (VertexId v : vertices) {
        member[graph.vertex_index(v)] = true;
        s.vertices.push_back(v);
    }
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        auto [a, b] = graph.ends(e);
        if (member[a] && member[b]) s.edges.push_back(graph.edge(e).id);
    }
    s.normalize();
    return s;
}

WeightedGraph extract(const WeightedGraph &graph, const Subgraph &subgraph) {
    GraphBuilder builder;
    for (VertexId v : subgraph.vertices) builder.add_vertex(v, graph.weight(v));
    for (EdgeId e : subgraph.edges) {
        const auto &edge = graph.edge(graph.edge_index(e));
        builder.add_edge(edge.id, edge.u, edge.v, edge.weight);
    }
    return builder.build();
}

std::vector<WeightedGraph> connected_components(const WeightedGraph &graph) {
    const std::size_t n = graph.vertex_count();
    std::vector<std::size_t> label(n, kUnvisited);
    std::size_t count = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] != kUnvisited) continue;
        std::vector<std::size_t> stack{s};
        label[s] = count;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t e : graph.incident(v)) {
                std::size_t u = graph.opposite(e, v);
                if (label[u] == kUnvisited) {
                    label[u] = count;
                    stack.push_back(u);
                }
            }
        }
        ++count;
    }

    std::vector<GraphBuilder> builders(count);
    for (std::size_t v = 0; v < n; ++v) builders[label[v]].add_vertex(graph.vertex(v).id, graph.vertex(v).weight);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        const auto &edge = graph.edge(e);
        builders[label[graph.ends(e).first]].add_edge(edge.id, edge.u, edge.v, edge.weight);
    }
    std::vector<WeightedGraph> result;
    result.reserve(count);
    for (auto &b : builders) result.push_back(b.build());
    return result;
}

BiconnectedDecomposition biconnected_decomposition(const WeightedGraph &graph) {
    BiconnectedDecomposition result;
    const std::size_t n = graph.vertex_count();
    if (n == 0) return result;

    std::vector<std::size_t> discovery(n, kUnvisited), low(n, 0);
    std::vector<bool> is_cut(n, false);
    std::vector<std::size_t> edge_stack;

    struct Frame {
        std::size_t vertex;
        std::size_t parent_edge;
        std::size_t next;  // position in the incidence list
    };

    std::size_t time = 0;
    std::vector<Frame> frames{{0, kUnvisited, 0}};
    discovery[0] = low[0] = time++;
    std::size_t root_children = 0;

    while (!frames.empty()) {
        Frame &frame = frames.back();
        auto incident = graph.incident(frame.vertex);
        if (frame.next < incident.size()) {
            std::size_t e = incident[frame.next++];
            if (e == frame.parent_edge) continue;
            std::size_t u = graph.opposite(e, frame.vertex);
            if (discovery[u] == kUnvisited) {
                edge_stack.push_back(e);
                discovery[u] = low[u] = time++;
                if (frame.vertex == 0) ++root_children;
                frames.push_back({u, e, 0});
            } else if (discovery[u] < discovery[frame.vertex]) {
                edge_stack.push_back(e);
                low[frame.vertex] = std::min(low[frame.vertex], discovery[u]);
            }
            continue;
        }

        const std::size_t child = frame.vertex;
        const std::size_t via = frame.parent_edge;
        frames.pop_back();
        if (frames.empty()) break;
        const std::size_t parent = frames.back().vertex;
        low[parent] = std::min(low[parent], low[child]);
        if (low[child] >= discovery[parent]) {
            if (parent != 0) is_cut[parent] = true;
            std::vector<EdgeId> component;
            while (true) {
                std::size_t e = edge_stack.back();
                edge_stack.pop_back();
                component.push_back(graph.edge(e).id);
                if (e == via) break;
            }
            std::sort(component.begin(), component.end());
            result.components.push_back(std::move(component));
        }
    }
    if (root_children > 1) is_cut[0] = true;

    if (std::find(discovery.begin(), discovery.end(), kUnvisited) != discovery.end())
        throw GraphError("biconnected decomposition requires a connected graph");

    for (std::size_t v = 0; v < n; ++v)
        if (is_cut[v]) result.cut_vertices.push_back(graph.vertex(v).id);
    return result;
}

std::vector<VertexId> vertices_of(const WeightedGraph &graph, std::span<const EdgeId> edges) {
    std::vector<VertexId> out;
    for (EdgeId e : edges) {
        const auto &edge = graph.edge(graph.edge_index(e));
        out.push_back(edge.u);
        out.push_back(edge.v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string to_string(VertexId id) { return "v" + std::to_string(id.value); }
std::string to_string(EdgeId id) { return "e" + std::to_string(id.value); }

}  // namespace gmwcs
