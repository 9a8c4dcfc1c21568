#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "gmwcs/graph.hpp"
#include "support.hpp"

using namespace gmwcs;
using gmwcs::testing::make_instance;

namespace {

VertexId V(std::uint32_t v) { return VertexId{v}; }
EdgeId E(std::uint32_t e) { return EdgeId{e}; }

// Connectivity of the graph with one vertex position deleted.
bool connected_without(const WeightedGraph &g, std::size_t removed) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::size_t start = removed == 0 ? 1 : 0, count = 0;
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    seen[removed] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        ++count;
        for (auto e : g.incident(v)) {
            auto u = g.opposite(e, v);
            if (!seen[u]) seen[u] = true, stack.push_back(u);
        }
    }
    return count == g.vertex_count() - 1;
}

// Edges lying on a common simple cycle with edge `e`, plus e itself.
std::set<std::size_t> cycle_partners(const WeightedGraph &g, std::size_t e) {
    auto [a, b] = g.ends(e);
    std::set<std::size_t> partners{e};
    std::vector<bool> on_path(g.vertex_count(), false);
    std::vector<std::size_t> path_edges;
    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == a) {
            partners.insert(path_edges.begin(), path_edges.end());
            return;
        }
        for (auto f : g.incident(v)) {
            if (f == e) continue;
            auto u = g.opposite(f, v);
            if (on_path[u]) continue;
            on_path[u] = true;
            path_edges.push_back(f);
            walk(u);
            path_edges.pop_back();
            on_path[u] = false;
        }
    };
    on_path[b] = true;
    walk(b);
    return partners;
}

}  // namespace

TEST_CASE("builder assigns ids and validates input") {
    GraphBuilder b;
    auto a = b.add_vertex(1.5);
    auto c = b.add_vertex(-2);
    auto e = b.add_edge(a, c, 0.5);
    auto g = b.build();
    CHECK(g.vertex_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.weight(a) == 1.5);
    CHECK(g.weight(e) == 0.5);
    CHECK(g.next_vertex_id() == V(2));
    CHECK(g.next_edge_id() == E(1));

    GraphBuilder loop;
    loop.add_vertex(1);
    loop.add_edge(V(0), V(0), 1);
    CHECK_THROWS_AS(loop.build(), GraphError);

    GraphBuilder dangling;
    dangling.add_vertex(1);
    dangling.add_edge(V(0), V(7), 1);
    CHECK_THROWS_AS(dangling.build(), GraphError);

    GraphBuilder dup;
    dup.add_vertex(V(3), 1);
    dup.add_vertex(V(3), 2);
    CHECK_THROWS_AS(dup.build(), GraphError);

    GraphBuilder nan;
    nan.add_vertex(std::nan(""));
    CHECK_THROWS_AS(nan.build(), GraphError);
}

TEST_CASE("parallel edges are kept") {
    auto inst = make_instance({1, 1}, {{0, 1, 1}, {0, 1, -2}});
    CHECK(inst.graph.edge_count() == 2);
    CHECK(inst.graph.has_parallel_edges());
    CHECK(inst.graph.degree(0) == 2);
}

TEST_CASE("total_weight") {
    auto tri = make_instance({1, 2, 3}, {{0, 1, -1}, {1, 2, -1}, {0, 2, -1}}).graph;
    CHECK(total_weight(tri, Subgraph{}) == 0);
    CHECK(total_weight(tri, whole(tri)) == 3);
    auto single = make_instance({3.5}, {}).graph;
    CHECK(total_weight(single, whole(single)) == 3.5);
    Subgraph bad{{V(0)}, {E(0)}};
    CHECK_THROWS_AS(validate_subgraph(tri, bad), GraphError);
}

TEST_CASE("total_weight is additive over disjoint unions") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        gmwcs::testing::RandomSpec spec;
        spec.n = 9;
        auto g = gmwcs::testing::random_instance(rng, spec).graph;
        std::vector<VertexId> left, right;
        for (auto &v : g.vertices()) (rng() % 2 ? left : right).push_back(v.id);
        auto a = induced(g, left), b = induced(g, right);
        Subgraph both{a.vertices, a.edges};
        both.vertices.insert(both.vertices.end(), b.vertices.begin(), b.vertices.end());
        both.edges.insert(both.edges.end(), b.edges.begin(), b.edges.end());
        both.normalize();
        CHECK(total_weight(g, both) == doctest::Approx(total_weight(g, a) + total_weight(g, b)).epsilon(1e-12));
    }
}

TEST_CASE("is_connected") {
    auto path = make_instance({1, 1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}).graph;
    CHECK_FALSE(is_connected(path, Subgraph{{V(0), V(2)}, {}}));
    CHECK(is_connected(path, Subgraph{{V(1)}, {}}));
    CHECK(is_connected(path, Subgraph{{V(0), V(1), V(2), V(3)}, {E(0), E(1), E(2)}}));
    CHECK(is_connected(path, Subgraph{}));
    CHECK(is_connected(path));
}

TEST_CASE("connected_components") {
    auto one = make_instance({1, 2}, {{0, 1, 1}}).graph;
    auto comps = connected_components(one);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].vertex_count() == 2);

    auto two = make_instance({1, 1, 1, 2, 2, 2}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}}).graph;
    comps = connected_components(two);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].vertex_count() == 3);
    CHECK(comps[1].vertex_count() == 3);
    CHECK(comps[1].weight(V(3)) == 2);
    CHECK(comps[1].has_edge(E(3)));

    CHECK(connected_components(WeightedGraph{}).empty());
}

TEST_CASE("components partition vertices and edges") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        gmwcs::testing::RandomSpec spec;
        spec.n = 12;
        spec.density = 0.1;
        spec.connected = false;
        auto g = gmwcs::testing::random_instance(rng, spec).graph;
        std::size_t nv = 0, ne = 0;
        for (auto &c : connected_components(g)) {
            CHECK(is_connected(c));
            nv += c.vertex_count();
            ne += c.edge_count();
        }
        CHECK(nv == g.vertex_count());
        CHECK(ne == g.edge_count());
    }
}

TEST_CASE("biconnected decomposition on small shapes") {
    auto tri = make_instance({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}).graph;
    auto d = biconnected_decomposition(tri);
    CHECK(d.components.size() == 1);
    CHECK(d.components[0].size() == 3);
    CHECK(d.cut_vertices.empty());

    auto bowtie = make_instance({1, 1, 1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 4, 1}}).graph;
    d = biconnected_decomposition(bowtie);
    CHECK(d.components.size() == 2);
    CHECK(d.cut_vertices == std::vector<VertexId>{V(2)});

    auto path = make_instance({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}}).graph;
    d = biconnected_decomposition(path);
    CHECK(d.components.size() == 2);
    CHECK(d.cut_vertices == std::vector<VertexId>{V(1)});

    auto disconnected = make_instance({1, 1}, {}).graph;
    CHECK_THROWS_AS(biconnected_decomposition(disconnected), GraphError);
}

TEST_CASE("biconnected decomposition matches exhaustive checks") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 150; ++t) {
        gmwcs::testing::RandomSpec spec;
        spec.n = 3 + rng() % 7;
        spec.density = 0.15 + 0.1 * static_cast<double>(rng() % 5);
        spec.parallel_edges = t % 5 == 0 ? 1 : 0;
        auto g = gmwcs::testing::random_instance(rng, spec).graph;
        auto d = biconnected_decomposition(g);

        std::set<VertexId> cuts(d.cut_vertices.begin(), d.cut_vertices.end());
        for (std::size_t v = 0; v < g.vertex_count(); ++v)
            CHECK(cuts.contains(g.vertex(v).id) == !connected_without(g, v));

        std::vector<int> block_of(g.edge_count(), -1);
        for (std::size_t b = 0; b < d.components.size(); ++b)
            for (auto e : d.components[b]) {
                CHECK(block_of[g.edge_index(e)] == -1);
                block_of[g.edge_index(e)] = static_cast<int>(b);
            }
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            REQUIRE(block_of[e] >= 0);
            auto partners = cycle_partners(g, e);
            for (std::size_t f = 0; f < g.edge_count(); ++f)
                CHECK((block_of[f] == block_of[e]) == partners.contains(f));
        }
    }
}

TEST_CASE("extract, induced and vertices_of") {
    auto g = make_instance({1, 2, 3, 4}, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {0, 2, 4}}).graph;
    std::vector<VertexId> vs{V(0), V(1), V(2)};
    auto sub = induced(g, vs);
    CHECK(sub.edges == std::vector<EdgeId>{E(0), E(1), E(3)});
    auto piece = extract(g, sub);
    CHECK(piece.vertex_count() == 3);
    CHECK(piece.weight(E(3)) == 4);
    std::vector<EdgeId> es{E(2)};
    CHECK(vertices_of(g, es) == std::vector<VertexId>{V(2), V(3)});
    CHECK(to_string(V(4)) == "v4");
    CHECK(to_string(E(2)) == "e2");
}
