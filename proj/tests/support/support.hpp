#ifndef GMWCS_TEST_SUPPORT_HPP
#define GMWCS_TEST_SUPPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmwcs/graph.hpp"
#include "gmwcs/separation.hpp"

namespace gmwcs::testing {

inline constexpr double kExact = 1e-9;

struct RandomSpec {
    std::size_t n = 8;
    double density = 0.4;
    double low = -5.0;
    double high = 5.0;
    // Weights are rounded to multiples of `quantum` when positive (creates ties).
    double quantum = 0.0;
    bool connected = true;
    bool rooted = false;
    // Extra edges drawn between random existing pairs.
    std::size_t parallel_edges = 0;
};

Instance random_instance(std::mt19937_64 &rng, const RandomSpec &spec);

// Instances with n in [lo, hi], density 0.4, weights in [-5, 5].
Instance random_small(std::mt19937_64 &rng, std::size_t lo, std::size_t hi, bool rooted);

Instance make_instance(const std::vector<double> &vertex_weights,
                       const std::vector<std::tuple<std::size_t, std::size_t, double>> &edges,
                       std::optional<std::size_t> root = std::nullopt);

// Every connected non-empty subgraph, grown edge by edge from single vertices.
// Vertex and edge sets are bitmasks over graph positions (n, m <= 64).
struct Mask {
    std::uint64_t vertices = 0;
    std::uint64_t edges = 0;
    friend auto operator<=>(const Mask &, const Mask &) = default;
};
std::vector<Mask> connected_subgraphs(const WeightedGraph &graph);
Subgraph to_subgraph(const WeightedGraph &graph, const Mask &mask);
double mask_weight(const WeightedGraph &graph, const Mask &mask);

// Optimum by growing connected subgraphs; independent of the library oracle.
double growing_optimum(const Instance &instance, bool allow_empty = true);

// (y, w) projections of the integer points of the arborescence system with
// the product constraints d_v r_v = r_v and d_u x_vu = (d_v + 1) x_vu, depths
// enumerated over 1..n. Exactly one root; fixed when `root` is given.
std::set<Mask> nonlinear_projections(const WeightedGraph &graph, std::optional<VertexId> root);

// Minimum s-t cut capacity over all vertex bipartitions.
double min_cut_by_enumeration(const FlowNetwork &network);

// Parsed LP text.
struct LpRow {
    std::string name;
    std::map<std::string, double> terms;
    std::string sense;
    double rhs = 0.0;
};
struct LpText {
    std::map<std::string, double> objective;
    std::vector<LpRow> rows;
    std::map<std::string, std::pair<double, double>> bounds;
    std::vector<std::string> binaries;
};
LpText parse_lp(const std::string &text);

std::string read_text(const std::string &path);

}  // namespace gmwcs::testing

#endif  // GMWCS_TEST_SUPPORT_HPP
