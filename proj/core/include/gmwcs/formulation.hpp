#ifndef GMWCS_FORMULATION_HPP
#define GMWCS_FORMULATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmwcs/graph.hpp"

namespace gmwcs {

enum class VariableKind { vertex_selected, edge_selected, arc_selected, root, depth };

struct MipVariable {
    VariableKind kind;
    std::string name;
    VertexId vertex{};  // y, r, d; tail of an arc
    VertexId head{};    // arcs only
    EdgeId edge{};      // w; the edge under an arc
    double lower = 0.0;
    double upper = 1.0;
    bool binary = true;
};

enum class Sense { less_equal, equal, greater_equal };

// Which block of the formulation a row belongs to.
enum class ConstraintFamily {
    edge_endpoint,   // w_e <= y_v
    single_root,     // sum r_v = 1 (<= 1 when the empty selection is allowed)
    in_degree,       // sum of incoming arcs + r_v = y_v
    arc_edge,        // x_uv + x_vu <= w_e
    root_depth,      // d_v + (n-1) r_v <= n
    depth_step,      // n + d_u - d_v >= (n+1) x_vu
    depth_limit,     // n + d_v - d_u >= (n-1) x_vu
    fixed_root,      // r_root = 1
    root_order,      // sum_{v before u} r_v + y_u <= 1
    bfs_forward,     // d_v - d_u + (n-1) w_e <= n
    bfs_backward,    // d_u - d_v + (n-1) w_e <= n
    connectivity_cut // y_v - sum_{e in C} w_e <= 0
};

struct LinearConstraint {
    std::string name;
    ConstraintFamily family;
    std::vector<std::pair<std::size_t, double>> terms;  // variable index -> coefficient
    Sense sense;
    double rhs = 0.0;
};

struct ModelOptions {
    bool symmetry_breaking = true;
    bool bfs_restriction = true;
    // Unrooted models admit the all-zero point (empty subgraph) when set.
    bool allow_empty = true;
};

/// Arborescence-based MIP for GMWCS: maximize the selected weight subject to
/// the selected vertices and edges carrying a rooted spanning arborescence.
class MipModel {
public:
    const WeightedGraph &graph() const { return graph_; }
    std::optional<VertexId> root() const { return root_; }
    const ModelOptions &options() const { return options_; }

    std::span<const MipVariable> variables() const { return variables_; }
    std::span<const LinearConstraint> constraints() const { return constraints_; }
    std::span<const std::pair<std::size_t, double>> objective() const { return objective_; }

    std::size_t y(VertexId v) const { return y_offset_ + graph_.vertex_index(v); }
    std::size_t w(EdgeId e) const { return w_offset_ + graph_.edge_index(e); }
    // Arc tail -> head over edge e; `forward` means u -> v in the edge's orientation.
    std::size_t x(EdgeId e, bool forward) const { return x_offset_ + 2 * graph_.edge_index(e) + (forward ? 0 : 1); }
    std::size_t x(VertexId tail, VertexId head) const;
    std::size_t r(VertexId v) const { return r_offset_ + graph_.vertex_index(v); }
    std::size_t d(VertexId v) const { return d_offset_ + graph_.vertex_index(v); }

    std::size_t count(ConstraintFamily family) const;
    std::optional<std::size_t> find_variable(std::string_view name) const;

    // Appends a row (used for connectivity cuts). Throws std::invalid_argument
    // on unknown variables or non-finite coefficients.
    void add_constraint(LinearConstraint constraint);

    double evaluate_objective(std::span<const double> values) const;

private:
    friend MipModel build_model(const Instance &, const ModelOptions &);

    WeightedGraph graph_;
    std::optional<VertexId> root_;
    ModelOptions options_;
    std::vector<MipVariable> variables_;
    std::vector<LinearConstraint> constraints_;
    std::vector<std::pair<std::size_t, double>> objective_;
    std::size_t y_offset_ = 0, w_offset_ = 0, x_offset_ = 0, r_offset_ = 0, d_offset_ = 0;
};

/// Values for every model variable, indexed like MipModel::variables().
struct Assignment {
    std::vector<double> values;
};

/// Builds the linearized formulation. Requires a non-empty, connected graph
/// without parallel edges (GraphError otherwise).
MipModel build_model(const Instance &instance, const ModelOptions &options = {});

/// Certificate for a connected, non-empty subgraph: a BFS arborescence from
/// `root` (default: the model's root, else the heaviest selected vertex, ties
/// to the smaller id). Parents are the smallest-id discoverer; depth is BFS
/// layer + 1 for members and n for everything else.
Assignment encode_subgraph(const MipModel &model, const Subgraph &subgraph,
                           std::optional<VertexId> root = std::nullopt);

/// Names of every violated row, plus "binary(<var>)" / "bounds(<var>)" for
/// domain violations. Comparisons are exact unless `tolerance` is positive.
/// Throws std::invalid_argument on an incomplete assignment.
std::vector<std::string> check_assignment(const MipModel &model, const Assignment &assignment,
                                          double tolerance = 0.0);

bool satisfies(const LinearConstraint &constraint, std::span<const double> values, double tolerance = 0.0);

/// The (y, w) part of an assignment as a subgraph (values above 0.5 count).
Subgraph decode_subgraph(const MipModel &model, std::span<const double> values);

/// CPLEX-style LP text. Rows are named c1..cK in model order.
std::string export_lp(const MipModel &model);

// true iff `before` precedes `after` in the root order: lighter first, then
// smaller id.
bool root_order_before(const WeightedGraph &graph, VertexId before, VertexId after);

}  // namespace gmwcs

#endif  // GMWCS_FORMULATION_HPP
