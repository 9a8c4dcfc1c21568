#ifndef GMWCS_SEPARATION_HPP
#define GMWCS_SEPARATION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gmwcs/formulation.hpp"
#include "gmwcs/graph.hpp"

namespace gmwcs {

struct FlowArc {
    std::size_t from;
    std::size_t to;
    double capacity;
};

/// Directed network over vertices 0..vertex_count-1. Antiparallel arcs are
/// allowed; capacities must be finite and non-negative.
struct FlowNetwork {
    std::size_t vertex_count = 0;
    std::vector<FlowArc> arcs;
    std::size_t source = 0;
    std::size_t sink = 0;
};

struct MaxFlowResult {
    double value = 0.0;
    std::vector<std::size_t> cut_arcs;     // arcs leaving the source side
    std::vector<std::size_t> source_side;  // sorted vertex indices
    std::uint64_t augmentations = 0;
};

/// Edmonds-Karp: shortest augmenting paths found by breadth-first search.
/// Throws std::invalid_argument if source == sink or a capacity is invalid.
MaxFlowResult max_flow(const FlowNetwork &network);

/// y_target <= sum of w_e over `edges`, where `edges` separates the root
/// from `target`.
struct CutConstraint {
    VertexId target;
    std::vector<EdgeId> edges;
    double capacity = 0.0;
};

inline constexpr double kDefaultSeparationTolerance = 1e-6;

/// For each non-root vertex with y above `tolerance`, computes a minimum
/// root-target cut in the graph whose edges carry capacity w (both
/// directions) and reports it when its capacity is below y - tolerance. At
/// most one cut per target. `w_values` and `y_values` are indexed by edge and
/// vertex position in `graph`.
std::vector<CutConstraint> find_violated_cuts(const WeightedGraph &graph, VertexId root,
                                              std::span<const double> w_values, std::span<const double> y_values,
                                              double tolerance = kDefaultSeparationTolerance);

/// The cut as a model row: y_target - sum w_e <= 0.
LinearConstraint to_linear_constraint(const MipModel &model, const CutConstraint &cut, std::size_t serial);

}  // namespace gmwcs

#endif  // GMWCS_SEPARATION_HPP
