#ifndef GMWCS_ORACLE_HPP
#define GMWCS_ORACLE_HPP

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gmwcs/formulation.hpp"
#include "gmwcs/graph.hpp"
#include "gmwcs/result.hpp"

// Exhaustive ground truth for small instances.
//
// brute_force() enumerates vertex subsets and completes each with the best
// connecting edge set. The completion is optimal: every positive induced edge
// can be added to any connected (S, E') without disconnecting it or lowering
// its weight, so an optimal edge set contains all of them; what remains is
// connecting the components those edges leave with non-positive edges at the
// least cost, i.e. a maximum-weight spanning tree of the condensed multigraph.
//
// enumerate_feasible() walks all integer points of a MipModel. Depths are
// enumerated over {1..n}: at integer x and r the depth rows only relate
// depths of arc endpoints by exact unit steps, so a feasible point with
// fractional depths has an integral twin with the same (y, w, x, r).
namespace gmwcs {

inline constexpr std::size_t kBruteForceMaxVertices = 15;
inline constexpr std::size_t kEnumerateMaxVertices = 5;
inline constexpr std::size_t kBinaryEnumerateMaxVertices = 8;

class OracleSizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Heaviest edge set E' within the graph induced by `vertices` such that
/// (vertices, E') is connected; nullopt if no such set exists.
std::optional<std::vector<EdgeId>> best_edges_for_vertex_set(const WeightedGraph &graph,
                                                            std::span<const VertexId> vertices);

/// Optimum over all vertex subsets (containing the root when rooted; the empty
/// set competes only when unrooted and `allow_empty`). Throws OracleSizeError
/// above kBruteForceMaxVertices vertices.
SolveResult brute_force(const Instance &instance, bool allow_empty = true);

struct FeasiblePoint {
    Assignment assignment;
    double objective = 0.0;
};

using FeasibleVisitor = std::function<void(const FeasiblePoint &)>;

/// Visits every feasible point with 0/1 binaries and integer depths in [1, n].
/// Throws OracleSizeError above kEnumerateMaxVertices vertices.
void enumerate_feasible(const MipModel &model, const FeasibleVisitor &visit);
std::vector<FeasiblePoint> enumerate_feasible(const MipModel &model);

/// Best integer point of the model, treating depths as continuous (their
/// feasibility at fixed binaries is a system of difference constraints).
/// nullopt when infeasible. Throws OracleSizeError above
/// kBinaryEnumerateMaxVertices vertices.
std::optional<FeasiblePoint> maximize_integer(const MipModel &model);

}  // namespace gmwcs

#endif  // GMWCS_ORACLE_HPP
