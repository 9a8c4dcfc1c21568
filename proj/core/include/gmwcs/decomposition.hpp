#ifndef GMWCS_DECOMPOSITION_HPP
#define GMWCS_DECOMPOSITION_HPP

#include <optional>
#include <vector>

#include "gmwcs/graph.hpp"
#include "gmwcs/result.hpp"

namespace gmwcs {

/// The part of the graph hanging off the block at one cut vertex.
struct Branch {
    VertexId cut;
    std::vector<VertexId> vertices;  // includes `cut`
    std::vector<EdgeId> edges;
};

/// Split of an unrooted instance around its largest biconnected component.
///
/// `merged_branch_instance` is the union of all branches with every cut
/// vertex identified into the zero-weight root `merged_root`; edges keep
/// their ids. `residual_instance` is the same union without identification.
struct DecompositionPlan {
    std::vector<VertexId> block_vertices;
    std::vector<EdgeId> block_edges;
    std::vector<VertexId> cut_vertices;
    std::vector<Branch> branches;
    VertexId merged_root;
    Instance merged_branch_instance;
    Instance residual_instance;
};

/// Returns nullopt when decomposing is pointless: the graph is biconnected,
/// has no edges, or the largest block contains no cut vertex. Ties between
/// equally large blocks go to the one with the smallest vertex id.
/// Throws GraphError for rooted or disconnected instances.
std::optional<DecompositionPlan> plan_decomposition(const Instance &instance);

/// Solves an unrooted connected instance through the three spawned
/// sub-instances. `base_solve` handles the rooted branch instance and the
/// block instance; `pipeline_solve` handles the residual instance (which may
/// be disconnected). Falls back to `base_solve` on the whole instance when no
/// plan exists.
SolveResult solve_decomposed(const Instance &instance, const SolveFunction &base_solve,
                             const SolveFunction &pipeline_solve);

/// Per-branch rooted solutions recovered from a solution of the merged
/// branch instance: the identified root is mapped back to each cut vertex.
std::vector<Subgraph> split_branch_solution(const DecompositionPlan &plan, const Subgraph &merged_solution);

}  // namespace gmwcs

#endif  // GMWCS_DECOMPOSITION_HPP
