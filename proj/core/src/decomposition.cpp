#include "gmwcs/decomposition.hpp"

#include <algorithm>
#include <set>

namespace gmwcs {

namespace {

bool contains(const std::vector<VertexId> &sorted, VertexId v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

Branch collect_branch(const WeightedGraph &graph, VertexId cut, const std::vector<bool> &in_block_only,
                      const std::vector<bool> &block_edge) {
    Branch branch{cut, {}, {}};
    std::vector<bool> seen(graph.vertex_count(), false);
    std::vector<bool> edge_seen(graph.edge_count(), false);
    std::size_t start = graph.vertex_index(cut);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        branch.vertices.push_back(graph.vertex(v).id);
        for (std::size_t e : graph.incident(v)) {
            if (block_edge[e]) continue;
            std::size_t u = graph.opposite(e, v);
            if (in_block_only[u]) continue;
            if (!edge_seen[e]) {
                edge_seen[e] = true;
                branch.edges.push_back(graph.edge(e).id);
            }
            if (!seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
        }
    }
    std::sort(branch.vertices.begin(), branch.vertices.end());
    std::sort(branch.edges.begin(), branch.edges.end());
    return branch;
}

}  // namespace

std::optional<DecompositionPlan> plan_decomposition(const Instance &instance) {
    validate_instance(instance);
    if (instance.rooted()) throw GraphError("cut-vertex decomposition applies to unrooted instances only");
    const WeightedGraph &graph = instance.graph;
    const auto blocks = biconnected_decomposition(graph);
    if (blocks.components.empty()) return std::nullopt;

    std::size_t best = 0;
    std::vector<VertexId> best_vertices = vertices_of(graph, blocks.components[0]);
    for (std::size_t i = 1; i < blocks.components.size(); ++i) {
        auto vertices = vertices_of(graph, blocks.components[i]);
        if (vertices.size() > best_vertices.size() ||
            (vertices.size() == best_vertices.size() && vertices.front() < best_vertices.front())) {
            best = i;
            best_vertices = std::move(vertices);
        }
    }
    if (best_vertices.size() == graph.vertex_count()) return std::nullopt;

    DecompositionPlan plan;
    plan.block_vertices = best_vertices;
    plan.block_edges = blocks.components[best];
    for (VertexId c : blocks.cut_vertices)
        if (contains(plan.block_vertices, c)) plan.cut_vertices.push_back(c);
    if (plan.cut_vertices.empty()) return std::nullopt;

    std::vector<bool> in_block_only(graph.vertex_count(), false);
    for (VertexId v : plan.block_vertices)
        if (!contains(plan.cut_vertices, v)) in_block_only[graph.vertex_index(v)] = true;
    std::vector<bool> block_edge(graph.edge_count(), false);
    for (EdgeId e : plan.block_edges) block_edge[graph.edge_index(e)] = true;

    for (VertexId c : plan.cut_vertices) plan.branches.push_back(collect_branch(graph, c, in_block_only, block_edge));

    plan.merged_root = graph.next_vertex_id();
    GraphBuilder merged;
    GraphBuilder residual;
    merged.add_vertex(plan.merged_root, 0.0);
    for (const auto &branch : plan.branches) {
        for (VertexId v : branch.vertices) {
            residual.add_vertex(v, graph.weight(v));
            if (v != branch.cut) merged.add_vertex(v, graph.weight(v));
        }
        for (EdgeId e : branch.edges) {
            const Edge &edge = graph.edge(graph.edge_index(e));
            residual.add_edge(edge.id, edge.u, edge.v, edge.weight);
            VertexId u = edge.u == branch.cut ? plan.merged_root : edge.u;
            VertexId v = edge.v == branch.cut ? plan.merged_root : edge.v;
            merged.add_edge(edge.id, u, v, edge.weight);
        }
    }
    plan.merged_branch_instance = {merged.build(), plan.merged_root};
    plan.residual_instance = {residual.build(), std::nullopt};
    return plan;
}

std::vector<Subgraph> split_branch_solution(const DecompositionPlan &plan, const Subgraph &merged_solution) {
    const bool has_root = std::binary_search(merged_solution.vertices.begin(), merged_solution.vertices.end(),
                                             plan.merged_root);
    std::vector<Subgraph> out;
    for (const auto &branch : plan.branches) {
        Subgraph part;
        if (has_root) part.vertices.push_back(branch.cut);
        for (VertexId v : merged_solution.vertices)
            if (v != plan.merged_root && contains(branch.vertices, v)) part.vertices.push_back(v);
        for (EdgeId e : merged_solution.edges)
            if (std::binary_search(branch.edges.begin(), branch.edges.end(), e)) part.edges.push_back(e);
        part.normalize();
        out.push_back(std::move(part));
    }
    return out;
}

SolveResult solve_decomposed(const Instance &instance, const SolveFunction &base_solve,
                             const SolveFunction &pipeline_solve) {
    auto plan = plan_decomposition(instance);
    if (!plan) return base_solve(instance);
    const WeightedGraph &graph = instance.graph;

    // Step 1: best rooted subgraph of every branch at once.
    SolveResult branch_result = base_solve(plan->merged_branch_instance);
    std::vector<Subgraph> branch_solutions = split_branch_solution(*plan, branch_result.solution);

    // Step 2: the block, with every cut vertex carrying the weight of its
    // branch solution (cut vertex itself excluded).
    GraphBuilder core;
    for (VertexId v : plan->block_vertices) {
        double weight = graph.weight(v);
        auto it = std::lower_bound(plan->cut_vertices.begin(), plan->cut_vertices.end(), v);
        if (it != plan->cut_vertices.end() && *it == v) {
            const Subgraph &part = branch_solutions[static_cast<std::size_t>(it - plan->cut_vertices.begin())];
            double extra = 0.0;
            for (VertexId u : part.vertices)
                if (u != v) extra += graph.weight(u);
            for (EdgeId e : part.edges) extra += graph.weight(e);
            weight += extra;
        }
        core.add_vertex(v, weight);
    }
    for (EdgeId e : plan->block_edges) {
        const Edge &edge = graph.edge(graph.edge_index(e));
        core.add_edge(edge.id, edge.u, edge.v, edge.weight);
    }
    SolveResult core_result = base_solve({core.build(), std::nullopt});

    Subgraph through_block = core_result.solution;
    for (std::size_t i = 0; i < plan->cut_vertices.size(); ++i) {
        if (!std::binary_search(core_result.solution.vertices.begin(), core_result.solution.vertices.end(),
                                plan->cut_vertices[i]))
            continue;
        const Subgraph &part = branch_solutions[i];
        through_block.vertices.insert(through_block.vertices.end(), part.vertices.begin(), part.vertices.end());
        through_block.edges.insert(through_block.edges.end(), part.edges.begin(), part.edges.end());
    }
    through_block.normalize();

    // Step 3: subgraphs lying entirely inside one branch.
    SolveResult residual_result = pipeline_solve(plan->residual_instance);

    SolveResult result;
    result.stats += branch_result.stats;
    result.stats += core_result.stats;
    result.stats += residual_result.stats;

    const double block_weight = total_weight(graph, through_block);
    if (block_weight >= residual_result.weight) {
        result.solution = std::move(through_block);
        result.weight = block_weight;
    } else {
        result.solution = residual_result.solution;
        result.weight = residual_result.weight;
    }

    // Branch weights are exact only when step 1 was proven optimal; otherwise
    // every branch can improve by at most step 1's remaining gap in total.
    const double branch_gap = std::max(0.0, branch_result.upper_bound - branch_result.weight);
    result.upper_bound = std::max({result.weight, core_result.upper_bound + branch_gap, residual_result.upper_bound});

    const bool all_optimal = branch_result.status == SolveStatus::optimal &&
                             core_result.status == SolveStatus::optimal &&
                             residual_result.status == SolveStatus::optimal;
    result.status = all_optimal ? SolveStatus::optimal : SolveStatus::timeout;
    if (all_optimal) result.upper_bound = result.weight;
    return result;
}

}  // namespace gmwcs
