#include "gmwcs/solver.hpp"

#include <algorithm>
#include <limits>

#include "gmwcs/decomposition.hpp"
#include "gmwcs/formulation.hpp"
#include "gmwcs/reductions.hpp"
#include "gmwcs/separation.hpp"

namespace gmwcs {

namespace {

bool past(const SolveConfig &config) {
    return config.deadline && std::chrono::steady_clock::now() >= *config.deadline;
}

// Keeps the heavier of two results; bounds combine by max because the two
// cover disjoint parts of the solution space.
void absorb(SolveResult &into, const SolveResult &other, bool &have) {
    into.stats += other.stats;
    if (!have) {
        into.solution = other.solution;
        into.weight = other.weight;
        into.upper_bound = other.upper_bound;
        into.status = other.status;
        have = true;
        return;
    }
    if (other.weight > into.weight) {
        into.solution = other.solution;
        into.weight = other.weight;
    }
    into.upper_bound = std::max(into.upper_bound, other.upper_bound);
    if (other.status == SolveStatus::timeout) into.status = SolveStatus::timeout;
}

void finalize(SolveResult &result) {
    if (result.status == SolveStatus::optimal)
        result.upper_bound = result.weight;
    else
        result.upper_bound = std::max(result.upper_bound, result.weight);
}

SolveResult run_engine(const Instance &instance, const SolveConfig &config) {
    if (config.engine == Engine::branch_and_bound) return branch_and_bound(instance, config);

    if (!config.backend_factory) throw ConfigError("the cut-loop engine needs a relaxation backend");
    if (instance.rooted()) {
        auto backend = config.backend_factory();
        return backend_cut_loop(instance, *backend, config);
    }
    // Unrooted: the best over every choice of root, plus the empty subgraph.
    SolveResult best;
    bool have = false;
    if (config.allow_empty_solution) have = true;
    for (const auto &v : instance.graph.vertices()) {
        auto backend = config.backend_factory();
        absorb(best, backend_cut_loop({instance.graph, v.id}, *backend, config), have);
    }
    if (!have) throw GraphError("instance has no non-empty solution");
    finalize(best);
    return best;
}

SolveResult solve_connected(const Instance &instance, const SolveConfig &config) {
    std::optional<Preprocessed> reduced;
    if (config.preprocess) reduced = preprocess(instance);
    const Instance &work = reduced ? reduced->reduced : instance;

    SolveResult result;
    if (config.decompose && !work.rooted()) {
        SolveFunction base = [&](const Instance &sub) { return run_engine(sub, config); };
        SolveFunction pipeline = [&](const Instance &sub) { return solve(sub, config); };
        result = solve_decomposed(work, base, pipeline);
    } else {
        result = run_engine(work, config);
    }

    if (reduced) result.solution = lift(reduced->trace, work.graph, result.solution);
    result.weight = total_weight(instance.graph, result.solution);

    // Degree-2 elimination drops the singleton of the eliminated vertex, which
    // only matters when the empty answer is not available.
    if (reduced && !config.allow_empty_solution && !instance.rooted()) {
        for (const auto &v : instance.graph.vertices()) {
            if (!result.solution.empty() && v.weight <= result.weight) continue;
            result.solution = Subgraph{{v.id}, {}};
            result.weight = v.weight;
        }
    }
    finalize(result);
    return result;
}

}  // namespace

SolveResult solve(const Instance &instance, const SolveConfig &config) {
    validate_instance(instance);
    if (config.worker_count < 1) throw ConfigError("worker_count must be positive");
    if (config.time_limit_seconds && !(*config.time_limit_seconds >= 0.0)) throw ConfigError("time limit must be non-negative");
    if (config.engine == Engine::backend_cut_loop && !config.backend_factory)
        throw ConfigError("the cut-loop engine needs a relaxation backend");

    SolveConfig local = config;
    if (!local.deadline && local.time_limit_seconds)
        local.deadline = std::chrono::steady_clock::now() +
                         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(*local.time_limit_seconds));

    const auto components = connected_components(instance.graph);
    if (instance.rooted()) {
        for (const auto &component : components)
            if (component.has_vertex(*instance.root)) return solve_connected({component, instance.root}, local);
    }

    SolveResult result;
    bool have = false;
    if (local.allow_empty_solution) have = true;
    for (const auto &component : components) absorb(result, solve_connected({component, std::nullopt}, local), have);
    if (!have) throw GraphError("instance has no non-empty solution");
    finalize(result);
    return result;
}

SolveResult backend_cut_loop(const Instance &instance, RelaxationBackend &backend, const SolveConfig &config) {
    validate_instance(instance);
    if (!instance.rooted()) throw ConfigError("the cut loop needs a rooted instance");
    const VertexId root = *instance.root;
    const WeightedGraph &graph = instance.graph;

    ModelOptions options;
    options.symmetry_breaking = config.symmetry_breaking;
    options.bfs_restriction = config.bfs_restriction;
    options.allow_empty = config.allow_empty_solution;
    MipModel model = build_model(instance, options);
    backend.load(model);

    SolveResult result;
    RelaxationSolution point;
    std::vector<double> w_values(graph.edge_count()), y_values(graph.vertex_count());
    bool interrupted = false;
    while (true) {
        point = backend.solve();
        ++result.stats.cut_rounds;
        if (point.values.size() != model.variables().size()) throw BackendError("backend returned a malformed point");
        for (const auto &e : graph.edges()) w_values[graph.edge_index(e.id)] = point.values[model.w(e.id)];
        for (const auto &v : graph.vertices()) y_values[graph.vertex_index(v.id)] = point.values[model.y(v.id)];

        const auto cuts = find_violated_cuts(graph, root, w_values, y_values);
        if (cuts.empty()) break;
        std::vector<LinearConstraint> rows;
        for (const auto &cut : cuts) rows.push_back(to_linear_constraint(model, cut, result.stats.cuts_added++));
        for (const auto &row : rows) model.add_constraint(row);
        backend.add_constraints(rows);
        if (past(config)) {
            interrupted = true;
            break;
        }
    }
    const double loop_bound = point.objective;

    if (point.integral && !interrupted) {
        const auto violations = check_assignment(model, Assignment{point.values}, 1e-6);
        if (!violations.empty()) throw BackendError("backend point violates " + violations.front());
        Subgraph decoded = decode_subgraph(model, point.values);
        if (!is_connected(graph, decoded) ||
            !std::binary_search(decoded.vertices.begin(), decoded.vertices.end(), root))
            throw BackendError("backend point does not encode a rooted connected subgraph");
        result.solution = std::move(decoded);
        result.weight = total_weight(graph, result.solution);
        result.upper_bound = result.weight;
        result.status = SolveStatus::optimal;
        return result;
    }

    SolveResult primal = branch_and_bound(instance, config);
    result.solution = std::move(primal.solution);
    result.weight = primal.weight;
    result.stats += primal.stats;
    result.status = primal.status;
    result.upper_bound = std::max(result.weight, std::min(loop_bound, primal.upper_bound));
    finalize(result);
    return result;
}

}  // namespace gmwcs
