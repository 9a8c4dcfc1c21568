#include "gmwcs/separation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace gmwcs {

namespace {

// Residual capacities at or below this are treated as saturated.
constexpr double kResidualEpsilon = 1e-12;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

MaxFlowResult max_flow(const FlowNetwork &network) {
    const std::size_t n = network.vertex_count;
    if (network.source >= n || network.sink >= n) throw std::invalid_argument("source or sink out of range");
    if (network.source == network.sink) throw std::invalid_argument("source and sink must differ");

    // Residual graph: arc 2i is the original arc i, 2i+1 its reverse.
    std::vector<double> residual(2 * network.arcs.size(), 0.0);
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t i = 0; i < network.arcs.size(); ++i) {
        const auto &arc = network.arcs[i];
        if (arc.from >= n || arc.to >= n) throw std::invalid_argument("arc endpoint out of range");
        if (!std::isfinite(arc.capacity) || arc.capacity < 0.0) throw std::invalid_argument("invalid arc capacity");
        residual[2 * i] = arc.capacity;
        out[arc.from].push_back(2 * i);
        out[arc.to].push_back(2 * i + 1);
    }
    auto head = [&](std::size_t r) {
        const auto &arc = network.arcs[r / 2];
        return r % 2 == 0 ? arc.to : arc.from;
    };

    MaxFlowResult result;
    std::vector<std::size_t> via(n);
    while (true) {
        std::fill(via.begin(), via.end(), kNone);
        std::deque<std::size_t> queue{network.source};
        std::vector<bool> seen(n, false);
        seen[network.source] = true;
        while (!queue.empty() && !seen[network.sink]) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t r : out[v]) {
                const std::size_t u = head(r);
                if (seen[u] || residual[r] <= kResidualEpsilon) continue;
                seen[u] = true;
                via[u] = r;
                queue.push_back(u);
            }
        }
        if (!seen[network.sink]) {
            for (std::size_t v = 0; v < n; ++v)
                if (seen[v]) result.source_side.push_back(v);
            for (std::size_t i = 0; i < network.arcs.size(); ++i)
                if (seen[network.arcs[i].from] && !seen[network.arcs[i].to]) result.cut_arcs.push_back(i);
            break;
        }

        double bottleneck = std::numeric_limits<double>::infinity();
        for (std::size_t v = network.sink; v != network.source; v = head(via[v] ^ 1))
            bottleneck = std::min(bottleneck, residual[via[v]]);
        for (std::size_t v = network.sink; v != network.source; v = head(via[v] ^ 1)) {
            residual[via[v]] -= bottleneck;
            residual[via[v] ^ 1] += bottleneck;
        }
        result.value += bottleneck;
        ++result.augmentations;
    }
    return result;
}

std::vector<CutConstraint> find_violated_cuts(const WeightedGraph &graph, VertexId root,
                                              std::span<const double> w_values, std::span<const double> y_values,
                                              double tolerance) {
    if (w_values.size() != graph.edge_count() || y_values.size() != graph.vertex_count())
        throw std::invalid_argument("relaxation values do not match the graph");
    FlowNetwork network;
    network.vertex_count = graph.vertex_count();
    network.source = graph.vertex_index(root);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        auto [a, b] = graph.ends(e);
        const double capacity = std::clamp(w_values[e], 0.0, 1.0);
        network.arcs.push_back({a, b, capacity});
        network.arcs.push_back({b, a, capacity});
    }

    std::vector<CutConstraint> cuts;
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        if (v == network.source || y_values[v] <= tolerance) continue;
        network.sink = v;
        const MaxFlowResult flow = max_flow(network);
        if (flow.value >= y_values[v] - tolerance) continue;

        std::vector<bool> source_side(graph.vertex_count(), false);
        for (std::size_t s : flow.source_side) source_side[s] = true;
        CutConstraint cut{graph.vertex(v).id, {}, 0.0};
        for (std::size_t e = 0; e < graph.edge_count(); ++e) {
            auto [a, b] = graph.ends(e);
            if (source_side[a] != source_side[b]) {
                cut.edges.push_back(graph.edge(e).id);
                cut.capacity += std::clamp(w_values[e], 0.0, 1.0);
            }
        }
        cuts.push_back(std::move(cut));
    }
    return cuts;
}

LinearConstraint to_linear_constraint(const MipModel &model, const CutConstraint &cut, std::size_t serial) {
    LinearConstraint row{"cut" + std::to_string(serial) + "[" + to_string(cut.target) + "]",
                         ConstraintFamily::connectivity_cut, {}, Sense::less_equal, 0.0};
    row.terms.emplace_back(model.y(cut.target), 1.0);
    for (EdgeId e : cut.edges) row.terms.emplace_back(model.w(e), -1.0);
    std::sort(row.terms.begin(), row.terms.end());
    return row;
}

}  // namespace gmwcs
