#include "gmwcs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gmwcs {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[b] = a;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

// Depth-first search over the integer points of a model with interval
// propagation on every row touched by the last assignment.
class PointSearch {
public:
    enum class Mode { all_points, best_point };

    PointSearch(const MipModel &model, Mode mode, bool enumerate_depths)
        : model_(model), mode_(mode), enumerate_depths_(enumerate_depths) {
        const auto vars = model.variables();
        const auto &graph = model.graph();
        values_.assign(vars.size(), std::numeric_limits<double>::quiet_NaN());
        assigned_.assign(vars.size(), false);

        for (const auto &v : graph.vertices()) order_.push_back(model.y(v.id));
        for (const auto &e : graph.edges()) order_.push_back(model.w(e.id));
        for (const auto &v : graph.vertices()) order_.push_back(model.r(v.id));
        for (std::size_t vi = 0; vi < graph.vertex_count(); ++vi) {
            const VertexId v = graph.vertex(vi).id;
            for (std::size_t e : graph.incident(vi)) {
                const Edge &edge = graph.edge(e);
                order_.push_back(model.x(edge.id, edge.v == v));
            }
        }
        if (enumerate_depths_)
            for (const auto &v : graph.vertices()) order_.push_back(model.d(v.id));

        rows_of_.resize(vars.size());
        const auto rows = model.constraints();
        for (std::size_t c = 0; c < rows.size(); ++c)
            for (auto [var, coef] : rows[c].terms) rows_of_[var].push_back(c);

        objective_coef_.assign(vars.size(), 0.0);
        for (auto [var, coef] : model.objective()) objective_coef_[var] += coef;
        // remaining_gain_[k]: best objective still obtainable from order_[k..]
        remaining_gain_.assign(order_.size() + 1, 0.0);
        for (std::size_t k = order_.size(); k-- > 0;)
            remaining_gain_[k] = remaining_gain_[k + 1] + std::max(0.0, objective_coef_[order_[k]]);
    }

    void run(const FeasibleVisitor &visit) {
        visit_ = &visit;
        for (const auto &row : model_.constraints())
            if (row.terms.empty() && !satisfies(row, values_)) return;
        descend(0, 0.0);
    }

    const std::optional<FeasiblePoint> &best() const { return best_; }

private:
    void descend(std::size_t k, double objective) {
        if (mode_ == Mode::best_point && best_ && objective + remaining_gain_[k] <= best_->objective) return;
        if (k == order_.size()) {
            leaf(objective);
            return;
        }
        const std::size_t var = order_[k];
        const MipVariable &info = model_.variables()[var];
        std::vector<double> domain;
        if (info.binary) {
            domain = objective_coef_[var] > 0.0 ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0};
        } else {
            for (double d = std::ceil(info.lower); d <= info.upper; d += 1.0) domain.push_back(d);
        }
        for (double value : domain) {
            values_[var] = value;
            assigned_[var] = true;
            if (consistent(var)) descend(k + 1, objective + objective_coef_[var] * value);
        }
        assigned_[var] = false;
        values_[var] = std::numeric_limits<double>::quiet_NaN();
    }

    // Every row containing `var` can still be satisfied by some completion.
    bool consistent(std::size_t var) const {
        const auto rows = model_.constraints();
        const auto vars = model_.variables();
        for (std::size_t c : rows_of_[var]) {
            const auto &row = rows[c];
            double low = 0.0, high = 0.0;
            for (auto [v, coef] : row.terms) {
                if (assigned_[v]) {
                    low += coef * values_[v];
                    high += coef * values_[v];
                } else {
                    const double a = coef * vars[v].lower;
                    const double b = coef * vars[v].upper;
                    low += std::min(a, b);
                    high += std::max(a, b);
                }
            }
            constexpr double eps = 1e-9;
            switch (row.sense) {
                case Sense::less_equal:
                    if (low > row.rhs + eps) return false;
                    break;
                case Sense::greater_equal:
                    if (high < row.rhs - eps) return false;
                    break;
                case Sense::equal:
                    if (low > row.rhs + eps || high < row.rhs - eps) return false;
                    break;
            }
        }
        return true;
    }

    void leaf(double objective) {
        if (!enumerate_depths_ && !solve_depths()) return;
        FeasiblePoint point{Assignment{values_}, objective};
        if (mode_ == Mode::best_point) {
            if (!best_ || objective > best_->objective) best_ = std::move(point);
        } else {
            (*visit_)(point);
        }
    }

    // Depth rows at fixed binaries are difference constraints
    // a*d_i - a*d_j (<=|>=|=) c plus bounds; Bellman-Ford decides them.
    bool solve_depths() {
        const auto vars = model_.variables();
        std::vector<std::size_t> depth_vars;
        std::vector<std::size_t> slot(vars.size(), std::numeric_limits<std::size_t>::max());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i].binary) continue;
            slot[i] = depth_vars.size() + 1;
            depth_vars.push_back(i);
        }
        struct Arc {
            std::size_t from, to;
            double weight;
        };
        std::vector<Arc> arcs;
        // node 0 is the zero reference
        for (std::size_t i : depth_vars) {
            arcs.push_back({0, slot[i], vars[i].upper});
            arcs.push_back({slot[i], 0, -vars[i].lower});
        }
        // x_j - x_i <= c  ->  arc i -> j with weight c
        auto add_le = [&](std::size_t plus, std::size_t minus, double c) {
            arcs.push_back({minus == 0 ? 0 : minus, plus == 0 ? 0 : plus, c});
        };
        for (const auto &row : model_.constraints()) {
            double constant = 0.0;
            std::vector<std::pair<std::size_t, double>> free;
            for (auto [v, coef] : row.terms) {
                if (vars[v].binary)
                    constant += coef * values_[v];
                else
                    free.emplace_back(v, coef);
            }
            if (free.empty()) continue;
            const double rhs = row.rhs - constant;
            std::size_t plus = 0, minus = 0;
            double scale = 0.0;
            if (free.size() == 1) {
                scale = std::abs(free[0].second);
                (free[0].second > 0 ? plus : minus) = slot[free[0].first];
            } else if (free.size() == 2 && free[0].second == -free[1].second) {
                scale = std::abs(free[0].second);
                const bool first_positive = free[0].second > 0;
                plus = slot[free[first_positive ? 0 : 1].first];
                minus = slot[free[first_positive ? 1 : 0].first];
            } else {
                throw std::logic_error("row " + row.name + " is not a difference constraint in the depth variables");
            }
            // row: scale * (d_plus - d_minus) sense rhs
            const double bound = rhs / scale;
            if (row.sense != Sense::greater_equal) add_le(plus, minus, bound);
            if (row.sense != Sense::less_equal) add_le(minus, plus, -bound);
        }

        const std::size_t nodes = depth_vars.size() + 1;
        std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
        dist[0] = 0.0;
        for (std::size_t round = 0; round < nodes; ++round) {
            bool relaxed = false;
            for (const auto &arc : arcs) {
                if (dist[arc.from] + arc.weight < dist[arc.to] - 1e-12) {
                    dist[arc.to] = dist[arc.from] + arc.weight;
                    relaxed = true;
                }
            }
            if (!relaxed) break;
            if (round + 1 == nodes) return false;  // negative cycle
        }
        for (std::size_t i : depth_vars) values_[i] = dist[slot[i]] - dist[0];
        for (const auto &row : model_.constraints())
            if (!satisfies(row, values_, 1e-9)) return false;
        return true;
    }

    const MipModel &model_;
    Mode mode_;
    bool enumerate_depths_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<std::size_t>> rows_of_;
    std::vector<double> objective_coef_;
    std::vector<double> remaining_gain_;
    std::vector<double> values_;
    std::vector<bool> assigned_;
    const FeasibleVisitor *visit_ = nullptr;
    std::optional<FeasiblePoint> best_;
};

}  // namespace

std::optional<std::vector<EdgeId>> best_edges_for_vertex_set(const WeightedGraph &graph,
                                                            std::span<const VertexId> vertices) {
    if (vertices.empty()) return std::vector<EdgeId>{};
    std::vector<std::size_t> local(graph.vertex_count(), std::numeric_limits<std::size_t>::max());
    std::size_t count = 0;
    for (VertexId v : vertices) {
        std::size_t index = graph.vertex_index(v);
        if (local[index] == std::numeric_limits<std::size_t>::max()) local[index] = count++;
    }

    DisjointSets sets(count);
    std::size_t pieces = count;
    std::vector<EdgeId> chosen;
    std::vector<std::size_t> rest;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        auto [a, b] = graph.ends(e);
        if (local[a] == std::numeric_limits<std::size_t>::max() || local[b] == std::numeric_limits<std::size_t>::max())
            continue;
        if (graph.edge(e).weight > 0.0) {
            chosen.push_back(graph.edge(e).id);
            if (sets.unite(local[a], local[b])) --pieces;
        } else {
            rest.push_back(e);
        }
    }
    std::stable_sort(rest.begin(), rest.end(),
                     [&](std::size_t x, std::size_t y) { return graph.edge(x).weight > graph.edge(y).weight; });
    for (std::size_t e : rest) {
        auto [a, b] = graph.ends(e);
        if (sets.unite(local[a], local[b])) {
            chosen.push_back(graph.edge(e).id);
            --pieces;
        }
    }
    if (pieces != 1) return std::nullopt;
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

SolveResult brute_force(const Instance &instance, bool allow_empty) {
    validate_instance(instance);
    const WeightedGraph &graph = instance.graph;
    const std::size_t n = graph.vertex_count();
    if (n > kBruteForceMaxVertices)
        throw OracleSizeError("brute force is limited to " + std::to_string(kBruteForceMaxVertices) + " vertices");

    std::optional<SolveResult> best;
    if (!instance.rooted() && allow_empty) best = SolveResult{};

    const std::uint32_t root_bit = instance.rooted() ? 1u << graph.vertex_index(*instance.root) : 0u;
    std::vector<VertexId> subset;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if ((mask & root_bit) != root_bit) continue;
        subset.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) subset.push_back(graph.vertex(i).id);
        auto edges = best_edges_for_vertex_set(graph, subset);
        if (!edges) continue;
        Subgraph candidate{subset, std::move(*edges)};
        const double weight = total_weight(graph, candidate);
        if (!best || weight > best->weight) best = SolveResult{std::move(candidate), weight, weight, SolveStatus::optimal, {}};
    }
    if (!best) throw GraphError("instance has no non-empty solution");
    best->upper_bound = best->weight;
    return *best;
}

void enumerate_feasible(const MipModel &model, const FeasibleVisitor &visit) {
    if (model.graph().vertex_count() > kEnumerateMaxVertices)
        throw OracleSizeError("feasible-point enumeration is limited to " + std::to_string(kEnumerateMaxVertices) +
                              " vertices");
    PointSearch search(model, PointSearch::Mode::all_points, true);
    search.run(visit);
}

std::vector<FeasiblePoint> enumerate_feasible(const MipModel &model) {
    std::vector<FeasiblePoint> points;
    enumerate_feasible(model, [&](const FeasiblePoint &p) { points.push_back(p); });
    return points;
}

std::optional<FeasiblePoint> maximize_integer(const MipModel &model) {
    if (model.graph().vertex_count() > kBinaryEnumerateMaxVertices)
        throw OracleSizeError("integer maximization is limited to " + std::to_string(kBinaryEnumerateMaxVertices) +
                              " vertices");
    PointSearch search(model, PointSearch::Mode::best_point, false);
    FeasibleVisitor ignore = [](const FeasiblePoint &) {};
    search.run(ignore);
    return search.best();
}

}  // namespace gmwcs
