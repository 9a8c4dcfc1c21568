#include "gmwcs/reductions.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gmwcs {

namespace {

struct EdgeRecord {
    std::uint32_t u;
    std::uint32_t v;
    double weight;
};

// Mutable multigraph keyed by raw ids; ordered containers keep every sweep
// deterministic.
class WorkGraph {
public:
    explicit WorkGraph(const Instance &instance) : root_(instance.root) {
        for (const auto &v : instance.graph.vertices()) add_vertex(v.id.value, v.weight);
        for (const auto &e : instance.graph.edges()) add_edge(e.id.value, e.u.value, e.v.value, e.weight);
        next_vertex_ = instance.graph.next_vertex_id().value;
        next_edge_ = instance.graph.next_edge_id().value;
    }

    Instance to_instance() const {
        GraphBuilder builder;
        for (const auto &[id, weight] : vertices_) builder.add_vertex(VertexId{id}, weight);
        for (const auto &[id, e] : edges_) builder.add_edge(EdgeId{id}, VertexId{e.u}, VertexId{e.v}, e.weight);
        return {builder.build(), root_};
    }

    void add_vertex(std::uint32_t id, double weight) {
        vertices_[id] = weight;
        incident_[id];
    }
    void add_edge(std::uint32_t id, std::uint32_t u, std::uint32_t v, double weight) {
        edges_[id] = {u, v, weight};
        incident_[u].insert(id);
        incident_[v].insert(id);
    }
    void remove_edge(std::uint32_t id) {
        const auto &e = edges_.at(id);
        incident_[e.u].erase(id);
        incident_[e.v].erase(id);
        edges_.erase(id);
    }
    void remove_vertex(std::uint32_t id) {
        vertices_.erase(id);
        incident_.erase(id);
    }
    std::uint32_t other(std::uint32_t edge, std::uint32_t vertex) const {
        const auto &e = edges_.at(edge);
        return e.u == vertex ? e.v : e.u;
    }

    bool has_edge(std::uint32_t id) const { return edges_.contains(id); }
    bool has_vertex(std::uint32_t id) const { return vertices_.contains(id); }
    bool is_root(std::uint32_t id) const { return root_ && root_->value == id; }

    bool normalize_all_parallels(ReductionTrace &trace) {
        bool changed = false;
        std::vector<std::uint32_t> ids;
        for (const auto &[id, _] : vertices_) ids.push_back(id);
        for (std::uint32_t v : ids) changed |= normalize_around(v, trace);
        return changed;
    }

    bool rule1_sweep(ReductionTrace &trace) {
        bool changed = false;
        std::vector<std::uint32_t> ids;
        for (const auto &[id, _] : edges_) ids.push_back(id);
        for (std::uint32_t id : ids) {
            auto it = edges_.find(id);
            if (it == edges_.end()) continue;
            const EdgeRecord e = it->second;
            const double wu = vertices_.at(e.u);
            const double wv = vertices_.at(e.v);
            if (e.weight >= 0.0 && e.weight + wu >= 0.0 && e.weight + wv >= 0.0) {
                contract(id, trace);
                changed = true;
            }
        }
        return changed;
    }

    bool rule2_sweep(ReductionTrace &trace) {
        bool changed = false;
        std::vector<std::uint32_t> ids;
        for (const auto &[id, _] : vertices_) ids.push_back(id);
        for (std::uint32_t v : ids) {
            if (!has_vertex(v) || is_root(v)) continue;
            const auto &inc = incident_.at(v);
            if (inc.size() != 2) continue;
            const std::uint32_t first = *inc.begin();
            const std::uint32_t second = *std::next(inc.begin());
            const std::uint32_t a = other(first, v);
            const std::uint32_t b = other(second, v);
            if (a == b) continue;
            const double wv = vertices_.at(v);
            const double w1 = edges_.at(first).weight;
            const double w2 = edges_.at(second).weight;
            if (!(wv < 0.0 && w1 < 0.0 && w2 < 0.0)) continue;

            ChainReplace record{EdgeId{next_edge_++}, VertexId{a}, VertexId{b}, wv + w1 + w2,
                                VertexId{v}, EdgeId{first}, EdgeId{second}};
            remove_edge(first);
            remove_edge(second);
            remove_vertex(v);
            add_edge(record.created.value, a, b, record.weight);
            trace.records.emplace_back(std::move(record));
            normalize_pair(a, b, trace);
            changed = true;
        }
        return changed;
    }

private:
    void contract(std::uint32_t id, ReductionTrace &trace) {
        const EdgeRecord e = edges_.at(id);
        EdgeContraction record;
        record.merged = VertexId{next_vertex_++};
        record.u = VertexId{e.u};
        record.v = VertexId{e.v};
        record.edge = EdgeId{id};
        record.weight = e.weight + vertices_.at(e.u) + vertices_.at(e.v);
        record.carries_root = is_root(e.u) || is_root(e.v);

        remove_edge(id);
        const std::uint32_t merged = record.merged.value;
        add_vertex(merged, record.weight);
        for (std::uint32_t end : {e.u, e.v}) {
            const std::set<std::uint32_t> around = incident_.at(end);
            for (std::uint32_t f : around) {
                auto &rec = edges_.at(f);
                if (rec.u == end) rec.u = merged;
                if (rec.v == end) rec.v = merged;
                incident_[merged].insert(f);
                record.remapped.push_back({EdgeId{f}, VertexId{end}});
            }
            remove_vertex(end);
        }
        if (record.carries_root) root_ = record.merged;
        trace.records.emplace_back(std::move(record));
        normalize_around(merged, trace);
    }

    bool normalize_around(std::uint32_t vertex, ReductionTrace &trace) {
        std::set<std::uint32_t> neighbours;
        for (std::uint32_t f : incident_.at(vertex)) neighbours.insert(other(f, vertex));
        bool changed = false;
        for (std::uint32_t t : neighbours) changed |= normalize_pair(vertex, t, trace);
        return changed;
    }

    // Merge the non-negative edges between a and b into one, then keep only
    // the heaviest of what remains (smallest id on ties).
    bool normalize_pair(std::uint32_t a, std::uint32_t b, ReductionTrace &trace) {
        std::vector<std::uint32_t> group;
        for (std::uint32_t f : incident_.at(a))
            if (other(f, a) == b) group.push_back(f);
        if (group.size() < 2) return false;

        std::vector<std::uint32_t> non_negative;
        for (std::uint32_t f : group)
            if (edges_.at(f).weight >= 0.0) non_negative.push_back(f);
        if (non_negative.size() >= 2) {
            ParallelMerge merge{EdgeId{next_edge_++}, VertexId{a}, VertexId{b}, 0.0, {}};
            for (std::uint32_t f : non_negative) {
                merge.weight += edges_.at(f).weight;
                merge.merged.push_back(EdgeId{f});
                remove_edge(f);
            }
            add_edge(merge.kept.value, a, b, merge.weight);
            std::erase_if(group, [&](std::uint32_t f) { return !has_edge(f); });
            group.push_back(merge.kept.value);
            trace.records.emplace_back(std::move(merge));
        }
        if (group.size() >= 2) {
            std::uint32_t best = group.front();
            for (std::uint32_t f : group) {
                const double wf = edges_.at(f).weight;
                const double wb = edges_.at(best).weight;
                if (wf > wb || (wf == wb && f < best)) best = f;
            }
            ParallelDrop drop{EdgeId{best}, {}};
            for (std::uint32_t f : group) {
                if (f == best) continue;
                drop.dropped.push_back(EdgeId{f});
                remove_edge(f);
            }
            trace.records.emplace_back(std::move(drop));
        }
        return true;
    }

    std::map<std::uint32_t, double> vertices_;
    std::map<std::uint32_t, EdgeRecord> edges_;
    std::map<std::uint32_t, std::set<std::uint32_t>> incident_;
    std::optional<VertexId> root_;
    std::uint32_t next_vertex_ = 0;
    std::uint32_t next_edge_ = 0;
};

}  // namespace

bool apply_rule1(Instance &instance, ReductionTrace &trace) {
    validate_instance(instance);
    WorkGraph work(instance);
    bool changed = work.normalize_all_parallels(trace);
    changed |= work.rule1_sweep(trace);
    if (changed) instance = work.to_instance();
    return changed;
}

bool apply_rule2(Instance &instance, ReductionTrace &trace) {
    validate_instance(instance);
    WorkGraph work(instance);
    bool changed = work.normalize_all_parallels(trace);
    changed |= work.rule2_sweep(trace);
    if (changed) instance = work.to_instance();
    return changed;
}

Preprocessed preprocess(const Instance &instance) {
    validate_instance(instance);
    Preprocessed out;
    WorkGraph work(instance);
    work.normalize_all_parallels(out.trace);
    while (true) {
        while (work.rule1_sweep(out.trace)) {
        }
        if (!work.rule2_sweep(out.trace)) break;
    }
    out.reduced = work.to_instance();
    return out;
}

WeightedGraph replay(const WeightedGraph &original, const ReductionTrace &trace) {
    std::map<std::uint32_t, double> vertices;
    std::map<std::uint32_t, EdgeRecord> edges;
    for (const auto &v : original.vertices()) vertices[v.id.value] = v.weight;
    for (const auto &e : original.edges()) edges[e.id.value] = {e.u.value, e.v.value, e.weight};

    auto take_edge = [&](EdgeId id) {
        auto it = edges.find(id.value);
        if (it == edges.end()) throw GraphError("trace consumes missing edge " + to_string(id));
        EdgeRecord rec = it->second;
        edges.erase(it);
        return rec;
    };
    auto take_vertex = [&](VertexId id) {
        auto it = vertices.find(id.value);
        if (it == vertices.end()) throw GraphError("trace consumes missing vertex " + to_string(id));
        double w = it->second;
        vertices.erase(it);
        return w;
    };

    for (const auto &record : trace.records) {
        if (const auto *c = std::get_if<EdgeContraction>(&record)) {
            const EdgeRecord e = take_edge(c->edge);
            const double wu = take_vertex(c->u);
            const double wv = take_vertex(c->v);
            vertices[c->merged.value] = e.weight + wu + wv;
            for (const auto &remap : c->remapped) {
                auto &rec = edges.at(remap.edge.value);
                if (rec.u == remap.from.value) rec.u = c->merged.value;
                if (rec.v == remap.from.value) rec.v = c->merged.value;
            }
        } else if (const auto *m = std::get_if<ParallelMerge>(&record)) {
            double sum = 0.0;
            for (EdgeId f : m->merged) sum += take_edge(f).weight;
            edges[m->kept.value] = {m->a.value, m->b.value, sum};
        } else if (const auto *d = std::get_if<ParallelDrop>(&record)) {
            for (EdgeId f : d->dropped) take_edge(f);
        } else if (const auto *r = std::get_if<ChainReplace>(&record)) {
            const double w1 = take_edge(r->first).weight;
            const double w2 = take_edge(r->second).weight;
            const double wv = take_vertex(r->vertex);
            edges[r->created.value] = {r->a.value, r->b.value, wv + w1 + w2};
        }
    }

    GraphBuilder builder;
    for (const auto &[id, w] : vertices) builder.add_vertex(VertexId{id}, w);
    for (const auto &[id, e] : edges) builder.add_edge(EdgeId{id}, VertexId{e.u}, VertexId{e.v}, e.weight);
    return builder.build();
}

Subgraph lift(const ReductionTrace &trace, const WeightedGraph &reduced, const Subgraph &solution) {
    validate_subgraph(reduced, solution);
    std::set<VertexId> vertices(solution.vertices.begin(), solution.vertices.end());
    std::set<EdgeId> edges(solution.edges.begin(), solution.edges.end());

    for (auto it = trace.records.rbegin(); it != trace.records.rend(); ++it) {
        if (const auto *c = std::get_if<EdgeContraction>(&*it)) {
            if (vertices.erase(c->merged)) {
                vertices.insert(c->u);
                vertices.insert(c->v);
                edges.insert(c->edge);
            }
        } else if (const auto *m = std::get_if<ParallelMerge>(&*it)) {
            if (edges.erase(m->kept)) edges.insert(m->merged.begin(), m->merged.end());
        } else if (const auto *r = std::get_if<ChainReplace>(&*it)) {
            if (edges.erase(r->created)) {
                vertices.insert(r->vertex);
                edges.insert(r->first);
                edges.insert(r->second);
            }
        }
    }

    Subgraph out{{vertices.begin(), vertices.end()}, {edges.begin(), edges.end()}};
    return out;
}

}  // namespace gmwcs
