#include "gmwcs/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gmwcs/format.hpp"

namespace gmwcs {

namespace {

std::string id_text(VertexId v) { return std::to_string(v.value); }
std::string id_text(EdgeId e) { return std::to_string(e.value); }

LinearConstraint make_row(std::string name, ConstraintFamily family,
                          std::initializer_list<std::pair<std::size_t, double>> terms, Sense sense, double rhs) {
    LinearConstraint row{std::move(name), family, {}, sense, rhs};
    for (auto [var, coef] : terms)
        if (coef != 0.0) row.terms.emplace_back(var, coef);
    std::sort(row.terms.begin(), row.terms.end());
    return row;
}

double row_activity(const LinearConstraint &row, std::span<const double> values) {
    double sum = 0.0;
    for (auto [var, coef] : row.terms) sum += coef * values[var];
    return sum;
}

}  // namespace

bool root_order_before(const WeightedGraph &graph, VertexId before, VertexId after) {
    const double a = graph.weight(before);
    const double b = graph.weight(after);
    return a < b || (a == b && before < after);
}

std::size_t MipModel::x(VertexId tail, VertexId head) const {
    const std::size_t t = graph_.vertex_index(tail);
    for (std::size_t e : graph_.incident(t)) {
        if (graph_.opposite(e, t) != graph_.vertex_index(head)) continue;
        const Edge &edge = graph_.edge(e);
        return x(edge.id, edge.u == tail);
    }
    throw GraphError("no edge between " + to_string(tail) + " and " + to_string(head));
}

std::size_t MipModel::count(ConstraintFamily family) const {
    return static_cast<std::size_t>(std::count_if(constraints_.begin(), constraints_.end(),
                                                  [&](const LinearConstraint &c) { return c.family == family; }));
}

std::optional<std::size_t> MipModel::find_variable(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name) return i;
    return std::nullopt;
}

void MipModel::add_constraint(LinearConstraint constraint) {
    for (auto [var, coef] : constraint.terms) {
        if (var >= variables_.size()) throw std::invalid_argument("constraint " + constraint.name + " references an unknown variable");
        if (!std::isfinite(coef)) throw std::invalid_argument("constraint " + constraint.name + " has a non-finite coefficient");
    }
    if (!std::isfinite(constraint.rhs)) throw std::invalid_argument("constraint " + constraint.name + " has a non-finite right-hand side");
    constraints_.push_back(std::move(constraint));
}

double MipModel::evaluate_objective(std::span<const double> values) const {
    double sum = 0.0;
    for (auto [var, coef] : objective_) sum += coef * values[var];
    return sum;
}

MipModel build_model(const Instance &instance, const ModelOptions &options) {
    validate_instance(instance);
    const WeightedGraph &graph = instance.graph;
    if (graph.empty()) throw GraphError("cannot build a model for an empty graph");
    if (graph.has_parallel_edges()) throw GraphError("model requires a graph without parallel edges");
    if (!is_connected(graph)) throw GraphError("model requires a connected graph");

    MipModel model;
    model.graph_ = graph;
    model.root_ = instance.root;
    model.options_ = options;
    const double n = static_cast<double>(graph.vertex_count());

    auto &vars = model.variables_;
    model.y_offset_ = vars.size();
    for (const auto &v : graph.vertices())
        vars.push_back({VariableKind::vertex_selected, "y_" + id_text(v.id), v.id, {}, {}, 0.0, 1.0, true});
    model.w_offset_ = vars.size();
    for (const auto &e : graph.edges())
        vars.push_back({VariableKind::edge_selected, "w_" + id_text(e.id), {}, {}, e.id, 0.0, 1.0, true});
    model.x_offset_ = vars.size();
    for (const auto &e : graph.edges()) {
        vars.push_back({VariableKind::arc_selected, "x_" + id_text(e.u) + "_" + id_text(e.v), e.u, e.v, e.id, 0.0, 1.0, true});
        vars.push_back({VariableKind::arc_selected, "x_" + id_text(e.v) + "_" + id_text(e.u), e.v, e.u, e.id, 0.0, 1.0, true});
    }
    model.r_offset_ = vars.size();
    for (const auto &v : graph.vertices())
        vars.push_back({VariableKind::root, "r_" + id_text(v.id), v.id, {}, {}, 0.0, 1.0, true});
    model.d_offset_ = vars.size();
    for (const auto &v : graph.vertices())
        vars.push_back({VariableKind::depth, "d_" + id_text(v.id), v.id, {}, {}, 1.0, n, false});

    for (const auto &v : graph.vertices()) model.objective_.emplace_back(model.y(v.id), v.weight);
    for (const auto &e : graph.edges()) model.objective_.emplace_back(model.w(e.id), e.weight);

    auto &rows = model.constraints_;
    for (const auto &e : graph.edges())
        for (VertexId end : {e.u, e.v})
            rows.push_back(make_row("edge_endpoint[" + to_string(e.id) + "," + to_string(end) + "]",
                                    ConstraintFamily::edge_endpoint, {{model.w(e.id), 1.0}, {model.y(end), -1.0}},
                                    Sense::less_equal, 0.0));

    {
        LinearConstraint one_root{"single_root", ConstraintFamily::single_root, {},
                                  instance.rooted() || !options.allow_empty ? Sense::equal : Sense::less_equal, 1.0};
        for (const auto &v : graph.vertices()) one_root.terms.emplace_back(model.r(v.id), 1.0);
        rows.push_back(std::move(one_root));
    }

    for (std::size_t vi = 0; vi < graph.vertex_count(); ++vi) {
        const VertexId v = graph.vertex(vi).id;
        LinearConstraint row{"in_degree[" + to_string(v) + "]", ConstraintFamily::in_degree, {}, Sense::equal, 0.0};
        for (std::size_t e : graph.incident(vi)) {
            const Edge &edge = graph.edge(e);
            row.terms.emplace_back(model.x(edge.id, edge.v == v), 1.0);
        }
        row.terms.emplace_back(model.r(v), 1.0);
        row.terms.emplace_back(model.y(v), -1.0);
        std::sort(row.terms.begin(), row.terms.end());
        rows.push_back(std::move(row));
    }

    for (const auto &e : graph.edges())
        rows.push_back(make_row("arc_edge[" + to_string(e.id) + "]", ConstraintFamily::arc_edge,
                                {{model.x(e.id, true), 1.0}, {model.x(e.id, false), 1.0}, {model.w(e.id), -1.0}},
                                Sense::less_equal, 0.0));

    for (const auto &v : graph.vertices())
        rows.push_back(make_row("root_depth[" + to_string(v.id) + "]", ConstraintFamily::root_depth,
                                {{model.d(v.id), 1.0}, {model.r(v.id), n - 1.0}}, Sense::less_equal, n));

    for (const auto &e : graph.edges()) {
        for (bool forward : {true, false}) {
            const VertexId tail = forward ? e.u : e.v;
            const VertexId head = forward ? e.v : e.u;
            const std::size_t arc = model.x(e.id, forward);
            const std::string label = "[" + to_string(tail) + "," + to_string(head) + "]";
            rows.push_back(make_row("depth_step" + label, ConstraintFamily::depth_step,
                                    {{model.d(head), 1.0}, {model.d(tail), -1.0}, {arc, -(n + 1.0)}},
                                    Sense::greater_equal, -n));
            rows.push_back(make_row("depth_limit" + label, ConstraintFamily::depth_limit,
                                    {{model.d(tail), 1.0}, {model.d(head), -1.0}, {arc, -(n - 1.0)}},
                                    Sense::greater_equal, -n));
        }
    }

    if (instance.rooted()) {
        rows.push_back(make_row("fixed_root[" + to_string(*instance.root) + "]", ConstraintFamily::fixed_root,
                                {{model.r(*instance.root), 1.0}}, Sense::equal, 1.0));
    } else if (options.symmetry_breaking) {
        for (const auto &u : graph.vertices()) {
            LinearConstraint row{"root_order[" + to_string(u.id) + "]", ConstraintFamily::root_order, {},
                                 Sense::less_equal, 1.0};
            for (const auto &v : graph.vertices())
                if (root_order_before(graph, v.id, u.id)) row.terms.emplace_back(model.r(v.id), 1.0);
            row.terms.emplace_back(model.y(u.id), 1.0);
            std::sort(row.terms.begin(), row.terms.end());
            rows.push_back(std::move(row));
        }
    }

    if (options.bfs_restriction) {
        for (const auto &e : graph.edges()) {
            rows.push_back(make_row("bfs_forward[" + to_string(e.id) + "]", ConstraintFamily::bfs_forward,
                                    {{model.d(e.u), 1.0}, {model.d(e.v), -1.0}, {model.w(e.id), n - 1.0}},
                                    Sense::less_equal, n));
            rows.push_back(make_row("bfs_backward[" + to_string(e.id) + "]", ConstraintFamily::bfs_backward,
                                    {{model.d(e.v), 1.0}, {model.d(e.u), -1.0}, {model.w(e.id), n - 1.0}},
                                    Sense::less_equal, n));
        }
    }
    return model;
}

Assignment encode_subgraph(const MipModel &model, const Subgraph &subgraph, std::optional<VertexId> root) {
    const WeightedGraph &graph = model.graph();
    validate_subgraph(graph, subgraph);
    if (subgraph.vertices.empty()) throw GraphError("cannot encode an empty subgraph");
    if (!is_connected(graph, subgraph)) throw GraphError("cannot encode a disconnected subgraph");

    if (!root) root = model.root();
    if (!root) {
        root = subgraph.vertices.front();
        for (VertexId v : subgraph.vertices)
            if (root_order_before(graph, *root, v)) root = v;
    }
    if (!std::binary_search(subgraph.vertices.begin(), subgraph.vertices.end(), *root))
        throw GraphError("root " + to_string(*root) + " is not part of the subgraph");

    const std::size_t n = graph.vertex_count();
    Assignment a;
    a.values.assign(model.variables().size(), 0.0);
    std::vector<bool> member(n, false), edge_member(graph.edge_count(), false);
    for (VertexId v : subgraph.vertices) {
        member[graph.vertex_index(v)] = true;
        a.values[model.y(v)] = 1.0;
    }
    for (EdgeId e : subgraph.edges) {
        edge_member[graph.edge_index(e)] = true;
        a.values[model.w(e)] = 1.0;
    }
    for (const auto &v : graph.vertices()) a.values[model.d(v.id)] = static_cast<double>(n);

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> layer(n, kNone);
    const std::size_t start = graph.vertex_index(*root);
    layer[start] = 0;
    a.values[model.r(*root)] = 1.0;
    a.values[model.d(*root)] = 1.0;

    std::vector<std::size_t> frontier{start};
    for (std::size_t depth = 1; !frontier.empty(); ++depth) {
        // parent candidates per newly discovered vertex: smallest id wins
        std::map<std::size_t, std::size_t> parent_edge;
        for (std::size_t v : frontier) {
            for (std::size_t e : graph.incident(v)) {
                if (!edge_member[e]) continue;
                const std::size_t u = graph.opposite(e, v);
                if (!member[u] || layer[u] != kNone) continue;
                auto it = parent_edge.find(u);
                if (it == parent_edge.end() || graph.vertex(v).id < graph.vertex(graph.opposite(it->second, u)).id)
                    parent_edge[u] = e;
            }
        }
        frontier.clear();
        for (auto [u, e] : parent_edge) {
            layer[u] = depth;
            const std::size_t parent = graph.opposite(e, u);
            a.values[model.x(graph.vertex(parent).id, graph.vertex(u).id)] = 1.0;
            a.values[model.d(graph.vertex(u).id)] = static_cast<double>(depth + 1);
            frontier.push_back(u);
        }
    }
    return a;
}

bool satisfies(const LinearConstraint &constraint, std::span<const double> values, double tolerance) {
    const double lhs = row_activity(constraint, values);
    switch (constraint.sense) {
        case Sense::less_equal: return lhs <= constraint.rhs + tolerance;
        case Sense::greater_equal: return lhs >= constraint.rhs - tolerance;
        case Sense::equal: return std::abs(lhs - constraint.rhs) <= tolerance;
    }
    return false;
}

std::vector<std::string> check_assignment(const MipModel &model, const Assignment &assignment, double tolerance) {
    const auto vars = model.variables();
    if (assignment.values.size() != vars.size())
        throw std::invalid_argument("assignment has " + std::to_string(assignment.values.size()) + " values, model has " +
                                    std::to_string(vars.size()) + " variables");
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (std::isnan(assignment.values[i])) throw std::invalid_argument("assignment leaves " + vars[i].name + " unset");

    std::vector<std::string> violated;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const double value = assignment.values[i];
        if (vars[i].binary && std::abs(value) > tolerance && std::abs(value - 1.0) > tolerance)
            violated.push_back("binary(" + vars[i].name + ")");
        else if (value < vars[i].lower - tolerance || value > vars[i].upper + tolerance)
            violated.push_back("bounds(" + vars[i].name + ")");
    }
    for (const auto &row : model.constraints())
        if (!satisfies(row, assignment.values, tolerance)) violated.push_back(row.name);
    return violated;
}

Subgraph decode_subgraph(const MipModel &model, std::span<const double> values) {
    Subgraph s;
    for (const auto &v : model.graph().vertices())
        if (values[model.y(v.id)] > 0.5) s.vertices.push_back(v.id);
    for (const auto &e : model.graph().edges())
        if (values[model.w(e.id)] > 0.5) s.edges.push_back(e.id);
    return s;
}

namespace {

constexpr std::size_t kLineWidth = 200;

// Appends " + 3 x" style terms, wrapping long rows onto indented lines.
class RowWriter {
public:
    RowWriter(std::ostringstream &out, std::string head) : out_(out), line_(std::move(head)) {}

    void term(double coef, const std::string &name, bool first) {
        std::string text;
        if (coef < 0.0)
            text = first ? "- " : " - ";
        else
            text = first ? "" : " + ";
        const double magnitude = std::abs(coef);
        if (magnitude != 1.0) text += format_real(magnitude) + " ";
        text += name;
        if (line_.size() + text.size() > kLineWidth) {
            out_ << line_ << '\n';
            line_ = "  ";
            if (first) line_.clear();
        }
        line_ += text;
    }

    void finish(const std::string &tail) { out_ << line_ << tail << '\n'; }

private:
    std::ostringstream &out_;
    std::string line_;
};

std::string sense_text(Sense sense) {
    switch (sense) {
        case Sense::less_equal: return "<=";
        case Sense::greater_equal: return ">=";
        case Sense::equal: return "=";
    }
    return "=";
}

}  // namespace

std::string export_lp(const MipModel &model) {
    const auto vars = model.variables();
    std::ostringstream out;
    out << "Maximize\n";
    {
        RowWriter row(out, " obj: ");
        bool first = true;
        for (auto [var, coef] : model.objective()) {
            row.term(coef, vars[var].name, first);
            first = false;
        }
        row.finish("");
    }
    out << "Subject To\n";
    const auto rows = model.constraints();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        RowWriter row(out, " c" + std::to_string(i + 1) + ": ");
        bool first = true;
        for (auto [var, coef] : rows[i].terms) {
            row.term(coef, vars[var].name, first);
            first = false;
        }
        if (first) row.term(0.0, vars.front().name, true);
        row.finish(" " + sense_text(rows[i].sense) + " " + format_real(rows[i].rhs));
    }
    out << "Bounds\n";
    for (const auto &v : vars)
        if (!v.binary) out << " " << format_real(v.lower) << " <= " << v.name << " <= " << format_real(v.upper) << '\n';
    out << "Binaries\n";
    for (const auto &v : vars)
        if (v.binary) out << " " << v.name << '\n';
    out << "End\n";
    return out.str();
}

}  // namespace gmwcs
