#include "support.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gmwcs/format.hpp"

namespace gmwcs::testing {

namespace {

double draw(std::mt19937_64 &rng, const RandomSpec &spec) {
    double value = std::uniform_real_distribution<double>(spec.low, spec.high)(rng);
    if (spec.quantum > 0) value = std::round(value / spec.quantum) * spec.quantum;
    return value;
}

int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace

Instance random_instance(std::mt19937_64 &rng, const RandomSpec &spec) {
    GraphBuilder builder;
    std::vector<VertexId> ids;
    for (std::size_t i = 0; i < spec.n; ++i) ids.push_back(builder.add_vertex(draw(rng, spec)));
    std::vector<std::size_t> parent(spec.n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::bernoulli_distribution coin(spec.density);
    for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = i + 1; j < spec.n; ++j)
            if (coin(rng)) {
                builder.add_edge(ids[i], ids[j], draw(rng, spec));
                parent[find(i)] = find(j);
            }
    if (spec.connected)
        for (std::size_t i = 1; i < spec.n; ++i)
            if (find(i) != find(0)) {
                std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
                while (find(j) == find(i)) j = std::uniform_int_distribution<std::size_t>(0, spec.n - 1)(rng);
                builder.add_edge(ids[j], ids[i], draw(rng, spec));
                parent[find(i)] = find(j);
            }
    if (spec.n >= 2)
        for (std::size_t k = 0; k < spec.parallel_edges; ++k) {
            const auto a = std::uniform_int_distribution<std::size_t>(0, spec.n - 1)(rng);
            auto b = std::uniform_int_distribution<std::size_t>(0, spec.n - 2)(rng);
            if (b >= a) ++b;
            builder.add_edge(ids[a], ids[b], draw(rng, spec));
        }
    Instance instance{builder.build(), std::nullopt};
    if (spec.rooted && spec.n > 0)
        instance.root = ids[std::uniform_int_distribution<std::size_t>(0, spec.n - 1)(rng)];
    return instance;
}

Instance random_small(std::mt19937_64 &rng, std::size_t lo, std::size_t hi, bool rooted) {
    RandomSpec spec;
    spec.n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    spec.rooted = rooted;
    return random_instance(rng, spec);
}

Instance make_instance(const std::vector<double> &vertex_weights,
                       const std::vector<std::tuple<std::size_t, std::size_t, double>> &edges,
                       std::optional<std::size_t> root) {
    GraphBuilder builder;
    for (double w : vertex_weights) builder.add_vertex(w);
    for (auto [u, v, w] : edges) builder.add_edge(VertexId{static_cast<std::uint32_t>(u)}, VertexId{static_cast<std::uint32_t>(v)}, w);
    Instance instance{builder.build(), std::nullopt};
    if (root) instance.root = VertexId{static_cast<std::uint32_t>(*root)};
    return instance;
}

std::vector<Mask> connected_subgraphs(const WeightedGraph &graph) {
    if (graph.vertex_count() > 64 || graph.edge_count() > 64) throw std::length_error("graph too large");
    std::set<Mask> seen;
    std::vector<Mask> stack;
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
        Mask start{std::uint64_t{1} << v, 0};
        if (seen.insert(start).second) stack.push_back(start);
    }
    while (!stack.empty()) {
        const Mask current = stack.back();
        stack.pop_back();
        for (std::size_t e = 0; e < graph.edge_count(); ++e) {
            if (current.edges >> e & 1) continue;
            auto [a, b] = graph.ends(e);
            const bool has_a = current.vertices >> a & 1, has_b = current.vertices >> b & 1;
            if (!has_a && !has_b) continue;
            Mask next{current.vertices | std::uint64_t{1} << a | std::uint64_t{1} << b, current.edges | std::uint64_t{1} << e};
            if (seen.insert(next).second) stack.push_back(next);
        }
    }
    return {seen.begin(), seen.end()};
}

Subgraph to_subgraph(const WeightedGraph &graph, const Mask &mask) {
    Subgraph sub;
    for (std::size_t v = 0; v < graph.vertex_count(); ++v)
        if (mask.vertices >> v & 1) sub.vertices.push_back(graph.vertex(v).id);
    for (std::size_t e = 0; e < graph.edge_count(); ++e)
        if (mask.edges >> e & 1) sub.edges.push_back(graph.edge(e).id);
    return sub;
}

double mask_weight(const WeightedGraph &graph, const Mask &mask) {
    double total = 0.0;
    for (std::size_t v = 0; v < graph.vertex_count(); ++v)
        if (mask.vertices >> v & 1) total += graph.vertex(v).weight;
    for (std::size_t e = 0; e < graph.edge_count(); ++e)
        if (mask.edges >> e & 1) total += graph.edge(e).weight;
    return total;
}

double growing_optimum(const Instance &instance, bool allow_empty) {
    const WeightedGraph &graph = instance.graph;
    std::optional<double> best;
    if (allow_empty && !instance.rooted()) best = 0.0;
    const std::uint64_t root_bit =
        instance.rooted() ? std::uint64_t{1} << graph.vertex_index(*instance.root) : 0;
    for (const Mask &mask : connected_subgraphs(graph)) {
        if ((mask.vertices & root_bit) != root_bit) continue;
        const double w = mask_weight(graph, mask);
        if (!best || w > *best) best = w;
    }
    if (!best) throw std::invalid_argument("no feasible subgraph");
    return *best;
}

std::set<Mask> nonlinear_projections(const WeightedGraph &graph, std::optional<VertexId> root) {
    const std::size_t n = graph.vertex_count(), m = graph.edge_count();
    if (n > 6 || m > 15) throw std::length_error("graph too large");
    std::set<Mask> out;
    // Arcs: 2e is u->v, 2e+1 is v->u.
    const auto tail = [&](std::size_t arc) { auto [u, v] = graph.ends(arc / 2); return arc % 2 ? v : u; };
    const auto head = [&](std::size_t arc) { auto [u, v] = graph.ends(arc / 2); return arc % 2 ? u : v; };

    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y)
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << m); ++w) {
            bool ok = true;
            for (std::size_t e = 0; e < m && ok; ++e) {
                auto [a, b] = graph.ends(e);
                if ((w >> e & 1) && !((y >> a & 1) && (y >> b & 1))) ok = false;  // w_e <= y_v
            }
            if (!ok) continue;
            for (std::size_t r = 0; r < n; ++r) {  // sum r = 1
                if (root && graph.vertex_index(*root) != r) continue;
                // Arcs over unselected edges violate x_uv + x_vu <= w_e, so only
                // submasks of the selected edges' arcs are visited.
                std::uint64_t allowed = 0;
                for (std::size_t e = 0; e < m; ++e)
                    if (w >> e & 1) allowed |= std::uint64_t{3} << (2 * e);
                bool feasible = false;
                for (std::uint64_t x = allowed, done = 0; !done && !feasible; done = x == 0, x = (x - 1) & allowed) {
                    bool rows = true;
                    for (std::size_t e = 0; e < m && rows; ++e)  // x_uv + x_vu <= w_e
                        if ((x >> (2 * e) & 1) + (x >> (2 * e + 1) & 1) > (w >> e & 1)) rows = false;
                    for (std::size_t v = 0; v < n && rows; ++v) {  // in-degree + r_v = y_v
                        int in = v == r;
                        for (std::size_t arc = 0; arc < 2 * m; ++arc)
                            if ((x >> arc & 1) && head(arc) == v) ++in;
                        if (in != static_cast<int>(y >> v & 1)) rows = false;
                    }
                    if (!rows) continue;
                    // Depth vectors in {1..n}^n.
                    std::vector<std::size_t> d(n, 1);
                    while (true) {
                        bool good = d[r] == 1;  // d_r r_r = r_r
                        for (std::size_t arc = 0; arc < 2 * m && good; ++arc)
                            if ((x >> arc & 1) && d[head(arc)] != d[tail(arc)] + 1) good = false;
                        if (good) {
                            feasible = true;
                            break;
                        }
                        std::size_t k = 0;
                        while (k < n && d[k] == n) d[k++] = 1;
                        if (k == n) break;
                        ++d[k];
                    }
                }
                if (feasible) out.insert(Mask{y, w});
            }
        }
    return out;
}

double min_cut_by_enumeration(const FlowNetwork &network) {
    const std::size_t k = network.vertex_count;
    if (k > 20) throw std::length_error("network too large");
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t side = 0; side < (std::uint64_t{1} << k); ++side) {
        if (!(side >> network.source & 1) || (side >> network.sink & 1)) continue;
        double capacity = 0.0;
        for (const auto &arc : network.arcs)
            if ((side >> arc.from & 1) && !(side >> arc.to & 1)) capacity += arc.capacity;
        best = std::min(best, capacity);
    }
    return best;
}

LpText parse_lp(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> logical;
    // Continuation lines start with two spaces and no label.
    while (std::getline(in, line)) {
        if (line.rfind("  ", 0) == 0 && !logical.empty()) logical.back() += line.substr(1);
        else logical.push_back(line);
    }
    LpText lp;
    std::string section;
    const auto parse_terms = [](std::istringstream &tokens, std::map<std::string, double> &terms, std::string &stop) {
        double sign = 1.0;
        std::optional<double> coef;
        std::string token;
        while (tokens >> token) {
            if (token == "+") sign = 1.0;
            else if (token == "-") sign = -1.0;
            else if (token == "<=" || token == ">=" || token == "=") {
                stop = token;
                return;
            } else if (auto value = parse_real(token)) coef = *value;
            else {
                terms[token] += sign * coef.value_or(1.0);
                sign = 1.0;
                coef.reset();
            }
        }
    };
    for (const auto &l : logical) {
        if (l == "Maximize" || l == "Subject To" || l == "Bounds" || l == "Binaries" || l == "End") {
            section = l;
            continue;
        }
        std::istringstream tokens(l);
        if (section == "Maximize") {
            std::string label, stop;
            tokens >> label;
            if (label != "obj:") throw std::runtime_error("bad objective line");
            parse_terms(tokens, lp.objective, stop);
        } else if (section == "Subject To") {
            LpRow row;
            tokens >> row.name;
            if (row.name.empty() || row.name.back() != ':') throw std::runtime_error("bad row: " + l);
            row.name.pop_back();
            parse_terms(tokens, row.terms, row.sense);
            std::string rhs;
            tokens >> rhs;
            row.rhs = parse_real(rhs).value();
            lp.rows.push_back(std::move(row));
        } else if (section == "Bounds") {
            std::string lo, op1, name, op2, hi;
            tokens >> lo >> op1 >> name >> op2 >> hi;
            lp.bounds[name] = {parse_real(lo).value(), parse_real(hi).value()};
        } else if (section == "Binaries") {
            std::string name;
            tokens >> name;
            lp.binaries.push_back(name);
        } else {
            throw std::runtime_error("text outside a section: " + l);
        }
    }
    if (section != "End") throw std::runtime_error("missing End");
    return lp;
}

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace gmwcs::testing
