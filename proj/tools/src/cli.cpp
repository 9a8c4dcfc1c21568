#include "gmwcs_tools/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "gmwcs/backend.hpp"
#include "gmwcs/format.hpp"
#include "gmwcs/formulation.hpp"
#include "gmwcs/oracle.hpp"
#include "gmwcs/solver.hpp"

namespace gmwcs::cli {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> fields;
};

// Non-blank, non-comment lines split on tabs.
std::vector<Line> records(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        const auto end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;
        Line record{number, {}};
        for (std::size_t start = 0;;) {
            const auto tab = line.find('\t', start);
            record.fields.push_back(line.substr(start, tab - start));
            if (tab == std::string_view::npos) break;
            start = tab + 1;
        }
        out.push_back(std::move(record));
    }
    return out;
}

[[noreturn]] void fail(std::string_view file, std::size_t line, const std::string &message) {
    throw ParseError(std::string(file) + ":" + std::to_string(line) + ": " + message);
}

bool valid_label(std::string_view label) {
    return !label.empty() && label.find_first_of(" \t\r\n\v\f") == std::string_view::npos;
}

double weight_field(std::string_view file, std::size_t line, std::string_view text) {
    auto value = parse_real(text);
    if (!value || !std::isfinite(*value)) fail(file, line, "invalid weight '" + std::string(text) + "'");
    return *value;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw std::runtime_error("cannot write " + path.string());
}

std::string to_text(const LabeledInstance &instance, void (*writer)(const LabeledInstance &, std::ostream &)) {
    std::ostringstream out;
    writer(instance, out);
    return out.str();
}

// Uniform in [lo, hi] from 53 random bits.
double uniform(std::mt19937_64 &rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

std::size_t pick(std::mt19937_64 &rng, std::size_t size) { return static_cast<std::size_t>(rng() % size); }

struct SolveFlags {
    std::optional<double> time_limit;
    int workers = 1;
    bool no_preprocess = false;
    bool no_decompose = false;
    bool no_symmetry = false;
    bool no_bfs = false;
    bool nonempty = false;
    std::string lp_command;

    SolveConfig config() const {
        SolveConfig c;
        c.time_limit_seconds = time_limit;
        c.worker_count = workers;
        c.preprocess = !no_preprocess;
        c.decompose = !no_decompose;
        c.symmetry_breaking = !no_symmetry;
        c.bfs_restriction = !no_bfs;
        c.allow_empty_solution = !nonempty;
        if (!lp_command.empty()) {
            c.engine = Engine::backend_cut_loop;
            c.backend_factory = [command = lp_command] { return std::make_unique<ExternalLpBackend>(command); };
        }
        return c;
    }
};

void add_solve_flags(CLI::App &app, SolveFlags &flags) {
    app.add_option("-t,--time-limit", flags.time_limit, "Wall-clock limit in seconds")->check(CLI::NonNegativeNumber);
    app.add_option("-m,--workers", flags.workers, "Branch-and-bound worker threads")->check(CLI::PositiveNumber);
}

int exit_code(SolveStatus status) { return status == SolveStatus::timeout ? 3 : 0; }

std::string format_time(double seconds) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << seconds;
    return out.str();
}

int run_generate(const GenerateOptions &options, const std::string &prefix, std::size_t count) {
    if (count == 0) throw std::invalid_argument("--count must be positive");
    for (std::size_t i = 0; i < count; ++i) {
        GenerateOptions one = options;
        one.seed = options.seed + i;
        std::string stem = prefix;
        if (count > 1) {
            std::string index = std::to_string(i);
            stem += "_" + std::string(index.size() < 3 ? 3 - index.size() : 0, '0') + index;
        }
        const LabeledInstance instance = generate_instance(one);
        write_file(stem + ".nodes.tsv", to_text(instance, write_nodes));
        write_file(stem + ".edges.tsv", to_text(instance, write_edges));
    }
    return 0;
}

int run_bench(const std::filesystem::path &dir, std::size_t repeats, const SolveFlags &flags,
              const std::string &out_path, std::ostream &out, std::ostream &err) {
    if (repeats == 0) throw std::invalid_argument("-R must be positive");
    if (!std::filesystem::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir.string());

    std::ostringstream report;
    report << "instance\tn\tm\tmedian_s\tp2min_s\tp2max_s\tstatus\tweight\n";
    const SolveConfig config = flags.config();
    for (const auto &stem : list_instances(dir)) {
        LabeledInstance instance;
        try {
            instance = parse_instance(dir / (stem + ".nodes.tsv"), dir / (stem + ".edges.tsv"));
        } catch (const std::exception &e) {
            err << "warning: skipping " << stem << ": " << e.what() << "\n";
            report << "# skipped " << stem << ": " << e.what() << "\n";
            continue;
        }
        std::vector<double> times;
        std::string status = "optimal";
        std::optional<double> weight;
        try {
            for (std::size_t run = 0; run < repeats; ++run) {
                const auto start = std::chrono::steady_clock::now();
                const SolveResult result = solve(instance.instance, config);
                times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
                if (result.status != SolveStatus::optimal) status = std::string(to_string(result.status));
                if (!weight) weight = result.weight;
                else if (std::abs(*weight - result.weight) > 1e-9 && status == "optimal") status = "inconsistent";
            }
        } catch (const std::exception &e) {
            err << "warning: skipping " << stem << ": " << e.what() << "\n";
            report << "# skipped " << stem << ": " << e.what() << "\n";
            continue;
        }
        const TimeSummary summary = summarize_times(times);
        report << stem << '\t' << instance.instance.graph.vertex_count() << '\t' << instance.instance.graph.edge_count()
               << '\t' << format_time(summary.median) << '\t' << format_time(summary.second_min) << '\t'
               << format_time(summary.second_max) << '\t' << status << '\t' << format_real(*weight) << '\n';
    }
    if (out_path.empty()) out << report.str();
    else write_file(out_path, report.str());
    return 0;
}

}  // namespace

LabeledInstance parse_instance_text(std::string_view nodes_text, std::string_view edges_text,
                                    const std::optional<std::string> &root, std::string_view nodes_name,
                                    std::string_view edges_name) {
    LabeledInstance result;
    std::unordered_map<std::string, VertexId> ids;
    GraphBuilder builder;
    for (const auto &line : records(nodes_text)) {
        if (line.fields.size() != 2) fail(nodes_name, line.number, "expected '<id>\\t<weight>'");
        const std::string label(line.fields[0]);
        if (!valid_label(label)) fail(nodes_name, line.number, "invalid node id '" + label + "'");
        const double weight = weight_field(nodes_name, line.number, line.fields[1]);
        if (ids.contains(label)) fail(nodes_name, line.number, "duplicate node id '" + label + "'");
        ids.emplace(label, builder.add_vertex(weight));
        result.labels.push_back(label);
    }
    for (const auto &line : records(edges_text)) {
        if (line.fields.size() != 3) fail(edges_name, line.number, "expected '<id1>\\t<id2>\\t<weight>'");
        VertexId ends[2];
        for (int k = 0; k < 2; ++k) {
            const std::string label(line.fields[k]);
            auto it = ids.find(label);
            if (it == ids.end()) fail(edges_name, line.number, "unknown node '" + label + "'");
            ends[k] = it->second;
        }
        if (ends[0] == ends[1]) fail(edges_name, line.number, "self-loop on '" + std::string(line.fields[0]) + "'");
        builder.add_edge(ends[0], ends[1], weight_field(edges_name, line.number, line.fields[2]));
    }
    result.instance.graph = builder.build();
    if (root) {
        auto it = ids.find(*root);
        if (it == ids.end()) throw ParseError("unknown root '" + *root + "'");
        result.instance.root = it->second;
    }
    return result;
}

LabeledInstance parse_instance(const std::filesystem::path &nodes_path, const std::filesystem::path &edges_path,
                               const std::optional<std::string> &root) {
    return parse_instance_text(read_file(nodes_path), read_file(edges_path), root, nodes_path.string(),
                               edges_path.string());
}

void write_nodes(const LabeledInstance &instance, std::ostream &out) {
    for (const auto &v : instance.instance.graph.vertices())
        out << instance.label(v.id) << '\t' << format_real(v.weight) << '\n';
}

void write_edges(const LabeledInstance &instance, std::ostream &out) {
    for (const auto &e : instance.instance.graph.edges())
        out << instance.label(e.u) << '\t' << instance.label(e.v) << '\t' << format_real(e.weight) << '\n';
}

std::string format_result(const LabeledInstance &instance, const SolveResult &result) {
    const WeightedGraph &graph = instance.instance.graph;
    std::ostringstream out;
    out << "weight " << format_real(result.weight) << '\n';
    out << "status " << to_string(result.status) << '\n';
    out << "bound " << format_real(result.upper_bound) << '\n';
    out << "nodes\n";
    for (const auto v : result.solution.vertices) out << instance.label(v) << '\n';
    out << "edges\n";
    for (const auto e : result.solution.edges) {
        const Edge &edge = graph.edge(graph.edge_index(e));
        out << instance.label(edge.u) << ' ' << instance.label(edge.v) << '\n';
    }
    return out.str();
}

LabeledInstance generate_instance(const GenerateOptions &options) {
    if (options.nodes == 0) throw std::invalid_argument("--nodes must be positive");
    if (!(options.density >= 0.0 && options.density <= 1.0)) throw std::invalid_argument("--density must lie in [0, 1]");
    if (!std::isfinite(options.weight_low) || !std::isfinite(options.weight_high) ||
        options.weight_low > options.weight_high)
        throw std::invalid_argument("--weight-range needs finite lo <= hi");

    std::mt19937_64 rng(options.seed);
    const auto weight = [&] { return uniform(rng, options.weight_low, options.weight_high); };
    const std::size_t n = options.nodes;

    LabeledInstance result;
    GraphBuilder builder;
    std::vector<VertexId> vertices;
    for (std::size_t i = 0; i < n; ++i) {
        vertices.push_back(builder.add_vertex(weight()));
        result.labels.push_back("v" + std::to_string(i));
    }

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (uniform(rng, 0.0, 1.0) < options.density) {
                builder.add_edge(vertices[i], vertices[j], weight());
                parent[find(i)] = find(j);
            }

    // Link components in random order, each to a random vertex already joined.
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> components;
    for (auto &[_, members] : groups) components.push_back(std::move(members));
    std::shuffle(components.begin(), components.end(), rng);
    std::vector<std::size_t> joined = components.front();
    for (std::size_t c = 1; c < components.size(); ++c) {
        const std::size_t a = components[c][pick(rng, components[c].size())];
        const std::size_t b = joined[pick(rng, joined.size())];
        builder.add_edge(vertices[std::min(a, b)], vertices[std::max(a, b)], weight());
        joined.insert(joined.end(), components[c].begin(), components[c].end());
    }
    result.instance.graph = builder.build();
    return result;
}

TimeSummary summarize_times(std::vector<double> times) {
    TimeSummary summary;
    if (times.empty()) return summary;
    std::sort(times.begin(), times.end());
    const std::size_t k = times.size();
    summary.median = k % 2 ? times[k / 2] : (times[k / 2 - 1] + times[k / 2]) / 2.0;
    summary.second_min = times[std::min<std::size_t>(1, k - 1)];
    summary.second_max = times[k >= 2 ? k - 2 : 0];
    return summary;
}

std::vector<std::string> list_instances(const std::filesystem::path &dir) {
    static constexpr std::string_view kNodes = ".nodes.tsv", kEdges = ".edges.tsv";
    std::set<std::string> stems;
    for (const auto &entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        for (auto suffix : {kNodes, kEdges})
            if (name.size() > suffix.size() && name.ends_with(suffix))
                stems.insert(name.substr(0, name.size() - suffix.size()));
    }
    return {stems.begin(), stems.end()};
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact solver for the generalized maximum-weight connected subgraph problem", "gmwcs"};
    app.require_subcommand(0, 1);

    std::string nodes_path, edges_path, out_path, export_path;
    std::optional<std::string> root;
    SolveFlags flags;
    bool use_oracle = false;
    app.add_option("-n,--nodes", nodes_path, "Node file: <id>\\t<weight> per line");
    app.add_option("-e,--edges", edges_path, "Edge file: <id1>\\t<id2>\\t<weight> per line");
    app.add_option("-r,--root", root, "Solve the rooted variant with this node");
    add_solve_flags(app, flags);
    app.add_option("-o,--output", out_path, "Write the result here instead of standard output");
    app.add_option("--export-lp", export_path, "Write the integer program in LP format and exit");
    app.add_flag("--no-preprocess", flags.no_preprocess, "Skip the reduction rules");
    app.add_flag("--no-decompose", flags.no_decompose, "Skip the cut-vertex decomposition");
    app.add_flag("--no-symmetry", flags.no_symmetry, "Drop the root-order rows from the model");
    app.add_flag("--no-bfs", flags.no_bfs, "Drop the depth-gap rows from the model");
    app.add_flag("--oracle", use_oracle, "Solve by exhaustive enumeration (small graphs only)");
    app.add_flag("--nonempty", flags.nonempty, "Disallow the empty solution");
    app.add_option("--lp-command", flags.lp_command,
                   "Use the cutting-plane engine with an external solver; {lp} and {sol} are replaced by file paths");

    auto *generate = app.add_subcommand("generate", "Write random connected instances");
    GenerateOptions gen;
    std::vector<double> range{gen.weight_low, gen.weight_high};
    std::string prefix;
    std::size_t count = 1;
    generate->add_option("--nodes", gen.nodes, "Number of nodes")->required();
    generate->add_option("--density", gen.density, "Edge probability")->required();
    generate->add_option("--weight-range", range, "lo,hi")->delimiter(',')->expected(2);
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("-o,--output", prefix, "Output prefix; writes <prefix>.nodes.tsv and <prefix>.edges.tsv")
        ->required();
    generate->add_option("--count", count, "Number of instances; seeds increase by one and files get _NNN suffixes");

    auto *bench = app.add_subcommand("bench", "Time every instance in a directory");
    std::string bench_dir, bench_out;
    std::size_t repeats = 10;
    SolveFlags bench_flags;
    bench->add_option("dir", bench_dir, "Directory of <name>.nodes.tsv/<name>.edges.tsv pairs")->required();
    bench->add_option("-R,--repeats", repeats, "Runs per instance");
    add_solve_flags(*bench, bench_flags);
    bench->add_option("-o,--output", bench_out, "Write the TSV report here instead of standard output");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*generate) {
            gen.weight_low = range[0];
            gen.weight_high = range[1];
            return run_generate(gen, prefix, count);
        }
        if (*bench) return run_bench(bench_dir, repeats, bench_flags, bench_out, out, err);

        if (nodes_path.empty() || edges_path.empty()) {
            err << "error: -n and -e are required\n";
            return 1;
        }
        const LabeledInstance instance = parse_instance(nodes_path, edges_path, root);
        const SolveConfig config = flags.config();

        if (!export_path.empty()) {
            ModelOptions options;
            options.symmetry_breaking = config.symmetry_breaking;
            options.bfs_restriction = config.bfs_restriction;
            options.allow_empty = config.allow_empty_solution;
            write_file(export_path, export_lp(build_model(instance.instance, options)));
            return 0;
        }

        const SolveResult result = use_oracle ? brute_force(instance.instance, config.allow_empty_solution)
                                              : solve(instance.instance, config);
        const std::string text = format_result(instance, result);
        if (out_path.empty()) out << text;
        else write_file(out_path, text);
        return exit_code(result.status);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gmwcs::cli
