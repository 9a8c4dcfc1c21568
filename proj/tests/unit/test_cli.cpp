#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>
#include <random>
#include <sstream>

#include "gmwcs/format.hpp"
#include "gmwcs/oracle.hpp"
#include "gmwcs_tools/cli.hpp"
#include "support.hpp"

using namespace gmwcs;
using namespace gmwcs::cli;
using gmwcs::testing::read_text;

namespace {

const std::string kGolden = GMWCS_GOLDEN_DIR;

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string &tag) {
        path = std::filesystem::temp_directory_path() / ("gmwcs_cli_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string &name) const { return (path / name).string(); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

void write(const std::string &path, const std::string &text) {
    std::ofstream(path, std::ios::binary) << text;
}

std::string to_text(const LabeledInstance &inst, void (*writer)(const LabeledInstance &, std::ostream &)) {
    std::ostringstream out;
    writer(inst, out);
    return out.str();
}

// Weight recomputed from the printed node and edge sections.
double printed_weight(const LabeledInstance &inst, const std::string &output) {
    std::map<std::string, VertexId> ids;
    for (auto &v : inst.instance.graph.vertices()) ids[inst.label(v.id)] = v.id;
    std::istringstream in(output);
    std::string line, section;
    Subgraph sub;
    while (std::getline(in, line)) {
        if (line == "nodes" || line == "edges") {
            section = line;
            continue;
        }
        if (section == "nodes") sub.vertices.push_back(ids.at(line));
        if (section == "edges") {
            std::istringstream pair(line);
            std::string a, b;
            pair >> a >> b;
            for (auto &e : inst.instance.graph.edges())
                if (std::minmax(e.u, e.v) == std::minmax(ids.at(a), ids.at(b))) sub.edges.push_back(e.id);
        }
    }
    sub.normalize();
    validate_subgraph(inst.instance.graph, sub);
    CHECK(is_connected(inst.instance.graph, sub));
    return total_weight(inst.instance.graph, sub);
}

double weight_line(const std::string &output) {
    auto end = output.find('\n');
    return parse_real(output.substr(7, end - 7)).value();
}

}  // namespace

TEST_CASE("parse_instance basics") {
    auto inst = parse_instance_text("a\t1.5\nb\t-2\n", "a\tb\t0.5\n");
    CHECK(inst.instance.graph.vertex_count() == 2);
    CHECK(inst.instance.graph.edge_count() == 1);
    CHECK(inst.labels == std::vector<std::string>{"a", "b"});
    CHECK(inst.instance.graph.edge(0).weight == 0.5);
    CHECK_FALSE(inst.instance.root);
    CHECK(parse_instance_text("a\t1\n", "", std::string("a")).instance.root == VertexId{0});
}

TEST_CASE("parse_instance ignores comments and blank lines") {
    auto plain = parse_instance_text("a\t1\nb\t2\nc\t3\n", "a\tb\t-1\nb\tc\t4\n");
    auto noisy = parse_instance_text("# nodes\na\t1\n\nb\t2\n# mid\nc\t3\n\n", "\n# edges\na\tb\t-1\n\nb\tc\t4\n");
    CHECK(to_text(plain, write_nodes) == to_text(noisy, write_nodes));
    CHECK(to_text(plain, write_edges) == to_text(noisy, write_edges));
}

TEST_CASE("parse_instance errors carry names and line numbers") {
    auto message = [](auto &&fn) {
        try {
            fn();
        } catch (const ParseError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    auto missing = message([] { parse_instance_text("a\t1\nb\t1\n", "a\tb\t1\n# x\nb\tc\t1\n"); });
    CHECK(missing.find("'c'") != std::string::npos);
    CHECK(missing.find(":3:") != std::string::npos);
    CHECK(message([] { parse_instance_text("a\t1\na\t2\n", ""); }).find("duplicate") != std::string::npos);
    CHECK(message([] { parse_instance_text("a\t1\n", "a\ta\t1\n"); }).find("self-loop") != std::string::npos);
    CHECK(message([] { parse_instance_text("a\t1\n", "", std::string("z")); }).find("root") != std::string::npos);
    CHECK(message([] { parse_instance_text("a\t1\nb\n", ""); }).find(":2:") != std::string::npos);
    CHECK(message([] { parse_instance_text("a\tx\n", ""); }).find("weight") != std::string::npos);
    CHECK(message([] { parse_instance_text("a b\t1\n", ""); }).find("id") != std::string::npos);
}

TEST_CASE("CLI output matches the golden files") {
    for (std::string name : {"single_vertex", "single_edge", "triangle"}) {
        CAPTURE(name);
        auto r = invoke({"-n", kGolden + "/" + name + ".nodes.tsv", "-e", kGolden + "/" + name + ".edges.tsv"});
        CHECK(r.code == 0);
        CHECK(r.out == read_text(kGolden + "/" + name + ".out"));
    }
    auto r = invoke({"-n", kGolden + "/single_vertex.nodes.tsv", "-e", kGolden + "/single_vertex.edges.tsv"});
    CHECK(r.out.rfind("weight 5\nstatus optimal\n", 0) == 0);
}

TEST_CASE("--export-lp writes the formulation golden file") {
    TempDir dir("lp");
    for (std::string name : {"single_vertex", "single_edge", "triangle"}) {
        auto r = invoke({"-n", kGolden + "/" + name + ".nodes.tsv", "-e", kGolden + "/" + name + ".edges.tsv",
                         "--export-lp", dir.file(name + ".lp")});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        CHECK(read_text(dir.file(name + ".lp")) == read_text(kGolden + "/" + name + ".lp"));
    }
}

TEST_CASE("usage errors exit with 1") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"-n", "/nonexistent/nodes", "-e", "/nonexistent/edges"}).code == 1);
    CHECK(invoke({"--bogus"}).code == 1);
    CHECK(invoke({"-n", kGolden + "/triangle.nodes.tsv", "-e", kGolden + "/triangle.edges.tsv", "-r", "zz"}).code == 1);
    CHECK(invoke({"-n", kGolden + "/triangle.nodes.tsv", "-e", kGolden + "/triangle.edges.tsv", "-m", "0"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("flags reach the solver") {
    TempDir dir("flags");
    write(dir.file("n.tsv"), "a\t-3\nb\t-1\n");
    write(dir.file("e.tsv"), "a\tb\t-1\n");
    auto base = invoke({"-n", dir.file("n.tsv"), "-e", dir.file("e.tsv")});
    CHECK(base.out == "weight 0\nstatus optimal\nbound 0\nnodes\nedges\n");
    auto nonempty = invoke({"-n", dir.file("n.tsv"), "-e", dir.file("e.tsv"), "--nonempty"});
    CHECK(nonempty.out == "weight -1\nstatus optimal\nbound -1\nnodes\nb\nedges\n");
    auto rooted = invoke({"-n", dir.file("n.tsv"), "-e", dir.file("e.tsv"), "-r", "a", "-o", dir.file("out.txt")});
    CHECK(rooted.out.empty());
    CHECK(read_text(dir.file("out.txt")) == "weight -3\nstatus optimal\nbound -3\nnodes\na\nedges\n");
    for (auto flag : {"--no-preprocess", "--no-decompose", "--no-symmetry", "--no-bfs", "--oracle"})
        CHECK(invoke({"-n", dir.file("n.tsv"), "-e", dir.file("e.tsv"), flag, "-m", "2", "-t", "10"}).out == base.out);
}

TEST_CASE("--oracle agrees with the default engine") {
    TempDir dir("oracle");
    for (int seed = 0; seed < 50; ++seed) {
        GenerateOptions opt;
        opt.nodes = 3 + seed % 10;
        opt.density = 0.4;
        opt.seed = static_cast<std::uint64_t>(seed);
        auto inst = generate_instance(opt);
        write(dir.file("n.tsv"), to_text(inst, write_nodes));
        write(dir.file("e.tsv"), to_text(inst, write_edges));
        auto a = invoke({"-n", dir.file("n.tsv"), "-e", dir.file("e.tsv")});
        auto b = invoke({"-n", dir.file("n.tsv"), "-e", dir.file("e.tsv"), "--oracle"});
        REQUIRE(a.code == 0);
        REQUIRE(b.code == 0);
        CHECK(std::abs(weight_line(a.out) - weight_line(b.out)) < 1e-9);
        CHECK(std::abs(printed_weight(inst, a.out) - weight_line(a.out)) < 1e-9);
    }
}

TEST_CASE("time limits map to exit codes consistently") {
    TempDir dir("limit");
    GenerateOptions opt;
    opt.nodes = 400;
    opt.density = 0.02;
    auto inst = generate_instance(opt);
    write(dir.file("n.tsv"), to_text(inst, write_nodes));
    write(dir.file("e.tsv"), to_text(inst, write_edges));
    auto r = invoke({"-n", dir.file("n.tsv"), "-e", dir.file("e.tsv"), "-t", "0"});
    REQUIRE((r.code == 0 || r.code == 3));
    CHECK((r.out.find("status timeout") != std::string::npos) == (r.code == 3));
    CHECK(std::abs(printed_weight(inst, r.out) - weight_line(r.out)) < 1e-9);
}

TEST_CASE("generate") {
    GenerateOptions one;
    one.nodes = 1;
    auto single = generate_instance(one);
    CHECK(single.instance.graph.vertex_count() == 1);
    CHECK(single.instance.graph.edge_count() == 0);

    GenerateOptions bad;
    bad.density = 1.5;
    CHECK_THROWS_AS(generate_instance(bad), std::invalid_argument);
    bad.density = 0.5;
    bad.weight_low = 3;
    bad.weight_high = 2;
    CHECK_THROWS_AS(generate_instance(bad), std::invalid_argument);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GenerateOptions opt;
        opt.nodes = 12;
        opt.density = 0.4;
        opt.seed = seed;
        auto inst = generate_instance(opt);
        CHECK(is_connected(inst.instance.graph));
        for (auto &v : inst.instance.graph.vertices()) CHECK((v.weight >= -5 && v.weight <= 5));
        CHECK(brute_force(inst.instance).status == SolveStatus::optimal);
    }

    TempDir dir("gen");
    auto args = [&](const std::string &prefix) {
        return std::vector<std::string>{"generate", "--nodes", "15", "--density", "0.3", "--weight-range", "-2,3",
                                        "--seed", "9", "-o", dir.file(prefix)};
    };
    REQUIRE(invoke(args("a")).code == 0);
    REQUIRE(invoke(args("b")).code == 0);
    CHECK(read_text(dir.file("a.nodes.tsv")) == read_text(dir.file("b.nodes.tsv")));
    CHECK(read_text(dir.file("a.edges.tsv")) == read_text(dir.file("b.edges.tsv")));

    // Parse and re-emit is byte-identical.
    auto parsed = parse_instance(dir.file("a.nodes.tsv"), dir.file("a.edges.tsv"));
    CHECK(to_text(parsed, write_nodes) == read_text(dir.file("a.nodes.tsv")));
    CHECK(to_text(parsed, write_edges) == read_text(dir.file("a.edges.tsv")));
    for (auto &v : parsed.instance.graph.vertices()) CHECK((v.weight >= -2 && v.weight <= 3));

    auto many = args("s");
    many.insert(many.end(), {"--count", "3"});
    REQUIRE(invoke(many).code == 0);
    CHECK(std::filesystem::exists(dir.file("s_002.edges.tsv")));
    CHECK(invoke({"generate", "--nodes", "0", "--density", "0.3", "-o", dir.file("z")}).code == 1);
    CHECK(invoke({"generate", "--nodes", "4", "--density", "0.3", "--weight-range", "1,0", "-o", dir.file("z")}).code == 1);
}

TEST_CASE("summarize_times") {
    auto s = summarize_times({5, 1, 3, 2, 4});
    CHECK(s.median == 3);
    CHECK(s.second_min == 2);
    CHECK(s.second_max == 4);
    auto even = summarize_times({4, 1, 3, 2});
    CHECK(even.median == 2.5);
    auto single = summarize_times({7});
    CHECK(single.median == 7);
    CHECK(single.second_min == 7);
    CHECK(single.second_max == 7);
}

TEST_CASE("bench") {
    TempDir empty("bench_empty");
    auto r = invoke({"bench", empty.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "instance\tn\tm\tmedian_s\tp2min_s\tp2max_s\tstatus\tweight\n");

    TempDir one("bench_one");
    write(one.file("tiny.nodes.tsv"), "a\t5\n");
    write(one.file("tiny.edges.tsv"), "");
    r = invoke({"bench", one.path.string(), "-R", "3"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(row.rfind("tiny\t1\t0\t", 0) == 0);
    CHECK(row.size() > 16);
    CHECK(row.substr(row.size() - 10) == "\toptimal\t5");

    // Broken instances are skipped and noted.
    write(one.file("broken.nodes.tsv"), "a\tnot-a-number\n");
    write(one.file("broken.edges.tsv"), "");
    write(one.file("lonely.nodes.tsv"), "a\t1\n");
    r = invoke({"bench", one.path.string(), "-R", "1", "-o", one.file("report.tsv")});
    CHECK(r.code == 0);
    auto report = read_text(one.file("report.tsv"));
    CHECK(report.find("# skipped broken") != std::string::npos);
    CHECK(report.find("# skipped lonely") != std::string::npos);
    CHECK(report.find("tiny\t1\t0") != std::string::npos);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("bench on a generated suite is repeat-consistent") {
    TempDir dir("bench_suite");
    REQUIRE(invoke({"generate", "--nodes", "14", "--density", "0.3", "--seed", "100", "--count", "20", "-o",
                    dir.file("g")})
                .code == 0);
    auto r = invoke({"bench", dir.path.string(), "-R", "3", "-m", "2"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.find("\toptimal\t") != std::string::npos);
    }
    CHECK(rows == 20);
}
