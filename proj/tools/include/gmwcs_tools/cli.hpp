#ifndef GMWCS_TOOLS_CLI_HPP
#define GMWCS_TOOLS_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmwcs/graph.hpp"
#include "gmwcs/result.hpp"

namespace gmwcs::cli {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An instance plus the textual node labels it was read with. Vertex ids are
/// assigned 0, 1, ... in node-file order and edge ids in edge-file order, so
/// `labels[v.value]` names vertex v.
struct LabeledInstance {
    Instance instance;
    std::vector<std::string> labels;

    const std::string &label(VertexId id) const { return labels.at(id.value); }
};

/// Node lines are "<id>\t<weight>", edge lines "<id1>\t<id2>\t<weight>".
/// Blank lines and lines starting with '#' are ignored. `nodes_name` and
/// `edges_name` prefix error messages.
LabeledInstance parse_instance_text(std::string_view nodes_text, std::string_view edges_text,
                                    const std::optional<std::string> &root = std::nullopt,
                                    std::string_view nodes_name = "nodes", std::string_view edges_name = "edges");
LabeledInstance parse_instance(const std::filesystem::path &nodes_path, const std::filesystem::path &edges_path,
                               const std::optional<std::string> &root = std::nullopt);

void write_nodes(const LabeledInstance &instance, std::ostream &out);
void write_edges(const LabeledInstance &instance, std::ostream &out);

/// "weight", "status", "bound", then the "nodes" and "edges" sections.
std::string format_result(const LabeledInstance &instance, const SolveResult &result);

struct GenerateOptions {
    std::size_t nodes = 10;
    double density = 0.4;
    double weight_low = -5.0;
    double weight_high = 5.0;
    std::uint64_t seed = 1;
};

/// Random connected graph: every pair is joined with probability `density`,
/// then components are linked by random edges until one remains. Weights
/// are uniform in [weight_low, weight_high]. Throws std::invalid_argument on
/// bad options.
LabeledInstance generate_instance(const GenerateOptions &options);

struct BenchRow {
    std::string instance;
    std::size_t n = 0;
    std::size_t m = 0;
    double median_s = 0.0;
    double p2min_s = 0.0;
    double p2max_s = 0.0;
    std::string status;
    double weight = 0.0;
};

/// Median, second-smallest and second-largest of `times` (the extremes are
/// used when fewer than two samples exist).
struct TimeSummary {
    double median = 0.0;
    double second_min = 0.0;
    double second_max = 0.0;
};
TimeSummary summarize_times(std::vector<double> times);

/// Instance stems in `dir` with both "<stem>.nodes.tsv" and
/// "<stem>.edges.tsv", sorted by name.
std::vector<std::string> list_instances(const std::filesystem::path &dir);

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 optimal, 3 timeout, 1 error.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace gmwcs::cli

#endif  // GMWCS_TOOLS_CLI_HPP
