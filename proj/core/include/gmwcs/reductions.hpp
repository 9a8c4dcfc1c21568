#ifndef GMWCS_REDUCTIONS_HPP
#define GMWCS_REDUCTIONS_HPP

#include <variant>
#include <vector>

#include "gmwcs/graph.hpp"

namespace gmwcs {

// An edge whose endpoint `from` was replaced by a contracted vertex.
struct EndpointRemap {
    EdgeId edge;
    VertexId from;
};

/// Edge (u, v) contracted into the new vertex `merged` of weight
/// w(u) + w(v) + w(edge). Edges formerly incident to u or v keep their ids
/// and are re-attached to `merged`.
struct EdgeContraction {
    VertexId merged;
    VertexId u;
    VertexId v;
    EdgeId edge;
    double weight{};
    std::vector<EndpointRemap> remapped;
    bool carries_root = false;
};

/// Non-negative parallel edges replaced by one new edge carrying their sum.
struct ParallelMerge {
    EdgeId kept;
    VertexId a;
    VertexId b;
    double weight{};
    std::vector<EdgeId> merged;
};

/// Parallel edges removed in favour of the heaviest one.
struct ParallelDrop {
    EdgeId kept;
    std::vector<EdgeId> dropped;
};

/// Negative chain a -first- vertex -second- b replaced by the edge `created`.
struct ChainReplace {
    EdgeId created;
    VertexId a;
    VertexId b;
    double weight{};
    VertexId vertex;
    EdgeId first;
    EdgeId second;
};

using ReductionRecord = std::variant<EdgeContraction, ParallelMerge, ParallelDrop, ChainReplace>;

struct ReductionTrace {
    std::vector<ReductionRecord> records;
};

/// Rule 1: contracts every edge e = (u, v) with w(e) >= 0, w(e) + w(u) >= 0
/// and w(e) + w(v) >= 0 found in one sweep over the edges, normalizing the
/// parallel edges each contraction creates. Returns whether anything changed.
bool apply_rule1(Instance &instance, ReductionTrace &trace);

/// Rule 2: one sweep over the vertices replacing every all-negative chain
/// through a degree-2 vertex by a single edge. The root is never replaced.
bool apply_rule2(Instance &instance, ReductionTrace &trace);

struct Preprocessed {
    Instance reduced;
    ReductionTrace trace;
};

/// Normalizes parallel edges, then alternates Rule 1 (to a fixpoint) and a
/// Rule 2 sweep until neither changes the graph. The reduced graph is simple.
Preprocessed preprocess(const Instance &instance);

/// Replays the trace forward on `original`; reproduces the reduced graph.
WeightedGraph replay(const WeightedGraph &original, const ReductionTrace &trace);

/// Maps a subgraph of the reduced graph back to the original one. Throws
/// GraphError if the solution references elements absent from `reduced`.
Subgraph lift(const ReductionTrace &trace, const WeightedGraph &reduced, const Subgraph &solution);

}  // namespace gmwcs

#endif  // GMWCS_REDUCTIONS_HPP
