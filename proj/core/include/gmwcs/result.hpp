#ifndef GMWCS_RESULT_HPP
#define GMWCS_RESULT_HPP

#include <cstdint>
#include <functional>
#include <string_view>

#include "gmwcs/graph.hpp"

namespace gmwcs {

enum class SolveStatus { optimal, timeout, infeasible_rooted };

std::string_view to_string(SolveStatus status);

struct SolveStats {
    std::uint64_t nodes = 0;
    std::uint64_t cut_rounds = 0;
    std::uint64_t cuts_added = 0;

    SolveStats &operator+=(const SolveStats &other) {
        nodes += other.nodes;
        cut_rounds += other.cut_rounds;
        cuts_added += other.cuts_added;
        return *this;
    }
};

/// A connected subgraph together with a certified ceiling on the optimum.
/// Invariant: weight <= upper_bound, equal when status is optimal.
struct SolveResult {
    Subgraph solution;
    double weight = 0.0;
    double upper_bound = 0.0;
    SolveStatus status = SolveStatus::optimal;
    SolveStats stats;
};

using SolveFunction = std::function<SolveResult(const Instance &)>;

}  // namespace gmwcs

#endif  // GMWCS_RESULT_HPP
