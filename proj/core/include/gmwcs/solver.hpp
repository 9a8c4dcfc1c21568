#ifndef GMWCS_SOLVER_HPP
#define GMWCS_SOLVER_HPP

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

#include "gmwcs/backend.hpp"
#include "gmwcs/graph.hpp"
#include "gmwcs/result.hpp"

namespace gmwcs {

enum class Engine { branch_and_bound, backend_cut_loop };

using BackendFactory = std::function<std::unique_ptr<RelaxationBackend>()>;

struct SolveConfig {
    std::optional<double> time_limit_seconds;
    int worker_count = 1;
    Engine engine = Engine::branch_and_bound;
    bool preprocess = true;
    bool decompose = true;
    bool symmetry_breaking = true;
    bool bfs_restriction = true;
    bool allow_empty_solution = true;
    // Required by Engine::backend_cut_loop.
    BackendFactory backend_factory;
    // Absolute wall-clock deadline; derived from time_limit_seconds by solve()
    // when unset.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Full pipeline: component split, preprocessing, cut-vertex decomposition
/// and the configured engine; the answer is lifted back to `instance`'s ids.
/// Rooted instances are restricted to the root's component. Throws
/// GraphError for an unknown root and ConfigError for a bad configuration.
SolveResult solve(const Instance &instance, const SolveConfig &config = {});

/// Exact combinatorial branch-and-bound over include/exclude decisions on
/// vertices and edges. Instance must be connected. Runs up to
/// config.worker_count threads sharing one incumbent.
SolveResult branch_and_bound(const Instance &instance, const SolveConfig &config = {});

/// Cutting-plane loop on a rooted instance: solve the relaxation, separate
/// root-vertex cuts at the relaxation point, repeat until none is violated.
/// An integral final point is decoded, certified and returned; otherwise the
/// loop bound is paired with a branch-and-bound incumbent.
SolveResult backend_cut_loop(const Instance &instance, RelaxationBackend &backend, const SolveConfig &config = {});

}  // namespace gmwcs

#endif  // GMWCS_SOLVER_HPP
