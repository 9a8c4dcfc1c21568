#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <limits>
#include <mutex>
#include <thread>

#include "gmwcs/solver.hpp"

namespace gmwcs {

namespace {

enum : std::uint8_t { kUndecided = 0, kIn = 1, kOut = 2 };

// Bounds within this of the incumbent cannot improve it.
constexpr double kPruneSlack = 1e-12;
constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

struct Node {
    std::vector<std::uint8_t> vertex_state;
    std::vector<std::uint8_t> edge_state;
    double in_weight = 0.0;
    double bound = 0.0;  // valid upper bound for the subtree (parent's bound)
};

class Search {
public:
    Search(const Instance &instance, const SolveConfig &config)
        : graph_(instance.graph), config_(config), workers_(static_cast<std::size_t>(std::max(1, config.worker_count))) {
        const std::size_t n = graph_.vertex_count();
        double positive_total = 0.0;
        for (const auto &v : graph_.vertices()) positive_total += std::max(0.0, v.weight);
        for (const auto &e : graph_.edges()) positive_total += std::max(0.0, e.weight);

        // Incumbent seed: the empty subgraph, or the best single vertex.
        if (instance.rooted()) {
            const std::size_t r = graph_.vertex_index(*instance.root);
            set_incumbent_locked({{graph_.vertex(r).id}, {}}, graph_.vertex(r).weight);
        } else if (config.allow_empty_solution) {
            set_incumbent_locked({}, 0.0);
        } else if (n > 0) {
            std::size_t best = 0;
            for (std::size_t v = 1; v < n; ++v)
                if (graph_.vertex(v).weight > graph_.vertex(best).weight) best = v;
            set_incumbent_locked({{graph_.vertex(best).id}, {}}, graph_.vertex(best).weight);
        }

        Node blank{std::vector<std::uint8_t>(n, kUndecided), std::vector<std::uint8_t>(graph_.edge_count(), kUndecided),
                   0.0, positive_total};
        if (instance.rooted()) {
            Node start = blank;
            include_vertex(start, graph_.vertex_index(*instance.root));
            pool_.push_back(std::move(start));
        } else {
            // Each subtree fixes its start as the heaviest member: heavier
            // starts (ties: larger id) are excluded.
            std::vector<std::size_t> order(n);
            for (std::size_t i = 0; i < n; ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return root_order_before(graph_, graph_.vertex(b).id, graph_.vertex(a).id);
            });
            Node current = blank;
            for (std::size_t s : order) {
                Node start = current;
                include_vertex(start, s);
                pool_.push_back(std::move(start));
                exclude_vertex(current, s);
            }
        }
    }

    SolveResult run() {
        if (workers_ == 1) {
            work();
        } else {
            std::vector<std::thread> threads;
            threads.reserve(workers_);
            for (std::size_t i = 0; i < workers_; ++i) threads.emplace_back([this] { work(); });
            for (auto &t : threads) t.join();
        }

        SolveResult result;
        result.solution = incumbent_;
        result.solution.normalize();
        result.weight = total_weight(graph_, result.solution);
        result.stats.nodes = nodes_.load();
        if (timed_out_.load()) {
            result.status = SolveStatus::timeout;
            result.upper_bound = std::max(result.weight, pending_bound_);
        } else {
            result.status = SolveStatus::optimal;
            result.upper_bound = result.weight;
        }
        return result;
    }

private:
    void work() {
        std::vector<Node> stack;
        while (true) {
            if (stack.empty()) {
                std::unique_lock lock(pool_mutex_);
                ++idle_;
                hungry_.store(true);
                pool_ready_.wait(lock, [&] { return !pool_.empty() || idle_ == workers_ || stop_; });
                if (stop_ || pool_.empty()) {
                    stop_.store(true);
                    pool_ready_.notify_all();
                    abandon(stack);
                    return;
                }
                --idle_;
                stack.push_back(std::move(pool_.front()));
                pool_.pop_front();
                hungry_.store(idle_ > 0);
            }

            if (deadline_passed()) {
                std::lock_guard lock(pool_mutex_);
                timed_out_.store(true);
                stop_.store(true);
                pool_ready_.notify_all();
            }
            if (stop_.load(std::memory_order_relaxed)) {
                abandon(stack);
                std::vector<Node> leftover;
                {
                    std::lock_guard lock(pool_mutex_);
                    leftover.assign(std::make_move_iterator(pool_.begin()), std::make_move_iterator(pool_.end()));
                    pool_.clear();
                }
                abandon(leftover);
                return;
            }

            Node node = std::move(stack.back());
            stack.pop_back();
            expand(std::move(node), stack);

            if (workers_ > 1 && stack.size() >= 2 && hungry_.load(std::memory_order_relaxed)) {
                std::lock_guard lock(pool_mutex_);
                if (pool_.empty() && idle_ > 0) {
                    pool_.push_back(std::move(stack.front()));
                    stack.erase(stack.begin());
                    pool_ready_.notify_one();
                }
            }
        }
    }

    bool deadline_passed() {
        if (!config_.deadline) return false;
        if ((++clock_checks_ & 63u) != 0) return false;
        return std::chrono::steady_clock::now() >= *config_.deadline;
    }

    void abandon(const std::vector<Node> &stack) {
        if (stack.empty()) return;
        std::lock_guard lock(incumbent_mutex_);
        for (const auto &node : stack) pending_bound_ = std::max(pending_bound_, node.bound);
    }

    void include_vertex(Node &node, std::size_t v) const {
        if (node.vertex_state[v] == kIn) return;
        node.vertex_state[v] = kIn;
        node.in_weight += graph_.vertex(v).weight;
    }

    void exclude_vertex(Node &node, std::size_t v) const {
        node.vertex_state[v] = kOut;
        for (std::size_t e : graph_.incident(v))
            if (node.edge_state[e] == kUndecided) node.edge_state[e] = kOut;
    }

    void include_edge(Node &node, std::size_t e) const {
        node.edge_state[e] = kIn;
        node.in_weight += graph_.edge(e).weight;
        auto [a, b] = graph_.ends(e);
        include_vertex(node, a);
        include_vertex(node, b);
    }

    void expand(Node node, std::vector<Node> &stack) {
        nodes_.fetch_add(1, std::memory_order_relaxed);
        const std::size_t n = graph_.vertex_count();

        // Non-negative edges between two selected vertices never hurt.
        for (std::size_t e = 0; e < graph_.edge_count(); ++e) {
            if (node.edge_state[e] != kUndecided || graph_.edge(e).weight < 0.0) continue;
            auto [a, b] = graph_.ends(e);
            if (node.vertex_state[a] == kIn && node.vertex_state[b] == kIn) {
                node.edge_state[e] = kIn;
                node.in_weight += graph_.edge(e).weight;
            }
        }

        std::size_t seed = kNoIndex;
        std::size_t in_count = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (node.vertex_state[v] != kIn) continue;
            if (seed == kNoIndex) seed = v;
            ++in_count;
        }
        if (seed == kNoIndex) return;

        // Everything reachable from the selection through non-excluded elements.
        reached_.assign(n, false);
        std::vector<std::size_t> queue{seed};
        reached_[seed] = true;
        std::size_t reached_in = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t v = queue[head];
            for (std::size_t e : graph_.incident(v)) {
                if (node.edge_state[e] == kOut) continue;
                const std::size_t u = graph_.opposite(e, v);
                if (reached_[u] || node.vertex_state[u] == kOut) continue;
                reached_[u] = true;
                if (node.vertex_state[u] == kIn) ++reached_in;
                queue.push_back(u);
            }
        }
        if (reached_in != in_count) return;

        // Every undecided vertex joining the solution brings a distinct
        // undecided parent edge; non-positive parents are charged to it.
        double bound = node.in_weight;
        for (std::size_t v : queue) {
            if (node.vertex_state[v] != kUndecided) continue;
            double best_link = -std::numeric_limits<double>::infinity();
            for (std::size_t e : graph_.incident(v)) {
                if (node.edge_state[e] != kUndecided || !reached_[graph_.opposite(e, v)]) continue;
                best_link = std::max(best_link, graph_.edge(e).weight);
            }
            bound += std::max(0.0, graph_.vertex(v).weight + std::min(0.0, best_link));
        }
        for (std::size_t e = 0; e < graph_.edge_count(); ++e) {
            if (node.edge_state[e] != kUndecided || graph_.edge(e).weight <= 0.0) continue;
            auto [a, b] = graph_.ends(e);
            if (reached_[a] && reached_[b]) bound += graph_.edge(e).weight;
        }
        if (bound <= incumbent_value_.load(std::memory_order_relaxed) + kPruneSlack) return;
        node.bound = std::min(node.bound, bound);

        if (node.in_weight > incumbent_value_.load(std::memory_order_relaxed) && selection_connected(node, seed, in_count))
            offer(node);

        // Branch on the heaviest undecided element touching the selection;
        // ties prefer vertices, then smaller index.
        std::size_t best_vertex = kNoIndex, best_edge = kNoIndex;
        double best_magnitude = -1.0;
        auto better = [&](double magnitude, bool is_vertex, std::size_t index) {
            if (magnitude != best_magnitude) return magnitude > best_magnitude;
            const bool best_is_vertex = best_vertex != kNoIndex;
            if (is_vertex != best_is_vertex) return is_vertex;
            return index < (best_is_vertex ? best_vertex : best_edge);
        };
        for (std::size_t v = 0; v < n; ++v) {
            if (node.vertex_state[v] != kIn) continue;
            for (std::size_t e : graph_.incident(v)) {
                if (node.edge_state[e] != kUndecided) continue;
                const double em = std::abs(graph_.edge(e).weight);
                if (better(em, false, e)) {
                    best_magnitude = em;
                    best_edge = e;
                    best_vertex = kNoIndex;
                }
                const std::size_t u = graph_.opposite(e, v);
                if (node.vertex_state[u] != kUndecided) continue;
                const double vm = std::abs(graph_.vertex(u).weight);
                if (better(vm, true, u)) {
                    best_magnitude = vm;
                    best_vertex = u;
                    best_edge = kNoIndex;
                }
            }
        }
        if (best_vertex == kNoIndex && best_edge == kNoIndex) return;

        Node excluded = node;
        if (best_vertex != kNoIndex) {
            exclude_vertex(excluded, best_vertex);
            include_vertex(node, best_vertex);
        } else {
            excluded.edge_state[best_edge] = kOut;
            include_edge(node, best_edge);
        }
        stack.push_back(std::move(excluded));
        stack.push_back(std::move(node));
    }

    bool selection_connected(const Node &node, std::size_t seed, std::size_t in_count) const {
        std::vector<bool> seen(graph_.vertex_count(), false);
        std::vector<std::size_t> queue{seed};
        seen[seed] = true;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t v = queue[head];
            for (std::size_t e : graph_.incident(v)) {
                if (node.edge_state[e] != kIn) continue;
                const std::size_t u = graph_.opposite(e, v);
                if (!seen[u]) {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        return queue.size() == in_count;
    }

    void offer(const Node &node) {
        Subgraph s;
        for (std::size_t v = 0; v < graph_.vertex_count(); ++v)
            if (node.vertex_state[v] == kIn) s.vertices.push_back(graph_.vertex(v).id);
        for (std::size_t e = 0; e < graph_.edge_count(); ++e)
            if (node.edge_state[e] == kIn) s.edges.push_back(graph_.edge(e).id);
        std::lock_guard lock(incumbent_mutex_);
        if (node.in_weight > incumbent_value_.load()) set_incumbent_locked(std::move(s), node.in_weight);
    }

    void set_incumbent_locked(Subgraph solution, double value) {
        incumbent_ = std::move(solution);
        incumbent_value_.store(value);
    }

    const WeightedGraph &graph_;
    const SolveConfig &config_;
    const std::size_t workers_;

    std::mutex pool_mutex_;
    std::condition_variable pool_ready_;
    std::deque<Node> pool_;
    std::size_t idle_ = 0;
    std::atomic<bool> stop_{false};
    std::atomic<bool> hungry_{false};

    std::mutex incumbent_mutex_;
    Subgraph incumbent_;
    std::atomic<double> incumbent_value_{-std::numeric_limits<double>::infinity()};
    double pending_bound_ = -std::numeric_limits<double>::infinity();

    std::atomic<std::uint64_t> nodes_{0};
    std::atomic<bool> timed_out_{false};
    static thread_local std::vector<bool> reached_;
    static thread_local std::uint32_t clock_checks_;
};

thread_local std::vector<bool> Search::reached_;
thread_local std::uint32_t Search::clock_checks_ = 0;

}  // namespace

SolveResult branch_and_bound(const Instance &instance, const SolveConfig &config) {
    validate_instance(instance);
    if (config.worker_count < 1) throw ConfigError("worker_count must be positive");
    if (instance.graph.empty()) {
        if (!config.allow_empty_solution) throw GraphError("instance has no non-empty solution");
        return {};
    }
    if (!is_connected(instance.graph)) throw GraphError("branch-and-bound requires a connected instance");
    SolveConfig local = config;
    if (!local.deadline && local.time_limit_seconds)
        local.deadline = std::chrono::steady_clock::now() +
                         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(*local.time_limit_seconds));
    Search search(instance, local);
    return search.run();
}

}  // namespace gmwcs
