#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skysr/graph.hpp"
#include "skysr/route.hpp"
#include "skysr/taxonomy.hpp"

namespace skysr {

/// The four BSSR optimizations. Every combination returns the same skyline
/// scores; only the amount of work differs.
struct QueryFlags {
    bool init_search = true;  // NNinit seeds the skyline
    bool pq_ordering = true;  // size desc, score asc, length asc; else length asc
    bool lower_bounds = true; // ls/lp tables and the minimum semantic increment
    bool caching = true;      // reuse of candidate searches per (PoI, position)
    /// Skip PoIs reached through an at-least-as-similar PoI and stop at
    /// perfect matches. Always on in production; toggled by tests.
    bool path_filter = true;

    static QueryFlags all() { return {}; }
    static QueryFlags none() { return {false, false, false, false, true}; }
    /// Bit 0 init_search, 1 pq_ordering, 2 lower_bounds, 3 caching.
    static QueryFlags from_mask(unsigned mask) {
        return {(mask & 1u) != 0, (mask & 2u) != 0, (mask & 4u) != 0, (mask & 8u) != 0, true};
    }
};

struct QueryCounters {
    std::uint64_t visited_vertices = 0;     // settled vertices over every search
    std::uint64_t dijkstra_executions = 0;  // searches actually run (cache hits excluded)
    std::uint64_t queue_pushes = 0;
    std::uint64_t pruned_routes = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t skyline_accepts = 0;
    std::uint64_t skyline_evictions = 0;
    std::uint64_t peak_queue_size = 0;
    std::uint64_t peak_cached_candidates = 0;
    /// Distance covered by the first search from the start vertex.
    double first_search_weight = 0.0;
};

enum class TraceKind {
    initial_accept,  // NNinit put a route into the skyline
    accept,          // skyline_update accepted a route
    evict,           // a member was removed by a dominating route
    reject,          // skyline_update refused a dominated/equivalent route
    enqueue,
    dequeue,
    prune_on_dequeue,
};

struct TraceEvent {
    TraceKind kind;
    std::vector<VertexId> pois;
    double length = 0.0;
    double semantic = 0.0;  // underbar-s for partial routes
};

using Trace = std::vector<TraceEvent>;

class QueryTimeout : public std::runtime_error {
public:
    QueryTimeout() : std::runtime_error("query deadline exceeded") {}
};

struct QueryOptions {
    Trace* trace = nullptr;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// PoI found by a candidate search: distance from the search source and the
/// match similarity for the searched position.
struct Candidate {
    VertexId poi = 0;
    double distance = 0.0;
    double sim = 0.0;
};

/// Per-query store of candidate searches keyed by (source, position). An
/// entry lists every candidate closer than `covered`, in settle order.
class SearchCache {
public:
    struct Entry {
        double covered = 0.0;
        std::vector<Candidate> candidates;
    };

    /// Hit only if the stored search covers `budget`; the returned
    /// candidates are those with distance < budget.
    std::optional<std::vector<Candidate>> lookup(VertexId source, std::size_t position, double budget) const;
    const Entry* find(VertexId source, std::size_t position) const;
    /// Replaces any existing entry for the key.
    void store(VertexId source, std::size_t position, Entry entry);
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t candidate_count() const noexcept { return candidate_count_; }
    void clear() {
        entries_.clear();
        candidate_count_ = 0;
    }

private:
    std::map<std::pair<VertexId, std::size_t>, Entry> entries_;
    std::size_t candidate_count_ = 0;
};

/// Max-priority queue of partial routes (Q_b).
class RouteQueue {
public:
    explicit RouteQueue(bool size_first) : size_first_(size_first) {}
    void push(Route r);
    Route pop();
    const Route& top() const { return heap_.front().route; }
    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }

private:
    struct Item {
        Route route;
        std::uint64_t seq;
    };
    bool before(const Item& a, const Item& b) const;

    bool size_first_;
    std::uint64_t next_seq_ = 0;
    std::vector<Item> heap_;
};

/// Everything one query owns: the query itself, match tables, lower-bound
/// tables, the cache, counters and scratch space for searches.
class QueryContext {
public:
    QueryContext(const RoadGraph& g, const CategoryForest& f, VertexId start, CategorySequence seq,
                 QueryFlags flags = {}, QueryOptions options = {});

    const RoadGraph& graph() const noexcept { return *g_; }
    const CategoryForest& forest() const noexcept { return *f_; }
    VertexId start() const noexcept { return start_; }
    const CategorySequence& sequence() const noexcept { return seq_; }
    std::size_t route_size() const noexcept { return seq_.size(); }
    const QueryFlags& flags() const noexcept { return flags_; }

    /// Match similarity of the vertex for a 0-based position; 0 when the
    /// vertex is not a PoI or its category is irrelevant.
    double match(std::size_t position, VertexId v) const noexcept {
        CategoryId c = g_->category_of(v);
        return c == kNoCategory ? 0.0 : sim_by_category_[position][static_cast<std::size_t>(c)];
    }
    bool perfect(std::size_t position, VertexId v) const noexcept { return match(position, v) == 1.0; }
    /// Number of PoIs semantically matching the position.
    std::size_t match_count(std::size_t position) const { return match_counts_[position]; }

    /// The path filter is sound at a position only when no other position
    /// of the query uses the same category tree.
    bool path_filter_at(std::size_t position) const noexcept { return filter_safe_[position] != 0; }

    /// Largest non-perfect similarity achievable at any position >= from.
    double best_nonperfect_from(std::size_t from) const noexcept { return best_nonperfect_suffix_[from]; }

    /// Per-hop minima; index i is the hop from position i to i + 1.
    std::vector<double> ls_hop;
    std::vector<double> lp_hop;
    /// Suffix sums sum_{i >= k-1} hop[i] for a route of size k.
    double ls_suffix(std::size_t route_size) const;
    double lp_suffix(std::size_t route_size) const;
    /// l(r) plus the remaining hop minima, accumulated left to right.
    double length_lower_bound(const Route& r, const std::vector<double>& hops) const;

    SearchCache cache;
    QueryCounters counters;

    Trace* trace() const noexcept { return options_.trace; }
    void record(TraceKind kind, const Route& r) const;
    void check_deadline() const;

    struct Scratch;
    Scratch& scratch() const { return *scratch_; }
    ~QueryContext();
    QueryContext(QueryContext&&) noexcept;
    QueryContext& operator=(QueryContext&&) noexcept;

private:
    const RoadGraph* g_;
    const CategoryForest* f_;
    VertexId start_;
    CategorySequence seq_;
    QueryFlags flags_;
    QueryOptions options_;
    std::vector<std::vector<double>> sim_by_category_;
    std::vector<std::size_t> match_counts_;
    std::vector<char> filter_safe_;
    std::vector<double> best_nonperfect_suffix_;
    std::unique_ptr<Scratch> scratch_;
};

/// Greedy initial search: chains nearest perfect matches and, on the last
/// leg, offers every semantic match met before the first perfect one. When
/// the chain gets stuck on used or unreachable PoIs, a bounded depth-first
/// search over perfect matches supplies the score-0 route instead.
SkylineSet nninit(QueryContext& ctx);

/// Fills ctx.ls_hop / ctx.lp_hop with one multi-source multi-destination
/// search per hop. PoIs farther from the start than the current
/// zero-score threshold of `skyline` are left out.
void compute_min_distances(QueryContext& ctx, const SkylineSet& skyline);

/// True if no extension of the partial route `r` can enter the skyline.
bool lower_bound_prune(const QueryContext& ctx, const Route& r, const SkylineSet& skyline);

/// Expands `r` by one position: searches from its last PoI (or the start
/// vertex) for matches of the next category, feeding completed routes to
/// the skyline and partial ones to the queue.
void modified_dijkstra(QueryContext& ctx, const Route& r, SkylineSet& skyline, RouteQueue& queue);

struct BssrResult {
    SkylineSet skyline;
    QueryCounters counters;
    double elapsed_ms = 0.0;
};

/// Exact skyline sequenced routes from `start` for `seq`.
/// Throws InvalidArgument for unknown vertices or categories.
BssrResult run_bssr(const RoadGraph& g, const CategoryForest& f, VertexId start, const CategorySequence& seq,
                    QueryFlags flags = {}, QueryOptions options = {});

}  // namespace skysr
