#include "skysr/engine.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "skysr/error.hpp"

namespace skysr {

// ---------------------------------------------------------------------------
// Search scratch space. Distances are epoch-stamped so a search does not pay
// O(|V|) to reset them.

struct QueryContext::Scratch {
    struct HeapItem {
        double dist;
        VertexId v;
        bool operator>(const HeapItem& o) const { return dist > o.dist || (dist == o.dist && v > o.v); }
    };

    explicit Scratch(std::size_t n) : dist(n, kInfinity), carry(n, 0.0), seen(n, 0), settled(n, 0) {}

    void begin() {
        if (++epoch == 0) {
            std::fill(seen.begin(), seen.end(), 0);
            std::fill(settled.begin(), settled.end(), 0);
            epoch = 1;
        }
        heap.clear();
    }

    double dist_of(VertexId v) const { return seen[v] == epoch ? dist[v] : kInfinity; }
    bool is_settled(VertexId v) const { return settled[v] == epoch; }
    void settle(VertexId v) { settled[v] = epoch; }

    void relax(VertexId v, double d, double c) {
        seen[v] = epoch;
        dist[v] = d;
        carry[v] = c;
        heap.push_back({d, v});
        std::push_heap(heap.begin(), heap.end(), std::greater<>{});
    }

    /// Pops the nearest unsettled vertex; false when the frontier is empty.
    bool pop(HeapItem& out) {
        while (!heap.empty()) {
            std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
            out = heap.back();
            heap.pop_back();
            if (!is_settled(out.v) && out.dist <= dist[out.v]) return true;
        }
        return false;
    }

    std::vector<double> dist;
    std::vector<double> carry;  // best match similarity strictly before v on its search path
    std::vector<std::uint32_t> seen;
    std::vector<std::uint32_t> settled;
    std::uint32_t epoch = 0;
    std::vector<HeapItem> heap;
};

// ---------------------------------------------------------------------------

std::optional<std::vector<Candidate>> SearchCache::lookup(VertexId source, std::size_t position, double budget) const {
    const Entry* e = find(source, position);
    if (!e || e->covered < budget) return std::nullopt;
    std::vector<Candidate> out;
    for (const Candidate& c : e->candidates)
        if (c.distance < budget) out.push_back(c);
    return out;
}

const SearchCache::Entry* SearchCache::find(VertexId source, std::size_t position) const {
    auto it = entries_.find({source, position});
    return it == entries_.end() ? nullptr : &it->second;
}

void SearchCache::store(VertexId source, std::size_t position, Entry entry) {
    auto [it, inserted] = entries_.try_emplace({source, position});
    if (!inserted) candidate_count_ -= it->second.candidates.size();
    candidate_count_ += entry.candidates.size();
    it->second = std::move(entry);
}

// ---------------------------------------------------------------------------

bool RouteQueue::before(const Item& a, const Item& b) const {
    const Route& x = a.route;
    const Route& y = b.route;
    if (size_first_) {
        if (x.size() != y.size()) return x.size() > y.size();
        if (x.min_semantic() != y.min_semantic()) return x.min_semantic() < y.min_semantic();
    }
    if (x.length != y.length) return x.length < y.length;
    return a.seq < b.seq;
}

void RouteQueue::push(Route r) {
    heap_.push_back({std::move(r), next_seq_++});
    // std heap functions build a max-heap w.r.t. the comparator, so "less"
    // means "dequeued later".
    std::push_heap(heap_.begin(), heap_.end(), [this](const Item& a, const Item& b) { return before(b, a); });
}

Route RouteQueue::pop() {
    std::pop_heap(heap_.begin(), heap_.end(), [this](const Item& a, const Item& b) { return before(b, a); });
    Route r = std::move(heap_.back().route);
    heap_.pop_back();
    return r;
}

// ---------------------------------------------------------------------------

QueryContext::QueryContext(const RoadGraph& g, const CategoryForest& f, VertexId start, CategorySequence seq,
                           QueryFlags flags, QueryOptions options)
    : g_(&g), f_(&f), start_(start), seq_(std::move(seq)), flags_(flags), options_(options),
      scratch_(std::make_unique<Scratch>(g.num_vertices())) {
    if (!g.contains(start_)) throw InvalidArgument("unknown start vertex " + std::to_string(start_));
    validate_sequence(f, seq_);

    const std::size_t n = seq_.size();
    sim_by_category_.assign(n, std::vector<double>(f.size(), 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (CategoryId c = 0; static_cast<std::size_t>(c) < f.size(); ++c)
            sim_by_category_[i][static_cast<std::size_t>(c)] = match_similarity(f, c, seq_[i]);

    std::set<CategoryId> present;
    match_counts_.assign(n, 0);
    for (const PoiVertex& p : g.pois()) {
        present.insert(p.category);
        for (std::size_t i = 0; i < n; ++i)
            if (sim_by_category_[i][static_cast<std::size_t>(p.category)] > 0.0) ++match_counts_[i];
    }

    filter_safe_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool unique = true;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && f.tree_of(seq_[j]) == f.tree_of(seq_[i])) unique = false;
        filter_safe_[i] = flags_.path_filter && unique;
    }

    std::vector<CategoryId> present_list(present.begin(), present.end());
    best_nonperfect_suffix_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        best_nonperfect_suffix_[i] =
            std::max(best_nonperfect_suffix_[i + 1], best_nonperfect_similarity(f, seq_[i], present_list));
    }

    ls_hop.assign(n > 0 ? n - 1 : 0, 0.0);
    lp_hop.assign(n > 0 ? n - 1 : 0, 0.0);
}

QueryContext::~QueryContext() = default;
QueryContext::QueryContext(QueryContext&&) noexcept = default;
QueryContext& QueryContext::operator=(QueryContext&&) noexcept = default;

double QueryContext::ls_suffix(std::size_t route_size) const {
    double sum = 0.0;
    for (std::size_t i = ls_hop.size(); i-- > 0 && i + 1 >= route_size;) sum += ls_hop[i];
    return sum;
}

double QueryContext::lp_suffix(std::size_t route_size) const {
    double sum = 0.0;
    for (std::size_t i = lp_hop.size(); i-- > 0 && i + 1 >= route_size;) sum += lp_hop[i];
    return sum;
}

double QueryContext::length_lower_bound(const Route& r, const std::vector<double>& hops) const {
    // Same association order as the route length itself, so the bound never
    // exceeds a real completion by rounding.
    double bound = r.length;
    for (std::size_t i = r.size() == 0 ? 0 : r.size() - 1; i < hops.size(); ++i) bound += hops[i];
    return bound;
}

void QueryContext::record(TraceKind kind, const Route& r) const {
    if (options_.trace) options_.trace->push_back({kind, r.pois, r.length, r.min_semantic()});
}

void QueryContext::check_deadline() const {
    if (options_.deadline && std::chrono::steady_clock::now() > *options_.deadline) throw QueryTimeout();
}

// ---------------------------------------------------------------------------

namespace {

struct SearchOutcome {
    double stopped_at = kInfinity;  // first settled distance that met the stop rule
    double radius = 0.0;            // largest distance actually settled
};

/// Dijkstra from `source` reporting PoIs that match `position` in settle
/// order. With the path filter on, a PoI is reported only if it is strictly
/// more similar than every matching PoI before it on its search path, and
/// perfect matches are not expanded.
template <typename Stop, typename OnCandidate>
SearchOutcome candidate_search(QueryContext& ctx, VertexId source, std::size_t position, Stop&& stop,
                               OnCandidate&& on_candidate) {
    auto& s = ctx.scratch();
    const RoadGraph& g = ctx.graph();
    const bool filter = ctx.path_filter_at(position);
    ++ctx.counters.dijkstra_executions;

    s.begin();
    s.relax(source, 0.0, 0.0);
    SearchOutcome out;
    QueryContext::Scratch::HeapItem item{};
    std::uint64_t settled = 0;
    while (s.pop(item)) {
        const VertexId u = item.v;
        const double d = item.dist;
        if (stop(d)) {
            out.stopped_at = d;
            break;
        }
        s.settle(u);
        out.radius = d;
        ++ctx.counters.visited_vertices;
        if ((++settled & 0xFFFu) == 0) ctx.check_deadline();

        const double h = ctx.match(position, u);
        const double before = s.carry[u];
        if (h > 0.0 && (!filter || h > before)) on_candidate(Candidate{u, d, h});
        if (filter && h == 1.0) continue;

        const double carry = filter ? std::max(before, h) : 0.0;
        for (const Arc& a : g.neighbors(u)) {
            const double nd = d + a.weight;
            if (nd < s.dist_of(a.to)) s.relax(a.to, nd, carry);
        }
    }
    return out;
}

void offer_completed(QueryContext& ctx, Route rt, SkylineSet& skyline) {
    if (!(rt.length < skyline.threshold(rt.semantic()))) {
        ++ctx.counters.pruned_routes;
        ctx.record(TraceKind::reject, rt);
        return;
    }
    std::vector<Route> evicted;
    Route copy_for_trace = ctx.trace() ? rt : Route{};
    if (skyline.update(std::move(rt), &evicted)) {
        ++ctx.counters.skyline_accepts;
        ctx.counters.skyline_evictions += evicted.size();
        ctx.record(TraceKind::accept, copy_for_trace);
        for (const Route& e : evicted) ctx.record(TraceKind::evict, e);
    } else {
        ctx.record(TraceKind::reject, copy_for_trace);
    }
}

constexpr int kRepairSearchBudget = 256;

/// Perfect matches of `position` reachable from `source`, nearest first.
std::vector<std::pair<VertexId, double>> perfect_by_distance(QueryContext& ctx, VertexId source,
                                                             std::size_t position) {
    auto& s = ctx.scratch();
    std::vector<std::pair<VertexId, double>> out;
    ++ctx.counters.dijkstra_executions;
    s.begin();
    s.relax(source, 0.0, 0.0);
    QueryContext::Scratch::HeapItem item{};
    while (s.pop(item)) {
        s.settle(item.v);
        ++ctx.counters.visited_vertices;
        if (ctx.perfect(position, item.v)) out.emplace_back(item.v, item.dist);
        for (const Arc& a : ctx.graph().neighbors(item.v)) {
            const double nd = item.dist + a.weight;
            if (nd < s.dist_of(a.to)) s.relax(a.to, nd, 0.0);
        }
    }
    return out;
}

/// Depth-first chain of distinct perfect matches, nearest first at every leg.
/// `budget` bounds the searches spent.
bool perfect_chain(QueryContext& ctx, const Route& r, VertexId source, int& budget, Route& out) {
    const std::size_t i = r.size();
    if (i == ctx.route_size()) {
        out = r;
        return true;
    }
    if (budget-- <= 0) return false;
    for (const auto& [v, d] : perfect_by_distance(ctx, source, i)) {
        if (r.contains(v)) continue;
        if (perfect_chain(ctx, r.extended(v, d, 1.0), v, budget, out)) return true;
        if (budget <= 0) return false;
    }
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------

SkylineSet nninit(QueryContext& ctx) {
    const std::size_t n = ctx.route_size();
    const RoadGraph& g = ctx.graph();
    SkylineSet skyline(n);
    Route chain;
    VertexId source = ctx.start();
    auto& s = ctx.scratch();

    for (std::size_t i = 0; i < n; ++i) {
        ++ctx.counters.dijkstra_executions;
        s.begin();
        s.relax(source, 0.0, 0.0);
        bool found = false;
        QueryContext::Scratch::HeapItem item{};
        while (!found && s.pop(item)) {
            const VertexId u = item.v;
            const double d = item.dist;
            s.settle(u);
            ++ctx.counters.visited_vertices;
            if (i + 1 == n) {
                double h = ctx.match(i, u);
                if (h > 0.0 && !chain.contains(u)) {
                    Route rt = chain.extended(u, d, h);
                    Route copy = ctx.trace() ? rt : Route{};
                    if (skyline.update(std::move(rt))) ctx.record(TraceKind::initial_accept, copy);
                }
            }
            if (ctx.perfect(i, u) && !chain.contains(u)) {
                chain = chain.extended(u, d, 1.0);
                source = u;
                found = true;
                break;
            }
            for (const Arc& a : g.neighbors(u)) {
                const double nd = d + a.weight;
                if (nd < s.dist_of(a.to)) s.relax(a.to, nd, 0.0);
            }
        }
        if (!found) break;
    }

    // The greedy chain got stuck: every remaining perfect match is used or
    // unreachable. Backtrack so a score-0 route still seeds the skyline.
    if (chain.size() < n) {
        bool each_position_has_perfect = true;
        for (std::size_t i = 0; i < n && each_position_has_perfect; ++i)
            each_position_has_perfect = std::any_of(g.pois().begin(), g.pois().end(),
                                                    [&](const PoiVertex& p) { return ctx.perfect(i, p.vertex); });
        int budget = kRepairSearchBudget;
        Route repaired;
        if (each_position_has_perfect && perfect_chain(ctx, Route{}, ctx.start(), budget, repaired)) {
            Route copy = ctx.trace() ? repaired : Route{};
            std::vector<Route> evicted;
            if (skyline.update(std::move(repaired), &evicted)) {
                ctx.record(TraceKind::initial_accept, copy);
                for (const Route& e : evicted) ctx.record(TraceKind::evict, e);
            }
        }
    }
    return skyline;
}

void compute_min_distances(QueryContext& ctx, const SkylineSet& skyline) {
    const std::size_t n = ctx.route_size();
    const RoadGraph& g = ctx.graph();
    auto& s = ctx.scratch();
    ctx.ls_hop.assign(n > 0 ? n - 1 : 0, 0.0);
    ctx.lp_hop.assign(n > 0 ? n - 1 : 0, 0.0);
    if (n < 2) return;

    // PoIs at or beyond the zero-score threshold cannot be on a useful route.
    const double limit = skyline.threshold(0.0);
    std::vector<char> in_range(g.num_vertices(), 1);
    if (limit < kInfinity) {
        std::fill(in_range.begin(), in_range.end(), 0);
        ++ctx.counters.dijkstra_executions;
        s.begin();
        s.relax(ctx.start(), 0.0, 0.0);
        QueryContext::Scratch::HeapItem item{};
        while (s.pop(item)) {
            if (!(item.dist < limit)) break;
            s.settle(item.v);
            ++ctx.counters.visited_vertices;
            in_range[item.v] = 1;
            for (const Arc& a : g.neighbors(item.v)) {
                const double nd = item.dist + a.weight;
                if (nd < s.dist_of(a.to)) s.relax(a.to, nd, 0.0);
            }
        }
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::vector<VertexId> sources;
        std::size_t semantic_dests = 0;
        std::size_t perfect_dests = 0;
        for (const PoiVertex& p : g.pois()) {
            if (!in_range[p.vertex]) continue;
            if (ctx.match(i, p.vertex) > 0.0) sources.push_back(p.vertex);
            if (ctx.match(i + 1, p.vertex) > 0.0) ++semantic_dests;
            if (ctx.perfect(i + 1, p.vertex)) ++perfect_dests;
        }
        if (sources.empty() || semantic_dests == 0) continue;  // 0 never over-prunes

        ++ctx.counters.dijkstra_executions;
        s.begin();
        for (VertexId src : sources) s.relax(src, 0.0, 0.0);
        double ls = kInfinity;
        double lp = kInfinity;
        QueryContext::Scratch::HeapItem item{};
        while (s.pop(item)) {
            const VertexId u = item.v;
            s.settle(u);
            ++ctx.counters.visited_vertices;
            if (in_range[u]) {
                if (ls == kInfinity && ctx.match(i + 1, u) > 0.0) ls = item.dist;
                if (lp == kInfinity && ctx.perfect(i + 1, u)) lp = item.dist;
            }
            if (ls < kInfinity && (lp < kInfinity || perfect_dests == 0)) break;
            for (const Arc& a : g.neighbors(u)) {
                const double nd = item.dist + a.weight;
                if (nd < s.dist_of(a.to)) s.relax(a.to, nd, 0.0);
            }
        }
        if (ls == kInfinity) continue;  // unreachable destinations: keep the 0 default
        ctx.ls_hop[i] = ls;
        ctx.lp_hop[i] = lp == kInfinity ? ls : lp;
    }
}

bool lower_bound_prune(const QueryContext& ctx, const Route& r, const SkylineSet& skyline) {
    const double threshold = skyline.threshold(r.min_semantic());
    if (!ctx.flags().lower_bounds) return r.length >= threshold;
    if (ctx.length_lower_bound(r, ctx.ls_hop) >= threshold) return true;
    if (skyline.empty()) return false;

    // Any non-perfect future match lifts the score to at least this value.
    const double nonperfect_score = 1.0 - r.sim_product * ctx.best_nonperfect_from(r.size());
    const double perfect_length = ctx.length_lower_bound(r, ctx.lp_hop);
    bool only_perfect_survives = false;
    bool perfect_dominated = false;
    for (const Route& m : skyline.routes()) {
        if (r.length >= m.length && nonperfect_score >= m.semantic()) only_perfect_survives = true;
        if (perfect_length >= m.length && r.min_semantic() >= m.semantic()) perfect_dominated = true;
    }
    return only_perfect_survives && perfect_dominated;
}

void modified_dijkstra(QueryContext& ctx, const Route& r, SkylineSet& skyline, RouteQueue& queue) {
    const std::size_t n = ctx.route_size();
    const std::size_t position = r.size();
    const VertexId source = r.empty() ? ctx.start() : r.last();
    const double min_semantic = r.min_semantic();

    auto stop = [&](double d) { return r.length + d >= skyline.threshold(min_semantic); };
    auto process = [&](const Candidate& c) {
        if (r.contains(c.poi)) return;
        Route rt = r.extended(c.poi, c.distance, c.sim);
        if (rt.size() == n) {
            offer_completed(ctx, std::move(rt), skyline);
        } else if (lower_bound_prune(ctx, rt, skyline)) {
            ++ctx.counters.pruned_routes;
        } else {
            ctx.record(TraceKind::enqueue, rt);
            queue.push(std::move(rt));
            ++ctx.counters.queue_pushes;
            ctx.counters.peak_queue_size = std::max<std::uint64_t>(ctx.counters.peak_queue_size, queue.size());
        }
    };

    SearchOutcome outcome;
    if (ctx.flags().caching) {
        const SearchCache::Entry* entry = ctx.cache.find(source, position);
        if (entry && r.length + entry->covered >= skyline.threshold(min_semantic)) {
            ++ctx.counters.cache_hits;
            for (const Candidate& c : entry->candidates) {
                if (stop(c.distance)) break;
                process(c);
            }
            return;
        }
        SearchCache::Entry fresh;
        outcome = candidate_search(ctx, source, position, stop, [&](const Candidate& c) {
            fresh.candidates.push_back(c);
            process(c);
        });
        fresh.covered = outcome.stopped_at;
        ctx.cache.store(source, position, std::move(fresh));
        ctx.counters.peak_cached_candidates =
            std::max<std::uint64_t>(ctx.counters.peak_cached_candidates, ctx.cache.candidate_count());
    } else {
        outcome = candidate_search(ctx, source, position, stop, process);
    }
    if (r.empty()) {
        ctx.counters.first_search_weight = outcome.stopped_at < kInfinity ? outcome.stopped_at : outcome.radius;
    }
}

BssrResult run_bssr(const RoadGraph& g, const CategoryForest& f, VertexId start, const CategorySequence& seq,
                    QueryFlags flags, QueryOptions options) {
    const auto t0 = std::chrono::steady_clock::now();
    QueryContext ctx(g, f, start, seq, flags, options);
    const std::size_t n = seq.size();
    SkylineSet skyline(n);

    bool feasible = true;
    for (std::size_t i = 0; i < n; ++i) feasible = feasible && ctx.match_count(i) > 0;

    if (feasible) {
        if (flags.init_search) {
            skyline = nninit(ctx);
            ctx.counters.skyline_accepts += skyline.size();
        }
        if (flags.lower_bounds) compute_min_distances(ctx, skyline);

        RouteQueue queue(flags.pq_ordering);
        modified_dijkstra(ctx, Route{}, skyline, queue);
        while (!queue.empty()) {
            ctx.check_deadline();
            Route r = queue.pop();
            ctx.record(TraceKind::dequeue, r);
            // Thresholds may have tightened since the route was queued.
            if (lower_bound_prune(ctx, r, skyline)) {
                ++ctx.counters.pruned_routes;
                ctx.record(TraceKind::prune_on_dequeue, r);
                continue;
            }
            modified_dijkstra(ctx, r, skyline, queue);
        }
    }
    ctx.cache.clear();

    BssrResult result{std::move(skyline), ctx.counters, 0.0};
    result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace skysr
