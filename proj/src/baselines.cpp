#include "skysr/baselines.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "skysr/error.hpp"

namespace skysr {

std::vector<Route> pareto_filter(std::vector<Route> routes) {
    std::vector<std::size_t> order(routes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (routes[a].length != routes[b].length) return routes[a].length < routes[b].length;
        return routes[a].semantic() < routes[b].semantic();
    });
    // Sweep by ascending length: a route survives only if it strictly
    // improves the best score seen so far.
    std::vector<Route> out;
    double best_semantic = kInfinity;
    for (std::size_t i : order) {
        if (routes[i].semantic() < best_semantic) {
            best_semantic = routes[i].semantic();
            out.push_back(std::move(routes[i]));
        }
    }
    return out;
}

std::vector<Route> brute_force_skyline(const RoadGraph& g, const CategoryForest& f, VertexId start,
                                       const CategorySequence& seq, std::uint64_t guard, BaselineStats* stats) {
    if (!g.contains(start)) throw InvalidArgument("unknown start vertex " + std::to_string(start));
    validate_sequence(f, seq);
    const std::size_t n = seq.size();

    struct Option {
        VertexId poi;
        double sim;
    };
    std::vector<std::vector<Option>> options(n);
    double tuples = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (const PoiVertex& p : g.pois()) {
            double h = match_similarity(f, p.category, seq[i]);
            if (h > 0.0) options[i].push_back({p.vertex, h});
        }
        tuples *= static_cast<double>(options[i].size());
    }
    if (tuples > static_cast<double>(guard)) {
        throw InvalidArgument("brute force would enumerate " + std::to_string(tuples) + " tuples (guard " +
                              std::to_string(guard) + ")");
    }
    for (const auto& o : options)
        if (o.empty()) return {};

    std::unordered_map<VertexId, std::vector<double>> dist;
    auto distances = [&](VertexId from) -> const std::vector<double>& {
        auto it = dist.find(from);
        if (it == dist.end()) {
            it = dist.emplace(from, distances_from(g, from)).first;
            if (stats) {
                ++stats->searches;
                stats->visited_states += g.num_vertices();
            }
        }
        return it->second;
    };

    std::vector<Route> all;
    std::vector<VertexId> stops;
    std::vector<double> sims;
    std::function<void(std::size_t, double)> enumerate = [&](std::size_t i, double length) {
        if (i == n) {
            Route r;
            r.pois = stops;
            r.sims = sims;
            r.length = length;
            double product = 1.0;
            for (double h : sims) product *= h;
            r.sim_product = product;
            all.push_back(std::move(r));
            return;
        }
        const std::vector<double>& from = distances(i == 0 ? start : stops.back());
        for (const Option& o : options[i]) {
            if (std::find(stops.begin(), stops.end(), o.poi) != stops.end()) continue;
            double hop = from[o.poi];
            if (hop == kInfinity) continue;
            stops.push_back(o.poi);
            sims.push_back(o.sim);
            enumerate(i + 1, i == 0 ? hop : length + hop);
            stops.pop_back();
            sims.pop_back();
        }
    };
    enumerate(0, 0.0);
    return pareto_filter(std::move(all));
}

namespace {

/// Label-setting search over (vertex, matched prefix length) states.
/// A zero-weight transition (v, k) -> (v, k + 1) exists when v's PoI is
/// associated with concrete_seq[k] and (v, k) is not excluded.
struct OsrSolution {
    double length = kInfinity;
    std::vector<VertexId> stops;
};

OsrSolution label_setting(const RoadGraph& g, const CategoryForest& f, VertexId start, const CategorySequence& seq,
                          const std::set<std::pair<VertexId, std::size_t>>& excluded, BaselineStats* stats) {
    const std::size_t layers = seq.size() + 1;
    const std::size_t states = g.num_vertices() * layers;
    auto id = [&](VertexId v, std::size_t k) { return static_cast<std::size_t>(v) * layers + k; };

    std::vector<double> dist(states, kInfinity);
    std::vector<std::size_t> parent(states, states);
    std::vector<char> done(states, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[id(start, 0)] = 0.0;
    heap.push({0.0, id(start, 0)});
    if (stats) ++stats->searches;

    while (!heap.empty()) {
        auto [d, sid] = heap.top();
        heap.pop();
        if (done[sid]) continue;
        done[sid] = 1;
        if (stats) ++stats->visited_states;
        const auto v = static_cast<VertexId>(sid / layers);
        const std::size_t k = sid % layers;
        if (k == seq.size()) {
            OsrSolution sol;
            sol.length = d;
            for (std::size_t cur = sid; parent[cur] != states; cur = parent[cur]) {
                // A layer change marks the PoI matched at that position.
                if (cur % layers != parent[cur] % layers) sol.stops.push_back(static_cast<VertexId>(cur / layers));
            }
            std::reverse(sol.stops.begin(), sol.stops.end());
            return sol;
        }
        auto push = [&](std::size_t to, double nd) {
            if (nd < dist[to]) {
                dist[to] = nd;
                parent[to] = sid;
                heap.push({nd, to});
            }
        };
        CategoryId c = g.category_of(v);
        if (c != kNoCategory && f.is_ancestor_or_self(seq[k], c) && !excluded.contains({v, k})) push(id(v, k + 1), d);
        for (const Arc& a : g.neighbors(v)) push(id(a.to, k), d + a.weight);
    }
    return {};
}

}  // namespace

std::optional<Route> osr_exact(const RoadGraph& g, const CategoryForest& f, VertexId start,
                               const CategorySequence& concrete_seq, BaselineStats* stats) {
    if (!g.contains(start)) throw InvalidArgument("unknown start vertex " + std::to_string(start));
    validate_sequence(f, concrete_seq);

    // Best-first branching on repeated stops: a conflict of one PoI at
    // positions i < j splits into "not at i" and "not at j", which together
    // cover every distinct solution.
    using Exclusions = std::set<std::pair<VertexId, std::size_t>>;
    struct Node {
        OsrSolution sol;
        Exclusions excluded;
    };
    auto worse = [](const Node& a, const Node& b) { return a.sol.length > b.sol.length; };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

    OsrSolution first = label_setting(g, f, start, concrete_seq, {}, stats);
    if (first.length == kInfinity) return std::nullopt;
    open.push({std::move(first), {}});

    constexpr int kMaxBranches = 100000;
    for (int expanded = 0; !open.empty(); ++expanded) {
        if (expanded > kMaxBranches) throw std::runtime_error("osr_exact: too many repeated-stop conflicts");
        Node node = open.top();
        open.pop();
        std::optional<std::pair<std::size_t, std::size_t>> conflict;
        for (std::size_t i = 0; i < node.sol.stops.size() && !conflict; ++i)
            for (std::size_t j = i + 1; j < node.sol.stops.size() && !conflict; ++j)
                if (node.sol.stops[i] == node.sol.stops[j]) conflict = {i, j};
        if (!conflict) {
            Route r;
            r.pois = node.sol.stops;
            r.sims.assign(r.pois.size(), 1.0);
            r.length = node.sol.length;
            return r;
        }
        const VertexId v = node.sol.stops[conflict->first];
        for (std::size_t pos : {conflict->first, conflict->second}) {
            Exclusions ex = node.excluded;
            ex.insert({v, pos});
            OsrSolution sol = label_setting(g, f, start, concrete_seq, ex, stats);
            if (sol.length < kInfinity) open.push({std::move(sol), std::move(ex)});
        }
    }
    return std::nullopt;
}

std::vector<Route> iter_osr_skyline(const RoadGraph& g, const CategoryForest& f, VertexId start,
                                    const CategorySequence& seq, BaselineStats* stats) {
    validate_sequence(f, seq);
    std::vector<Route> found;
    for (const CategorySequence& concrete : super_sequences(f, seq)) {
        std::optional<Route> r = osr_exact(g, f, start, concrete, stats);
        if (!r) continue;
        // Rescore against the query itself.
        r->sim_product = 1.0;
        for (std::size_t i = 0; i < r->pois.size(); ++i) {
            r->sims[i] = match_similarity(f, g.category_of(r->pois[i]), seq[i]);
            r->sim_product *= r->sims[i];
        }
        found.push_back(std::move(*r));
    }
    return pareto_filter(std::move(found));
}

}  // namespace skysr
