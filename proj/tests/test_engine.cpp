#include <algorithm>
#include <random>

#include "doctest.h"
#include "skysr/engine.hpp"
#include "skysr/error.hpp"
#include "support.hpp"

using namespace skysr;
using namespace fixture;

namespace {

std::vector<ScorePair> run_scores(const RoadGraph& g, const CategoryForest& f, VertexId start,
                                  const CategorySequence& seq, QueryFlags flags = {}) {
    return score_multiset(run_bssr(g, f, start, seq, flags).skyline.routes());
}

std::size_t count(const Trace& t, TraceKind k) {
    return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [&](const TraceEvent& e) { return e.kind == k; }));
}

}  // namespace

TEST_CASE("run_bssr on the fixture") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    for (unsigned mask = 0; mask < 16; ++mask) {
        CAPTURE(mask);
        auto flags = QueryFlags::from_mask(mask);
        CHECK(run_scores(g, f, v0, {Asian, Gift}, flags) == std::vector<ScorePair>{{2, 0.5}, {10, 0}});
        CHECK(run_scores(g, f, v0, {Asian}, flags) == std::vector<ScorePair>{{1, 0.5}, {4, 0}});
    }
    auto res = run_bssr(g, f, v0, {Asian, Gift});
    REQUIRE(res.skyline.size() == 2);
    CHECK(res.skyline.routes()[0].pois == std::vector<VertexId>{pI, pG});
    CHECK(res.skyline.routes()[1].pois == std::vector<VertexId>{pA, pG});
}

TEST_CASE("query category without PoIs yields an empty skyline") {
    CategoryForest f({{Food, -1, "Food"},
                      {Asian, Food, "Asian"},
                      {Italian, Food, "Italian"},
                      {Shop, -1, "Shop"},
                      {Gift, Shop, "Gift"},
                      {Hobby, Shop, "Hobby"},
                      {6, -1, "Park"}});
    RoadGraph g = graph_a();
    CHECK(run_bssr(g, f, v0, {6}).skyline.empty());
    CHECK(run_bssr(g, f, v0, {Asian, 6}).skyline.empty());
}

TEST_CASE("invalid queries are rejected") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    CHECK_THROWS_AS(run_bssr(g, f, 99, {Asian}), InvalidArgument);
    CHECK_THROWS_AS(run_bssr(g, f, v0, {}), InvalidArgument);
    CHECK_THROWS_AS(run_bssr(g, f, v0, {Asian, 40}), InvalidArgument);
}

TEST_CASE("nninit on the fixture") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    Trace trace;
    QueryContext ctx(g, f, v0, {Asian, Gift}, {}, {&trace, std::nullopt});
    SkylineSet s = nninit(ctx);
    CHECK(score_multiset(s.routes()) == std::vector<ScorePair>{{5, 0.5}, {10, 0}});
    REQUIRE(s.size() == 2);
    // Leg 1 chose pA (nearest perfect Asian, at 4); leg 2 met pH before pG.
    CHECK(s.routes()[0].pois == std::vector<VertexId>{pA, pH});
    CHECK(s.routes()[1].pois == std::vector<VertexId>{pA, pG});
    CHECK(count(trace, TraceKind::initial_accept) == 2);
    CHECK(ctx.counters.dijkstra_executions == 2);
}

TEST_CASE("nninit falls back when a position has no perfect match") {
    // Only an Italian PoI exists for the Asian position.
    std::vector<Edge> edges{{0, 1, 1}, {1, 2, 1}};
    RoadGraph g(3, false, edges, {{1, 1, Italian}, {2, 2, Gift}});
    CategoryForest f = forest_t();
    QueryContext ctx(g, f, 0, {Asian, Gift});
    CHECK(nninit(ctx).empty());
    // BSSR still finds the semantic route with infinite thresholds.
    CHECK(run_scores(g, f, 0, {Asian, Gift}) == std::vector<ScorePair>{{2, 0.5}});
}

TEST_CASE("nninit backtracks when the greedy chain uses up a needed PoI") {
    // 0 -1- 1 (Asian) -5- 2 (Italian). For <Food, Asian> the nearest Food is
    // the only Asian PoI, so the greedy chain gets stuck at position 2.
    std::vector<Edge> edges{{0, 1, 1}, {1, 2, 5}};
    RoadGraph g(3, false, edges, {{1, 1, Asian}, {2, 2, Italian}});
    CategoryForest f = forest_t();
    Trace trace;
    QueryContext ctx(g, f, 0, {Food, Asian}, {}, {&trace, std::nullopt});
    SkylineSet s = nninit(ctx);
    // The stuck last leg still offers the semantic route <1, 2>.
    REQUIRE(s.size() == 2);
    CHECK(s.routes()[0].pois == std::vector<VertexId>{1, 2});
    CHECK(scores(s.routes()[0]) == ScorePair{6, 0.5});
    CHECK(s.routes()[1].pois == std::vector<VertexId>{2, 1});
    CHECK(scores(s.routes()[1]) == ScorePair{11, 0});
    CHECK(count(trace, TraceKind::initial_accept) == 2);
    for (unsigned mask = 0; mask < 16; ++mask)
        CHECK(run_scores(g, f, 0, {Food, Asian}, QueryFlags::from_mask(mask)) ==
              std::vector<ScorePair>{{6, 0.5}, {11, 0}});
}

TEST_CASE("compute_min_distances on the fixture") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    QueryContext ctx(g, f, v0, {Asian, Gift});
    SkylineSet s = nninit(ctx);
    compute_min_distances(ctx, s);
    REQUIRE(ctx.ls_hop.size() == 1);
    CHECK(ctx.ls_hop[0] == 1);
    CHECK(ctx.lp_hop[0] == 1);
    CHECK(ctx.ls_suffix(1) == 1);
    CHECK(ctx.ls_suffix(2) == 0);

    QueryContext single(g, f, v0, {Asian});
    compute_min_distances(single, nninit(single));
    CHECK(single.ls_hop.empty());
    CHECK(single.lp_hop.empty());
    CHECK(single.ls_suffix(0) == 0);
}

TEST_CASE("lower_bound_prune examples") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    QueryContext ctx(g, f, v0, {Asian, Gift});
    SkylineSet s = nninit(ctx);
    compute_min_distances(ctx, s);

    Route r = Route{}.extended(pI, 1, 0.5);
    CHECK(s.threshold(r.min_semantic()) == 5);
    CHECK_FALSE(lower_bound_prune(ctx, r, s));

    // Bare threshold check prunes at equality.
    QueryContext bare(g, f, v0, {Asian, Gift}, QueryFlags::none());
    Route at_threshold = Route{}.extended(pI, 5, 0.5);
    CHECK(lower_bound_prune(bare, at_threshold, s));
    Route below = Route{}.extended(pI, 4.5, 0.5);
    CHECK_FALSE(lower_bound_prune(bare, below, s));

    SkylineSet empty(2);
    CHECK_FALSE(lower_bound_prune(ctx, Route{}.extended(pI, 1000, 0.5), empty));
    CHECK_FALSE(lower_bound_prune(bare, Route{}.extended(pI, 1000, 0.5), empty));
}

TEST_CASE("modified_dijkstra first expansion on the fixture") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    Trace trace;
    QueryContext ctx(g, f, v0, {Asian, Gift}, {}, {&trace, std::nullopt});
    SkylineSet s = nninit(ctx);
    compute_min_distances(ctx, s);
    trace.clear();
    const auto visited_before = ctx.counters.visited_vertices;

    RouteQueue q(true);
    modified_dijkstra(ctx, Route{}, s, q);
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].kind == TraceKind::enqueue);
    CHECK(trace[0].pois == std::vector<VertexId>{pI});
    CHECK(trace[1].kind == TraceKind::enqueue);
    CHECK(trace[1].pois == std::vector<VertexId>{pA});
    // v0, pI, pG and pA settle; pH sits behind the perfect match pA.
    CHECK(ctx.counters.visited_vertices - visited_before == 4);
    CHECK(q.size() == 2);
    // The search exhausts at pA's distance before reaching the threshold.
    CHECK(ctx.counters.first_search_weight == 4);
}

TEST_CASE("path filter skips ties behind an equally similar PoI") {
    // 0 - 1 - 2 - 3 on a line; PoIs 1 and 2 share a category, 3 is a Gift.
    std::vector<Edge> edges{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
    CategoryForest f = forest_t();
    for (CategoryId cat : {Asian, Italian}) {
        CAPTURE(cat);
        RoadGraph g(4, false, edges, {{1, 1, cat}, {2, 2, cat}, {3, 3, Gift}});
        Trace on, off;
        auto a = run_bssr(g, f, 0, {Asian, Gift}, QueryFlags::none(), {&on, std::nullopt});
        QueryFlags no_filter = QueryFlags::none();
        no_filter.path_filter = false;
        auto b = run_bssr(g, f, 0, {Asian, Gift}, no_filter, {&off, std::nullopt});
        auto enqueued = [](const Trace& t, VertexId v) {
            return std::any_of(t.begin(), t.end(), [&](const TraceEvent& e) {
                return e.kind == TraceKind::enqueue && e.pois == std::vector<VertexId>{v};
            });
        };
        CHECK(enqueued(on, 1));
        CHECK_FALSE(enqueued(on, 2));
        CHECK(enqueued(off, 2));
        CHECK(score_multiset(a.skyline.routes()) == score_multiset(b.skyline.routes()));
        CHECK(a.counters.visited_vertices < b.counters.visited_vertices);
    }
}

TEST_CASE("search cache coverage rule") {
    SearchCache c;
    c.store(pA, 2, {9, {{pH, 1, 0.5}, {pI, 5, 1}, {pG, 6, 1}, {v0, 8, 1}}});
    auto hit = c.lookup(pA, 2, 6);
    REQUIRE(hit);
    CHECK(hit->size() == 2);
    CHECK(c.lookup(pA, 1, 6) == std::nullopt);

    c.store(pA, 3, {6, {{pH, 1, 0.5}}});
    CHECK(c.lookup(pA, 3, 9) == std::nullopt);
    c.store(pA, 3, {9, {{pH, 1, 0.5}, {pG, 6, 1}}});
    REQUIRE(c.lookup(pA, 3, 9));
    CHECK(c.lookup(pA, 3, 9)->size() == 2);
    CHECK(c.candidate_count() == 6);
    CHECK(c.size() == 2);
    c.clear();
    CHECK(c.size() == 0);
}

TEST_CASE("second partial route ending at the same PoI hits the cache") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    QueryContext ctx(g, f, v0, {Shop, Asian, Shop});
    SkylineSet s(3);
    RouteQueue q(true);
    Route r1 = Route{}.extended(pH, 5, 1).extended(pA, 1, 1);
    Route r2 = Route{}.extended(pG, 2, 1).extended(pA, 6, 1);
    modified_dijkstra(ctx, r1, s, q);
    CHECK(ctx.counters.dijkstra_executions == 1);
    modified_dijkstra(ctx, r2, s, q);
    CHECK(ctx.counters.dijkstra_executions == 1);
    CHECK(ctx.counters.cache_hits == 1);
    // r1 completes with pG at 12 (pH is already on it); r2 reaches pH at 9
    // and evicts it, then stops before pG.
    CHECK(score_multiset(s.routes()) == std::vector<ScorePair>{{9, 0}});

    QueryFlags no_cache;
    no_cache.caching = false;
    QueryContext plain(g, f, v0, {Shop, Asian, Shop}, no_cache);
    SkylineSet s2(3);
    modified_dijkstra(plain, r1, s2, q);
    modified_dijkstra(plain, r2, s2, q);
    CHECK(plain.counters.dijkstra_executions == 2);
    CHECK(score_multiset(s.routes()) == score_multiset(s2.routes()));
}

TEST_CASE("route queue ordering") {
    Route small = Route{}.extended(1, 1, 1);
    Route big_far = Route{}.extended(2, 9, 0.5).extended(3, 9, 1);
    Route big_near = Route{}.extended(4, 1, 0.5).extended(5, 1, 1);
    Route big_good = Route{}.extended(6, 20, 1).extended(7, 20, 1);

    RouteQueue sized(true);
    for (const Route& r : {small, big_far, big_near, big_good}) sized.push(r);
    CHECK(sized.pop().pois == big_good.pois);  // size, then underbar-s
    CHECK(sized.pop().pois == big_near.pois);  // then length
    CHECK(sized.pop().pois == big_far.pois);
    CHECK(sized.pop().pois == small.pois);

    RouteQueue by_length(false);
    for (const Route& r : {small, big_far, big_near, big_good}) by_length.push(r);
    CHECK(by_length.pop().pois == small.pois);
    CHECK(by_length.pop().pois == big_near.pois);
    CHECK(by_length.pop().pois == big_far.pois);
    CHECK(by_length.pop().pois == big_good.pois);

    // Equal keys dequeue in insertion order.
    RouteQueue ties(true);
    ties.push(Route{}.extended(8, 1, 1));
    ties.push(Route{}.extended(9, 1, 1));
    CHECK(ties.pop().pois[0] == 8);
}

TEST_CASE("expired deadline aborts the query") {
    RoadGraph g = graph_a();
    CategoryForest f = forest_t();
    QueryOptions opts;
    opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(run_bssr(g, f, v0, {Asian, Gift}, {}, opts), QueryTimeout);
}

TEST_CASE("random instances: exactness, minimality, lengths, filter safety, determinism") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int round = 0; round < 120; ++round) {
        Instance in = random_instance(rng, 7, 5, 20, 3, round % 4 == 3);
        CAPTURE(round);
        const auto expected = exhaustive_skyline(in);
        auto fw = floyd_warshall(in.n, in.directed, in.edges);
        for (unsigned mask = 0; mask < 16; ++mask) {
            CAPTURE(mask);
            auto res = run_bssr(in.graph, in.forest, in.start, in.seq, QueryFlags::from_mask(mask));
            REQUIRE(score_multiset(res.skyline.routes()) == expected);

            auto routes = res.skyline.routes();
            for (std::size_t a = 0; a < routes.size(); ++a) {
                const Route& r = routes[a];
                // Reported length equals the pairwise shortest distances.
                double len = 0;
                VertexId at = in.start;
                for (std::size_t i = 0; i < r.size(); ++i) {
                    len = i == 0 ? fw[at][r.pois[i]] : len + fw[at][r.pois[i]];
                    at = r.pois[i];
                }
                CHECK(std::abs(len - r.length) <= 1e-9);
                CHECK(std::abs(r.min_semantic() - (1.0 - r.sim_product)) <= 1e-12);
                auto sorted = r.pois;
                std::sort(sorted.begin(), sorted.end());
                CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
                for (std::size_t b = a + 1; b < routes.size(); ++b)
                    CHECK(dominance(scores(routes[a]), scores(routes[b])) == Dominance::incomparable);
            }

            QueryFlags unfiltered = QueryFlags::from_mask(mask);
            unfiltered.path_filter = false;
            CHECK(run_scores(in.graph, in.forest, in.start, in.seq, unfiltered) == expected);

            auto again = run_bssr(in.graph, in.forest, in.start, in.seq, QueryFlags::from_mask(mask));
            CHECK(again.counters.visited_vertices == res.counters.visited_vertices);
            CHECK(again.counters.dijkstra_executions == res.counters.dijkstra_executions);
            CHECK(again.counters.queue_pushes == res.counters.queue_pushes);
        }
        ++checked;
    }
    CHECK(checked == 120);
}

TEST_CASE("caching never adds searches and never changes the result") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 150; ++round) {
        Instance in = random_instance(rng, 10, 10, 40, 4);
        for (unsigned mask = 0; mask < 8; ++mask) {
            auto off = run_bssr(in.graph, in.forest, in.start, in.seq, QueryFlags::from_mask(mask));
            auto on = run_bssr(in.graph, in.forest, in.start, in.seq, QueryFlags::from_mask(mask | 8u));
            CHECK(on.counters.dijkstra_executions <= off.counters.dijkstra_executions);
            CHECK(on.counters.visited_vertices <= off.counters.visited_vertices);
            CHECK(score_multiset(on.skyline.routes()) == score_multiset(off.skyline.routes()));
        }
    }
}

TEST_CASE("lower-bound tables: ls <= lp and hop minima match pairwise distances") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 100; ++round) {
        Instance in = random_instance(rng, 12, 5, 30, 4, round % 3 == 0);
        QueryContext ctx(in.graph, in.forest, in.start, in.seq);
        SkylineSet s = nninit(ctx);
        compute_min_distances(ctx, s);
        auto fw = floyd_warshall(in.n, in.directed, in.edges);
        const double limit = s.threshold(0.0);
        // Without a finite zero-score threshold no PoI is left out.
        auto in_range = [&](const PoiVertex& p) { return limit == kInfinity || fw[in.start][p.vertex] < limit; };
        for (std::size_t i = 0; i + 1 < in.seq.size(); ++i) {
            CHECK(ctx.ls_hop[i] <= ctx.lp_hop[i]);
            double ls = kInfinity, lp = kInfinity;
            for (const PoiVertex& p : in.pois) {
                if (!in_range(p) || oracle_sim(in.forest, p.category, in.seq[i]) == 0.0) continue;
                for (const PoiVertex& q : in.pois) {
                    if (!in_range(q)) continue;
                    double h = oracle_sim(in.forest, q.category, in.seq[i + 1]);
                    if (h > 0.0) ls = std::min(ls, fw[p.vertex][q.vertex]);
                    if (h == 1.0) lp = std::min(lp, fw[p.vertex][q.vertex]);
                }
            }
            // Empty or unreachable destination sets fall back to 0 / ls.
            if (ls == kInfinity) ls = 0;
            if (lp == kInfinity) lp = ls;
            CHECK(ctx.ls_hop[i] == ls);
            CHECK(ctx.lp_hop[i] == lp);
        }
    }
}
