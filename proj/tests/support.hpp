#pragma once

// Fixtures and independent oracles shared by the test binaries. Nothing here
// calls engine code: distances come from Floyd-Warshall and skylines from a
// quadratic pairwise filter.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "skysr/graph.hpp"
#include "skysr/route.hpp"
#include "skysr/taxonomy.hpp"

namespace fixture {

using namespace skysr;

// FIXTURE-A vertex ids.
inline constexpr VertexId v0 = 0, pI = 1, pG = 2, pA = 3, pH = 4;
// FIXTURE-T category ids.
inline constexpr CategoryId Food = 0, Asian = 1, Italian = 2, Shop = 3, Gift = 4, Hobby = 5;

inline CategoryForest forest_t() {
    return CategoryForest({{Food, -1, "Food"},
                           {Asian, Food, "Asian"},
                           {Italian, Food, "Italian"},
                           {Shop, -1, "Shop"},
                           {Gift, Shop, "Gift"},
                           {Hobby, Shop, "Hobby"}});
}

inline RoadGraph graph_a() {
    std::vector<Edge> edges{{v0, pI, 1}, {pI, pG, 1}, {v0, pA, 4}, {pA, pH, 1}};
    std::vector<PoiVertex> pois{{101, pI, Italian}, {102, pG, Gift}, {103, pA, Asian}, {104, pH, Hobby}};
    std::vector<Point> xy{{0, 0}, {1, 0}, {2, 0}, {0, 4}, {0, 5}};
    return RoadGraph(5, false, edges, std::move(pois), std::move(xy));
}

/// Match similarity from parent links only: 1 when the query category is
/// the PoI category or an ancestor of it, else Wu-Palmer, 0 across trees.
inline double oracle_sim(const CategoryForest& f, CategoryId poi_cat, CategoryId query_cat) {
    auto chain = [&](CategoryId c) {
        std::vector<CategoryId> up;
        for (; c != kNoCategory; c = f.at(c).parent) up.push_back(c);
        std::reverse(up.begin(), up.end());  // root first
        return up;
    };
    auto a = chain(poi_cat);
    auto b = chain(query_cat);
    if (a.front() != b.front()) return 0.0;
    if (std::find(a.begin(), a.end(), query_cat) != a.end()) return 1.0;
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

/// All-pairs shortest distances by Floyd-Warshall.
inline std::vector<std::vector<double>> floyd_warshall(std::size_t n, bool directed, const std::vector<Edge>& edges) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, kInfinity));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    for (const Edge& e : edges) {
        d[e.from][e.to] = std::min(d[e.from][e.to], e.weight);
        if (!directed) d[e.to][e.from] = std::min(d[e.to][e.from], e.weight);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

/// Random small forest: `trees` trees, each node below the root has
/// 1..max_branch children down to `height` levels. Ids dense, parents first.
inline CategoryForest random_forest(std::mt19937_64& rng, int trees, int height, int max_branch) {
    std::vector<Category> cats;
    for (int t = 0; t < trees; ++t) {
        std::vector<CategoryId> level{static_cast<CategoryId>(cats.size())};
        cats.push_back({level[0], -1, "t" + std::to_string(t), 0, -1});
        for (int h = 1; h < height; ++h) {
            std::vector<CategoryId> next;
            for (CategoryId p : level) {
                int k = std::uniform_int_distribution<int>(1, max_branch)(rng);
                for (int j = 0; j < k; ++j) {
                    auto id = static_cast<CategoryId>(cats.size());
                    cats.push_back({id, p, "c" + std::to_string(id), 0, -1});
                    next.push_back(id);
                }
            }
            level = std::move(next);
        }
    }
    return CategoryForest(std::move(cats));
}

struct Instance {
    std::size_t n = 0;
    bool directed = false;
    std::vector<Edge> edges;
    std::vector<PoiVertex> pois;
    CategoryForest forest;
    RoadGraph graph;
    VertexId start = 0;
    CategorySequence seq;
};

/// Grid graph with integer weights; PoIs on distinct random vertices with
/// categories drawn from every forest node (not only leaves), so perfect,
/// ancestor and sibling matches all occur.
inline Instance random_instance(std::mt19937_64& rng, int max_side, int min_pois, int max_pois, int max_seq,
                                bool directed = false) {
    Instance in;
    in.directed = directed;
    std::uniform_int_distribution<int> side(2, max_side);
    const int w = side(rng);
    const int h = side(rng);
    in.n = static_cast<std::size_t>(w * h);
    std::uniform_int_distribution<int> weight(1, 10);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto v = static_cast<VertexId>(y * w + x);
            auto link = [&](VertexId a, VertexId b) {
                // Directed grids: one street in three is two-way, the rest one-way
                // in a random direction.
                const auto kind = directed ? rng() % 3 : 1;
                if (kind == 2) std::swap(a, b);
                in.edges.push_back({a, b, static_cast<double>(weight(rng))});
                if (kind == 0) in.edges.push_back({b, a, static_cast<double>(weight(rng))});
            };
            if (x + 1 < w) link(v, v + 1);
            if (y + 1 < h) link(v, static_cast<VertexId>(v + w));
        }
    in.forest = random_forest(rng, std::uniform_int_distribution<int>(2, 4)(rng),
                              std::uniform_int_distribution<int>(1, 3)(rng), 3);

    int npois = std::min<int>(std::uniform_int_distribution<int>(min_pois, max_pois)(rng), static_cast<int>(in.n));
    std::vector<VertexId> vs(in.n);
    for (std::size_t i = 0; i < in.n; ++i) vs[i] = static_cast<VertexId>(i);
    std::shuffle(vs.begin(), vs.end(), rng);
    std::uniform_int_distribution<CategoryId> any_cat(0, static_cast<CategoryId>(in.forest.size() - 1));
    for (int i = 0; i < npois; ++i) in.pois.push_back({1000 + i, vs[static_cast<std::size_t>(i)], any_cat(rng)});

    in.graph = RoadGraph(in.n, directed, in.edges, in.pois);
    in.start = std::uniform_int_distribution<VertexId>(0, static_cast<VertexId>(in.n - 1))(rng);
    int k = std::uniform_int_distribution<int>(1, max_seq)(rng);
    for (int i = 0; i < k; ++i) in.seq.push_back(any_cat(rng));
    return in;
}

/// Skyline score pairs of an arbitrary list by the definition: keep a pair
/// unless another pair dominates it; collapse duplicates.
inline std::vector<ScorePair> skyline_of_pairs(const std::vector<ScorePair>& all) {
    std::vector<ScorePair> out;
    for (const ScorePair& a : all) {
        bool dominated = false;
        for (const ScorePair& b : all) {
            if ((b.length < a.length && b.semantic <= a.semantic) || (b.semantic < a.semantic && b.length <= a.length))
                dominated = true;
        }
        if (!dominated && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Exhaustive skyline from Floyd-Warshall distances, independent of the
/// library's oracle. Scores accumulate left to right like Route.
inline std::vector<ScorePair> exhaustive_skyline(const Instance& in) {
    auto d = floyd_warshall(in.n, in.directed, in.edges);
    std::vector<ScorePair> all;
    std::vector<VertexId> stops;
    std::function<void(std::size_t, double, double)> rec = [&](std::size_t i, double len, double prod) {
        if (i == in.seq.size()) {
            all.push_back({len, 1.0 - prod});
            return;
        }
        VertexId from = i == 0 ? in.start : stops.back();
        for (const PoiVertex& p : in.pois) {
            double hsim = oracle_sim(in.forest, p.category, in.seq[i]);
            if (hsim <= 0.0 || std::find(stops.begin(), stops.end(), p.vertex) != stops.end()) continue;
            double hop = d[from][p.vertex];
            if (hop == kInfinity) continue;
            stops.push_back(p.vertex);
            rec(i + 1, i == 0 ? hop : len + hop, prod * hsim);
            stops.pop_back();
        }
    };
    rec(0, 0.0, 1.0);
    return skyline_of_pairs(all);
}

}  // namespace fixture
