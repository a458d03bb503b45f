#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "skysr/error.hpp"
#include "skysr/graph.hpp"
#include "skysr/taxonomy.hpp"
#include "support.hpp"

using namespace skysr;
using namespace fixture;

namespace {

const std::filesystem::path kFixture = SKYSR_DATA_DIR "/fixture_a";

/// Writes the FIXTURE-A files into a scratch directory, with one file
/// optionally replaced.
struct ScratchDataset {
    std::filesystem::path dir;

    explicit ScratchDataset(const std::string& name) {
        dir = std::filesystem::temp_directory_path() / ("skysr_graph_test_" + name);
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        for (const char* f : {"nodes.txt", "edges.txt", "pois.txt", "categories.txt"})
            std::filesystem::copy_file(kFixture / f, dir / f);
    }
    ~ScratchDataset() { std::filesystem::remove_all(dir); }

    void write(const std::string& file, const std::string& text) const {
        std::ofstream(dir / file, std::ios::trunc) << text;
    }
    RoadGraph load() const {
        CategoryForest f = load_categories(dir / "categories.txt");
        return load_graph(dir / "nodes.txt", dir / "edges.txt", dir / "pois.txt", f);
    }
};

}  // namespace

TEST_CASE("fixture files load into 1 plain vertex, 4 PoIs and 4 edges") {
    CategoryForest f = load_categories(kFixture / "categories.txt");
    RoadGraph g = load_graph(kFixture / "nodes.txt", kFixture / "edges.txt", kFixture / "pois.txt", f);
    CHECK(g.num_vertices() == 5);
    CHECK(g.pois().size() == 4);
    CHECK(g.num_vertices() - g.pois().size() == 1);
    CHECK(g.num_edges() == 4);
    CHECK_FALSE(g.directed());
    CHECK(g.category_of(pI) == Italian);
    CHECK(g.category_of(pH) == Hobby);
    CHECK(g.category_of(v0) == kNoCategory);
    CHECK(g.has_coordinates());
}

TEST_CASE("loader rejects bad input with the offending line") {
    SUBCASE("negative weight") {
        ScratchDataset d("neg");
        d.write("edges.txt", "undirected\n0 1 1\n1 2 -1\n0 3 4\n3 4 1\n");
        try {
            d.load();
            FAIL("expected LoadError");
        } catch (const LoadError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("negative") != std::string::npos);
        }
    }
    SUBCASE("PoI on an absent vertex") {
        ScratchDataset d("dangling");
        d.write("pois.txt", "101 1 2\n102 9 4\n");
        try {
            d.load();
            FAIL("expected LoadError");
        } catch (const LoadError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("unknown vertex") != std::string::npos);
        }
    }
    SUBCASE("edge to an absent vertex") {
        ScratchDataset d("edge_dangling");
        d.write("edges.txt", "undirected\n0 7 1\n");
        CHECK_THROWS_AS(d.load(), LoadError);
    }
    SUBCASE("unknown category") {
        ScratchDataset d("cat");
        d.write("pois.txt", "101 1 42\n");
        CHECK_THROWS_AS(d.load(), LoadError);
    }
    SUBCASE("disconnected graph") {
        ScratchDataset d("disc");
        d.write("edges.txt", "undirected\n0 1 1\n1 2 1\n3 4 1\n");
        CHECK_THROWS_AS(d.load(), LoadError);
    }
    SUBCASE("unparsable number") {
        ScratchDataset d("parse");
        d.write("edges.txt", "undirected\n0 1 1\n1 2 x\n");
        try {
            d.load();
            FAIL("expected LoadError");
        } catch (const LoadError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("missing header") {
        ScratchDataset d("header");
        d.write("edges.txt", "0 1 1\n");
        CHECK_THROWS_AS(d.load(), LoadError);
    }
    SUBCASE("mixed coordinates") {
        ScratchDataset d("coords");
        d.write("nodes.txt", "0 0 0\n1\n2 2 0\n3 0 4\n4 0 5\n");
        CHECK_THROWS_AS(d.load(), LoadError);
    }
    SUBCASE("two PoIs on one vertex") {
        ScratchDataset d("dup");
        d.write("pois.txt", "101 1 2\n102 1 4\n");
        CHECK_THROWS_AS(d.load(), LoadError);
    }
}

TEST_CASE("directed graphs need only weak connectivity") {
    ScratchDataset d("directed");
    d.write("edges.txt", "directed\n0 1 1\n1 2 1\n0 3 4\n4 3 1\n");
    RoadGraph g = d.load();
    CHECK(g.directed());
    CHECK(shortest_path(g, v0, pH).distance == kInfinity);
    CHECK(shortest_path(g, v0, pH).path.empty());
    CHECK(shortest_path(g, pH, pA).distance == 1);
}

TEST_CASE("shortest_path on the fixture") {
    RoadGraph g = graph_a();
    auto a = shortest_path(g, v0, pG);
    CHECK(a.distance == 2);
    CHECK(a.path == std::vector<VertexId>{v0, pI, pG});

    auto b = shortest_path(g, v0, v0);
    CHECK(b.distance == 0);
    CHECK(b.path == std::vector<VertexId>{v0});

    auto c = shortest_path(g, pA, pG);
    CHECK(c.distance == 6);
    CHECK(c.path == std::vector<VertexId>{pA, v0, pI, pG});
}

TEST_CASE("snap_point") {
    RoadGraph g = graph_a();
    CHECK(snap_point(g, 0, 0) == v0);
    CHECK(snap_point(g, 1.1, 0.2) == pI);

    std::vector<Point> xy(8);
    xy[3] = {1, 0};
    xy[7] = {-1, 0};
    for (VertexId v : {0u, 1u, 2u, 4u, 5u, 6u}) xy[v] = {100.0 + v, 100};
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < 8; ++v) edges.push_back({v, v + 1, 1});
    RoadGraph tie(8, false, edges, {}, xy);
    CHECK(snap_point(tie, 0, 0) == 3);

    RoadGraph bare(2, false, std::vector<Edge>{{0, 1, 1}}, {});
    CHECK_THROWS_AS(snap_point(bare, 0, 0), InvalidArgument);
}

TEST_CASE("distances agree with Floyd-Warshall on random graphs") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 30; ++round) {
        const bool directed = round % 3 == 0;
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 200)(rng);
        std::vector<Edge> edges;
        // Spanning path keeps the graph connected; extra random edges on top.
        for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, double(rng() % 10 + 1)});
        const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, 2 * n)(rng);
        for (std::size_t i = 0; i < extra; ++i) {
            auto a = static_cast<VertexId>(rng() % n);
            auto b = static_cast<VertexId>(rng() % n);
            edges.push_back({a, b, double(rng() % 20)});
        }
        RoadGraph g(n, directed, edges, {});
        auto fw = floyd_warshall(n, directed, edges);

        for (int s = 0; s < 10; ++s) {
            auto a = static_cast<VertexId>(rng() % n);
            auto b = static_cast<VertexId>(rng() % n);
            auto c = static_cast<VertexId>(rng() % n);
            auto ab = shortest_path(g, a, b);
            REQUIRE(ab.distance == fw[a][b]);
            auto from_a = distances_from(g, a);
            CHECK(from_a[b] == fw[a][b]);

            // The witness path is a real path of the reported length.
            if (ab.distance < kInfinity) {
                CHECK(ab.path.front() == a);
                CHECK(ab.path.back() == b);
                double sum = 0;
                for (std::size_t i = 0; i + 1 < ab.path.size(); ++i) sum += fw[ab.path[i]][ab.path[i + 1]];
                CHECK(sum == ab.distance);
            }

            double bc = shortest_path(g, b, c).distance;
            double ac = shortest_path(g, a, c).distance;
            CHECK(ac <= ab.distance + bc);
            if (!directed) CHECK(shortest_path(g, b, a).distance == ab.distance);
        }
    }
}
