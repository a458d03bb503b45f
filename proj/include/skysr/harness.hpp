#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "skysr/dataset.hpp"
#include "skysr/engine.hpp"

namespace skysr {

struct GraphSpec {
    std::string kind = "grid";  // "grid" or "geometric"
    int width = 10;             // grid
    int height = 10;            // grid
    std::size_t nodes = 0;      // geometric: vertex count
    double radius = 1.5;        // geometric: link radius, in units where density is 1 vertex per unit area
    double min_weight = 1.0;
    double max_weight = 10.0;
    bool integer_weights = true;
    bool directed = false;  // directed: each street one-way in a random direction, one in three two-way
};

struct ForestSpec {
    int trees = 3;
    int branching = 3;
    int height = 3;  // levels including the root
};

struct MapSpec {
    GraphSpec graph;
    ForestSpec forest;
    std::size_t pois = 20;
    double poi_density = 0.0;  // used when pois == 0: fraction of vertices carrying a PoI
};

struct Query {
    VertexId start = 0;
    CategorySequence categories;
};

struct WorkloadSpec {
    std::size_t queries = 100;
    std::size_t min_size = 3;
    std::size_t max_size = 3;
};

/// Everything `skysr gen` / `skysr bench` can be driven by, as one JSON file.
struct BenchConfig {
    MapSpec map;
    WorkloadSpec workload;
    std::uint64_t seed = 1;
    std::vector<std::string> algorithms{"bssr", "bssr_no_opt"};
    unsigned threads = 1;
    std::optional<double> timeout_ms;
};

MapSpec map_spec_from_json(const nlohmann::json& j);
WorkloadSpec workload_spec_from_json(const nlohmann::json& j);
BenchConfig bench_config_from_json(const nlohmann::json& j);

/// Full `trees` x `branching`-ary trees of `height` levels. Ids are dense in
/// breadth-first order per tree; names are "T<tree>" and "<parent>.<i>".
CategoryForest generate_forest(const ForestSpec& spec);

/// Connected grid or random geometric graph with uniform random weights,
/// PoIs on distinct uniformly sampled vertices, categories uniform over the
/// forest's leaves. Throws InvalidArgument when the spec is infeasible.
Dataset generate_synthetic_map(const MapSpec& spec, std::uint64_t seed);

/// Uniform random starts; each sequence takes leaf categories from distinct
/// trees, drawn from the better-populated half of each tree's leaves (by PoI
/// count, leaves without PoIs excluded). Throws InvalidArgument when fewer
/// trees have eligible leaves than the largest requested size.
std::vector<Query> generate_workload(const RoadGraph& g, const CategoryForest& f, const WorkloadSpec& spec,
                                     std::uint64_t seed);

/// Lines of `start c1 c2 ...`.
void write_workload(const std::filesystem::path& file, const std::vector<Query>& queries);
std::vector<Query> load_workload(const std::filesystem::path& file);

/// Algorithm names: bssr (all optimizations), bssr_no_opt, bssr_no_init,
/// bssr_no_pq, bssr_no_lb, bssr_no_cache, bssr_mask<N> (flag bits as in
/// QueryFlags::from_mask), iter_osr, oracle.
bool is_known_algorithm(const std::string& name);

struct BenchRow {
    std::string algorithm;
    std::size_t query = 0;
    VertexId start = 0;
    std::size_t size = 0;
    std::string status = "ok";  // ok | timeout | skipped (oracle over its size guard)
    double elapsed_ms = 0.0;
    std::uint64_t visited_vertices = 0;
    std::uint64_t dijkstra_executions = 0;
    std::uint64_t queue_pushes = 0;
    std::uint64_t pruned_routes = 0;
    std::uint64_t cache_hits = 0;
    std::size_t skyline_size = 0;
    double first_search_weight = 0.0;
    /// Route-count accounting, not allocator data: peak queued routes plus
    /// skyline routes times their footprint, plus cached candidates.
    std::uint64_t memory_proxy_bytes = 0;
    /// FNV-1a over the sorted score pairs; equal digests mean equal skylines.
    std::string score_digest;
    std::vector<ScorePair> scores;
};

struct BenchSummary {
    std::string algorithm;
    std::size_t size = 0;
    std::size_t queries = 0;
    std::size_t not_ok = 0;  // rows with status != ok, excluded from the means
    double mean_ms = 0.0;
    double median_ms = 0.0;
    double mean_visited = 0.0;
    double mean_dijkstra = 0.0;
    double mean_queue_pushes = 0.0;
    double mean_skyline_size = 0.0;
    double mean_first_search_weight = 0.0;
    double mean_memory_proxy_bytes = 0.0;
};

/// Runs every algorithm on every query. With threads > 1 queries run in
/// parallel, each with its own query state; counters are unaffected but
/// timings become noisier.
std::vector<BenchRow> run_benchmark(const Dataset& d, const std::vector<Query>& workload,
                                    const std::vector<std::string>& algorithms, unsigned threads = 1,
                                    std::optional<double> timeout_ms = std::nullopt);

std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows);

void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<BenchSummary>& summary);
nlohmann::json bench_json(const std::vector<BenchRow>& rows, const std::vector<BenchSummary>& summary);

}  // namespace skysr
