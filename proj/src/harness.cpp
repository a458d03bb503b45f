#include "skysr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <mutex>
#include <random>
#include <span>
#include <thread>

#include "skysr/baselines.hpp"
#include "skysr/error.hpp"
#include "text_io.hpp"

namespace skysr {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config parsing. Unknown keys are errors so typos do not silently fall back
// to defaults.

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known, const char* where) {
    if (!j.is_object()) throw InvalidArgument(std::string(where) + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
            throw InvalidArgument(std::string(where) + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

MapSpec map_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"graph", "forest", "pois", "poi_density"}, "map spec");
    MapSpec m;
    if (auto g = j.find("graph"); g != j.end()) {
        reject_unknown_keys(*g,
                            {"kind", "width", "height", "nodes", "radius", "min_weight", "max_weight",
                             "integer_weights", "directed"},
                            "graph spec");
        read(*g, "kind", m.graph.kind);
        read(*g, "width", m.graph.width);
        read(*g, "height", m.graph.height);
        read(*g, "nodes", m.graph.nodes);
        read(*g, "radius", m.graph.radius);
        read(*g, "min_weight", m.graph.min_weight);
        read(*g, "max_weight", m.graph.max_weight);
        read(*g, "integer_weights", m.graph.integer_weights);
        read(*g, "directed", m.graph.directed);
    }
    if (auto f = j.find("forest"); f != j.end()) {
        reject_unknown_keys(*f, {"trees", "branching", "height"}, "forest spec");
        read(*f, "trees", m.forest.trees);
        read(*f, "branching", m.forest.branching);
        read(*f, "height", m.forest.height);
    }
    read(j, "pois", m.pois);
    read(j, "poi_density", m.poi_density);
    return m;
}

WorkloadSpec workload_spec_from_json(const json& j) {
    reject_unknown_keys(j, {"queries", "min_size", "max_size", "size"}, "workload spec");
    WorkloadSpec w;
    read(j, "queries", w.queries);
    if (auto s = j.find("size"); s != j.end()) w.min_size = w.max_size = s->get<std::size_t>();
    read(j, "min_size", w.min_size);
    read(j, "max_size", w.max_size);
    return w;
}

BenchConfig bench_config_from_json(const json& j) {
    reject_unknown_keys(j, {"map", "workload", "seed", "algorithms", "threads", "timeout_ms"}, "bench config");
    BenchConfig c;
    if (auto m = j.find("map"); m != j.end()) c.map = map_spec_from_json(*m);
    if (auto w = j.find("workload"); w != j.end()) c.workload = workload_spec_from_json(*w);
    read(j, "seed", c.seed);
    read(j, "algorithms", c.algorithms);
    read(j, "threads", c.threads);
    if (auto t = j.find("timeout_ms"); t != j.end() && !t->is_null()) c.timeout_ms = t->get<double>();
    for (const auto& a : c.algorithms)
        if (!is_known_algorithm(a)) throw InvalidArgument("unknown algorithm '" + a + "'");
    return c;
}

// ---------------------------------------------------------------------------
// Generators

CategoryForest generate_forest(const ForestSpec& spec) {
    if (spec.trees < 1 || spec.branching < 1 || spec.height < 1)
        throw InvalidArgument("forest spec needs trees, branching and height >= 1");
    std::vector<Category> cats;
    for (int t = 0; t < spec.trees; ++t) {
        std::vector<CategoryId> level{static_cast<CategoryId>(cats.size())};
        cats.push_back({level[0], kNoCategory, "T" + std::to_string(t), 0, -1});
        for (int h = 1; h < spec.height; ++h) {
            std::vector<CategoryId> next;
            for (CategoryId p : level) {
                for (int i = 0; i < spec.branching; ++i) {
                    auto id = static_cast<CategoryId>(cats.size());
                    cats.push_back({id, p, cats[static_cast<std::size_t>(p)].name + "." + std::to_string(i), 0, -1});
                    next.push_back(id);
                }
            }
            level = std::move(next);
        }
    }
    return CategoryForest(std::move(cats));
}

namespace {

class WeightSampler {
public:
    WeightSampler(const GraphSpec& spec, std::mt19937_64& rng) : spec_(spec), rng_(rng) {
        if (!(spec.min_weight >= 0.0) || !(spec.max_weight >= spec.min_weight))
            throw InvalidArgument("weight range must satisfy 0 <= min_weight <= max_weight");
        if (spec.integer_weights && std::ceil(spec.min_weight) > std::floor(spec.max_weight))
            throw InvalidArgument("integer weight range contains no integer");
    }
    double operator()() {
        if (spec_.integer_weights) {
            std::uniform_int_distribution<long long> d(static_cast<long long>(std::ceil(spec_.min_weight)),
                                                       static_cast<long long>(std::floor(spec_.max_weight)));
            return static_cast<double>(d(rng_));
        }
        return std::uniform_real_distribution<double>(spec_.min_weight, spec_.max_weight)(rng_);
    }

private:
    const GraphSpec& spec_;
    std::mt19937_64& rng_;
};

/// Adds an edge; directed graphs make it one-way in a random direction
/// two times out of three.
void add_street(std::vector<Edge>& edges, VertexId a, VertexId b, const GraphSpec& spec, WeightSampler& weight,
                std::mt19937_64& rng) {
    if (!spec.directed) {
        edges.push_back({a, b, weight()});
        return;
    }
    switch (rng() % 3) {
        case 0:
            edges.push_back({a, b, weight()});
            edges.push_back({b, a, weight()});
            break;
        case 1: edges.push_back({a, b, weight()}); break;
        default: edges.push_back({b, a, weight()}); break;
    }
}

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
    std::vector<std::size_t> parent;
};

}  // namespace

Dataset generate_synthetic_map(const MapSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const GraphSpec& gs = spec.graph;
    WeightSampler weight(gs, rng);
    std::vector<Edge> edges;
    std::vector<Point> xy;
    std::size_t n = 0;

    if (gs.kind == "grid") {
        if (gs.width < 1 || gs.height < 1) throw InvalidArgument("grid needs width and height >= 1");
        n = static_cast<std::size_t>(gs.width) * static_cast<std::size_t>(gs.height);
        for (int y = 0; y < gs.height; ++y) {
            for (int x = 0; x < gs.width; ++x) {
                auto v = static_cast<VertexId>(y * gs.width + x);
                xy.push_back({static_cast<double>(x), static_cast<double>(y)});
                if (x + 1 < gs.width) add_street(edges, v, v + 1, gs, weight, rng);
                if (y + 1 < gs.height) add_street(edges, v, static_cast<VertexId>(v + gs.width), gs, weight, rng);
            }
        }
    } else if (gs.kind == "geometric") {
        if (gs.nodes < 1) throw InvalidArgument("geometric graph needs nodes >= 1");
        if (!(gs.radius > 0.0)) throw InvalidArgument("geometric graph needs radius > 0");
        n = gs.nodes;
        const double side = std::sqrt(static_cast<double>(n));
        std::uniform_real_distribution<double> coord(0.0, side);
        for (std::size_t i = 0; i < n; ++i) {
            double x = coord(rng);
            double y = coord(rng);
            xy.push_back({x, y});
        }
        // Bucket grid with cell size = radius keeps neighbor search local.
        const double r2 = gs.radius * gs.radius;
        const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(side / gs.radius)));
        auto cell_of = [&](double c) {
            return std::min(cells - 1, static_cast<std::size_t>(c / gs.radius));
        };
        std::vector<std::vector<VertexId>> bucket(cells * cells);
        for (VertexId v = 0; v < n; ++v) bucket[cell_of(xy[v].y) * cells + cell_of(xy[v].x)].push_back(v);
        DisjointSets sets(n);
        for (VertexId v = 0; v < n; ++v) {
            const std::size_t cx = cell_of(xy[v].x), cy = cell_of(xy[v].y);
            for (std::size_t yy = cy == 0 ? 0 : cy - 1; yy <= std::min(cells - 1, cy + 1); ++yy) {
                for (std::size_t xx = cx == 0 ? 0 : cx - 1; xx <= std::min(cells - 1, cx + 1); ++xx) {
                    for (VertexId u : bucket[yy * cells + xx]) {
                        if (u <= v) continue;
                        double dx = xy[u].x - xy[v].x, dy = xy[u].y - xy[v].y;
                        if (dx * dx + dy * dy <= r2) {
                            add_street(edges, v, u, gs, weight, rng);
                            sets.unite(v, u);
                        }
                    }
                }
            }
        }
        // Join every other component to the nearest vertex of vertex 0's.
        for (VertexId v = 1; v < n; ++v) {
            if (sets.find(v) == sets.find(0) || sets.find(v) != v) continue;
            VertexId best = 0;
            double best_d2 = kInfinity;
            for (VertexId u = 0; u < n; ++u) {
                if (sets.find(u) != sets.find(0)) continue;
                double dx = xy[u].x - xy[v].x, dy = xy[u].y - xy[v].y;
                if (dx * dx + dy * dy < best_d2) {
                    best_d2 = dx * dx + dy * dy;
                    best = u;
                }
            }
            add_street(edges, best, v, gs, weight, rng);
            sets.unite(best, v);
        }
    } else {
        throw InvalidArgument("unknown graph kind '" + gs.kind + "' (expected grid or geometric)");
    }

    CategoryForest forest = generate_forest(spec.forest);
    std::vector<CategoryId> leaves;
    for (CategoryId c = 0; static_cast<std::size_t>(c) < forest.size(); ++c)
        if (forest.is_leaf(c)) leaves.push_back(c);

    std::size_t count = spec.pois;
    if (count == 0 && spec.poi_density > 0.0)
        count = static_cast<std::size_t>(std::llround(spec.poi_density * static_cast<double>(n)));
    if (count > n)
        throw InvalidArgument("infeasible spec: " + std::to_string(count) + " PoIs on " + std::to_string(n) +
                              " vertices");

    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::vector<PoiVertex> pois;
    std::uniform_int_distribution<std::size_t> pick_leaf(0, leaves.size() - 1);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
        pois.push_back({static_cast<std::int64_t>(i), order[i], leaves[pick_leaf(rng)]});
    }

    Dataset d;
    d.name = "synthetic";
    d.forest = std::move(forest);
    d.graph = RoadGraph(n, gs.directed, edges, std::move(pois), std::move(xy));
    return d;
}

std::vector<Query> generate_workload(const RoadGraph& g, const CategoryForest& f, const WorkloadSpec& spec,
                                     std::uint64_t seed) {
    if (spec.min_size < 1 || spec.max_size < spec.min_size)
        throw InvalidArgument("workload sizes need 1 <= min_size <= max_size");
    if (g.num_vertices() == 0) throw InvalidArgument("workload needs a non-empty graph");

    std::vector<std::size_t> own_count(f.size(), 0);
    for (const PoiVertex& p : g.pois()) ++own_count[static_cast<std::size_t>(p.category)];

    // Per tree: populated leaves sorted by PoI count (ties by id), top half kept.
    std::vector<std::vector<CategoryId>> eligible;
    for (std::size_t t = 0; t < f.num_trees(); ++t) {
        std::vector<CategoryId> leaves;
        for (CategoryId c = 0; static_cast<std::size_t>(c) < f.size(); ++c)
            if (f.tree_of(c) == static_cast<int>(t) && f.is_leaf(c) && own_count[static_cast<std::size_t>(c)] > 0)
                leaves.push_back(c);
        if (leaves.empty()) continue;
        std::stable_sort(leaves.begin(), leaves.end(), [&](CategoryId a, CategoryId b) {
            return own_count[static_cast<std::size_t>(a)] > own_count[static_cast<std::size_t>(b)];
        });
        leaves.resize((leaves.size() + 1) / 2);
        eligible.push_back(std::move(leaves));
    }
    if (eligible.size() < spec.max_size) {
        throw InvalidArgument("sequence size " + std::to_string(spec.max_size) + " needs that many trees with PoIs; " +
                              std::to_string(eligible.size()) + " available");
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<VertexId> start(0, static_cast<VertexId>(g.num_vertices() - 1));
    std::uniform_int_distribution<std::size_t> size(spec.min_size, spec.max_size);
    std::vector<std::size_t> trees(eligible.size());
    std::vector<Query> out;
    for (std::size_t q = 0; q < spec.queries; ++q) {
        Query query;
        query.start = start(rng);
        const std::size_t k = size(rng);
        std::iota(trees.begin(), trees.end(), std::size_t{0});
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, trees.size() - 1);
            std::swap(trees[i], trees[pick(rng)]);
            const auto& leaves = eligible[trees[i]];
            query.categories.push_back(leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)]);
        }
        out.push_back(std::move(query));
    }
    return out;
}

void write_workload(const std::filesystem::path& file, const std::vector<Query>& queries) {
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw LoadError(file.string(), 0, "cannot write file");
    out << "# start category_1 ... category_k\n";
    for (const Query& q : queries) {
        out << q.start;
        for (CategoryId c : q.categories) out << ' ' << c;
        out << '\n';
    }
}

std::vector<Query> load_workload(const std::filesystem::path& file) {
    detail::RecordReader in(file);
    std::vector<Query> out;
    while (in.next()) {
        if (in.size() < 2) in.fail("expected `start category_1 ... category_k`");
        Query q;
        auto start = in.number<std::int64_t>(0);
        if (start < 0) in.fail("negative start vertex");
        q.start = static_cast<VertexId>(start);
        for (std::size_t i = 1; i < in.size(); ++i) q.categories.push_back(in.number<CategoryId>(i));
        out.push_back(std::move(q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Benchmark

namespace {

std::optional<QueryFlags> flags_for(const std::string& name) {
    if (name == "bssr") return QueryFlags::all();
    if (name == "bssr_no_opt") return QueryFlags::none();
    // Single-optimization ablations clear one bit of the full mask.
    if (name == "bssr_no_init") return QueryFlags::from_mask(0b1110);
    if (name == "bssr_no_pq") return QueryFlags::from_mask(0b1101);
    if (name == "bssr_no_lb") return QueryFlags::from_mask(0b1011);
    if (name == "bssr_no_cache") return QueryFlags::from_mask(0b0111);
    if (name.rfind("bssr_mask", 0) == 0 && name.size() > 9) {
        unsigned mask = 0;
        auto [ptr, ec] = std::from_chars(name.data() + 9, name.data() + name.size(), mask);
        if (ec == std::errc{} && ptr == name.data() + name.size() && mask < 16) return QueryFlags::from_mask(mask);
    }
    return std::nullopt;
}

std::string digest(const std::vector<ScorePair>& scores) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](double v) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xFFu;
            h *= 1099511628211ull;
        }
    };
    for (const ScorePair& s : scores) {
        mix(s.length);
        mix(s.semantic);
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xFu];
    return out;
}

BenchRow run_one(const Dataset& d, const Query& q, std::size_t index, const std::string& algo,
                 std::optional<double> timeout_ms) {
    BenchRow row;
    row.algorithm = algo;
    row.query = index;
    row.start = q.start;
    row.size = q.categories.size();
    const std::size_t n = q.categories.size();
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&](std::span<const Route> routes) {
        row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        row.skyline_size = routes.size();
        row.scores = score_multiset(routes);
        row.score_digest = digest(row.scores);
    };

    if (auto flags = flags_for(algo)) {
        QueryOptions opts;
        if (timeout_ms) opts.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                  std::chrono::duration<double, std::milli>(*timeout_ms));
        try {
            BssrResult res = run_bssr(d.graph, d.forest, q.start, q.categories, *flags, opts);
            finish(res.skyline.routes());
            const QueryCounters& c = res.counters;
            row.visited_vertices = c.visited_vertices;
            row.dijkstra_executions = c.dijkstra_executions;
            row.queue_pushes = c.queue_pushes;
            row.pruned_routes = c.pruned_routes;
            row.cache_hits = c.cache_hits;
            row.first_search_weight = c.first_search_weight;
            const std::uint64_t route_bytes = sizeof(Route) + n * (sizeof(VertexId) + sizeof(double));
            row.memory_proxy_bytes = (c.peak_queue_size + row.skyline_size) * route_bytes +
                                     c.peak_cached_candidates * sizeof(Candidate);
        } catch (const QueryTimeout&) {
            row.status = "timeout";
            row.elapsed_ms = *timeout_ms;
        }
    } else if (algo == "iter_osr") {
        BaselineStats stats;
        auto routes = iter_osr_skyline(d.graph, d.forest, q.start, q.categories, &stats);
        finish(routes);
        row.visited_vertices = stats.visited_states;
        row.dijkstra_executions = stats.searches;
        // One label-setting search alive at a time: dist, parent, done per state.
        row.memory_proxy_bytes = d.graph.num_vertices() * (n + 1) * (sizeof(double) + sizeof(std::size_t) + 1);
    } else if (algo == "oracle") {
        BaselineStats stats;
        try {
            auto routes = brute_force_skyline(d.graph, d.forest, q.start, q.categories, 10'000'000, &stats);
            finish(routes);
            row.visited_vertices = stats.visited_states;
            row.dijkstra_executions = stats.searches;
            row.memory_proxy_bytes = stats.searches * d.graph.num_vertices() * sizeof(double);
        } catch (const InvalidArgument&) {
            row.status = "skipped";
        }
    } else {
        throw InvalidArgument("unknown algorithm '" + algo + "'");
    }
    return row;
}

}  // namespace

bool is_known_algorithm(const std::string& name) {
    return flags_for(name).has_value() || name == "iter_osr" || name == "oracle";
}

std::vector<BenchRow> run_benchmark(const Dataset& d, const std::vector<Query>& workload,
                                    const std::vector<std::string>& algorithms, unsigned threads,
                                    std::optional<double> timeout_ms) {
    for (const auto& a : algorithms)
        if (!is_known_algorithm(a)) throw InvalidArgument("unknown algorithm '" + a + "'");
    for (const Query& q : workload) {
        if (!d.graph.contains(q.start)) throw InvalidArgument("workload start vertex " + std::to_string(q.start) +
                                                              " is not in the graph");
        validate_sequence(d.forest, q.categories);
    }

    std::vector<std::vector<BenchRow>> per_query(workload.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < workload.size(); i = next++) {
            try {
                for (const auto& a : algorithms) per_query[i].push_back(run_one(d, workload[i], i, a, timeout_ms));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(workload.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Algorithm-major order, queries ascending within each algorithm.
    std::vector<BenchRow> rows;
    for (std::size_t a = 0; a < algorithms.size(); ++a)
        for (auto& q : per_query) rows.push_back(std::move(q[a]));
    return rows;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows) {
    std::map<std::pair<std::string, std::size_t>, std::vector<const BenchRow*>> groups;
    std::vector<std::pair<std::string, std::size_t>> order;
    for (const BenchRow& r : rows) {
        auto key = std::make_pair(r.algorithm, r.size);
        if (!groups.contains(key)) order.push_back(key);
        groups[key].push_back(&r);
    }
    std::vector<BenchSummary> out;
    for (const auto& key : order) {
        const auto& group = groups[key];
        BenchSummary s;
        s.algorithm = key.first;
        s.size = key.second;
        s.queries = group.size();
        std::vector<double> times;
        for (const BenchRow* r : group) {
            if (r->status != "ok") {
                ++s.not_ok;
                continue;
            }
            times.push_back(r->elapsed_ms);
            s.mean_visited += static_cast<double>(r->visited_vertices);
            s.mean_dijkstra += static_cast<double>(r->dijkstra_executions);
            s.mean_queue_pushes += static_cast<double>(r->queue_pushes);
            s.mean_skyline_size += static_cast<double>(r->skyline_size);
            s.mean_first_search_weight += r->first_search_weight;
            s.mean_memory_proxy_bytes += static_cast<double>(r->memory_proxy_bytes);
        }
        if (!times.empty()) {
            const double k = static_cast<double>(times.size());
            s.mean_ms = std::accumulate(times.begin(), times.end(), 0.0) / k;
            std::sort(times.begin(), times.end());
            const std::size_t m = times.size() / 2;
            s.median_ms = times.size() % 2 ? times[m] : (times[m - 1] + times[m]) / 2.0;
            s.mean_visited /= k;
            s.mean_dijkstra /= k;
            s.mean_queue_pushes /= k;
            s.mean_skyline_size /= k;
            s.mean_first_search_weight /= k;
            s.mean_memory_proxy_bytes /= k;
        }
        out.push_back(s);
    }
    return out;
}

void write_rows_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    using detail::format_number;
    out << "algorithm,query,start,size,status,elapsed_ms,visited_vertices,dijkstra_executions,queue_pushes,"
           "pruned_routes,cache_hits,skyline_size,first_search_weight,memory_proxy_bytes,score_digest\n";
    for (const BenchRow& r : rows) {
        out << r.algorithm << ',' << r.query << ',' << r.start << ',' << r.size << ',' << r.status << ','
            << format_number(r.elapsed_ms) << ',' << r.visited_vertices << ',' << r.dijkstra_executions << ','
            << r.queue_pushes << ',' << r.pruned_routes << ',' << r.cache_hits << ',' << r.skyline_size << ','
            << format_number(r.first_search_weight) << ',' << r.memory_proxy_bytes << ',' << r.score_digest << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<BenchSummary>& summary) {
    using detail::format_number;
    out << "algorithm,size,queries,not_ok,mean_ms,median_ms,mean_visited,mean_dijkstra,mean_queue_pushes,"
           "mean_skyline_size,mean_first_search_weight,mean_memory_proxy_bytes\n";
    for (const BenchSummary& s : summary) {
        out << s.algorithm << ',' << s.size << ',' << s.queries << ',' << s.not_ok << ',' << format_number(s.mean_ms)
            << ',' << format_number(s.median_ms) << ',' << format_number(s.mean_visited) << ','
            << format_number(s.mean_dijkstra) << ',' << format_number(s.mean_queue_pushes) << ','
            << format_number(s.mean_skyline_size) << ',' << format_number(s.mean_first_search_weight) << ','
            << format_number(s.mean_memory_proxy_bytes) << '\n';
    }
}

json bench_json(const std::vector<BenchRow>& rows, const std::vector<BenchSummary>& summary) {
    json jr = json::array();
    for (const BenchRow& r : rows) {
        json scores = json::array();
        for (const ScorePair& s : r.scores) scores.push_back({s.length, s.semantic});
        jr.push_back({{"algorithm", r.algorithm},
                      {"query", r.query},
                      {"start", r.start},
                      {"size", r.size},
                      {"status", r.status},
                      {"elapsed_ms", r.elapsed_ms},
                      {"visited_vertices", r.visited_vertices},
                      {"dijkstra_executions", r.dijkstra_executions},
                      {"queue_pushes", r.queue_pushes},
                      {"pruned_routes", r.pruned_routes},
                      {"cache_hits", r.cache_hits},
                      {"skyline_size", r.skyline_size},
                      {"first_search_weight", r.first_search_weight},
                      {"memory_proxy_bytes", r.memory_proxy_bytes},
                      {"score_digest", r.score_digest},
                      {"scores", std::move(scores)}});
    }
    json js = json::array();
    for (const BenchSummary& s : summary) {
        js.push_back({{"algorithm", s.algorithm},
                      {"size", s.size},
                      {"queries", s.queries},
                      {"not_ok", s.not_ok},
                      {"mean_ms", s.mean_ms},
                      {"median_ms", s.median_ms},
                      {"mean_visited", s.mean_visited},
                      {"mean_dijkstra", s.mean_dijkstra},
                      {"mean_queue_pushes", s.mean_queue_pushes},
                      {"mean_skyline_size", s.mean_skyline_size},
                      {"mean_first_search_weight", s.mean_first_search_weight},
                      {"mean_memory_proxy_bytes", s.mean_memory_proxy_bytes}});
    }
    return {{"rows", std::move(jr)}, {"summary", std::move(js)}};
}

}  // namespace skysr
