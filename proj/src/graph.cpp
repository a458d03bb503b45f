#include "skysr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>

#include "skysr/error.hpp"
#include "skysr/taxonomy.hpp"
#include "text_io.hpp"

namespace skysr {

namespace {

struct HeapItem {
    double dist;
    VertexId v;
    bool operator>(const HeapItem& o) const { return dist > o.dist || (dist == o.dist && v > o.v); }
};

using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>>;

}  // namespace

RoadGraph::RoadGraph(std::size_t num_vertices, bool directed, std::span<const Edge> edges,
                     std::vector<PoiVertex> pois, std::optional<std::vector<Point>> coordinates)
    : directed_(directed), num_edges_(edges.size()), pois_(std::move(pois)) {
    std::vector<std::size_t> degree(num_vertices, 0);
    for (const Edge& e : edges) {
        if (e.from >= num_vertices || e.to >= num_vertices) {
            throw InvalidArgument("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                                  ") references a vertex outside 0.." + std::to_string(num_vertices));
        }
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
            throw InvalidArgument("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                                  ") has negative or non-finite weight");
        }
        ++degree[e.from];
        if (!directed) ++degree[e.to];
    }

    offsets_.assign(num_vertices + 1, 0);
    for (std::size_t v = 0; v < num_vertices; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    arcs_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges) {
        arcs_[fill[e.from]++] = {e.to, e.weight};
        if (!directed) arcs_[fill[e.to]++] = {e.from, e.weight};
    }

    poi_slot_.assign(num_vertices, -1);
    for (std::size_t i = 0; i < pois_.size(); ++i) {
        const PoiVertex& p = pois_[i];
        if (p.vertex >= num_vertices) {
            throw InvalidArgument("PoI " + std::to_string(p.id) + " references missing vertex " +
                                  std::to_string(p.vertex));
        }
        if (poi_slot_[p.vertex] >= 0) {
            throw InvalidArgument("vertex " + std::to_string(p.vertex) + " carries more than one PoI");
        }
        poi_slot_[p.vertex] = static_cast<std::int64_t>(i);
    }

    if (coordinates) {
        if (coordinates->size() != num_vertices) throw InvalidArgument("coordinate count does not match vertex count");
        coordinates_ = std::move(*coordinates);
    }
}

bool RoadGraph::is_connected() const {
    const std::size_t n = num_vertices();
    if (n <= 1) return true;

    // Weak connectivity needs reverse arcs for directed graphs.
    std::vector<std::vector<VertexId>> reverse;
    if (directed_) {
        reverse.resize(n);
        for (VertexId u = 0; u < n; ++u)
            for (const Arc& a : neighbors(u)) reverse[a.to].push_back(u);
    }

    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    auto visit = [&](VertexId w) {
        if (!seen[w]) {
            seen[w] = 1;
            ++reached;
            stack.push_back(w);
        }
    };
    while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        for (const Arc& a : neighbors(u)) visit(a.to);
        if (directed_)
            for (VertexId w : reverse[u]) visit(w);
    }
    return reached == n;
}

ShortestPath shortest_path(const RoadGraph& g, VertexId from, VertexId to) {
    if (!g.contains(from) || !g.contains(to)) throw InvalidArgument("shortest_path: vertex out of range");

    const std::size_t n = g.num_vertices();
    std::vector<double> dist(n, kInfinity);
    std::vector<VertexId> parent(n, from);
    std::vector<char> done(n, 0);
    MinHeap heap;
    dist[from] = 0.0;
    heap.push({0.0, from});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u == to) break;
        for (const Arc& a : g.neighbors(u)) {
            double nd = d + a.weight;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                parent[a.to] = u;
                heap.push({nd, a.to});
            }
        }
    }

    ShortestPath out;
    if (!done[to]) return out;
    out.distance = dist[to];
    for (VertexId v = to;; v = parent[v]) {
        out.path.push_back(v);
        if (v == from) break;
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

std::vector<double> distances_from(const RoadGraph& g, VertexId from) {
    if (!g.contains(from)) throw InvalidArgument("distances_from: vertex out of range");
    std::vector<double> dist(g.num_vertices(), kInfinity);
    std::vector<char> done(g.num_vertices(), 0);
    MinHeap heap;
    dist[from] = 0.0;
    heap.push({0.0, from});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (const Arc& a : g.neighbors(u)) {
            double nd = d + a.weight;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                heap.push({nd, a.to});
            }
        }
    }
    return dist;
}

VertexId snap_point(const RoadGraph& g, double x, double y) {
    if (!g.has_coordinates()) throw InvalidArgument("dataset has no vertex coordinates");
    if (g.num_vertices() == 0) throw InvalidArgument("graph is empty");
    VertexId best = 0;
    double best_d2 = kInfinity;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const Point& p = g.coordinate(v);
        double dx = p.x - x, dy = p.y - y;
        double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {  // strict: keeps the smallest id on ties
            best_d2 = d2;
            best = v;
        }
    }
    return best;
}

RoadGraph load_graph(const std::filesystem::path& node_file, const std::filesystem::path& edge_file,
                     const std::filesystem::path& poi_file, const CategoryForest& forest,
                     std::optional<bool> directed) {
    // nodes: node_id [x y]
    std::vector<std::optional<Point>> coords;
    std::vector<char> defined;
    std::optional<bool> with_coords;
    {
        detail::RecordReader in(node_file);
        while (in.next()) {
            in.expect_fields(1, 3);
            if (in.size() == 2) in.fail("node record needs either 1 or 3 fields");
            auto id = in.number<std::int64_t>(0);
            if (id < 0) in.fail("negative node id");
            bool has_xy = in.size() == 3;
            if (with_coords && *with_coords != has_xy) in.fail("coordinates must be given for all nodes or none");
            with_coords = has_xy;
            auto idx = static_cast<std::size_t>(id);
            if (idx >= coords.size()) {
                coords.resize(idx + 1);
                defined.resize(idx + 1, 0);
            }
            if (defined[idx]) in.fail("duplicate node id " + std::to_string(id));
            defined[idx] = 1;
            if (has_xy) coords[idx] = Point{in.number<double>(1), in.number<double>(2)};
        }
        for (std::size_t v = 0; v < defined.size(); ++v) {
            if (!defined[v]) {
                throw LoadError(node_file.string(), 0,
                                "node ids must be dense 0..n-1; missing id " + std::to_string(v));
            }
        }
    }
    const std::size_t n = coords.size();

    // edges: header `directed` | `undirected`, then u v weight
    std::vector<Edge> edges;
    bool is_directed = directed.value_or(false);
    {
        detail::RecordReader in(edge_file);
        bool header_seen = false;
        while (in.next()) {
            if (!header_seen) {
                header_seen = true;
                if (in.size() == 1 && (in.field(0) == "directed" || in.field(0) == "undirected")) {
                    bool header_directed = in.field(0) == "directed";
                    if (directed && *directed != header_directed) in.fail("header contradicts requested directedness");
                    is_directed = header_directed;
                    continue;
                }
                in.fail("missing `directed` / `undirected` header");
            }
            in.expect_fields(3, 3);
            auto u = in.number<std::int64_t>(0);
            auto v = in.number<std::int64_t>(1);
            auto w = in.number<double>(2);
            if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
                in.fail("edge references unknown vertex");
            }
            if (!(w >= 0.0) || !std::isfinite(w)) in.fail("negative or non-finite edge weight");
            edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
        }
        if (!header_seen && directed) is_directed = *directed;
    }

    // pois: poi_id node_id category_id
    std::vector<PoiVertex> pois;
    {
        detail::RecordReader in(poi_file);
        std::vector<char> occupied(n, 0);
        while (in.next()) {
            in.expect_fields(3, 3);
            PoiVertex p;
            p.id = in.number<std::int64_t>(0);
            auto node = in.number<std::int64_t>(1);
            p.category = in.number<CategoryId>(2);
            if (node < 0 || static_cast<std::size_t>(node) >= n) {
                in.fail("PoI " + std::to_string(p.id) + " references unknown vertex " + std::to_string(node));
            }
            if (!forest.contains(p.category)) in.fail("unknown category id " + std::to_string(p.category));
            p.vertex = static_cast<VertexId>(node);
            if (occupied[p.vertex]) in.fail("vertex " + std::to_string(node) + " already carries a PoI");
            occupied[p.vertex] = 1;
            pois.push_back(p);
        }
    }

    std::optional<std::vector<Point>> points;
    if (with_coords.value_or(false)) {
        points.emplace();
        points->reserve(n);
        for (auto& c : coords) points->push_back(*c);
    }
    RoadGraph g(n, is_directed, edges, std::move(pois), std::move(points));
    if (!g.is_connected()) throw LoadError(edge_file.string(), 0, "graph is not connected");
    return g;
}

}  // namespace skysr
