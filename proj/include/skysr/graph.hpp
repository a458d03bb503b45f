#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace skysr {

using VertexId = std::uint32_t;
using CategoryId = std::int32_t;

inline constexpr CategoryId kNoCategory = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Arc {
    VertexId to;
    double weight;
};

struct Edge {
    VertexId from;
    VertexId to;
    double weight;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// A categorized vertex. `id` is the external PoI label from the dataset.
struct PoiVertex {
    std::int64_t id = 0;
    VertexId vertex = 0;
    CategoryId category = kNoCategory;
};

/// Road network over plain and PoI vertices, stored as compressed adjacency
/// lists. Immutable once constructed.
class RoadGraph {
public:
    RoadGraph() = default;

    /// Throws InvalidArgument on negative/non-finite weights, dangling vertex
    /// references, two PoIs sharing a vertex, or a coordinate list of the
    /// wrong size. Connectivity is checked separately (see is_connected()).
    RoadGraph(std::size_t num_vertices, bool directed, std::span<const Edge> edges,
              std::vector<PoiVertex> pois, std::optional<std::vector<Point>> coordinates = std::nullopt);

    std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    /// Number of input edge records (an undirected edge counts once).
    std::size_t num_edges() const noexcept { return num_edges_; }
    bool directed() const noexcept { return directed_; }

    std::span<const Arc> neighbors(VertexId v) const noexcept {
        return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
    }

    std::span<const PoiVertex> pois() const noexcept { return pois_; }
    bool is_poi(VertexId v) const noexcept { return poi_slot_[v] >= 0; }
    /// Category of the PoI at `v`, or kNoCategory for plain vertices.
    CategoryId category_of(VertexId v) const noexcept {
        return poi_slot_[v] < 0 ? kNoCategory : pois_[static_cast<std::size_t>(poi_slot_[v])].category;
    }
    const PoiVertex* poi_at(VertexId v) const noexcept {
        return poi_slot_[v] < 0 ? nullptr : &pois_[static_cast<std::size_t>(poi_slot_[v])];
    }

    bool has_coordinates() const noexcept { return !coordinates_.empty(); }
    const Point& coordinate(VertexId v) const { return coordinates_.at(v); }

    bool contains(VertexId v) const noexcept { return v < num_vertices(); }

    /// Weak connectivity for directed graphs, plain connectivity otherwise.
    bool is_connected() const;

private:
    bool directed_ = false;
    std::size_t num_edges_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Arc> arcs_;
    std::vector<PoiVertex> pois_;
    std::vector<std::int64_t> poi_slot_;
    std::vector<Point> coordinates_;
};

struct ShortestPath {
    double distance = kInfinity;
    std::vector<VertexId> path;  // empty when unreachable
};

/// Single-pair shortest path (plain Dijkstra with early exit at `to`).
ShortestPath shortest_path(const RoadGraph& g, VertexId from, VertexId to);

/// Distances from `from` to every vertex; kInfinity for unreachable ones.
std::vector<double> distances_from(const RoadGraph& g, VertexId from);

/// Vertex nearest to (x, y) in Euclidean distance, ties to the smallest id.
/// Throws InvalidArgument if the graph has no coordinates.
VertexId snap_point(const RoadGraph& g, double x, double y);

class CategoryForest;

/// Reads the node, edge and PoI files (formats in README). If `directed` is
/// given it must agree with the edge file header. Validates referential
/// integrity, weights, categories against `forest`, and connectivity.
RoadGraph load_graph(const std::filesystem::path& node_file, const std::filesystem::path& edge_file,
                     const std::filesystem::path& poi_file, const CategoryForest& forest,
                     std::optional<bool> directed = std::nullopt);

}  // namespace skysr
