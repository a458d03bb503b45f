#include "skysr/dataset.hpp"

#include <fstream>

#include "skysr/error.hpp"
#include "text_io.hpp"

namespace skysr {

Dataset load_dataset(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw LoadError(dir.string(), 0, "not a dataset directory");
    Dataset d;
    d.name = std::filesystem::absolute(dir).lexically_normal().filename().string();
    if (d.name.empty()) d.name = std::filesystem::absolute(dir).lexically_normal().parent_path().filename().string();
    d.forest = load_categories(dir / "categories.txt");
    d.graph = load_graph(dir / "nodes.txt", dir / "edges.txt", dir / "pois.txt", d.forest);
    return d;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw LoadError(path.string(), 0, "cannot write file");
    return out;
}

}  // namespace

void write_dataset(const std::filesystem::path& dir, const RoadGraph& g, const CategoryForest& f) {
    using detail::format_number;
    std::filesystem::create_directories(dir);

    auto nodes = open_out(dir / "nodes.txt");
    nodes << "# node_id" << (g.has_coordinates() ? " x y" : "") << '\n';
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        nodes << v;
        if (g.has_coordinates())
            nodes << ' ' << format_number(g.coordinate(v).x) << ' ' << format_number(g.coordinate(v).y);
        nodes << '\n';
    }

    auto edges = open_out(dir / "edges.txt");
    edges << (g.directed() ? "directed" : "undirected") << "\n# u v weight\n";
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        for (const Arc& a : g.neighbors(u)) {
            // Undirected edges appear in both adjacency lists; write them once.
            if (!g.directed() && a.to < u) continue;
            edges << u << ' ' << a.to << ' ' << format_number(a.weight) << '\n';
        }
    }

    auto pois = open_out(dir / "pois.txt");
    pois << "# poi_id node_id category_id\n";
    for (const PoiVertex& p : g.pois()) pois << p.id << ' ' << p.vertex << ' ' << p.category << '\n';

    auto cats = open_out(dir / "categories.txt");
    cats << "# category_id parent_id name\n";
    for (CategoryId c = 0; static_cast<std::size_t>(c) < f.size(); ++c)
        cats << c << ' ' << f.at(c).parent << ' ' << f.at(c).name << '\n';
}

}  // namespace skysr
