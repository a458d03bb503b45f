#include "skysr/result_json.hpp"

namespace skysr {

using nlohmann::json;

json route_json(const Dataset& d, const Route& r) {
    const RoadGraph& g = d.graph;
    json stops = json::array();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const PoiVertex* p = g.poi_at(r.pois[i]);
        const CategoryId c = p ? p->category : kNoCategory;
        stops.push_back({{"poi_id", p ? p->id : -1},
                         {"vertex", r.pois[i]},
                         {"category", c},
                         {"category_name", c == kNoCategory ? "" : d.forest.at(c).name},
                         {"similarity", r.sims[i]}});
    }
    return {{"stops", std::move(stops)}, {"length", r.length}, {"semantic", r.semantic()}};
}

namespace {

/// Legs between consecutive stops, each with its vertex path and, when the
/// dataset has coordinates, the matching [x, y] list.
json legs_json(const RoadGraph& g, VertexId start, const Route& r) {
    json legs = json::array();
    VertexId from = start;
    for (VertexId to : r.pois) {
        ShortestPath sp = shortest_path(g, from, to);
        json leg{{"from", from}, {"to", to}, {"length", sp.distance}, {"path", sp.path}};
        if (g.has_coordinates()) {
            json geometry = json::array();
            for (VertexId v : sp.path) geometry.push_back({g.coordinate(v).x, g.coordinate(v).y});
            leg["geometry"] = std::move(geometry);
        }
        legs.push_back(std::move(leg));
        from = to;
    }
    return legs;
}

}  // namespace

json counters_json(const QueryCounters& c) {
    return {{"visited_vertices", c.visited_vertices},
            {"dijkstra_executions", c.dijkstra_executions},
            {"queue_pushes", c.queue_pushes},
            {"pruned_routes", c.pruned_routes},
            {"cache_hits", c.cache_hits},
            {"skyline_accepts", c.skyline_accepts},
            {"skyline_evictions", c.skyline_evictions},
            {"peak_queue_size", c.peak_queue_size},
            {"peak_cached_candidates", c.peak_cached_candidates},
            {"first_search_weight", c.first_search_weight}};
}

json counters_json(const BaselineStats& s) {
    return {{"visited_vertices", s.visited_states}, {"dijkstra_executions", s.searches}};
}

json response_json(const Dataset& d, VertexId start, const CategorySequence& seq, std::span<const Route> routes,
                   json counters, double elapsed_ms) {
    json out_routes = json::array();
    for (const Route& r : routes) {
        json rj = route_json(d, r);
        rj["legs"] = legs_json(d.graph, start, r);
        out_routes.push_back(std::move(rj));
    }
    json start_j{{"vertex", start}};
    if (d.graph.has_coordinates()) start_j["point"] = {d.graph.coordinate(start).x, d.graph.coordinate(start).y};
    return {{"dataset", d.name},
            {"start", std::move(start_j)},
            {"categories", seq},
            {"no_route", routes.empty()},
            {"routes", std::move(out_routes)},
            {"counters", std::move(counters)},
            {"elapsed_ms", elapsed_ms}};
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

}  // namespace skysr
