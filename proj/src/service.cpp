#include "skysr/service.hpp"

#include <thread>

#include "skysr/error.hpp"
#include "skysr/result_json.hpp"

namespace skysr {

using nlohmann::json;

namespace {

/// Client error carrying extra fields for the 400 body.
class RequestError : public InvalidArgument {
public:
    RequestError(const std::string& what, json detail) : InvalidArgument(what), detail_(std::move(detail)) {}
    const json& detail() const noexcept { return detail_; }

private:
    json detail_;
};

HttpResponse error_response(int status, const std::string& message, json detail = json::object()) {
    detail["error"] = message;
    return {status, render(detail)};
}

}  // namespace

QueryService::QueryService(Dataset dataset, ServiceOptions options)
    : dataset_(std::move(dataset)), options_(std::move(options)) {
    if (options_.max_concurrent == 0) options_.max_concurrent = std::max(1u, std::thread::hardware_concurrency());
    slots_ = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(options_.max_concurrent));

    const CategoryForest& f = dataset_.forest;
    own_counts_.assign(f.size(), 0);
    inclusive_counts_.assign(f.size(), 0);
    for (const PoiVertex& p : dataset_.graph.pois()) {
        ++own_counts_[static_cast<std::size_t>(p.category)];
        for (CategoryId a : f.ancestors(p.category)) ++inclusive_counts_[static_cast<std::size_t>(a)];
    }
}

HttpResponse QueryService::health() const {
    const RoadGraph& g = dataset_.graph;
    json body{{"status", "ok"},
              {"dataset", dataset_.name},
              {"directed", g.directed()},
              {"has_coordinates", g.has_coordinates()},
              {"counts",
               {{"vertices", g.num_vertices()},
                {"edges", g.num_edges()},
                {"pois", g.pois().size()},
                {"categories", dataset_.forest.size()},
                {"trees", dataset_.forest.num_trees()}}}};
    return {200, render(body)};
}

HttpResponse QueryService::categories() const {
    const CategoryForest& f = dataset_.forest;
    std::function<json(CategoryId)> node = [&](CategoryId c) {
        json children = json::array();
        for (CategoryId k : f.children(c)) children.push_back(node(k));
        const Category& cat = f.at(c);
        return json{{"id", c},
                    {"name", cat.name},
                    {"parent", cat.parent == kNoCategory ? json(nullptr) : json(cat.parent)},
                    {"depth", cat.depth},
                    {"poi_count", inclusive_counts_[static_cast<std::size_t>(c)]},
                    {"own_poi_count", own_counts_[static_cast<std::size_t>(c)]},
                    {"children", std::move(children)}};
    };
    json roots = json::array();
    for (CategoryId r : f.roots()) roots.push_back(node(r));
    return {200, render(roots)};
}

QueryRequest QueryService::parse_request(const json& body) const {
    if (!body.is_object()) throw RequestError("request body must be a JSON object", {});
    for (const auto& [key, value] : body.items()) {
        if (key != "start" && key != "categories" && key != "flags")
            throw RequestError("unknown field '" + key + "'", {{"field", key}});
    }
    QueryRequest req;
    const RoadGraph& g = dataset_.graph;

    auto start = body.find("start");
    if (start == body.end()) throw RequestError("missing field 'start'", {{"field", "start"}});
    if (start->is_number_integer()) {
        auto v = start->get<std::int64_t>();
        if (v < 0 || static_cast<std::uint64_t>(v) >= g.num_vertices())
            throw RequestError("unknown start vertex " + std::to_string(v), {{"field", "start"}, {"vertex", v}});
        req.start = static_cast<VertexId>(v);
    } else if (start->is_object()) {
        auto x = start->find("x");
        auto y = start->find("y");
        if (x == start->end() || y == start->end() || !x->is_number() || !y->is_number() || start->size() != 2)
            throw RequestError("start point needs numeric 'x' and 'y'", {{"field", "start"}});
        if (!g.has_coordinates())
            throw RequestError("dataset has no coordinates; give start as a vertex id", {{"field", "start"}});
        req.start = snap_point(g, x->get<double>(), y->get<double>());
        req.snapped = true;
    } else {
        throw RequestError("'start' must be a vertex id or {\"x\": .., \"y\": ..}", {{"field", "start"}});
    }

    auto cats = body.find("categories");
    if (cats == body.end() || !cats->is_array() || cats->empty())
        throw RequestError("'categories' must be a non-empty array", {{"field", "categories"}});
    for (const json& c : *cats) {
        if (c.is_number_integer()) {
            auto id = c.get<std::int64_t>();
            if (id < 0 || !dataset_.forest.contains(static_cast<CategoryId>(id)) || id > INT32_MAX)
                throw RequestError("unknown category id " + std::to_string(id), {{"field", "categories"}, {"category", id}});
            req.categories.push_back(static_cast<CategoryId>(id));
        } else if (c.is_string()) {
            CategoryId id = dataset_.forest.find(c.get<std::string>());
            if (id == kNoCategory)
                throw RequestError("unknown category name '" + c.get<std::string>() + "'",
                                   {{"field", "categories"}, {"category", c}});
            req.categories.push_back(id);
        } else {
            throw RequestError("categories must be ids or names", {{"field", "categories"}});
        }
    }

    if (auto flags = body.find("flags"); flags != body.end()) {
        if (!flags->is_object()) throw RequestError("'flags' must be an object", {{"field", "flags"}});
        for (const auto& [key, value] : flags->items()) {
            if (!value.is_boolean()) throw RequestError("flag '" + key + "' must be a boolean", {{"field", "flags"}});
            bool on = value.get<bool>();
            if (key == "init_search") req.flags.init_search = on;
            else if (key == "pq_ordering") req.flags.pq_ordering = on;
            else if (key == "lower_bounds") req.flags.lower_bounds = on;
            else if (key == "caching") req.flags.caching = on;
            else throw RequestError("unknown flag '" + key + "'", {{"field", "flags"}});
        }
    }
    return req;
}

json query_response(const Dataset& d, const QueryRequest& req, const BssrResult& result) {
    json out = response_json(d, req.start, req.categories, result.skyline.routes(), counters_json(result.counters),
                             result.elapsed_ms);
    out["start"]["snapped"] = req.snapped;
    out["flags"] = {{"init_search", req.flags.init_search},
                    {"pq_ordering", req.flags.pq_ordering},
                    {"lower_bounds", req.flags.lower_bounds},
                    {"caching", req.flags.caching}};
    return out;
}

HttpResponse QueryService::query(std::string_view body) {
    QueryRequest req;
    try {
        req = parse_request(json::parse(body));
    } catch (const json::parse_error& e) {
        return error_response(400, std::string("malformed JSON: ") + e.what());
    } catch (const RequestError& e) {
        return error_response(400, e.what(), e.detail());
    } catch (const std::exception& e) {
        return error_response(400, e.what());
    }

    const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
    if (!slots_->try_acquire_until(deadline))
        return error_response(503, "all query slots stayed busy for the whole timeout");
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{*slots_};

    try {
        QueryOptions opts;
        opts.deadline = deadline;
        BssrResult result = run_bssr(dataset_.graph, dataset_.forest, req.start, req.categories, req.flags, opts);
        return {200, render(query_response(dataset_, req, result))};
    } catch (const QueryTimeout&) {
        return error_response(504, "query exceeded the " + std::to_string(options_.timeout.count()) + " ms limit",
                              {{"timeout_ms", options_.timeout.count()}});
    } catch (const InvalidArgument& e) {
        return error_response(400, e.what());
    } catch (const std::exception& e) {
        return error_response(500, std::string("internal error: ") + e.what());
    }
}

}  // namespace skysr
