#pragma once

#include <span>
#include <string>

#include "json.hpp"
#include "skysr/baselines.hpp"
#include "skysr/dataset.hpp"
#include "skysr/engine.hpp"

namespace skysr {

/// One route record: stops (external PoI ids and vertices), per-position
/// categories and similarities, both scores and the leg geometry.
nlohmann::json route_json(const Dataset& d, const Route& r);

nlohmann::json counters_json(const QueryCounters& c);
nlohmann::json counters_json(const BaselineStats& s);

/// The query response shared by `skysr query`, `skysr oracle` and the HTTP
/// service. Routes keep the given order (ascending length for skylines).
nlohmann::json response_json(const Dataset& d, VertexId start, const CategorySequence& seq,
                             std::span<const Route> routes, nlohmann::json counters, double elapsed_ms);

/// Serialization used everywhere a response leaves the process.
std::string render(const nlohmann::json& j);

}  // namespace skysr
