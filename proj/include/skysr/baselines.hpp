#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skysr/graph.hpp"
#include "skysr/route.hpp"
#include "skysr/taxonomy.hpp"

namespace skysr {

struct BaselineStats {
    std::uint64_t visited_states = 0;  // settled vertices or (vertex, k) labels
    std::uint64_t searches = 0;        // Dijkstra / label-setting runs
};

/// Keeps the non-dominated routes, one representative per equal score pair
/// (the first in input order), sorted by ascending length.
std::vector<Route> pareto_filter(std::vector<Route> routes);

/// Exhaustive skyline: scores every tuple of distinct semantically matching
/// PoIs from all-pairs distances. Throws InvalidArgument when the number of
/// tuples (product of per-position candidate counts) exceeds `guard`.
std::vector<Route> brute_force_skyline(const RoadGraph& g, const CategoryForest& f, VertexId start,
                                       const CategorySequence& seq, std::uint64_t guard = 10'000'000,
                                       BaselineStats* stats = nullptr);

/// Shortest route whose i-th stop is associated with concrete_seq[i]
/// (the PoI's own category or a descendant of it), all stops distinct.
/// Similarities in the returned route are against concrete_seq, so all 1.
std::optional<Route> osr_exact(const RoadGraph& g, const CategoryForest& f, VertexId start,
                               const CategorySequence& concrete_seq, BaselineStats* stats = nullptr);

/// The naive comparison algorithm: one osr_exact per super-category
/// sequence, rescored against `seq`, then skyline-filtered. Can miss
/// skyline routes whose stops are non-ancestor relatives of the queried
/// categories.
std::vector<Route> iter_osr_skyline(const RoadGraph& g, const CategoryForest& f, VertexId start,
                                    const CategorySequence& seq, BaselineStats* stats = nullptr);

}  // namespace skysr
