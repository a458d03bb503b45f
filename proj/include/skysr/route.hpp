#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "skysr/graph.hpp"

namespace skysr {

/// A (possibly partial) sequenced route. Scores accumulate left to right
/// along the route so independently built routes with the same stops carry
/// bit-identical scores.
struct Route {
    std::vector<VertexId> pois;
    std::vector<double> sims;  // h_i per position, in (0, 1]
    double length = 0.0;       // l(R)
    double sim_product = 1.0;  // prod h_i

    std::size_t size() const noexcept { return pois.size(); }
    bool empty() const noexcept { return pois.empty(); }
    /// underbar-s(R): the score if every remaining match is perfect. Equals
    /// s(R) once the route is complete.
    double min_semantic() const noexcept { return 1.0 - sim_product; }
    double semantic() const noexcept { return min_semantic(); }
    bool contains(VertexId v) const noexcept;
    VertexId last() const { return pois.back(); }

    /// R + p reached from the current end at distance `hop`.
    Route extended(VertexId poi, double hop, double sim) const;
};

struct ScorePair {
    double length = 0.0;
    double semantic = 0.0;
    friend bool operator==(const ScorePair&, const ScorePair&) = default;
    friend auto operator<=>(const ScorePair&, const ScorePair&) = default;
};

inline ScorePair scores(const Route& r) { return {r.length, r.semantic()}; }

enum class Dominance { dominates, dominated, equivalent, incomparable };

/// Relation of `a` to `b` under route dominance (smaller is better on both).
Dominance dominance(ScorePair a, ScorePair b) noexcept;

/// Minimal set of mutually non-dominated completed routes, kept sorted by
/// ascending length (hence strictly descending semantic score).
class SkylineSet {
public:
    /// `route_size` is |S_q|; update() rejects routes of any other size.
    explicit SkylineSet(std::size_t route_size) : route_size_(route_size) {}

    /// Inserts `r` unless some member dominates or equals it; evicts members
    /// `r` dominates. Evicted routes are appended to `evicted` when given.
    /// Throws InvalidArgument if `r` is not complete.
    bool update(Route r, std::vector<Route>* evicted = nullptr);

    /// min{ l(R') : R' in S, s(R') <= min_semantic }, kInfinity if none.
    double threshold(double min_semantic) const noexcept;

    std::span<const Route> routes() const noexcept { return routes_; }
    std::size_t size() const noexcept { return routes_.size(); }
    bool empty() const noexcept { return routes_.empty(); }
    std::size_t route_size() const noexcept { return route_size_; }

private:
    std::size_t route_size_;
    std::vector<Route> routes_;
};

/// Sorted (length, semantic) pairs of a route set; the unit of comparison
/// between the engine and the oracle.
std::vector<ScorePair> score_multiset(std::span<const Route> routes);

}  // namespace skysr
