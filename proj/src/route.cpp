#include "skysr/route.hpp"

#include <algorithm>
#include <string>

#include "skysr/error.hpp"

namespace skysr {

bool Route::contains(VertexId v) const noexcept {
    return std::find(pois.begin(), pois.end(), v) != pois.end();
}

Route Route::extended(VertexId poi, double hop, double sim) const {
    Route r;
    r.pois.reserve(pois.size() + 1);
    r.pois = pois;
    r.pois.push_back(poi);
    r.sims.reserve(sims.size() + 1);
    r.sims = sims;
    r.sims.push_back(sim);
    r.length = length + hop;
    r.sim_product = sim_product * sim;
    return r;
}

Dominance dominance(ScorePair a, ScorePair b) noexcept {
    if (a.length == b.length && a.semantic == b.semantic) return Dominance::equivalent;
    if ((a.length < b.length && a.semantic <= b.semantic) || (a.semantic < b.semantic && a.length <= b.length)) {
        return Dominance::dominates;
    }
    if ((b.length < a.length && b.semantic <= a.semantic) || (b.semantic < a.semantic && b.length <= a.length)) {
        return Dominance::dominated;
    }
    return Dominance::incomparable;
}

bool SkylineSet::update(Route r, std::vector<Route>* evicted) {
    if (r.size() != route_size_) {
        throw InvalidArgument("skyline update with incomplete route of size " + std::to_string(r.size()) +
                              " (expected " + std::to_string(route_size_) + ")");
    }
    const ScorePair s = scores(r);
    for (const Route& m : routes_) {
        Dominance d = dominance(scores(m), s);
        if (d == Dominance::dominates || d == Dominance::equivalent) return false;
    }
    auto dominated = [&](const Route& m) { return dominance(s, scores(m)) == Dominance::dominates; };
    if (evicted) {
        for (const Route& m : routes_)
            if (dominated(m)) evicted->push_back(m);
    }
    std::erase_if(routes_, dominated);
    auto pos = std::lower_bound(routes_.begin(), routes_.end(), s.length,
                                [](const Route& m, double len) { return m.length < len; });
    routes_.insert(pos, std::move(r));
    return true;
}

double SkylineSet::threshold(double min_semantic) const noexcept {
    // Ascending length means descending score: the first qualifying member
    // is the shortest one.
    for (const Route& m : routes_)
        if (m.semantic() <= min_semantic) return m.length;
    return kInfinity;
}

std::vector<ScorePair> score_multiset(std::span<const Route> routes) {
    std::vector<ScorePair> out;
    out.reserve(routes.size());
    for (const Route& r : routes) out.push_back(scores(r));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace skysr
