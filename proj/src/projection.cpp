#include "valproj/projection.hpp"

#include <bit>

#include <spdlog/spdlog.h>

namespace valproj {

double newman_weight(const BipartiteSnapshot& snap, std::size_t a, std::size_t b) {
    if (a == b) throw DataError("Newman weight needs two distinct countries");
    const auto* ra = snap.row(a);
    const auto* rb = snap.row(b);
    double w = 0.0;
    for (std::size_t word = 0; word < snap.words_per_row(); ++word) {
        std::uint64_t both = ra[word] & rb[word];
        while (both) {
            const auto t = word * 64 + static_cast<std::size_t>(std::countr_zero(both));
            both &= both - 1;
            const auto n_t = snap.treaty_degrees()[t];
            if (n_t >= 2) w += 1.0 / static_cast<double>(n_t - 1);
        }
    }
    return w;
}

WeightedGraph CooperationNetwork::graph() const {
    std::vector<WeightedEdge> e;
    e.reserve(edges.size());
    for (const auto& x : edges) e.push_back({x.u, x.v, x.weight});
    return WeightedGraph(nodes.size(), e);
}

CooperationNetwork project(const BipartiteSnapshot& snap, const ValidatedEdgeSet& validated) {
    if (validated.snapshot_fingerprint != snap.fingerprint())
        throw DataError("validated edge set was computed on a different snapshot");
    CooperationNetwork net;
    net.year = snap.year();
    net.nodes = snap.countries();
    net.provenance = {snap.filter(), validated.alpha, snap.fingerprint()};
    std::size_t dropped = 0;
    for (const auto& t : validated.edges) {
        if (t.n_obs == 0) {
            ++dropped;
            continue;
        }
        net.edges.push_back({t.i, t.j, newman_weight(snap, t.i, t.j), t.p_value, t.n_obs});
    }
    if (dropped)
        spdlog::warn("year {}: dropped {} validated pairs with no co-signed treaty (threshold p = 1)", snap.year(),
                     dropped);
    return net;
}

}  // namespace valproj
