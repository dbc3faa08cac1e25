#include "valproj/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "sssp.hpp"
#include "valproj/error.hpp"

namespace valproj {

double density(const WeightedGraph& g) {
    const std::size_t n = g.n_nodes();
    if (n < 2) throw DataError("density needs at least two nodes");
    return static_cast<double>(g.n_edges()) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

Components components(const WeightedGraph& g) {
    const std::size_t n = g.n_nodes();
    constexpr auto kNone = static_cast<std::size_t>(-1);
    Components c;
    c.labels.assign(n, kNone);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (c.labels[s] != kNone) continue;
        std::size_t size = 0;
        c.labels[s] = c.count;
        stack.push_back(s);
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            ++size;
            for (const auto& a : g.neighbours(u))
                if (c.labels[a.to] == kNone) {
                    c.labels[a.to] = c.count;
                    stack.push_back(a.to);
                }
        }
        c.sizes.push_back(size);
        ++c.count;
    }
    std::sort(c.sizes.begin(), c.sizes.end(), std::greater<>());
    return c;
}

namespace {

std::optional<double> mean_reachable_distance(const DistanceMatrix& d) {
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            if (d.reachable(i, j)) {
                total += d.at(i, j);
                ++pairs;
            }
    if (!pairs) return std::nullopt;
    return total / static_cast<double>(pairs);
}

}  // namespace

double avg_shortest_path(const WeightedGraph& g, bool weighted, unsigned threads) {
    const auto mean = mean_reachable_distance(shortest_paths(g, weighted, threads));
    if (!mean) throw DataError("average shortest path: no reachable pair of distinct nodes");
    return *mean;
}

NetworkMetrics compute_metrics(const WeightedGraph& g, unsigned threads) {
    NetworkMetrics out;
    auto& nm = out.nodes;
    auto& gm = out.graph;
    const std::size_t n = g.n_nodes();

    nm.degree.resize(n);
    nm.strength.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        nm.degree[v] = g.degree(v);
        nm.strength[v] = g.strength(v);
    }
    nm.clustering_unweighted = local_clustering(g, ClusteringVariant::unweighted);
    nm.clustering_onnela = local_clustering(g, ClusteringVariant::onnela);
    nm.clustering_barrat = local_clustering(g, ClusteringVariant::barrat);
    nm.betweenness = betweenness(g, true, threads);
    const auto dist = shortest_paths(g, true, threads);
    nm.closeness = detail::closeness_of(dist);

    gm.n_nodes = n;
    gm.n_edges = g.n_edges();
    gm.n_active_nodes = static_cast<std::size_t>(
        std::count_if(nm.degree.begin(), nm.degree.end(), [](std::size_t k) { return k > 0; }));
    if (n > 0) {
        gm.average_degree = 2.0 * static_cast<double>(gm.n_edges) / static_cast<double>(n);
        gm.average_strength = std::accumulate(nm.strength.begin(), nm.strength.end(), 0.0) / static_cast<double>(n);
    }
    if (n >= 2) gm.density = density(g);
    const auto comps = components(g);
    gm.n_components = comps.count;
    if (n > 0) gm.largest_component_fraction = static_cast<double>(comps.sizes.front()) / static_cast<double>(n);
    gm.avg_shortest_path = mean_reachable_distance(dist);
    try {
        gm.global_clustering_weighted = global_clustering(g, true);
        gm.global_clustering_unweighted = global_clustering(g, false);
    } catch (const DataError&) {
        // no triplets: left undefined
    }
    return out;
}

NodeMetrics compute_node_metrics(const WeightedGraph& g, unsigned threads) {
    return compute_metrics(g, threads).nodes;
}

GraphMetrics compute_graph_metrics(const WeightedGraph& g, unsigned threads) {
    return compute_metrics(g, threads).graph;
}

}  // namespace valproj
