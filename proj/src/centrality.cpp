#include <algorithm>
#include <cmath>
#include <queue>

#include <fmt/format.h>

#include "sssp.hpp"
#include "valproj/error.hpp"
#include "valproj/metrics.hpp"
#include "valproj/parallel.hpp"

namespace valproj {

namespace detail {

void check_positive_weights(const WeightedGraph& g) {
    for (const auto& e : g.edges())
        if (!(e.weight > 0.0))
            throw DataError(fmt::format("edge ({}, {}) has non-positive weight {}", e.u, e.v, e.weight));
}

void single_source(const WeightedGraph& g, std::size_t source, bool weighted, bool track_paths,
                   ShortestPathTree& tree) {
    const std::size_t n = g.n_nodes();
    tree.dist.assign(n, DistanceMatrix::kUnreachable);
    tree.order.clear();
    if (track_paths) {
        tree.sigma.assign(n, 0.0);
        tree.preds.resize(n);
        for (auto& p : tree.preds) p.clear();
        tree.sigma[source] = 1.0;
    }
    tree.dist[source] = 0.0;

    if (!weighted) {
        std::queue<std::size_t> q;
        q.push(source);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            tree.order.push_back(u);
            for (const auto& a : g.neighbours(u)) {
                const double alt = tree.dist[u] + 1.0;
                if (tree.dist[a.to] == DistanceMatrix::kUnreachable) {
                    tree.dist[a.to] = alt;
                    q.push(a.to);
                }
                if (track_paths && tree.dist[a.to] == alt) {
                    tree.sigma[a.to] += tree.sigma[u];
                    tree.preds[a.to].push_back(u);
                }
            }
        }
        return;
    }

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::vector<bool> settled(n, false);
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (settled[u] || d != tree.dist[u]) continue;
        settled[u] = true;
        tree.order.push_back(u);
        for (const auto& a : g.neighbours(u)) {
            if (settled[a.to]) continue;
            const double alt = d + 1.0 / a.weight;
            double& cur = tree.dist[a.to];
            const bool tie = cur != DistanceMatrix::kUnreachable &&
                             std::abs(alt - cur) <= kTieTolerance * std::max(std::abs(alt), std::abs(cur));
            if (tie) {
                if (track_paths) {
                    tree.sigma[a.to] += tree.sigma[u];
                    tree.preds[a.to].push_back(u);
                }
            } else if (alt < cur) {
                cur = alt;
                heap.emplace(alt, a.to);
                if (track_paths) {
                    tree.sigma[a.to] = tree.sigma[u];
                    tree.preds[a.to].assign(1, u);
                }
            }
        }
    }
}

}  // namespace detail

std::vector<double> betweenness(const WeightedGraph& g, bool weighted, unsigned threads) {
    if (weighted) detail::check_positive_weights(g);
    const std::size_t n = g.n_nodes();
    // Per-source dependencies, reduced in source order so the result does not
    // depend on the thread count.
    std::vector<std::vector<double>> partial(n);
    parallel_for(n, threads, [&](std::size_t s) {
        detail::ShortestPathTree tree;
        detail::single_source(g, s, weighted, true, tree);
        // canonical order so equal-weight and hop-count runs accumulate identically
        std::stable_sort(tree.order.begin(), tree.order.end(), [&](std::size_t a, std::size_t b) {
            return tree.dist[a] != tree.dist[b] ? tree.dist[a] < tree.dist[b] : a < b;
        });
        std::vector<double> delta(n, 0.0);
        for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
            const auto w = *it;
            for (const auto v : tree.preds[w]) delta[v] += tree.sigma[v] / tree.sigma[w] * (1.0 + delta[w]);
        }
        delta[s] = 0.0;
        partial[s] = std::move(delta);
    });
    std::vector<double> cb(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t v = 0; v < n; ++v) cb[v] += partial[s][v];
    for (auto& x : cb) x /= 2.0;
    return cb;
}

namespace {

std::vector<double> closeness_from(const DistanceMatrix& d) {
    const std::size_t n = d.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t reachable = 0;
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !d.reachable(i, j)) continue;
            ++reachable;
            total += d.at(i, j);
        }
        if (reachable) out[i] = static_cast<double>(reachable) / total;
    }
    return out;
}

}  // namespace

std::vector<double> closeness(const WeightedGraph& g, bool weighted, unsigned threads) {
    return closeness_from(shortest_paths(g, weighted, threads));
}

DistanceMatrix shortest_paths(const WeightedGraph& g, bool weighted, unsigned threads) {
    if (weighted) detail::check_positive_weights(g);
    DistanceMatrix d(g.n_nodes());
    parallel_for(g.n_nodes(), threads, [&](std::size_t s) {
        detail::ShortestPathTree tree;
        detail::single_source(g, s, weighted, false, tree);
        for (std::size_t t = 0; t < g.n_nodes(); ++t) d.at(s, t) = tree.dist[t];
    });
    return d;
}

namespace detail {

std::vector<double> closeness_of(const DistanceMatrix& d) { return closeness_from(d); }

}  // namespace detail

}  // namespace valproj
