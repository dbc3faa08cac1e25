#include "valproj/graph.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "valproj/error.hpp"

namespace valproj {

WeightedGraph::WeightedGraph(std::size_t n, std::span<const WeightedEdge> edges) : adj_(n) {
    edges_.reserve(edges.size());
    for (auto e : edges) {
        if (e.u >= n || e.v >= n) throw DataError(fmt::format("edge ({}, {}) out of range for {} nodes", e.u, e.v, n));
        if (e.u == e.v) throw DataError(fmt::format("self-loop at node {}", e.u));
        if (!std::isfinite(e.weight)) throw DataError(fmt::format("non-finite weight on edge ({}, {})", e.u, e.v));
        if (e.u > e.v) std::swap(e.u, e.v);
        edges_.push_back(e);
        adj_[e.u].push_back({e.v, e.weight});
        adj_[e.v].push_back({e.u, e.weight});
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
        for (std::size_t i = 1; i < a.size(); ++i)
            if (a[i].to == a[i - 1].to) throw DataError(fmt::format("duplicate edge to node {}", a[i].to));
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
}

double WeightedGraph::strength(std::size_t v) const noexcept {
    double s = 0.0;
    for (const auto& a : adj_[v]) s += a.weight;
    return s;
}

std::optional<double> WeightedGraph::weight(std::size_t u, std::size_t v) const noexcept {
    const auto& a = adj_[u];
    auto it = std::lower_bound(a.begin(), a.end(), v, [](const Arc& x, std::size_t t) { return x.to < t; });
    if (it == a.end() || it->to != v) return std::nullopt;
    return it->weight;
}

double WeightedGraph::max_weight() const noexcept {
    double m = 0.0;
    for (const auto& e : edges_) m = std::max(m, e.weight);
    return m;
}

}  // namespace valproj
