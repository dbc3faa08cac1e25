#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace valproj {

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 1.0;
};

/// Undirected simple graph with positive edge weights, adjacency sorted by
/// neighbour index.
class WeightedGraph {
public:
    struct Arc {
        std::size_t to;
        double weight;
    };

    WeightedGraph() = default;

    /// Throws DataError on self-loops, duplicate edges, out-of-range endpoints
    /// or non-finite weights.
    WeightedGraph(std::size_t n, std::span<const WeightedEdge> edges);

    std::size_t n_nodes() const noexcept { return adj_.size(); }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
    const std::vector<Arc>& neighbours(std::size_t v) const noexcept { return adj_[v]; }
    std::size_t degree(std::size_t v) const noexcept { return adj_[v].size(); }
    double strength(std::size_t v) const noexcept;
    std::optional<double> weight(std::size_t u, std::size_t v) const noexcept;
    bool adjacent(std::size_t u, std::size_t v) const noexcept { return weight(u, v).has_value(); }
    double max_weight() const noexcept;

private:
    std::vector<std::vector<Arc>> adj_;
    std::vector<WeightedEdge> edges_;
};

}  // namespace valproj
