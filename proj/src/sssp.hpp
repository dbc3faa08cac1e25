#pragma once

#include <vector>

#include "valproj/graph.hpp"

namespace valproj::detail {

inline constexpr double kTieTolerance = 1e-12;

/// Single-source shortest paths with path counts and predecessor lists.
struct ShortestPathTree {
    std::vector<double> dist;
    std::vector<double> sigma;                      // number of shortest paths from the source
    std::vector<std::vector<std::size_t>> preds;
    std::vector<std::size_t> order;                 // settled nodes by non-decreasing distance
};

void check_positive_weights(const WeightedGraph& g);

/// Dijkstra on 1/w lengths when `weighted`, BFS otherwise. Reuses `tree`'s storage.
void single_source(const WeightedGraph& g, std::size_t source, bool weighted, bool track_paths,
                   ShortestPathTree& tree);

}  // namespace valproj::detail

#include "valproj/metrics.hpp"

namespace valproj::detail {

std::vector<double> closeness_of(const DistanceMatrix& d);

}  // namespace valproj::detail
