#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "valproj/bipartite.hpp"
#include "valproj/graph.hpp"
#include "valproj/validation.hpp"

namespace valproj {

/// Sum over co-signed treaties of 1 / (n_t - 1); treaties with a single
/// signatory cannot be co-signed and contribute nothing.
double newman_weight(const BipartiteSnapshot& snap, std::size_t a, std::size_t b);

struct NetworkEdge {
    std::size_t u = 0;  // node indices, u < v
    std::size_t v = 0;
    double weight = 0.0;
    double p_value = 1.0;
    std::size_t n_obs = 0;
};

struct NetworkProvenance {
    SnapshotFilter filter;
    double alpha = 0.01;
    std::uint64_t snapshot_fingerprint = 0;
};

/// Validated, Newman-weighted one-mode projection for one year.
struct CooperationNetwork {
    int year = 0;
    std::vector<std::string> nodes;
    std::vector<NetworkEdge> edges;
    NetworkProvenance provenance;

    WeightedGraph graph() const;
};

/// Keeps exactly the validated pairs, weighted by newman_weight. Every
/// snapshot country is a node. Throws DataError if `validated` was computed on
/// a different snapshot.
CooperationNetwork project(const BipartiteSnapshot& snap, const ValidatedEdgeSet& validated);

}  // namespace valproj
