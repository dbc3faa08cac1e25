#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "valproj/graph.hpp"

namespace valproj {

/// m / (n (n - 1) / 2). Throws DataError for fewer than two nodes.
double density(const WeightedGraph& g);

struct Components {
    std::size_t count = 0;
    std::vector<std::size_t> sizes;   // descending
    std::vector<std::size_t> labels;  // per node; component 0 holds node 0
};

Components components(const WeightedGraph& g);

class DistanceMatrix {
public:
    static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, kUnreachable) {}
    std::size_t size() const noexcept { return n_; }
    double at(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) noexcept { return d_[i * n_ + j]; }
    bool reachable(std::size_t i, std::size_t j) const noexcept { return at(i, j) != kUnreachable; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

/// All-pairs distances. Weighted: Dijkstra with edge length 1 / w (throws
/// DataError on a non-positive weight). Unweighted: hop counts.
DistanceMatrix shortest_paths(const WeightedGraph& g, bool weighted = true, unsigned threads = 1);

/// Mean distance over unordered reachable pairs. Throws DataError when no
/// pair is reachable.
double avg_shortest_path(const WeightedGraph& g, bool weighted = true, unsigned threads = 1);

/// Closed-triplet share. Weighted: each triplet valued by the arithmetic mean
/// of its two legs (the closing edge is ignored). Throws DataError when the
/// graph has no triplet.
double global_clustering(const WeightedGraph& g, bool weighted);

enum class ClusteringVariant : std::uint8_t { unweighted, onnela, barrat };

/// Nodes with degree < 2 get 0 in every variant. Onnela normalizes weights by
/// the largest weight in `g`.
std::vector<double> local_clustering(const WeightedGraph& g, ClusteringVariant variant);

/// Unnormalized betweenness over unordered pairs (Brandes). Alternative
/// weighted paths whose lengths agree to a relative 1e-12 count as ties.
std::vector<double> betweenness(const WeightedGraph& g, bool weighted = true, unsigned threads = 1);

/// r / sum of distances, r = number of nodes reachable from the node
/// (excluding itself); isolated nodes get 0.
std::vector<double> closeness(const WeightedGraph& g, bool weighted = true, unsigned threads = 1);

struct Correlation {
    double r = 0.0;
    double p_value = 1.0;  // two-sided t test, n - 2 degrees of freedom
    std::size_t n = 0;
};

/// Throws DataError for fewer than three points, mismatched lengths or zero variance.
Correlation pearson(std::span<const double> x, std::span<const double> y);

struct NodeMetrics {
    std::vector<std::size_t> degree;
    std::vector<double> strength;
    std::vector<double> clustering_unweighted;
    std::vector<double> clustering_onnela;
    std::vector<double> clustering_barrat;
    std::vector<double> betweenness;  // weighted
    std::vector<double> closeness;    // weighted
};

NodeMetrics compute_node_metrics(const WeightedGraph& g, unsigned threads = 1);

struct GraphMetrics {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    std::size_t n_active_nodes = 0;  // degree >= 1
    double average_degree = 0.0;
    double average_strength = 0.0;
    std::optional<double> density;
    std::size_t n_components = 0;
    double largest_component_fraction = 0.0;
    std::optional<double> avg_shortest_path;
    std::optional<double> global_clustering_weighted;
    std::optional<double> global_clustering_unweighted;
};

/// Undefined quantities (density with n < 2, paths with no reachable pair,
/// clustering with no triplet) are left empty.
GraphMetrics compute_graph_metrics(const WeightedGraph& g, unsigned threads = 1);

struct NetworkMetrics {
    NodeMetrics nodes;
    GraphMetrics graph;
};

/// Both batteries, sharing one all-pairs shortest path pass.
NetworkMetrics compute_metrics(const WeightedGraph& g, unsigned threads = 1);

}  // namespace valproj
