#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "valproj/bipartite.hpp"
#include "valproj/ingest.hpp"
#include "valproj/metrics.hpp"
#include "valproj/projection.hpp"
#include "valproj/temporal.hpp"
#include "valproj/validation.hpp"

namespace valproj {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

/// source,row,original,reason
void write_rejects_csv(std::ostream& out, std::span<const Reject> rejects);

/// Dense 0/1 matrix: header of country ids, one row per treaty led by its id.
void write_biadjacency_csv(std::ostream& out, const BipartiteSnapshot& snap, const SortedBiadjacency& sorted);

/// Row and column permutations of a sorted bi-adjacency export.
nlohmann::ordered_json biadjacency_permutations(const BipartiteSnapshot& snap, const SortedBiadjacency& sorted);

/// country_i,country_j,n_obs,p_value,validated_flag for every tested pair.
void write_pair_tests_csv(std::ostream& out, const ValidatedEdgeSet& validated);

/// country_i,country_j,weight,p_value
void write_edge_list_csv(std::ostream& out, const CooperationNetwork& net);

/// GraphML with weight and p_value edge attributes.
void write_graphml(std::ostream& out, const CooperationNetwork& net);

void write_node_metrics_csv(std::ostream& out, const CooperationNetwork& net, const NodeMetrics& m);

nlohmann::ordered_json graph_metrics_json(const GraphMetrics& m);

/// year,metric,filter,value,significant_flag
void write_series_csv(std::ostream& out, std::span<const MetricSeries> series);

/// year,measure,country,rank,value
void write_rankings_csv(std::ostream& out, std::span<const YearResult> years);

/// year,measure,tau,n_common
void write_tau_csv(std::ostream& out, std::span<const TauPoint> tau);

/// year,kind,bin_lower,bin_upper,count
void write_distributions_csv(std::ostream& out, const std::string& kind, std::span<const Distribution> dists,
                             bool header = true);

}  // namespace valproj
