#include "valproj/export.hpp"

#include <cmath>

#include <fmt/format.h>

#include "valproj/csv.hpp"

namespace valproj {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return fmt::format("{}", v);
}

void write_rejects_csv(std::ostream& out, std::span<const Reject> rejects) {
    csv::write_row(out, {"source", "row", "original", "reason"});
    for (const auto& r : rejects) csv::write_row(out, {r.source, std::to_string(r.row), r.raw, r.reason});
}

void write_biadjacency_csv(std::ostream& out, const BipartiteSnapshot& snap, const SortedBiadjacency& sorted) {
    std::vector<std::string> row{"treaty_id"};
    for (auto c : sorted.country_order) row.push_back(snap.countries()[c]);
    csv::write_row(out, row);
    for (std::size_t r = 0; r < sorted.treaty_order.size(); ++r) {
        out << csv::escape(snap.treaties()[sorted.treaty_order[r]]);
        for (std::size_t c = 0; c < sorted.country_order.size(); ++c) out << ',' << int(sorted.at(r, c));
        out << '\n';
    }
}

nlohmann::ordered_json biadjacency_permutations(const BipartiteSnapshot& snap, const SortedBiadjacency& sorted) {
    nlohmann::ordered_json j;
    j["year"] = snap.year();
    j["filter"] = snap.filter().label();
    auto ids = [](const auto& order, const auto& names) {
        std::vector<std::string> v;
        for (auto i : order) v.push_back(names[i]);
        return v;
    };
    j["rows"] = "treaties";
    j["columns"] = "countries";
    j["treaty_order"] = ids(sorted.treaty_order, snap.treaties());
    j["country_order"] = ids(sorted.country_order, snap.countries());
    j["treaty_permutation"] = sorted.treaty_order;
    j["country_permutation"] = sorted.country_order;
    return j;
}

void write_pair_tests_csv(std::ostream& out, const ValidatedEdgeSet& v) {
    csv::write_row(out, {"country_i", "country_j", "n_obs", "p_value", "validated_flag"});
    const bool any = v.threshold_p.has_value();
    for (const auto& t : v.tests)
        csv::write_row(out, {v.countries[t.i], v.countries[t.j], std::to_string(t.n_obs), format_number(t.p_value),
                             any && t.p_value <= *v.threshold_p ? "1" : "0"});
}

void write_edge_list_csv(std::ostream& out, const CooperationNetwork& net) {
    csv::write_row(out, {"country_i", "country_j", "weight", "p_value"});
    for (const auto& e : net.edges)
        csv::write_row(out, {net.nodes[e.u], net.nodes[e.v], format_number(e.weight), format_number(e.p_value)});
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_graphml(std::ostream& out, const CooperationNetwork& net) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
           "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
           "  <key id=\"p_value\" for=\"edge\" attr.name=\"p_value\" attr.type=\"double\"/>\n";
    out << "  <graph id=\"" << xml_escape(fmt::format("{}-{}", net.year, net.provenance.filter.label()))
        << "\" edgedefault=\"undirected\">\n";
    for (const auto& n : net.nodes) out << "    <node id=\"" << xml_escape(n) << "\"/>\n";
    for (const auto& e : net.edges) {
        out << "    <edge source=\"" << xml_escape(net.nodes[e.u]) << "\" target=\"" << xml_escape(net.nodes[e.v])
            << "\">\n"
            << "      <data key=\"weight\">" << format_number(e.weight) << "</data>\n"
            << "      <data key=\"p_value\">" << format_number(e.p_value) << "</data>\n"
            << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_node_metrics_csv(std::ostream& out, const CooperationNetwork& net, const NodeMetrics& m) {
    csv::write_row(out, {"country", "degree", "strength", "clustering_unweighted", "clustering_onnela",
                         "clustering_barrat", "betweenness", "closeness"});
    for (std::size_t v = 0; v < net.nodes.size(); ++v)
        csv::write_row(out, {net.nodes[v], std::to_string(m.degree[v]), format_number(m.strength[v]),
                             format_number(m.clustering_unweighted[v]), format_number(m.clustering_onnela[v]),
                             format_number(m.clustering_barrat[v]), format_number(m.betweenness[v]),
                             format_number(m.closeness[v])});
}

nlohmann::ordered_json graph_metrics_json(const GraphMetrics& m) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
    nlohmann::ordered_json j;
    j["n_nodes"] = m.n_nodes;
    j["n_edges"] = m.n_edges;
    j["n_active_nodes"] = m.n_active_nodes;
    j["average_degree"] = m.average_degree;
    j["average_strength"] = m.average_strength;
    j["density"] = opt(m.density);
    j["n_components"] = m.n_components;
    j["largest_component_fraction"] = m.largest_component_fraction;
    j["avg_shortest_path"] = opt(m.avg_shortest_path);
    j["global_clustering_weighted"] = opt(m.global_clustering_weighted);
    j["global_clustering_unweighted"] = opt(m.global_clustering_unweighted);
    return j;
}

void write_series_csv(std::ostream& out, std::span<const MetricSeries> series) {
    csv::write_row(out, {"year", "metric", "filter", "value", "significant_flag"});
    for (const auto& s : series)
        for (const auto& p : s.points)
            csv::write_row(out, {std::to_string(p.year), s.metric, s.filter, p.value ? format_number(*p.value) : "",
                                 p.significant ? "1" : "0"});
}

void write_rankings_csv(std::ostream& out, std::span<const YearResult> years) {
    csv::write_row(out, {"year", "measure", "country", "rank", "value"});
    for (const auto& y : years)
        for (const auto& [measure, ranking] : y.rankings)
            for (const auto& e : ranking.entries)
                csv::write_row(out, {std::to_string(y.year), std::string(to_string(measure)), e.country,
                                     format_number(e.rank), format_number(e.value)});
}

void write_tau_csv(std::ostream& out, std::span<const TauPoint> tau) {
    csv::write_row(out, {"year", "measure", "tau", "n_common"});
    for (const auto& p : tau)
        csv::write_row(out, {std::to_string(p.year), std::string(to_string(p.measure)),
                             p.tau ? format_number(*p.tau) : "", std::to_string(p.n_common)});
}

void write_distributions_csv(std::ostream& out, const std::string& kind, std::span<const Distribution> dists,
                             bool header) {
    if (header) csv::write_row(out, {"year", "kind", "bin_lower", "bin_upper", "count"});
    for (const auto& d : dists)
        for (std::size_t b = 0; b < d.histogram.counts.size(); ++b)
            csv::write_row(out, {std::to_string(d.year), kind, format_number(d.histogram.lower[b]),
                                 format_number(d.histogram.upper[b]), std::to_string(d.histogram.counts[b])});
}

}  // namespace valproj
