#include "valproj/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "valproj/error.hpp"
#include "valproj/parallel.hpp"

namespace valproj {

std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::strength: return "strength";
        case Measure::betweenness: return "betweenness";
        case Measure::closeness: return "closeness";
    }
    return "?";
}

Ranking rank_values(int year, Measure measure, std::span<const std::string> ids, std::span<const double> values) {
    if (ids.size() != values.size()) throw DataError("ranking: ids and values differ in length");
    if (ids.empty()) throw DataError("ranking: empty network");
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] != values[b] ? values[a] > values[b] : ids[a] < ids[b];
    });
    Ranking r;
    r.year = year;
    r.measure = measure;
    r.entries.reserve(ids.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) r.entries.push_back({ids[order[k]], avg, values[order[k]]});
        i = j;
    }
    return r;
}

Ranking rank(const CooperationNetwork& net, Measure measure, unsigned threads) {
    if (net.nodes.empty()) throw DataError("ranking: empty network");
    const auto g = net.graph();
    std::vector<double> values;
    switch (measure) {
        case Measure::strength:
            values.resize(g.n_nodes());
            for (std::size_t v = 0; v < g.n_nodes(); ++v) values[v] = g.strength(v);
            break;
        case Measure::betweenness: values = betweenness(g, true, threads); break;
        case Measure::closeness: values = closeness(g, true, threads); break;
    }
    return rank_values(net.year, measure, net.nodes, values);
}

std::size_t Histogram::mass() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram integer_histogram(std::span<const std::size_t> values) {
    Histogram h;
    if (values.empty()) return h;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    for (std::size_t v = *lo; v <= *hi; ++v) {
        h.lower.push_back(static_cast<double>(v));
        h.upper.push_back(static_cast<double>(v + 1));
    }
    h.counts.assign(h.lower.size(), 0);
    for (auto v : values) ++h.counts[v - *lo];
    return h;
}

Histogram equal_width_histogram(std::span<const double> values, std::size_t bins) {
    Histogram h;
    if (values.empty()) return h;
    if (bins == 0) throw DataError("histogram needs at least one bin");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        h.lower = {lo};
        h.upper = {hi};
        h.counts = {values.size()};
        return h;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        h.lower.push_back(lo + width * static_cast<double>(b));
        h.upper.push_back(b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1));
    }
    h.counts.assign(bins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++h.counts[std::min(b, bins - 1)];
    }
    return h;
}

namespace {

template <typename T>
void moments(std::span<const T> values, double& mean, double& variance) {
    mean = variance = 0.0;
    if (values.empty()) return;
    for (auto v : values) mean += static_cast<double>(v);
    mean /= static_cast<double>(values.size());
    for (auto v : values) variance += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
    variance /= static_cast<double>(values.size());
}

}  // namespace

std::vector<Distribution> distributions(const std::map<int, std::vector<std::size_t>>& values_by_year) {
    std::vector<Distribution> out;
    for (const auto& [year, values] : values_by_year) {
        if (values.empty()) throw DataError("distribution of an empty value set");
        Distribution d{year, integer_histogram(values), 0.0, 0.0};
        moments<std::size_t>(values, d.mean, d.variance);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<Distribution> distributions(const std::map<int, std::vector<double>>& values_by_year, std::size_t bins) {
    std::vector<Distribution> out;
    for (const auto& [year, values] : values_by_year) {
        if (values.empty()) throw DataError("distribution of an empty value set");
        Distribution d{year, equal_width_histogram(values, bins), 0.0, 0.0};
        moments<double>(values, d.mean, d.variance);
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

using Extractor = std::optional<double> (*)(const YearResult&);

struct MetricDef {
    const char* name;
    Extractor get;
};

std::optional<double> count(std::size_t v) { return static_cast<double>(v); }

const std::vector<MetricDef>& metric_defs() {
    static const std::vector<MetricDef> defs = {
        {"n_countries_bipartite", [](const YearResult& y) { return count(y.bipartite_countries); }},
        {"n_treaties", [](const YearResult& y) { return count(y.bipartite_treaties); }},
        {"mean_country_degree", [](const YearResult& y) -> std::optional<double> { return y.mean_country_degree; }},
        {"mean_treaty_degree", [](const YearResult& y) -> std::optional<double> { return y.mean_treaty_degree; }},
        {"n_nodes", [](const YearResult& y) { return count(y.metrics.graph.n_nodes); }},
        {"n_active_nodes", [](const YearResult& y) { return count(y.metrics.graph.n_active_nodes); }},
        {"n_edges", [](const YearResult& y) { return count(y.metrics.graph.n_edges); }},
        {"average_degree", [](const YearResult& y) -> std::optional<double> { return y.metrics.graph.average_degree; }},
        {"average_strength",
         [](const YearResult& y) -> std::optional<double> { return y.metrics.graph.average_strength; }},
        {"density", [](const YearResult& y) { return y.metrics.graph.density; }},
        {"n_components", [](const YearResult& y) { return count(y.metrics.graph.n_components); }},
        {"largest_component_fraction",
         [](const YearResult& y) -> std::optional<double> { return y.metrics.graph.largest_component_fraction; }},
        {"avg_shortest_path", [](const YearResult& y) { return y.metrics.graph.avg_shortest_path; }},
        {"global_clustering_weighted", [](const YearResult& y) { return y.metrics.graph.global_clustering_weighted; }},
        {"global_clustering_unweighted",
         [](const YearResult& y) { return y.metrics.graph.global_clustering_unweighted; }},
        {"fdr_threshold_p", [](const YearResult& y) { return y.validated.threshold_p; }},
    };
    return defs;
}

YearResult run_year(const Panel& panel, int year, const SeriesRequest& req) {
    YearResult out;
    out.year = year;
    const auto snap = snapshot(panel, year, req.filter);
    out.network.year = year;
    out.network.provenance = {req.filter, req.alpha, snap.fingerprint()};
    if (!snap.empty()) {
        const auto ds = degree_summary(snap);
        out.bipartite_countries = snap.n_countries();
        out.bipartite_treaties = snap.n_treaties();
        out.mean_country_degree = ds.mean_country_degree;
        out.mean_treaty_degree = ds.mean_treaty_degree;
        out.validated = validate(snap, {req.alpha, req.layer, 1});
        out.network = project(snap, out.validated);
    }
    out.significant = !out.network.edges.empty();
    const auto g = out.network.graph();
    out.metrics = compute_metrics(g, 1);
    if (out.significant) {
        out.rankings[Measure::strength] =
            rank_values(year, Measure::strength, out.network.nodes, out.metrics.nodes.strength);
        out.rankings[Measure::betweenness] =
            rank_values(year, Measure::betweenness, out.network.nodes, out.metrics.nodes.betweenness);
        out.rankings[Measure::closeness] =
            rank_values(year, Measure::closeness, out.network.nodes, out.metrics.nodes.closeness);
    }
    return out;
}

}  // namespace

const std::vector<std::string>& available_metrics() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& d : metric_defs()) v.emplace_back(d.name);
        return v;
    }();
    return names;
}

SeriesResult run_series(const Panel& panel, const SeriesRequest& req) {
    if (req.years.size() == 0) throw DataError("series: empty year range");
    if (!panel.years().contains(req.years.first) || !panel.years().contains(req.years.last))
        throw DataError("series: years outside the panel range");
    if (!(req.alpha > 0.0 && req.alpha < 1.0)) throw DataError("series: alpha must lie in (0, 1)");

    std::vector<const MetricDef*> selected;
    if (req.metrics.empty()) {
        for (const auto& d : metric_defs()) selected.push_back(&d);
    } else {
        for (const auto& name : req.metrics) {
            auto it = std::find_if(metric_defs().begin(), metric_defs().end(),
                                   [&](const MetricDef& d) { return name == d.name; });
            if (it == metric_defs().end()) throw DataError("unknown metric '" + name + "'");
            selected.push_back(&*it);
        }
    }

    SeriesResult out;
    out.filter = req.filter;
    out.years.resize(req.years.size());
    parallel_for(req.years.size(), req.threads, [&](std::size_t i) {
        out.years[i] = run_year(panel, req.years.first + static_cast<int>(i), req);
    });

    const auto label = req.filter.label();
    for (const auto* def : selected) {
        MetricSeries s{def->name, label, {}};
        for (const auto& y : out.years) s.points.push_back({y.year, def->get(y), y.significant});
        out.series.push_back(std::move(s));
    }

    for (std::size_t i = 1; i < out.years.size(); ++i) {
        const auto& prev = out.years[i - 1];
        const auto& cur = out.years[i];
        for (auto m : kAllMeasures) {
            TauPoint p{cur.year, m, std::nullopt, 0};
            auto a = prev.rankings.find(m);
            auto b = cur.rankings.find(m);
            if (a != prev.rankings.end() && b != cur.rankings.end()) {
                try {
                    const auto kt = kendall_tau(a->second, b->second);
                    p.tau = kt.tau;
                    p.n_common = kt.n;
                } catch (const DataError&) {
                    // fewer than two common countries or a constant ranking
                }
            }
            out.tau.push_back(p);
        }
    }
    return out;
}

}  // namespace valproj
