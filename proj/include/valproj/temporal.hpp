#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "valproj/bipartite.hpp"
#include "valproj/metrics.hpp"
#include "valproj/projection.hpp"
#include "valproj/validation.hpp"

namespace valproj {

enum class Measure : std::uint8_t { strength, betweenness, closeness };

inline constexpr Measure kAllMeasures[] = {Measure::strength, Measure::betweenness, Measure::closeness};

std::string_view to_string(Measure m);

/// Countries ordered by descending value; rank 1 is the highest, ties share
/// the average of the ranks they span.
struct Ranking {
    struct Entry {
        std::string country;
        double rank = 0.0;
        double value = 0.0;
    };
    int year = 0;
    Measure measure = Measure::strength;
    std::vector<Entry> entries;  // by rank, then country id
};

/// Ranks ids by values. Throws DataError when empty or lengths differ.
Ranking rank_values(int year, Measure measure, std::span<const std::string> ids, std::span<const double> values);

/// Ranks every node of the network on the weighted variant of `measure`.
Ranking rank(const CooperationNetwork& net, Measure measure, unsigned threads = 1);

struct KendallTau {
    double tau = 0.0;
    std::size_t n = 0;
    std::int64_t score = 0;  // concordant minus discordant pairs
    std::int64_t pairs = 0;  // n (n - 1) / 2
    std::int64_t ties_x = 0;
    std::int64_t ties_y = 0;
};

/// Tie-corrected tau-b via Knight's O(n log n) merge sort. Throws DataError
/// for fewer than two points or when either side is constant.
KendallTau kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// tau-b between two rankings over the countries present in both.
KendallTau kendall_tau(const Ranking& a, const Ranking& b);

struct Histogram {
    std::vector<double> lower;   // inclusive
    std::vector<double> upper;   // exclusive, except the last bin
    std::vector<std::size_t> counts;

    std::size_t mass() const;
};

/// One bin per integer from the smallest to the largest value.
Histogram integer_histogram(std::span<const std::size_t> values);

/// `bins` equal-width bins over [min, max]; a single bin when all values coincide.
Histogram equal_width_histogram(std::span<const double> values, std::size_t bins = 30);

struct Distribution {
    int year = 0;
    Histogram histogram;
    double mean = 0.0;
    double variance = 0.0;  // population variance
};

/// Degree distributions (integer bins) per year.
std::vector<Distribution> distributions(const std::map<int, std::vector<std::size_t>>& values_by_year);

/// Strength distributions (30 equal-width bins) per year.
std::vector<Distribution> distributions(const std::map<int, std::vector<double>>& values_by_year,
                                        std::size_t bins = 30);

struct MetricSeries {
    struct Point {
        int year = 0;
        std::optional<double> value;
        bool significant = false;
    };
    std::string metric;
    std::string filter;
    std::vector<Point> points;  // strictly increasing years
};

/// Names accepted by SeriesRequest::metrics.
const std::vector<std::string>& available_metrics();

struct SeriesRequest {
    YearRange years;
    SnapshotFilter filter;
    double alpha = 0.01;
    ConstrainedLayer layer = ConstrainedLayer::countries;
    std::vector<std::string> metrics;  // empty = all available
    unsigned threads = 1;
};

struct YearResult {
    int year = 0;
    bool significant = false;
    std::size_t bipartite_countries = 0;
    std::size_t bipartite_treaties = 0;
    double mean_country_degree = 0.0;
    double mean_treaty_degree = 0.0;
    ValidatedEdgeSet validated;
    CooperationNetwork network;
    NetworkMetrics metrics;
    std::map<Measure, Ranking> rankings;
};

struct TauPoint {
    int year = 0;  // compares year - 1 with year
    Measure measure = Measure::strength;
    std::optional<double> tau;
    std::size_t n_common = 0;
};

struct SeriesResult {
    SnapshotFilter filter;
    std::vector<YearResult> years;
    std::vector<MetricSeries> series;
    std::vector<TauPoint> tau;
};

/// snapshot -> validate -> project -> metrics for every year, years in
/// parallel. Years with no validated edge are flagged not significant.
/// Throws DataError for unknown metric names or years outside the panel.
SeriesResult run_series(const Panel& panel, const SeriesRequest& request);

}  // namespace valproj
