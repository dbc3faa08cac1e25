#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valproj/ingest.hpp"

namespace valproj {

/// Conjunctive snapshot filter.
struct SnapshotFilter {
    std::optional<SubjectCategory> subject;
    bool exclude_sponsored = false;

    /// "all", "air_atmosphere", "all+nosponsored", ...
    std::string label() const;
    bool operator==(const SnapshotFilter&) const = default;
};

/// Country x treaty incidence at the end of one year. Only countries and
/// treaties with at least one incidence are kept; both lists are sorted by id.
class BipartiteSnapshot {
public:
    /// Builds from a dense 0/1 matrix (rows = countries). Zero-degree rows and
    /// columns are dropped and ids sorted; `incidence[c][t]` is any non-zero.
    static BipartiteSnapshot from_dense(int year, const std::vector<std::string>& countries,
                                        const std::vector<std::string>& treaties,
                                        const std::vector<std::vector<int>>& incidence,
                                        SnapshotFilter filter = {});

    int year() const noexcept { return year_; }
    const SnapshotFilter& filter() const noexcept { return filter_; }
    const std::vector<std::string>& countries() const noexcept { return countries_; }
    const std::vector<std::string>& treaties() const noexcept { return treaties_; }
    std::size_t n_countries() const noexcept { return countries_.size(); }
    std::size_t n_treaties() const noexcept { return treaties_.size(); }
    std::size_t n_incidences() const noexcept { return n_incidences_; }
    bool empty() const noexcept { return countries_.empty(); }

    bool at(std::size_t country, std::size_t treaty) const noexcept {
        return (row(country)[treaty >> 6] >> (treaty & 63)) & 1u;
    }
    const std::uint64_t* row(std::size_t country) const noexcept { return bits_.data() + country * words_; }
    std::size_t words_per_row() const noexcept { return words_; }

    /// Treaties co-signed by two countries.
    std::size_t common(std::size_t a, std::size_t b) const noexcept;

    const std::vector<std::size_t>& country_degrees() const noexcept { return country_degree_; }
    const std::vector<std::size_t>& treaty_degrees() const noexcept { return treaty_degree_; }

    /// Hash of year, ids and incidence; used to check that derived objects
    /// come from the same snapshot.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    friend class SnapshotBuilder;
    BipartiteSnapshot() = default;

    int year_ = 0;
    SnapshotFilter filter_;
    std::vector<std::string> countries_;
    std::vector<std::string> treaties_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::size_t> country_degree_;
    std::vector<std::size_t> treaty_degree_;
    std::size_t n_incidences_ = 0;
    std::uint64_t fingerprint_ = 0;
};

/// Incidence of `panel` at the end of `year`, restricted to treaties passing
/// `filter`. Throws DataError when the year is outside the panel range.
BipartiteSnapshot snapshot(const Panel& panel, int year, const SnapshotFilter& filter = {});

struct DegreeSummary {
    double mean_country_degree = 0;
    double mean_treaty_degree = 0;
    std::map<std::size_t, std::size_t> country_histogram;  // degree -> count
    std::map<std::size_t, std::size_t> treaty_histogram;
};

DegreeSummary degree_summary(const BipartiteSnapshot& snap);

/// Treaty x country matrix with both axes sorted by descending degree, ties
/// by ascending id.
struct SortedBiadjacency {
    std::vector<std::size_t> treaty_order;   // snapshot treaty index per output row
    std::vector<std::size_t> country_order;  // snapshot country index per output column
    std::vector<std::uint8_t> cells;         // row-major, treaty_order.size() x country_order.size()

    std::uint8_t at(std::size_t r, std::size_t c) const { return cells[r * country_order.size() + c]; }
};

SortedBiadjacency biadjacency_sorted(const BipartiteSnapshot& snap);

}  // namespace valproj
