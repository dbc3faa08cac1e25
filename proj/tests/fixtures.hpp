#pragma once

#include <string>
#include <vector>

#include "valproj/bipartite.hpp"
#include "valproj/ingest.hpp"

namespace fixture {

inline valproj::Date jan(int year) { return {year, 1, 1}; }

inline valproj::TreatyRecord treaty(std::string id, int year, std::vector<std::string> subjects = {"Sea"},
                                    bool sponsored = false) {
    return {std::move(id), "", std::move(subjects), sponsored, jan(year), std::nullopt};
}

inline valproj::MembershipEvent event(std::string treaty, std::string country, valproj::EventKind kind, int year,
                                      unsigned month = 6) {
    return {std::move(treaty), std::move(country), kind, valproj::Date{year, month, 1}};
}

// Panel in which every (country, treaty) membership starts at `year` and never ends.
struct Membership {
    std::string country, treaty;
    int year;
    std::optional<int> end = std::nullopt;
};

inline valproj::Panel panel(std::vector<valproj::TreatyRecord> catalog, const std::vector<Membership>& members,
                            valproj::YearRange years) {
    std::vector<valproj::MembershipInterval> intervals;
    for (const auto& m : members) intervals.push_back({m.treaty, m.country, m.year, m.end});
    return valproj::build_panel(std::move(catalog), std::move(intervals), years, valproj::SubjectMap::defaults());
}

// Dense rows = countries "c0".., columns = treaties "t00"..
inline valproj::BipartiteSnapshot dense(const std::vector<std::vector<int>>& rows, int year = 2000) {
    std::vector<std::string> countries, treaties;
    for (std::size_t i = 0; i < rows.size(); ++i) countries.push_back("c" + std::to_string(i));
    for (std::size_t t = 0; t < (rows.empty() ? 0 : rows[0].size()); ++t)
        treaties.push_back((t < 10 ? "t0" : "t") + std::to_string(t));
    return valproj::BipartiteSnapshot::from_dense(year, countries, treaties, rows);
}

}  // namespace fixture
