#include "valproj/bipartite.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include <fmt/format.h>

namespace valproj {

std::string SnapshotFilter::label() const {
    std::string s = subject ? std::string(to_string(*subject)) : "all";
    if (exclude_sponsored) s += "+nosponsored";
    return s;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
}

}  // namespace

// Assembles a snapshot from a sparse list of (country id, treaty id) pairs.
class SnapshotBuilder {
public:
    static BipartiteSnapshot build(int year, SnapshotFilter filter,
                                   std::vector<std::pair<std::string, std::string>> incidences) {
        std::sort(incidences.begin(), incidences.end());
        incidences.erase(std::unique(incidences.begin(), incidences.end()), incidences.end());

        BipartiteSnapshot s;
        s.year_ = year;
        s.filter_ = filter;
        for (const auto& [c, t] : incidences) {
            if (s.countries_.empty() || s.countries_.back() != c) s.countries_.push_back(c);
            s.treaties_.push_back(t);
        }
        std::sort(s.treaties_.begin(), s.treaties_.end());
        s.treaties_.erase(std::unique(s.treaties_.begin(), s.treaties_.end()), s.treaties_.end());

        s.words_ = (s.treaties_.size() + 63) / 64;
        s.bits_.assign(s.countries_.size() * s.words_, 0);
        s.country_degree_.assign(s.countries_.size(), 0);
        s.treaty_degree_.assign(s.treaties_.size(), 0);
        std::size_t c = 0;
        for (const auto& [cid, tid] : incidences) {
            while (s.countries_[c] != cid) ++c;
            const auto t = static_cast<std::size_t>(
                std::lower_bound(s.treaties_.begin(), s.treaties_.end(), tid) - s.treaties_.begin());
            s.bits_[c * s.words_ + (t >> 6)] |= std::uint64_t{1} << (t & 63);
            ++s.country_degree_[c];
            ++s.treaty_degree_[t];
        }
        s.n_incidences_ = incidences.size();

        std::uint64_t h = kFnvOffset;
        fnv(h, &s.year_, sizeof s.year_);
        for (const auto& id : s.countries_) fnv(h, id.data(), id.size() + 1);
        for (const auto& id : s.treaties_) fnv(h, id.data(), id.size() + 1);
        fnv(h, s.bits_.data(), s.bits_.size() * sizeof(std::uint64_t));
        s.fingerprint_ = h;
        return s;
    }
};

BipartiteSnapshot BipartiteSnapshot::from_dense(int year, const std::vector<std::string>& countries,
                                                const std::vector<std::string>& treaties,
                                                const std::vector<std::vector<int>>& incidence,
                                                SnapshotFilter filter) {
    if (incidence.size() != countries.size()) throw DataError("incidence rows do not match country count");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t c = 0; c < countries.size(); ++c) {
        if (incidence[c].size() != treaties.size()) throw DataError("incidence columns do not match treaty count");
        for (std::size_t t = 0; t < treaties.size(); ++t)
            if (incidence[c][t]) pairs.emplace_back(countries[c], treaties[t]);
    }
    return SnapshotBuilder::build(year, filter, std::move(pairs));
}

std::size_t BipartiteSnapshot::common(std::size_t a, std::size_t b) const noexcept {
    const auto* ra = row(a);
    const auto* rb = row(b);
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_; ++w) n += static_cast<std::size_t>(std::popcount(ra[w] & rb[w]));
    return n;
}

BipartiteSnapshot snapshot(const Panel& panel, int year, const SnapshotFilter& filter) {
    if (!panel.years().contains(year))
        throw DataError(fmt::format("year {} outside panel range {}:{}", year, panel.years().first,
                                    panel.years().last));
    std::vector<bool> passes(panel.catalog().size());
    for (std::size_t t = 0; t < passes.size(); ++t) {
        bool ok = true;
        if (filter.exclude_sponsored && panel.catalog()[t].sponsored) ok = false;
        if (filter.subject && !(panel.treaty_categories(t) & category_bit(*filter.subject))) ok = false;
        passes[t] = ok;
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    const auto& ivs = panel.intervals();
    for (std::size_t i = 0; i < ivs.size(); ++i)
        if (passes[panel.interval_treaty(i)] && ivs[i].contains(year))
            pairs.emplace_back(ivs[i].country_id, ivs[i].treaty_id);
    return SnapshotBuilder::build(year, filter, std::move(pairs));
}

DegreeSummary degree_summary(const BipartiteSnapshot& snap) {
    if (snap.empty()) throw DataError("degree summary of an empty snapshot");
    DegreeSummary s;
    for (auto k : snap.country_degrees()) ++s.country_histogram[k];
    for (auto n : snap.treaty_degrees()) ++s.treaty_histogram[n];
    const double incidences = static_cast<double>(snap.n_incidences());
    s.mean_country_degree = incidences / static_cast<double>(snap.n_countries());
    s.mean_treaty_degree = incidences / static_cast<double>(snap.n_treaties());
    return s;
}

SortedBiadjacency biadjacency_sorted(const BipartiteSnapshot& snap) {
    if (snap.empty()) throw DataError("bi-adjacency of an empty snapshot");
    SortedBiadjacency out;
    out.treaty_order.resize(snap.n_treaties());
    out.country_order.resize(snap.n_countries());
    std::iota(out.treaty_order.begin(), out.treaty_order.end(), std::size_t{0});
    std::iota(out.country_order.begin(), out.country_order.end(), std::size_t{0});

    auto by_degree = [](const std::vector<std::size_t>& deg, const std::vector<std::string>& ids) {
        return [&deg, &ids](std::size_t a, std::size_t b) {
            if (deg[a] != deg[b]) return deg[a] > deg[b];
            return ids[a] < ids[b];
        };
    };
    std::sort(out.treaty_order.begin(), out.treaty_order.end(), by_degree(snap.treaty_degrees(), snap.treaties()));
    std::sort(out.country_order.begin(), out.country_order.end(),
              by_degree(snap.country_degrees(), snap.countries()));

    out.cells.resize(out.treaty_order.size() * out.country_order.size());
    for (std::size_t r = 0; r < out.treaty_order.size(); ++r)
        for (std::size_t c = 0; c < out.country_order.size(); ++c)
            out.cells[r * out.country_order.size() + c] = snap.at(out.country_order[c], out.treaty_order[r]) ? 1 : 0;
    return out;
}

}  // namespace valproj
