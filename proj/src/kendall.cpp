#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "valproj/error.hpp"
#include "valproj/temporal.hpp"

namespace valproj {

namespace {

// Sum of t (t - 1) / 2 over runs of equal values in a sorted sequence.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& equal) {
    std::int64_t total = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && equal(i - 1, i)) {
            ++run;
        } else {
            total += static_cast<std::int64_t>(run * (run - 1) / 2);
            run = 1;
        }
    }
    return total;
}

// Stable merge sort on `v`, returning the number of strict inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            swaps += static_cast<std::int64_t>(mid - i);
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

}  // namespace

KendallTau kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("kendall tau: inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw DataError("kendall tau: needs at least two common observations");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
    });
    const std::int64_t ties_x = tied_pairs(n, [&](std::size_t a, std::size_t b) { return x[idx[a]] == x[idx[b]]; });
    const std::int64_t ties_xy = tied_pairs(
        n, [&](std::size_t a, std::size_t b) { return x[idx[a]] == x[idx[b]] && y[idx[a]] == y[idx[b]]; });

    std::vector<double> ys(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
    const std::int64_t swaps = merge_count(ys, buf, 0, n);
    const std::int64_t ties_y = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

    KendallTau out;
    out.n = n;
    out.pairs = static_cast<std::int64_t>(n * (n - 1) / 2);
    out.ties_x = ties_x;
    out.ties_y = ties_y;
    out.score = out.pairs - ties_x - ties_y + ties_xy - 2 * swaps;
    const std::int64_t dx = out.pairs - ties_x;
    const std::int64_t dy = out.pairs - ties_y;
    if (dx == 0 || dy == 0) throw DataError("kendall tau: one ranking is constant");
    out.tau = static_cast<double>(out.score) / std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
    return out;
}

KendallTau kendall_tau(const Ranking& a, const Ranking& b) {
    std::unordered_map<std::string_view, double> rank_b;
    for (const auto& e : b.entries) rank_b.emplace(e.country, e.rank);
    std::vector<std::pair<std::string_view, double>> common;
    for (const auto& e : a.entries)
        if (auto it = rank_b.find(e.country); it != rank_b.end()) common.emplace_back(e.country, e.rank);
    std::sort(common.begin(), common.end());
    std::vector<double> x, y;
    for (const auto& [c, r] : common) {
        x.push_back(r);
        y.push_back(rank_b.at(c));
    }
    return kendall_tau_b(x, y);
}

}  // namespace valproj
