#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valproj/bipartite.hpp"

namespace valproj {

enum class ConstrainedLayer : std::uint8_t { countries, treaties };

/// Bipartite partial configuration model: link probabilities factorize over
/// the constrained layer. Countries-constrained: p_ct = k_c / N_T, so every
/// country's expected degree equals its observed degree.
class NullModel {
public:
    ConstrainedLayer layer() const noexcept { return layer_; }
    std::size_t n_countries() const noexcept { return n_countries_; }
    std::size_t n_treaties() const noexcept { return n_treaties_; }
    double probability(std::size_t country, std::size_t treaty) const noexcept {
        return p_[country * n_treaties_ + treaty];
    }

private:
    friend NullModel build_null_model(const BipartiteSnapshot&, ConstrainedLayer);
    ConstrainedLayer layer_ = ConstrainedLayer::countries;
    std::size_t n_countries_ = 0;
    std::size_t n_treaties_ = 0;
    std::vector<double> p_;
};

NullModel build_null_model(const BipartiteSnapshot& snap, ConstrainedLayer layer = ConstrainedLayer::countries);

/// Number of unordered country pairs, N_C (N_C - 1) / 2.
constexpr std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Position of pair (i, j), i < j, in row-major upper-triangular order.
constexpr std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Co-signature counts for every unordered country pair.
class PairCounts {
public:
    explicit PairCounts(std::size_t n) : n_(n), counts_(pair_count(n), 0) {}

    std::size_t size() const noexcept { return n_; }
    std::uint32_t at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, std::uint32_t v);
    const std::vector<std::uint32_t>& flat() const noexcept { return counts_; }

private:
    std::size_t n_;
    std::vector<std::uint32_t> counts_;
};

PairCounts cooccurrence_counts(const BipartiteSnapshot& snap);

struct PairTest {
    std::size_t i = 0;  // snapshot country indices, i < j
    std::size_t j = 0;
    std::size_t n_obs = 0;
    double p_value = 1.0;
    bool operator==(const PairTest&) const = default;
};

/// Outcome of the false discovery rate step over M p-values.
struct FdrDecision {
    double alpha = 0.01;
    std::size_t m = 0;
    std::size_t threshold_index = 0;     // 1-based; 0 when nothing is significant
    std::optional<double> threshold_p;   // p-value at threshold_index
    std::vector<bool> keep;              // per input position

    std::size_t kept() const;
};

/// Sorts the p-values, finds the largest i with p_(i) <= i * alpha / M and
/// keeps every p <= p_(i), ties included. Throws DataError unless alpha is in (0, 1).
FdrDecision fdr_filter(std::span<const double> p_values, double alpha);

struct ValidatedEdgeSet {
    double alpha = 0.01;
    std::size_t m = 0;
    std::size_t threshold_index = 0;
    std::optional<double> threshold_p;
    std::vector<PairTest> tests;   // all M pairs, pair_index order
    std::vector<PairTest> edges;   // validated pairs, pair_index order
    std::vector<std::string> countries;
    std::uint64_t snapshot_fingerprint = 0;

    bool significant() const noexcept { return !edges.empty(); }
};

struct ValidationOptions {
    double alpha = 0.01;
    ConstrainedLayer layer = ConstrainedLayer::countries;
    unsigned threads = 1;
};

/// Co-signature counts, null-model p-values (one-tailed, P(X >= n_obs)), FDR.
ValidatedEdgeSet validate(const BipartiteSnapshot& snap, const ValidationOptions& options = {});

}  // namespace valproj
