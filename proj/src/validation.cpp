#include "valproj/validation.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "valproj/parallel.hpp"
#include "valproj/poisson_binomial.hpp"

namespace valproj {

NullModel build_null_model(const BipartiteSnapshot& snap, ConstrainedLayer layer) {
    if (snap.empty()) throw DataError("null model of an empty snapshot");
    NullModel m;
    m.layer_ = layer;
    m.n_countries_ = snap.n_countries();
    m.n_treaties_ = snap.n_treaties();
    m.p_.resize(m.n_countries_ * m.n_treaties_);
    const double nt = static_cast<double>(m.n_treaties_);
    const double nc = static_cast<double>(m.n_countries_);
    for (std::size_t c = 0; c < m.n_countries_; ++c)
        for (std::size_t t = 0; t < m.n_treaties_; ++t)
            m.p_[c * m.n_treaties_ + t] = layer == ConstrainedLayer::countries
                                               ? static_cast<double>(snap.country_degrees()[c]) / nt
                                               : static_cast<double>(snap.treaty_degrees()[t]) / nc;
    return m;
}

std::uint32_t PairCounts::at(std::size_t i, std::size_t j) const {
    if (i == j) throw DataError("pair counts are defined for distinct countries");
    if (i > j) std::swap(i, j);
    return counts_[pair_index(n_, i, j)];
}

void PairCounts::set(std::size_t i, std::size_t j, std::uint32_t v) {
    if (i > j) std::swap(i, j);
    counts_[pair_index(n_, i, j)] = v;
}

PairCounts cooccurrence_counts(const BipartiteSnapshot& snap) {
    PairCounts out(snap.n_countries());
    for (std::size_t i = 0; i < snap.n_countries(); ++i)
        for (std::size_t j = i + 1; j < snap.n_countries(); ++j)
            out.set(i, j, static_cast<std::uint32_t>(snap.common(i, j)));
    return out;
}

std::size_t FdrDecision::kept() const { return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true)); }

FdrDecision fdr_filter(std::span<const double> p_values, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError(fmt::format("alpha {} must lie in (0, 1)", alpha));
    FdrDecision d;
    d.alpha = alpha;
    d.m = p_values.size();
    d.keep.assign(d.m, false);
    if (d.m == 0) return d;

    std::vector<double> sorted(p_values.begin(), p_values.end());
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(d.m);
    for (std::size_t i = d.m; i >= 1; --i) {
        if (sorted[i - 1] <= static_cast<double>(i) * alpha / m) {
            d.threshold_index = i;
            d.threshold_p = sorted[i - 1];
            break;
        }
    }
    if (d.threshold_p)
        for (std::size_t k = 0; k < d.m; ++k) d.keep[k] = p_values[k] <= *d.threshold_p;
    return d;
}

ValidatedEdgeSet validate(const BipartiteSnapshot& snap, const ValidationOptions& options) {
    if (snap.empty()) throw DataError("validation of an empty snapshot");
    const std::size_t n = snap.n_countries();
    const std::size_t nt = snap.n_treaties();

    ValidatedEdgeSet out;
    out.alpha = options.alpha;
    out.m = pair_count(n);
    out.countries = snap.countries();
    out.snapshot_fingerprint = snap.fingerprint();
    out.tests.resize(out.m);

    // Treaties-constrained: q_t = (n_t / N_C)^2 for every pair, so the
    // distribution depends only on n_obs and can be tabulated once.
    std::vector<double> treaty_q;
    std::vector<double> tail_by_count;
    if (options.layer == ConstrainedLayer::treaties) {
        const auto model = build_null_model(snap, ConstrainedLayer::treaties);
        treaty_q.resize(nt);
        for (std::size_t t = 0; t < nt; ++t) treaty_q[t] = model.probability(0, t) * model.probability(0, t);
        tail_by_count.assign(nt + 1, -1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto c = snap.common(i, j);
                if (tail_by_count[c] < 0.0) tail_by_count[c] = poisson_binomial_sf(treaty_q, c);
            }
    }

    const double n_t = static_cast<double>(nt);
    parallel_for(n, options.threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            PairTest t{i, j, snap.common(i, j), 1.0};
            if (t.n_obs > 0) {
                if (options.layer == ConstrainedLayer::countries) {
                    // all q_t equal (k_i / N_T)(k_j / N_T): Binomial(N_T, q)
                    const double q = (static_cast<double>(snap.country_degrees()[i]) / n_t) *
                                     (static_cast<double>(snap.country_degrees()[j]) / n_t);
                    t.p_value = binomial_sf(nt, q, t.n_obs);
                } else {
                    t.p_value = tail_by_count[t.n_obs];
                }
            }
            out.tests[pair_index(n, i, j)] = t;
        }
    });

    std::vector<double> p(out.m);
    for (std::size_t k = 0; k < out.m; ++k) p[k] = out.tests[k].p_value;
    const auto decision = fdr_filter(p, options.alpha);
    out.threshold_index = decision.threshold_index;
    out.threshold_p = decision.threshold_p;
    for (std::size_t k = 0; k < out.m; ++k)
        if (decision.keep[k]) out.edges.push_back(out.tests[k]);
    return out;
}

}  // namespace valproj
