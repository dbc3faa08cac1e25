#include <cmath>
#include <cstdint>

#include "valproj/error.hpp"
#include "valproj/metrics.hpp"

namespace valproj {

namespace {

// Calls f(v, a, b, w_va, w_vb, w_ab) once for every triangle through v with a < b.
struct NeighbourMarks {
    explicit NeighbourMarks(std::size_t n) : weight(n, 0.0), on(n, 0) {}
    std::vector<double> weight;
    std::vector<std::uint8_t> on;
};

template <typename F>
void for_each_triangle_at(const WeightedGraph& g, std::size_t v, NeighbourMarks& mark, F&& f) {
    for (const auto& a : g.neighbours(v)) {
        mark.weight[a.to] = a.weight;
        mark.on[a.to] = 1;
    }
    for (const auto& a : g.neighbours(v))
        for (const auto& b : g.neighbours(a.to))
            if (b.to > a.to && mark.on[b.to]) f(a.to, b.to, a.weight, mark.weight[b.to], b.weight);
    for (const auto& a : g.neighbours(v)) mark.on[a.to] = 0;
}

}  // namespace

std::vector<double> local_clustering(const WeightedGraph& g, ClusteringVariant variant) {
    const std::size_t n = g.n_nodes();
    std::vector<double> out(n, 0.0);
    NeighbourMarks mark(n);
    const double max_w = g.max_weight();
    if (variant != ClusteringVariant::unweighted)
        for (const auto& e : g.edges())
            if (!(e.weight > 0.0)) throw DataError("weighted clustering needs positive weights");

    for (std::size_t v = 0; v < n; ++v) {
        const auto k = g.degree(v);
        if (k < 2) continue;
        const double kk = static_cast<double>(k);
        double sum = 0.0;
        for_each_triangle_at(g, v, mark, [&](std::size_t, std::size_t, double w_va, double w_vb, double w_ab) {
            switch (variant) {
                case ClusteringVariant::unweighted:
                    sum += 1.0;
                    break;
                case ClusteringVariant::onnela:
                    sum += std::cbrt((w_va / max_w) * (w_vb / max_w) * (w_ab / max_w));
                    break;
                case ClusteringVariant::barrat:
                    // (j, h) and (h, j) each contribute (w_vj + w_vh) / 2
                    sum += w_va + w_vb;
                    break;
            }
        });
        switch (variant) {
            case ClusteringVariant::unweighted:
            case ClusteringVariant::onnela:
                out[v] = 2.0 * sum / (kk * (kk - 1.0));
                break;
            case ClusteringVariant::barrat:
                out[v] = sum / (g.strength(v) * (kk - 1.0));
                break;
        }
    }
    return out;
}

double global_clustering(const WeightedGraph& g, bool weighted) {
    const std::size_t n = g.n_nodes();
    NeighbourMarks mark(n);
    if (weighted)
        for (const auto& e : g.edges())
            if (!(e.weight > 0.0)) throw DataError("weighted clustering needs positive weights");
    double closed = 0.0;
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const auto k = g.degree(v);
        if (k < 2) continue;
        const double kk = static_cast<double>(k);
        // every leg of v sits in k - 1 triplets centred on v
        total += weighted ? (kk - 1.0) * g.strength(v) / 2.0 : kk * (kk - 1.0) / 2.0;
        for_each_triangle_at(g, v, mark, [&](std::size_t, std::size_t, double w_va, double w_vb, double) {
            closed += weighted ? (w_va + w_vb) / 2.0 : 1.0;
        });
    }
    if (total == 0.0) throw DataError("global clustering: the graph has no triplet");
    return closed / total;
}

}  // namespace valproj
