#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "unn/classifier.hpp"
#include "unn/dataset.hpp"
#include "unn/geometry.hpp"
#include "unn/rng.hpp"

namespace unn {

// ---------------------------------------------------------------------------
// Pivot-based pruning for the two candidate-set queries. By the reverse
// triangle inequality, delta_p(v, w) = |d(v, p) - d(p, w)| <= d(v, w), so
//   max_j delta_{p_j}(c(q), c(x)) + r(q) + r(x) <= maxdist(q, x)
//   max_j delta_{p_j}(c(q), c(x)) - r(q) - r(x) <= mindist(q, x)
// and both bounds can skip objects without touching their centers. Pruning
// is lossless: results must equal the linear scans exactly.
// ---------------------------------------------------------------------------

struct PivotTable {
    const Dataset* data = nullptr;
    std::vector<Point> pivots;
    std::vector<std::vector<double>> dists;  // [object][pivot] = d(c(x_i), p_j)
};

// Pivots are m distinct training-object centers chosen uniformly at random.
// m = 0 is allowed and degenerates every query to a linear scan.
inline PivotTable build_pivot_table(const Dataset& data, int m, std::uint64_t seed) {
    if (m < 0 || static_cast<std::size_t>(m) > data.objects.size())
        throw std::invalid_argument("build_pivot_table: pivot count out of range");
    PivotTable table;
    table.data = &data;

    std::vector<std::size_t> order(data.objects.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto eng = make_engine(derive_seed(seed, kSaltPivot));
    std::shuffle(order.begin(), order.end(), eng);
    for (int j = 0; j < m; ++j) table.pivots.push_back(data.objects[order[j]].support.center);

    table.dists.resize(data.objects.size(), std::vector<double>(static_cast<std::size_t>(m)));
    for (std::size_t i = 0; i < data.objects.size(); ++i)
        for (int j = 0; j < m; ++j)
            table.dists[i][j] = distance(data.objects[i].support.center, table.pivots[j]);
    return table;
}

namespace detail {
inline std::vector<double> query_pivot_dists(const SupportBall& q, const PivotTable& table) {
    std::vector<double> qp(table.pivots.size());
    for (std::size_t j = 0; j < table.pivots.size(); ++j) qp[j] = distance(q.center, table.pivots[j]);
    return qp;
}

inline double center_lower_bound(const std::vector<double>& qp, const std::vector<double>& row) {
    double best = 0.0;
    for (std::size_t j = 0; j < qp.size(); ++j) best = std::max(best, std::abs(qp[j] - row[j]));
    return best;
}
} // namespace detail

struct KnnRadiusResult {
    double radius = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> witnesses;  // the k objects attaining it, by (maxdist, index)
    std::size_t pruned = 0;              // objects skipped without a center-distance evaluation
};

// Nearest-neighbor-style query on maxdist: the k-th smallest maxdist(q, x)
// over objects of the class (or of every other class when match is false).
inline KnnRadiusResult knn_maxdist_query(const SupportBall& q, const PivotTable& table,
                                         const std::string& label, int k, bool match = true) {
    if (k < 1) throw std::invalid_argument("knn_maxdist_query: k must be >= 1");
    const Dataset& data = *table.data;
    const auto qp = detail::query_pivot_dists(q, table);

    using Entry = std::pair<double, std::size_t>;  // (maxdist, index)
    std::priority_queue<Entry> heap;               // max-heap on maxdist
    KnnRadiusResult result;
    for (std::size_t i = 0; i < data.objects.size(); ++i) {
        const auto& obj = data.objects[i];
        if ((obj.label == label) != match) continue;
        const double slack = q.radius + obj.support.radius;
        if (static_cast<int>(heap.size()) == k &&
            detail::center_lower_bound(qp, table.dists[i]) + slack >= heap.top().first) {
            ++result.pruned;
            continue;
        }
        const double d = maxdist(q, obj.support);
        if (static_cast<int>(heap.size()) < k) {
            heap.emplace(d, i);
        } else if (d < heap.top().first) {
            heap.pop();
            heap.emplace(d, i);
        }
    }
    if (static_cast<int>(heap.size()) < k) return result;  // +inf sentinel, class too small

    std::vector<Entry> entries;
    while (!heap.empty()) {
        entries.push_back(heap.top());
        heap.pop();
    }
    std::sort(entries.begin(), entries.end());
    result.radius = entries.back().first;
    for (const auto& [d, i] : entries) result.witnesses.push_back(i);
    return result;
}

struct RangeResult {
    std::vector<std::size_t> indices;  // ascending
    std::size_t pruned = 0;
};

// Range query on mindist: every object with mindist(q, x) <= r_max.
inline RangeResult range_mindist_query(const SupportBall& q, const PivotTable& table, double r_max) {
    if (r_max < 0.0) throw std::invalid_argument("range_mindist_query: negative radius");
    const Dataset& data = *table.data;
    const auto qp = detail::query_pivot_dists(q, table);

    RangeResult result;
    for (std::size_t i = 0; i < data.objects.size(); ++i) {
        const auto& obj = data.objects[i];
        const double slack = q.radius + obj.support.radius;
        if (detail::center_lower_bound(qp, table.dists[i]) - slack > r_max) {
            ++result.pruned;
            continue;
        }
        if (mindist(q, obj.support) <= r_max) result.indices.push_back(i);
    }
    return result;
}

// Adapter plugging the pivot table into the classifier as its candidate-set
// provider.
class PivotBackend final : public SearchBackend {
public:
    explicit PivotBackend(const PivotTable& table) : table_(&table) {}

    double kth_maxdist(const SupportBall& q, const Dataset& data, const std::string& label,
                       bool match, int k) const override {
        require_same_dataset(data);
        return knn_maxdist_query(q, *table_, label, k, match).radius;
    }

    std::vector<std::size_t> range_mindist(const SupportBall& q, const Dataset& data,
                                           double r) const override {
        require_same_dataset(data);
        return range_mindist_query(q, *table_, r).indices;
    }

private:
    void require_same_dataset(const Dataset& data) const {
        if (&data != table_->data)
            throw std::invalid_argument("pivot backend: table was built for a different dataset");
    }

    const PivotTable* table_;
};

} // namespace unn
