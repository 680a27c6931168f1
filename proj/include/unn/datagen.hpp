#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "unn/baselines.hpp"
#include "unn/dataset.hpp"
#include "unn/geometry.hpp"
#include "unn/pdf.hpp"
#include "unn/rng.hpp"

namespace unn {

// ---------------------------------------------------------------------------
// Synthetic uncertainty injection and test-set generation.
// ---------------------------------------------------------------------------

// Per-dimension standard deviations of a certain dataset (population form).
inline std::vector<double> column_std_devs(const std::vector<LabeledPoint>& points) {
    if (points.empty()) throw std::invalid_argument("column_std_devs: empty dataset");
    const std::size_t d = points.front().point.size();
    std::vector<double> mean(d, 0.0), sq(d, 0.0);
    for (const auto& lp : points)
        for (std::size_t j = 0; j < d; ++j) mean[j] += lp.point[j];
    for (double& m : mean) m /= static_cast<double>(points.size());
    for (const auto& lp : points)
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = lp.point[j] - mean[j];
            sq[j] += dv * dv;
        }
    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) out[j] = std::sqrt(sq[j] / static_cast<double>(points.size()));
    return out;
}

struct SpreadConfig {
    double spread = 0.0;             // s
    std::vector<double> sigmas;      // per-dimension dataset std devs
    std::uint64_t seed = 0;
};

inline SpreadConfig make_spread_config(const std::vector<LabeledPoint>& points, double spread,
                                       std::uint64_t seed) {
    if (spread < 0.0) throw std::invalid_argument("spread must be >= 0");
    return SpreadConfig{spread, column_std_devs(points), seed};
}

// Turns each certain object into a per-dimension product pdf: draw a scale
// r in [0.01 s sigma_j, s sigma_j], then with equal probability a normal
// (sigma = r, truncated at 4r) or a uniform on [x - 4r, x + 4r]. Both
// choices have support half-width 4r, so supports grow monotonically in s
// under a shared seed. s = 0 leaves the objects as point masses.
inline Dataset inject_uncertainty(const std::vector<LabeledPoint>& certain, const SpreadConfig& cfg) {
    if (cfg.spread < 0.0) throw std::invalid_argument("inject_uncertainty: spread must be >= 0");
    const std::size_t d = certain.empty() ? 0 : certain.front().point.size();
    if (cfg.sigmas.size() != d) throw std::invalid_argument("inject_uncertainty: sigma/dim mismatch");

    std::vector<UncertainObject> objects;
    objects.reserve(certain.size());
    for (std::size_t i = 0; i < certain.size(); ++i) {
        const auto& lp = certain[i];
        if (cfg.spread == 0.0) {
            objects.push_back(make_object(PointMass{lp.point}, lp.label));
            continue;
        }
        auto eng = make_engine(derive_seed(cfg.seed, kSaltInject, i));
        std::uniform_real_distribution<double> unit(0.01, 1.0);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        DimProduct prod;
        prod.factors.reserve(d);
        for (std::size_t j = 0; j < d; ++j) {
            // r = s * sigma_j * u with u in [0.01, 1): the same u stream under
            // the same seed scales linearly with s.
            const double r = cfg.spread * cfg.sigmas[j] * unit(eng);
            const bool normal = coin(eng) < 0.5;
            if (normal) prod.factors.push_back(Normal1D{lp.point[j], r, 4.0});
            else prod.factors.push_back(Uniform1D{lp.point[j] - 4.0 * r, lp.point[j] + 4.0 * r});
        }
        objects.push_back(make_object(Pdf{std::move(prod)}, lp.label));
    }
    return make_dataset(std::move(objects));
}

// Gaussian-only variant: per-dimension normal with std drawn uniformly from
// [0, 2 s sigma_j], truncated at 4 std.
inline Dataset inject_gaussian_uncertainty(const std::vector<LabeledPoint>& certain, double spread,
                                           const std::vector<double>& sigmas, std::uint64_t seed) {
    if (spread < 0.0) throw std::invalid_argument("inject_gaussian_uncertainty: spread must be >= 0");
    const std::size_t d = certain.empty() ? 0 : certain.front().point.size();
    if (sigmas.size() != d) throw std::invalid_argument("inject_gaussian_uncertainty: sigma/dim mismatch");

    std::vector<UncertainObject> objects;
    objects.reserve(certain.size());
    for (std::size_t i = 0; i < certain.size(); ++i) {
        const auto& lp = certain[i];
        if (spread == 0.0) {
            objects.push_back(make_object(PointMass{lp.point}, lp.label));
            continue;
        }
        auto eng = make_engine(derive_seed(seed, kSaltInject, i));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        DimProduct prod;
        prod.factors.reserve(d);
        for (std::size_t j = 0; j < d; ++j)
            prod.factors.push_back(Normal1D{lp.point[j], 2.0 * spread * sigmas[j] * unit(eng), 4.0});
        objects.push_back(make_object(Pdf{std::move(prod)}, lp.label));
    }
    return make_dataset(std::move(objects));
}

// Random test queries: componentwise means of two distinct dataset points.
inline std::vector<Point> midpoint_queries(const std::vector<LabeledPoint>& certain, int count,
                                           RandomEngine& eng) {
    if (certain.size() < 2) throw std::invalid_argument("midpoint_queries: need at least 2 points");
    if (count < 0) throw std::invalid_argument("midpoint_queries: negative count");
    std::uniform_int_distribution<std::size_t> pick(0, certain.size() - 1);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        const std::size_t a = pick(eng);
        std::size_t b = pick(eng);
        while (b == a) b = pick(eng);
        Point q(certain[a].point.size());
        for (std::size_t j = 0; j < q.size(); ++j) q[j] = 0.5 * (certain[a].point[j] + certain[b].point[j]);
        out.push_back(std::move(q));
    }
    return out;
}

namespace detail {
// Mean distance from q to its k nearest certain points of one class.
inline double mean_knn_distance(const Point& q, const std::vector<LabeledPoint>& certain,
                                const std::string& label, int k) {
    std::vector<double> dists;
    for (const auto& lp : certain)
        if (lp.label == label) dists.push_back(distance(q, lp.point));
    if (static_cast<int>(dists.size()) < k) return std::numeric_limits<double>::infinity();
    std::partial_sort(dists.begin(), dists.begin() + k, dists.end());
    return std::accumulate(dists.begin(), dists.begin() + k, 0.0) / k;
}
} // namespace detail

// True when q sits near the decision border: the mean k-NN distances of its
// two nearest classes differ by at most ten percent.
inline bool is_border_query(const Point& q, const std::vector<LabeledPoint>& certain, int k) {
    std::map<std::string, double> by_class;
    for (const auto& lp : certain) by_class.emplace(lp.label, 0.0);
    double first = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (auto& [label, value] : by_class) {
        value = detail::mean_knn_distance(q, certain, label, k);
        if (value < first) {
            second = first;
            first = value;
        } else {
            second = std::min(second, value);
        }
    }
    if (!std::isfinite(second)) return false;
    const double hi = std::max(first, second);
    return hi == 0.0 || std::abs(first - second) / hi <= 0.1;
}

// Rejection-samples midpoint queries until `count` of them satisfy the
// border condition; gives up after max_attempts with a diagnostic.
inline std::vector<Point> border_queries(const std::vector<LabeledPoint>& certain, int k, int count,
                                         RandomEngine& eng, std::size_t max_attempts = 1000000) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    std::size_t attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (attempts++ >= max_attempts) {
            throw std::runtime_error("border_queries: gave up after " + std::to_string(max_attempts) +
                                     " attempts (" + std::to_string(out.size()) + "/" +
                                     std::to_string(count) + " found); is the border region reachable?");
        }
        Point q = midpoint_queries(certain, 1, eng).front();
        if (is_border_query(q, certain, k)) out.push_back(std::move(q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ten-fold cross validation
// ---------------------------------------------------------------------------

struct CvReport {
    std::vector<double> fold_accuracy;
    double mean = 0.0;
    double stddev = 0.0;
    bool stratified = true;
};

using CvClassifier = std::function<std::string(const UncertainObject&, const Dataset&)>;

// Stratified ten-fold split fixed by the seed. Classes too small to reach
// every fold trigger a plain shuffled split (with a warning on stderr).
inline CvReport ten_fold_cv(const Dataset& data, const CvClassifier& classify_fn,
                            std::uint64_t seed) {
    constexpr int kFolds = 10;
    if (data.objects.size() < kFolds)
        throw std::invalid_argument("ten_fold_cv: need at least 10 objects");

    CvReport report;
    for (const auto& label : data.labels) {
        if (class_indices(data, label).size() < kFolds) {
            report.stratified = false;
            std::cerr << "ten_fold_cv: class '" << label
                      << "' has fewer than 10 objects; falling back to a non-stratified split\n";
            break;
        }
    }

    std::vector<int> fold_of(data.objects.size());
    auto eng = make_engine(derive_seed(seed, kSaltFold));
    int cursor = 0;
    if (report.stratified) {
        for (const auto& label : data.labels) {
            auto idx = class_indices(data, label);
            std::shuffle(idx.begin(), idx.end(), eng);
            for (std::size_t i : idx) {
                fold_of[i] = cursor;
                cursor = (cursor + 1) % kFolds;
            }
        }
    } else {
        std::vector<std::size_t> idx(data.objects.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::shuffle(idx.begin(), idx.end(), eng);
        for (std::size_t i : idx) {
            fold_of[i] = cursor;
            cursor = (cursor + 1) % kFolds;
        }
    }

    for (int fold = 0; fold < kFolds; ++fold) {
        std::vector<UncertainObject> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < data.objects.size(); ++i) {
            if (fold_of[i] == fold) test.push_back(i);
            else train.push_back(data.objects[i]);
        }
        const Dataset train_set = make_dataset(std::move(train));
        int correct = 0;
        for (std::size_t i : test)
            if (classify_fn(data.objects[i], train_set) == data.objects[i].label) ++correct;
        report.fold_accuracy.push_back(test.empty() ? 1.0 : static_cast<double>(correct) / test.size());
    }

    report.mean = std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) / kFolds;
    double var = 0.0;
    for (double a : report.fold_accuracy) var += (a - report.mean) * (a - report.mean);
    report.stddev = std::sqrt(var / kFolds);
    return report;
}

} // namespace unn
