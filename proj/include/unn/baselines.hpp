#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "unn/dataset.hpp"
#include "unn/geometry.hpp"
#include "unn/pdf.hpp"
#include "unn/rng.hpp"

namespace unn {

// Reference classifiers: the outcome-sampling most-probable-class oracle,
// eKNN, certain KNN, the nearest-distance rule, and the naive single-metric
// nearest neighbor.

struct LabeledPoint {
    Point point;
    std::string label;
};

namespace detail {
// Indices of the k nearest points, ordered by (distance, index); distance
// ties break on the lower training index.
inline std::vector<std::size_t> nearest_indices(const Point& q, const std::vector<LabeledPoint>& train,
                                                int k) {
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> dist(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) dist[i] = distance(q, train[i].point);
    const auto cmp = [&](std::size_t a, std::size_t b) {
        return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
    };
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    std::partial_sort(order.begin(), order.begin() + kk, order.end(), cmp);
    order.resize(kk);
    return order;
}
} // namespace detail

// Certain k-NN majority vote. Majority ties resolve to the smaller label.
inline std::string certain_knn(const Point& q, const std::vector<LabeledPoint>& train, int k) {
    if (train.empty()) throw std::invalid_argument("certain_knn: empty training set");
    if (k < 1 || static_cast<std::size_t>(k) > train.size())
        throw std::invalid_argument("certain_knn: k out of range");
    std::map<std::string, int> votes;
    for (std::size_t i : detail::nearest_indices(q, train, k)) ++votes[train[i].label];
    std::string best;
    int best_count = -1;
    for (const auto& [label, count] : votes) {
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

// Nearest-distance rule: class c when its k-th nearest member is strictly
// closer than the k-th nearest member of c'; c' otherwise (ties included).
inline std::string nearest_distance_rule(const Point& q, const std::vector<LabeledPoint>& train,
                                         int k, const std::string& c, const std::string& c_other) {
    auto kth = [&](const std::string& label) {
        std::vector<double> dists;
        for (const auto& lp : train)
            if (lp.label == label) dists.push_back(distance(q, lp.point));
        if (static_cast<int>(dists.size()) < k)
            throw std::invalid_argument("nearest_distance_rule: class '" + label +
                                        "' has fewer than k points");
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        return dists[static_cast<std::size_t>(k) - 1];
    };
    return kth(c) < kth(c_other) ? c : c_other;
}

// Binary convenience overload: roles assigned lexicographically.
inline std::string nearest_distance_rule(const Point& q, const std::vector<LabeledPoint>& train, int k) {
    std::vector<std::string> labels;
    for (const auto& lp : train)
        if (std::find(labels.begin(), labels.end(), lp.label) == labels.end()) labels.push_back(lp.label);
    if (labels.size() != 2) throw std::invalid_argument("nearest_distance_rule: needs exactly 2 classes");
    std::sort(labels.begin(), labels.end());
    return nearest_distance_rule(q, train, k, labels[0], labels[1]);
}

struct OutcomeFrequencies {
    std::string label;                    // argmax frequency (smaller label on ties)
    std::map<std::string, double> freq;   // per-outcome label frequencies

    double agreement_with(const std::string& reference) const {
        const auto it = freq.find(reference);
        return it == freq.end() ? 0.0 : it->second;
    }
};

namespace detail {

// Shared core of the Random oracle and eKNN: draw M outcomes of the training
// set (and of the test object when it is uncertain), classify each outcome
// with the certain (2k-1)-NN vote, and tally label frequencies.
inline OutcomeFrequencies outcome_frequencies(const Point* q_certain, const UncertainObject* q_uncertain,
                                              const Dataset& data, int k, int m_outcomes,
                                              std::uint64_t seed) {
    if (m_outcomes < 1) throw std::invalid_argument("outcome sampling: M must be >= 1");
    if (k < 1) throw std::invalid_argument("outcome sampling: k must be >= 1");
    const int vote_k = 2 * k - 1;
    if (static_cast<std::size_t>(vote_k) > data.objects.size())
        throw std::invalid_argument("outcome sampling: 2k-1 exceeds the training set size");

    std::map<std::string, int> counts;
    std::vector<LabeledPoint> outcome(data.objects.size());
    for (int m = 0; m < m_outcomes; ++m) {
        auto eng = make_engine(derive_seed(seed, kSaltOutcome, static_cast<std::uint64_t>(m)));
        const Point q = q_certain ? *q_certain : sample(q_uncertain->pdf, eng);
        for (std::size_t i = 0; i < data.objects.size(); ++i)
            outcome[i] = LabeledPoint{sample(data.objects[i].pdf, eng), data.objects[i].label};
        ++counts[certain_knn(q, outcome, vote_k)];
    }

    OutcomeFrequencies out;
    int best = -1;
    for (const auto& [label, count] : counts) {
        out.freq[label] = static_cast<double>(count) / m_outcomes;
        if (count > best) {
            best = count;
            out.label = label;
        }
    }
    return out;
}

} // namespace detail

// Monte Carlo estimate of the most probable class: frequencies with which
// each class provides the k-th nearest neighbor over M sampled outcomes.
inline OutcomeFrequencies most_probable_class_oracle(const Point& q, const Dataset& data,
                                                     int k, int m_outcomes, std::uint64_t seed) {
    return detail::outcome_frequencies(&q, nullptr, data, k, m_outcomes, seed);
}

inline OutcomeFrequencies most_probable_class_oracle(const UncertainObject& q, const Dataset& data,
                                                     int k, int m_outcomes, std::uint64_t seed) {
    return detail::outcome_frequencies(nullptr, &q, data, k, m_outcomes, seed);
}

// eKNN: the same outcome sampling, reported as the majority label plus the
// per-outcome frequencies (agreement_with gives the mean per-outcome accuracy
// against a reference label).
inline OutcomeFrequencies eknn(const Point& q, const Dataset& data, int k, int m_outcomes,
                               std::uint64_t seed) {
    return detail::outcome_frequencies(&q, nullptr, data, k, m_outcomes, seed);
}

inline OutcomeFrequencies eknn(const UncertainObject& q, const Dataset& data, int k, int m_outcomes,
                               std::uint64_t seed) {
    return detail::outcome_frequencies(nullptr, &q, data, k, m_outcomes, seed);
}

enum class NaiveMetric {
    mean_distance,      // distance between expected values
    expected_distance,  // Monte Carlo mean of the distance over paired samples
};

// Naive uncertain NN: label of the single training object minimizing the
// chosen uncertain similarity metric. Index order breaks ties.
inline std::string naive_uncertain_nn(const Point& q, const Dataset& data, NaiveMetric metric,
                                      int n_samples, std::uint64_t seed) {
    if (metric == NaiveMetric::expected_distance && n_samples < 1)
        throw std::invalid_argument("naive_uncertain_nn: N must be >= 1 for expected distance");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < data.objects.size(); ++i) {
        double d;
        if (metric == NaiveMetric::mean_distance) {
            d = distance(q, mean_point(data.objects[i].pdf));
        } else {
            auto eng = make_engine(derive_seed(seed, kSaltNaive, i));
            double total = 0.0;
            for (int s = 0; s < n_samples; ++s) total += distance(q, sample(data.objects[i].pdf, eng));
            d = total / n_samples;
        }
        if (d < best) {
            best = d;
            best_index = i;
        }
    }
    return data.objects[best_index].label;
}

// Uncertain test object variant: means against means, or paired samples from
// both pdfs.
inline std::string naive_uncertain_nn(const UncertainObject& q, const Dataset& data, NaiveMetric metric,
                                      int n_samples, std::uint64_t seed) {
    if (metric == NaiveMetric::mean_distance)
        return naive_uncertain_nn(mean_point(q.pdf), data, metric, n_samples, seed);
    if (n_samples < 1)
        throw std::invalid_argument("naive_uncertain_nn: N must be >= 1 for expected distance");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < data.objects.size(); ++i) {
        auto eng = make_engine(derive_seed(seed, kSaltNaive, i));
        double total = 0.0;
        for (int s = 0; s < n_samples; ++s)
            total += distance(sample(q.pdf, eng), sample(data.objects[i].pdf, eng));
        const double d = total / n_samples;
        if (d < best) {
            best = d;
            best_index = i;
        }
    }
    return data.objects[best_index].label;
}

} // namespace unn
