#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "unn/class_distance.hpp"
#include "unn/dataset.hpp"
#include "unn/distance_cdf.hpp"
#include "unn/geometry.hpp"
#include "unn/pdf.hpp"
#include "unn/rng.hpp"

namespace unn {

// ---------------------------------------------------------------------------
// Uncertain nearest neighbor classification: assigns a test object to the
// class most likely to provide its k-th nearest neighbor across outcomes of
// the uncertain training set.
// ---------------------------------------------------------------------------

struct UnnParams {
    int k = 1;
    int histogram_slots = 100;       // h
    int mc_samples = 0;              // N; 0 resolves to 100 * 2^d
    std::uint64_t seed = 0;
    std::uint64_t query_index = 0;   // identity of the query within a batch (keys sample streams)
    bool force_monte_carlo = false;  // bypass the exact route even when all candidates are discrete

    int resolved_samples(std::size_t d) const {
        if (mc_samples > 0) return mc_samples;
        double n = 100.0 * std::pow(2.0, static_cast<double>(d));
        return static_cast<int>(std::min(n, 1e9));
    }

    void validate() const {
        if (k < 1) throw std::invalid_argument("params: k must be >= 1");
        if (histogram_slots < 2) throw std::invalid_argument("params: h must be >= 2");
        if (mc_samples < 0) throw std::invalid_argument("params: N must be >= 1 (or 0 for auto)");
    }
};

// Pruned candidate set T^q: the objects that can contribute to the nearest
// neighbor class probability, with the integration bounds [r_min, r_max].
struct CandidateSet {
    double r_min = 0.0;
    double r_max = 0.0;
    std::vector<std::size_t> positive;  // T_c^q, indices into the dataset
    std::vector<std::size_t> negative;  // T_c'^q
    std::size_t examined = 0;           // n_q = |T^q|
};

struct ClassificationResult {
    std::string label;
    std::map<std::string, double> class_probs;  // nearest-neighbor-class probability per label
    std::size_t candidates_examined = 0;        // n_q (max over one-against-all rounds)
    bool tie = false;                           // an exact probability tie was broken lexicographically
};

// ---------------------------------------------------------------------------
// Candidate-set providers. The linear scan is the reference; accelerated
// backends (see pivot_index.hpp) must return identical values and sets.
// ---------------------------------------------------------------------------

class SearchBackend {
public:
    virtual ~SearchBackend() = default;

    // k-th smallest maxdist(q, x) over objects whose label matches (match) or
    // differs from (!match) the given one; +infinity when fewer than k exist.
    virtual double kth_maxdist(const SupportBall& q, const Dataset& data,
                               const std::string& label, bool match, int k) const = 0;

    // Indices of all objects with mindist(q, x) <= r, ascending.
    virtual std::vector<std::size_t> range_mindist(const SupportBall& q, const Dataset& data,
                                                   double r) const = 0;
};

namespace detail {
inline double kth_smallest(std::vector<double>& values, int k) {
    if (static_cast<int>(values.size()) < k) return std::numeric_limits<double>::infinity();
    std::nth_element(values.begin(), values.begin() + (k - 1), values.end());
    return values[static_cast<std::size_t>(k) - 1];
}
} // namespace detail

class LinearScanBackend final : public SearchBackend {
public:
    double kth_maxdist(const SupportBall& q, const Dataset& data,
                       const std::string& label, bool match, int k) const override {
        std::vector<double> values;
        for (const auto& obj : data.objects)
            if ((obj.label == label) == match) values.push_back(maxdist(q, obj.support));
        return detail::kth_smallest(values, k);
    }

    std::vector<std::size_t> range_mindist(const SupportBall& q, const Dataset& data,
                                           double r) const override {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < data.objects.size(); ++i)
            if (mindist(q, data.objects[i].support) <= r) out.push_back(i);
        return out;
    }
};

inline const SearchBackend& default_backend() {
    static const LinearScanBackend backend;
    return backend;
}

// Smallest radius enclosing the supports of k objects of the class: the k-th
// smallest maxdist(q, x). +infinity when the class has fewer than k objects.
inline double radius_for_class(const SupportBall& q, const Dataset& data,
                               const std::string& label, int k, bool match = true) {
    if (k < 1) throw std::invalid_argument("radius_for_class: k must be >= 1");
    return LinearScanBackend{}.kth_maxdist(q, data, label, match, k);
}

inline double radius_for_class(const Point& q, const Dataset& data,
                               const std::string& label, int k) {
    return radius_for_class(point_ball(q), data, label, k);
}

// Builds T^q for the pair (c, c'), where an empty c_other means "every other
// class" (one-against-all). r_max = min of the two class radii; candidates
// are the objects with mindist(q, x) <= r_max; r_min is the smallest mindist
// over the training set (attained inside T^q, so no second scan is needed).
inline CandidateSet build_candidate_set(const SupportBall& q, const Dataset& data,
                                        const std::string& c, const std::string& c_other,
                                        int k, const SearchBackend& backend = default_backend()) {
    if (data.objects.empty()) throw std::invalid_argument("build_candidate_set: empty dataset");
    const double radius_c = backend.kth_maxdist(q, data, c, true, k);
    const double radius_other = c_other.empty()
                                    ? backend.kth_maxdist(q, data, c, false, k)
                                    : backend.kth_maxdist(q, data, c_other, true, k);
    if (std::isinf(radius_c) && std::isinf(radius_other))
        throw std::invalid_argument("build_candidate_set: both classes have fewer than k objects");

    CandidateSet cs;
    cs.r_max = std::min(radius_c, radius_other);
    const auto indices = backend.range_mindist(q, data, cs.r_max);
    cs.examined = indices.size();
    cs.r_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : indices) {
        const auto& obj = data.objects[i];
        cs.r_min = std::min(cs.r_min, mindist(q, obj.support));
        if (obj.label == c) cs.positive.push_back(i);
        else if (c_other.empty() || obj.label == c_other) cs.negative.push_back(i);
    }
    return cs;
}

namespace detail {

// Eq.19-style telescoping sum with trapezoid weights over cumulative class
// distance histograms indexed 0..h (index 0 anchored at 0). The trapezoid
// average keeps the complementary sums of the two classes adding to 1.
inline double stieltjes_sum(const std::vector<double>& f_c, const std::vector<double>& f_other) {
    double total = 0.0;
    for (std::size_t l = 1; l < f_c.size(); ++l)
        total += (f_c[l] - f_c[l - 1]) * (1.0 - 0.5 * (f_other[l] + f_other[l - 1]));
    return std::clamp(total, 0.0, 1.0);
}

// Exact route for all-discrete candidate sets: Pr(D_q(c) < D_q(c')) computed
// at the atom-distance breakpoints inside [r_min, r_max], with strict
// inequality at shared breakpoints. No sampling, no grid error.
inline double exact_pair_probability(const Point& q, const Dataset& data,
                                     const CandidateSet& cs, int k) {
    // No atom can sit below r_min (every atom distance is at least its own
    // object's mindist), so only the r_max cut is applied; this also dodges
    // roundoff at the closed lower boundary.
    std::vector<double> radii;
    auto collect = [&](const std::vector<std::size_t>& idx) {
        for (std::size_t i : idx) {
            const Pdf& pdf = data.objects[i].pdf;
            if (const auto* p = std::get_if<PointMass>(&pdf)) {
                const double d = distance(q, p->at);
                if (d <= cs.r_max) radii.push_back(d);
            } else {
                for (const auto& a : std::get<DiscreteMixture>(pdf).atoms) {
                    const double d = distance(q, a.at);
                    if (d <= cs.r_max) radii.push_back(d);
                }
            }
        }
    };
    collect(cs.positive);
    collect(cs.negative);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    std::vector<double> p_c(cs.positive.size()), p_other(cs.negative.size());
    double total = 0.0;
    double f_c_prev = 0.0;
    for (double r : radii) {
        for (std::size_t j = 0; j < cs.positive.size(); ++j)
            p_c[j] = exact_object_cdf(q, data.objects[cs.positive[j]], r);
        for (std::size_t j = 0; j < cs.negative.size(); ++j)
            p_other[j] = exact_object_cdf(q, data.objects[cs.negative[j]], r);
        const double f_c = class_cdf_at_radius(p_c, k);
        const double f_other = class_cdf_at_radius(p_other, k);
        total += (f_c - f_c_prev) * (1.0 - f_other);
        f_c_prev = f_c;
    }
    return std::clamp(total, 0.0, 1.0);
}

// Monte Carlo route: one h-slot distance histogram per candidate (a single
// sampling pass each), per-slot dynamic programs, trapezoid sum.
inline double mc_pair_probability(const Point& q, const Dataset& data,
                                  const CandidateSet& cs, const UnnParams& params) {
    const RadiusGrid grid(cs.r_min, cs.r_max, params.histogram_slots);
    const int n_samples = params.resolved_samples(data.dim);

    auto histograms = [&](const std::vector<std::size_t>& idx) {
        std::vector<DistanceCdf> out;
        out.reserve(idx.size());
        for (std::size_t i : idx) {
            auto eng = make_engine(derive_seed(params.seed, kSaltObjectCdf, params.query_index, i));
            out.push_back(estimate_object_cdf(q, data.objects[i], grid, n_samples, eng));
        }
        return out;
    };
    const auto h_c = histograms(cs.positive);
    const auto h_other = histograms(cs.negative);

    const std::size_t h = static_cast<std::size_t>(params.histogram_slots);
    std::vector<double> f_c(h + 1, 0.0), f_other(h + 1, 0.0);
    std::vector<double> p;
    for (std::size_t l = 1; l <= h; ++l) {
        p.clear();
        for (const auto& hist : h_c) p.push_back(hist.values[l - 1]);
        f_c[l] = class_cdf_at_radius(p, params.k);
        p.clear();
        for (const auto& hist : h_other) p.push_back(hist.values[l - 1]);
        f_other[l] = class_cdf_at_radius(p, params.k);
    }
    return stieltjes_sum(f_c, f_other);
}

// Empty integration interval (r_min == r_max, e.g. duplicated point masses):
// the class that reaches its radius with k whole supports wins surely.
inline double degenerate_pair_probability(const Point& q, const Dataset& data,
                                          const CandidateSet& cs, int k) {
    const auto qball = point_ball(q);
    auto attains = [&](const std::vector<std::size_t>& idx) {
        int count = 0;
        for (std::size_t i : idx)
            if (maxdist(qball, data.objects[i].support) <= cs.r_max) ++count;
        return count >= k;
    };
    const bool c_attains = attains(cs.positive);
    const bool other_attains = attains(cs.negative);
    if (c_attains && other_attains) return 0.5;
    return c_attains ? 1.0 : 0.0;
}

struct PairProbability {
    double probability = 0.0;
    std::size_t examined = 0;
};

inline PairProbability pair_probability(const Point& q, const Dataset& data,
                                        const std::string& c, const std::string& c_other,
                                        const UnnParams& params, const SearchBackend& backend) {
    params.validate();
    const CandidateSet cs = build_candidate_set(point_ball(q), data, c, c_other, params.k, backend);
    const std::size_t k = static_cast<std::size_t>(params.k);
    // A class with fewer than k candidates cannot supply the k-th neighbor
    // within r_max, so the other class wins surely.
    if (cs.positive.size() < k) return {0.0, cs.examined};
    if (cs.negative.size() < k) return {1.0, cs.examined};
    if (!(cs.r_min < cs.r_max)) return {degenerate_pair_probability(q, data, cs, params.k), cs.examined};

    bool discrete = !params.force_monte_carlo;
    if (discrete) {
        for (std::size_t i : cs.positive) discrete = discrete && is_discrete(data.objects[i].pdf);
        for (std::size_t i : cs.negative) discrete = discrete && is_discrete(data.objects[i].pdf);
    }
    const double prob = discrete ? exact_pair_probability(q, data, cs, params.k)
                                 : mc_pair_probability(q, data, cs, params);
    return {prob, cs.examined};
}

} // namespace detail

// Nearest neighbor probability of class c against c' (every other class when
// c_other is empty): Pr(D(q, c) < D(q, c')).
inline double nn_class_probability(const Point& q, const Dataset& data,
                                   const std::string& c, const std::string& c_other,
                                   const UnnParams& params,
                                   const SearchBackend& backend = default_backend()) {
    return detail::pair_probability(q, data, c, c_other, params, backend).probability;
}

namespace detail {

inline ClassificationResult decide(std::map<std::string, double> probs, std::size_t examined) {
    ClassificationResult res;
    res.class_probs = std::move(probs);
    res.candidates_examined = examined;
    double best = -1.0;
    int winners = 0;
    for (const auto& [label, prob] : res.class_probs) {
        if (prob > best) {
            best = prob;
            res.label = label;  // map order makes ties resolve to the smaller label
            winners = 1;
        } else if (prob == best) {
            ++winners;
        }
    }
    res.tie = winners > 1;
    return res;
}

} // namespace detail

// Classifies a certain test point. Binary datasets use the single pairwise
// probability and its complement; more classes go one-against-all with the
// argmax of Pr(D(q, c_j) < D(q, rest)).
inline ClassificationResult classify(const Point& q, const Dataset& data, const UnnParams& params,
                                     const SearchBackend& backend = default_backend()) {
    std::map<std::string, double> probs;
    std::size_t examined = 0;
    if (data.labels.size() == 2) {
        const auto pr = detail::pair_probability(q, data, data.labels[0], data.labels[1], params, backend);
        probs[data.labels[0]] = pr.probability;
        probs[data.labels[1]] = 1.0 - pr.probability;
        examined = pr.examined;
    } else {
        for (const auto& label : data.labels) {
            const auto pr = detail::pair_probability(q, data, label, std::string{}, params, backend);
            probs[label] = pr.probability;
            examined = std::max(examined, pr.examined);
        }
    }
    return detail::decide(std::move(probs), examined);
}

// Classifies an uncertain test object by averaging the per-class probability
// over N draws from its pdf. Point masses collapse to the certain case.
inline ClassificationResult classify_uncertain(const UncertainObject& u, const Dataset& data,
                                               const UnnParams& params,
                                               const SearchBackend& backend = default_backend()) {
    if (const auto* p = std::get_if<PointMass>(&u.pdf)) return classify(p->at, data, params, backend);
    params.validate();
    const int n_samples = params.resolved_samples(data.dim);

    std::map<std::string, double> sums;
    for (const auto& label : data.labels) sums[label] = 0.0;
    std::size_t examined = 0;
    const bool binary = data.labels.size() == 2;

    for (int i = 0; i < n_samples; ++i) {
        auto eng = make_engine(derive_seed(params.seed, kSaltQuerySample, params.query_index,
                                           static_cast<std::uint64_t>(i)));
        const Point qi = sample(u.pdf, eng);
        UnnParams inner = params;
        inner.query_index = derive_seed(params.query_index, kSaltQuerySample,
                                        static_cast<std::uint64_t>(i));
        if (binary) {
            const auto pr = detail::pair_probability(qi, data, data.labels[0], data.labels[1], inner, backend);
            sums[data.labels[0]] += pr.probability;
            examined = std::max(examined, pr.examined);
        } else {
            for (const auto& label : data.labels) {
                const auto pr = detail::pair_probability(qi, data, label, std::string{}, inner, backend);
                sums[label] += pr.probability;
                examined = std::max(examined, pr.examined);
            }
        }
    }
    std::map<std::string, double> probs;
    if (binary) {
        const double p = sums[data.labels[0]] / n_samples;
        probs[data.labels[0]] = p;
        probs[data.labels[1]] = 1.0 - p;
    } else {
        for (const auto& [label, total] : sums) probs[label] = total / n_samples;
    }
    return detail::decide(std::move(probs), examined);
}

} // namespace unn
