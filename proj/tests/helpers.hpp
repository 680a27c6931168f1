#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// never call into the code paths they check.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "unn/unn.hpp"

namespace testutil {

using unn::Dataset;
using unn::Point;
using unn::RandomEngine;

// Bimodal-versus-certain fixture: one blue point mass at distance 4 from the
// origin and n_red two-atom red mixtures (mass 0.5 at distance 2, 0.5 at
// distance 8). Exactly Pr(red nearest) = 1 - 0.5^n_red, while the red means
// sit at distance 5, so a mean-distance NN picks blue.
inline Dataset bimodal_fixture(int n_red = 3) {
    std::vector<unn::UncertainObject> objects;
    objects.push_back(unn::make_object(unn::PointMass{Point{4.0, 0.0}}, "blue"));
    for (int i = 0; i < n_red; ++i) {
        const double angle = 0.3 + 0.4 * i;  // spread directions, keep distances exact
        unn::DiscreteMixture mix;
        mix.atoms.push_back({Point{2.0 * std::cos(angle), 2.0 * std::sin(angle)}, 0.5});
        mix.atoms.push_back({Point{8.0 * std::cos(angle), 8.0 * std::sin(angle)}, 0.5});
        objects.push_back(unn::make_object(std::move(mix), "red"));
    }
    return unn::make_dataset(std::move(objects));
}

// Four 1-D truncated Gaussians: two blue at -2 (sigma 0.125 and 0.55), red at
// 1.9 (sigma 0.125) and 2.5 (sigma 0.15). Queried at 0, the blue class wins
// with probability ~0.571 (reported as 0.569 at h=100 resolution).
inline Dataset gaussian_1d_fixture() {
    auto gauss = [](double mu, double sigma, const std::string& label) {
        return unn::make_object(unn::GaussianProduct{Point{mu}, {sigma}, 4.0}, label);
    };
    std::vector<unn::UncertainObject> objects;
    objects.push_back(gauss(-2.0, 0.125, "blue"));
    objects.push_back(gauss(-2.0, 0.55, "blue"));
    objects.push_back(gauss(1.9, 0.125, "red"));
    objects.push_back(gauss(2.5, 0.15, "red"));
    return unn::make_dataset(std::move(objects));
}

// ---------------------------------------------------------------------------
// Exhaustive outcome enumeration for discrete datasets: walks every joint
// combination of atoms, so results are exact up to floating point.
// ---------------------------------------------------------------------------

struct AtomList {
    std::vector<double> dist;    // distance from q
    std::vector<double> weight;
};

inline AtomList atoms_of(const Point& q, const unn::UncertainObject& obj) {
    AtomList list;
    if (const auto* p = std::get_if<unn::PointMass>(&obj.pdf)) {
        list.dist.push_back(unn::distance(q, p->at));
        list.weight.push_back(1.0);
    } else {
        for (const auto& a : std::get<unn::DiscreteMixture>(obj.pdf).atoms) {
            list.dist.push_back(unn::distance(q, a.at));
            list.weight.push_back(a.weight);
        }
    }
    return list;
}

// Exact Pr(k-th nearest object of class c is strictly closer than the k-th
// nearest of the other classes), per class. Ties get no mass (strict <).
inline std::map<std::string, double> enumerate_nn_class_probs(const Point& q, const Dataset& data,
                                                              int k) {
    std::vector<AtomList> atoms;
    std::vector<std::string> labels;
    for (const auto& obj : data.objects) {
        atoms.push_back(atoms_of(q, obj));
        labels.push_back(obj.label);
    }
    std::map<std::string, double> probs;
    for (const auto& l : data.labels) probs[l] = 0.0;

    std::vector<std::size_t> choice(atoms.size(), 0);
    for (;;) {
        double weight = 1.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) weight *= atoms[i].weight[choice[i]];

        // k-th smallest distance per class and over the complement of each class
        for (const auto& label : data.labels) {
            std::vector<double> own, rest;
            for (std::size_t i = 0; i < atoms.size(); ++i)
                (labels[i] == label ? own : rest).push_back(atoms[i].dist[choice[i]]);
            if (static_cast<int>(own.size()) < k) continue;
            std::nth_element(own.begin(), own.begin() + (k - 1), own.end());
            const double d_own = own[k - 1];
            double d_rest = std::numeric_limits<double>::infinity();
            if (static_cast<int>(rest.size()) >= k) {
                std::nth_element(rest.begin(), rest.begin() + (k - 1), rest.end());
                d_rest = rest[k - 1];
            }
            if (d_own < d_rest) probs[label] += weight;
        }

        std::size_t i = 0;
        while (i < choice.size() && ++choice[i] == atoms[i].dist.size()) choice[i++] = 0;
        if (i == choice.size()) break;
    }
    return probs;
}

// Exact Pr(D(q, c) < D(q, c')) over the full training set and an unbounded
// radius interval, computed from exact per-object CDFs at every atom
// distance. Independent of the classifier's candidate pruning.
inline double unpruned_pair_probability(const Point& q, const Dataset& data, const std::string& c,
                                        const std::string& c_other, int k) {
    std::vector<std::size_t> own, rest;
    std::vector<double> radii;
    for (std::size_t i = 0; i < data.objects.size(); ++i) {
        if (data.objects[i].label == c) own.push_back(i);
        else if (c_other.empty() || data.objects[i].label == c_other) rest.push_back(i);
        const auto list = atoms_of(q, data.objects[i]);
        radii.insert(radii.end(), list.dist.begin(), list.dist.end());
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    double total = 0.0, f_prev = 0.0;
    std::vector<double> p_own(own.size()), p_rest(rest.size());
    for (double r : radii) {
        for (std::size_t j = 0; j < own.size(); ++j)
            p_own[j] = unn::exact_object_cdf(q, data.objects[own[j]], r);
        for (std::size_t j = 0; j < rest.size(); ++j)
            p_rest[j] = unn::exact_object_cdf(q, data.objects[rest[j]], r);
        const double f = unn::brute_force_class_cdf(p_own, k);
        const double f_other = unn::brute_force_class_cdf(p_rest, k);
        total += (f - f_prev) * (1.0 - f_other);
        f_prev = f;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Random instance generators
// ---------------------------------------------------------------------------

inline std::vector<unn::LabeledPoint> random_certain_points(RandomEngine& eng, int n, int dim,
                                                            int n_classes = 2, double box = 10.0) {
    std::uniform_real_distribution<double> coord(-box, box);
    std::vector<unn::LabeledPoint> out;
    for (int i = 0; i < n; ++i) {
        Point p(dim);
        for (auto& v : p) v = coord(eng);
        out.push_back({std::move(p), "c" + std::to_string(i % n_classes)});
    }
    return out;
}

inline Dataset random_point_mass_dataset(RandomEngine& eng, int n, int dim, int n_classes = 2) {
    std::vector<unn::UncertainObject> objects;
    for (auto& lp : random_certain_points(eng, n, dim, n_classes))
        objects.push_back(unn::make_object(unn::PointMass{lp.point}, lp.label));
    return unn::make_dataset(std::move(objects));
}

inline Dataset random_mixture_dataset(RandomEngine& eng, int n, int dim, int max_atoms = 4,
                                      int n_classes = 2, double box = 10.0) {
    std::uniform_real_distribution<double> coord(-box, box);
    std::uniform_real_distribution<double> offset(-1.5, 1.5);
    std::uniform_int_distribution<int> atom_count(2, max_atoms);
    std::uniform_real_distribution<double> raw_weight(0.2, 1.0);
    std::vector<unn::UncertainObject> objects;
    for (int i = 0; i < n; ++i) {
        const int atoms = atom_count(eng);
        Point center(dim);
        for (auto& v : center) v = coord(eng);
        unn::DiscreteMixture mix;
        std::vector<double> weights(atoms);
        double total = 0.0;
        for (auto& w : weights) total += (w = raw_weight(eng));
        for (int a = 0; a < atoms; ++a) {
            Point at = center;
            for (auto& v : at) v += offset(eng);
            mix.atoms.push_back({std::move(at), weights[a] / total});
        }
        // renormalize the final atom so the weights sum to 1 exactly
        double sum = 0.0;
        for (int a = 0; a + 1 < atoms; ++a) sum += mix.atoms[a].weight;
        mix.atoms.back().weight = 1.0 - sum;
        objects.push_back(unn::make_object(std::move(mix), "c" + std::to_string(i % n_classes)));
    }
    return unn::make_dataset(std::move(objects));
}

inline Dataset random_gaussian_dataset(RandomEngine& eng, int n, int dim, int n_classes = 2,
                                       double box = 10.0, double max_sigma = 0.8) {
    std::uniform_real_distribution<double> coord(-box, box);
    std::uniform_real_distribution<double> sig(0.1, max_sigma);
    std::vector<unn::UncertainObject> objects;
    for (int i = 0; i < n; ++i) {
        Point mean(dim);
        for (auto& v : mean) v = coord(eng);
        std::vector<double> sigmas(dim);
        for (auto& s : sigmas) s = sig(eng);
        objects.push_back(unn::make_object(unn::GaussianProduct{std::move(mean), std::move(sigmas), 4.0},
                                           "c" + std::to_string(i % n_classes)));
    }
    return unn::make_dataset(std::move(objects));
}

inline std::vector<unn::LabeledPoint> to_labeled_points(const Dataset& data) {
    std::vector<unn::LabeledPoint> out;
    for (const auto& obj : data.objects)
        out.push_back({std::get<unn::PointMass>(obj.pdf).at, obj.label});
    return out;
}

} // namespace testutil
