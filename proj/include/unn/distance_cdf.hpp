#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "unn/dataset.hpp"
#include "unn/geometry.hpp"
#include "unn/rng.hpp"

namespace unn {

// Uniform radius grid over [r_min, r_max] with h slots; slot l sits at
// R_l = r_min + l * delta, l = 1..h, and R_h is pinned to r_max exactly.
struct RadiusGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    int slots = 1;

    RadiusGrid(double r_min_, double r_max_, int slots_)
        : r_min(r_min_), r_max(r_max_), slots(slots_) {
        if (!(r_min <= r_max)) throw std::invalid_argument("radius grid: r_min > r_max");
        if (slots < 1) throw std::invalid_argument("radius grid: needs at least 1 slot");
    }

    double delta() const { return (r_max - r_min) / slots; }
    double radius(int l) const { return l >= slots ? r_max : r_min + l * delta(); }
};

// Cumulative distance distribution Pr(d(q, x) <= R_l) tabulated on a grid.
// values[l-1] holds the slot-l probability; monotone by construction.
struct DistanceCdf {
    RadiusGrid grid;
    std::vector<double> values;

    double at_slot(int l) const { return l <= 0 ? 0.0 : values[static_cast<std::size_t>(l) - 1]; }
};

// Single-pass Monte Carlo estimate of the distance CDF of one object: draws
// n_samples points from the pdf, computes each distance to q once, sorts,
// and fills every slot by binary search (O(N log N + h) instead of O(N h)).
inline DistanceCdf estimate_object_cdf(const Point& q, const UncertainObject& x,
                                       const RadiusGrid& grid, int n_samples, RandomEngine& eng) {
    if (n_samples < 1) throw std::invalid_argument("estimate_object_cdf: n_samples must be >= 1");
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) dists.push_back(distance(q, sample(x.pdf, eng)));
    std::sort(dists.begin(), dists.end());

    DistanceCdf cdf{grid, std::vector<double>(static_cast<std::size_t>(grid.slots))};
    const double n = static_cast<double>(n_samples);
    for (int l = 1; l <= grid.slots; ++l) {
        const auto it = std::upper_bound(dists.begin(), dists.end(), grid.radius(l));
        cdf.values[static_cast<std::size_t>(l) - 1] =
            static_cast<double>(it - dists.begin()) / n;
    }
    return cdf;
}

// Exact Pr(d(q, x) <= radius) for discrete pdfs: the mass of atoms within
// the ball. Serves as the zero-noise oracle for the Monte Carlo estimator.
inline double exact_object_cdf(const Point& q, const UncertainObject& x, double radius) {
    if (const auto* p = std::get_if<PointMass>(&x.pdf)) {
        return distance(q, p->at) <= radius ? 1.0 : 0.0;
    }
    if (const auto* m = std::get_if<DiscreteMixture>(&x.pdf)) {
        double mass = 0.0;
        for (const auto& a : m->atoms)
            if (distance(q, a.at) <= radius) mass += a.weight;
        return std::min(mass, 1.0);
    }
    throw std::invalid_argument("exact_object_cdf: pdf is not discrete");
}

} // namespace unn
