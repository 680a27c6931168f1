#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace unn {

// A certain object: a point of d-dimensional Euclidean space.
using Point = std::vector<double>;

namespace detail {
inline void require_same_dim(const Point& a, const Point& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
}
} // namespace detail

inline double distance(const Point& a, const Point& b) {
    detail::require_same_dim(a, b);
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

// Ball enclosing (the truncated support of) an uncertain object.
struct SupportBall {
    Point center;
    double radius = 0.0;
};

inline SupportBall point_ball(Point p) { return SupportBall{std::move(p), 0.0}; }

// Smallest possible distance between members of the two support regions.
// Radii are summed first so the value is bit-identical under argument swap.
inline double mindist(const SupportBall& x, const SupportBall& y) {
    return std::max(0.0, distance(x.center, y.center) - (x.radius + y.radius));
}

// Largest possible distance between members of the two support regions.
inline double maxdist(const SupportBall& x, const SupportBall& y) {
    return distance(x.center, y.center) + (x.radius + y.radius);
}

} // namespace unn
