#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include "unn/geometry.hpp"
#include "unn/rng.hpp"

namespace unn {

// ---------------------------------------------------------------------------
// Probability density models for uncertain objects. All are immutable after
// construction and safe to share across threads; sampling takes an explicit
// engine so parallel runs are deterministic given seeds.
// ---------------------------------------------------------------------------

// Dirac delta: a certain object viewed as an uncertain one.
struct PointMass {
    Point at;

    bool operator==(const PointMass&) const = default;
};

struct WeightedAtom {
    Point at;
    double weight = 0.0;

    bool operator==(const WeightedAtom&) const = default;
};

// Finite mixture of point masses; weights sum to 1.
struct DiscreteMixture {
    std::vector<WeightedAtom> atoms;

    bool operator==(const DiscreteMixture&) const = default;
};

// Product of independent per-dimension normals, truncated at
// mean_j +- truncation * sigma_j and renormalized by rejection.
struct GaussianProduct {
    Point mean;
    std::vector<double> sigmas;
    double truncation = 4.0;

    bool operator==(const GaussianProduct&) const = default;
};

// Uniform density on an axis-aligned box, low < high componentwise.
struct UniformBox {
    Point low;
    Point high;

    bool operator==(const UniformBox&) const = default;
};

// 1-D factors for per-dimension product pdfs. A Uniform1D with a == b and a
// Normal1D with sigma == 0 degenerate to a constant dimension (used when a
// dataset column has zero spread).
struct Normal1D {
    double mu = 0.0;
    double sigma = 1.0;
    double truncation = 4.0;

    bool operator==(const Normal1D&) const = default;
};
struct Uniform1D {
    double a = 0.0;
    double b = 1.0;

    bool operator==(const Uniform1D&) const = default;
};
using Factor1D = std::variant<Normal1D, Uniform1D>;

struct DimProduct {
    std::vector<Factor1D> factors;

    bool operator==(const DimProduct&) const = default;
};

// Stationary spatial density of the random-waypoint mobility model on an
// axis-aligned side-by-side square: maximal at the center, zero on the
// boundary. Two-dimensional only.
struct Waypoint {
    Point center;       // (x0, y0)
    double side = 1.0;  // a

    bool operator==(const Waypoint&) const = default;
};

using Pdf = std::variant<PointMass, DiscreteMixture, GaussianProduct, UniformBox, DimProduct, Waypoint>;

// ---------------------------------------------------------------------------
// Basic queries
// ---------------------------------------------------------------------------

inline std::size_t dim(const Pdf& pdf) {
    struct V {
        std::size_t operator()(const PointMass& p) const { return p.at.size(); }
        std::size_t operator()(const DiscreteMixture& m) const {
            return m.atoms.empty() ? 0 : m.atoms.front().at.size();
        }
        std::size_t operator()(const GaussianProduct& g) const { return g.mean.size(); }
        std::size_t operator()(const UniformBox& b) const { return b.low.size(); }
        std::size_t operator()(const DimProduct& p) const { return p.factors.size(); }
        std::size_t operator()(const Waypoint&) const { return 2; }
    };
    return std::visit(V{}, pdf);
}

// True when distance distributions against the pdf can be computed exactly
// by enumerating atoms.
inline bool is_discrete(const Pdf& pdf) {
    return std::holds_alternative<PointMass>(pdf) || std::holds_alternative<DiscreteMixture>(pdf);
}

namespace detail {
inline void require_finite(const Point& p, const char* what) {
    for (double v : p) {
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite component");
    }
}
} // namespace detail

inline void validate(const Pdf& pdf) {
    struct V {
        void operator()(const PointMass& p) const {
            if (p.at.empty()) throw std::invalid_argument("point mass: dimension must be >= 1");
            detail::require_finite(p.at, "point mass");
        }
        void operator()(const DiscreteMixture& m) const {
            if (m.atoms.empty()) throw std::invalid_argument("mixture: no atoms");
            const std::size_t d = m.atoms.front().at.size();
            if (d == 0) throw std::invalid_argument("mixture: dimension must be >= 1");
            double total = 0.0;
            for (const auto& a : m.atoms) {
                if (a.at.size() != d) throw std::invalid_argument("mixture: inconsistent atom dimensions");
                detail::require_finite(a.at, "mixture atom");
                if (!(a.weight > 0.0)) throw std::invalid_argument("mixture: weights must be > 0");
                total += a.weight;
            }
            if (std::abs(total - 1.0) > 1e-9) {
                throw std::invalid_argument("mixture: weights sum to " + std::to_string(total) + ", expected 1");
            }
        }
        void operator()(const GaussianProduct& g) const {
            if (g.mean.empty()) throw std::invalid_argument("gaussian: dimension must be >= 1");
            if (g.sigmas.size() != g.mean.size())
                throw std::invalid_argument("gaussian: sigmas/mean dimension mismatch");
            detail::require_finite(g.mean, "gaussian mean");
            for (double s : g.sigmas) {
                if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("gaussian: sigmas must be > 0");
            }
            if (!(g.truncation > 0.0)) throw std::invalid_argument("gaussian: truncation must be > 0");
        }
        void operator()(const UniformBox& b) const {
            if (b.low.empty()) throw std::invalid_argument("box: dimension must be >= 1");
            if (b.low.size() != b.high.size()) throw std::invalid_argument("box: low/high dimension mismatch");
            detail::require_finite(b.low, "box low");
            detail::require_finite(b.high, "box high");
            for (std::size_t i = 0; i < b.low.size(); ++i) {
                if (!(b.low[i] < b.high[i])) throw std::invalid_argument("box: requires low < high componentwise");
            }
        }
        void operator()(const DimProduct& p) const {
            if (p.factors.empty()) throw std::invalid_argument("product: dimension must be >= 1");
            for (const auto& f : p.factors) {
                if (const auto* n = std::get_if<Normal1D>(&f)) {
                    if (!std::isfinite(n->mu) || !(n->sigma >= 0.0) || !std::isfinite(n->sigma))
                        throw std::invalid_argument("product: invalid normal factor");
                    if (!(n->truncation > 0.0)) throw std::invalid_argument("product: truncation must be > 0");
                } else {
                    const auto& u = std::get<Uniform1D>(f);
                    if (!std::isfinite(u.a) || !std::isfinite(u.b) || !(u.a <= u.b))
                        throw std::invalid_argument("product: invalid uniform factor");
                }
            }
        }
        void operator()(const Waypoint& w) const {
            if (w.center.size() != 2) throw std::invalid_argument("waypoint: center must be 2-D");
            detail::require_finite(w.center, "waypoint center");
            if (!(w.side > 0.0)) throw std::invalid_argument("waypoint: side must be > 0");
        }
    };
    std::visit(V{}, pdf);
}

// Expected value of the pdf (all shipped models are symmetric, so this is
// also the center of mass of the truncated support).
inline Point mean_point(const Pdf& pdf) {
    struct V {
        Point operator()(const PointMass& p) const { return p.at; }
        Point operator()(const DiscreteMixture& m) const {
            Point mu(m.atoms.front().at.size(), 0.0);
            for (const auto& a : m.atoms)
                for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += a.weight * a.at[i];
            return mu;
        }
        Point operator()(const GaussianProduct& g) const { return g.mean; }
        Point operator()(const UniformBox& b) const {
            Point mu(b.low.size());
            for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = 0.5 * (b.low[i] + b.high[i]);
            return mu;
        }
        Point operator()(const DimProduct& p) const {
            Point mu(p.factors.size());
            for (std::size_t i = 0; i < mu.size(); ++i) {
                if (const auto* n = std::get_if<Normal1D>(&p.factors[i])) mu[i] = n->mu;
                else {
                    const auto& u = std::get<Uniform1D>(p.factors[i]);
                    mu[i] = 0.5 * (u.a + u.b);
                }
            }
            return mu;
        }
        Point operator()(const Waypoint& w) const { return w.center; }
    };
    return std::visit(V{}, pdf);
}

// ---------------------------------------------------------------------------
// Support regions
// ---------------------------------------------------------------------------

namespace detail {
// Circumscribed ball of an axis-aligned box.
inline SupportBall box_ball(const Point& low, const Point& high) {
    Point center(low.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < low.size(); ++i) {
        center[i] = 0.5 * (low[i] + high[i]);
        const double half = 0.5 * (high[i] - low[i]);
        sq += half * half;
    }
    return SupportBall{std::move(center), std::sqrt(sq)};
}
} // namespace detail

// Ball enclosing the (truncated) support of the pdf. Boxes are circumscribed;
// mixtures use the centroid of the atom positions.
inline SupportBall support_ball(const Pdf& pdf) {
    struct V {
        SupportBall operator()(const PointMass& p) const { return SupportBall{p.at, 0.0}; }
        SupportBall operator()(const DiscreteMixture& m) const {
            Point c(m.atoms.front().at.size(), 0.0);
            for (const auto& a : m.atoms)
                for (std::size_t i = 0; i < c.size(); ++i) c[i] += a.at[i];
            for (double& v : c) v /= static_cast<double>(m.atoms.size());
            double r = 0.0;
            for (const auto& a : m.atoms) r = std::max(r, distance(c, a.at));
            return SupportBall{std::move(c), r};
        }
        SupportBall operator()(const GaussianProduct& g) const {
            Point low(g.mean.size()), high(g.mean.size());
            for (std::size_t i = 0; i < g.mean.size(); ++i) {
                low[i] = g.mean[i] - g.truncation * g.sigmas[i];
                high[i] = g.mean[i] + g.truncation * g.sigmas[i];
            }
            return detail::box_ball(low, high);
        }
        SupportBall operator()(const UniformBox& b) const { return detail::box_ball(b.low, b.high); }
        SupportBall operator()(const DimProduct& p) const {
            Point low(p.factors.size()), high(p.factors.size());
            for (std::size_t i = 0; i < p.factors.size(); ++i) {
                if (const auto* n = std::get_if<Normal1D>(&p.factors[i])) {
                    low[i] = n->mu - n->truncation * n->sigma;
                    high[i] = n->mu + n->truncation * n->sigma;
                } else {
                    const auto& u = std::get<Uniform1D>(p.factors[i]);
                    low[i] = u.a;
                    high[i] = u.b;
                }
            }
            return detail::box_ball(low, high);
        }
        SupportBall operator()(const Waypoint& w) const {
            const double half = 0.5 * w.side;
            return SupportBall{w.center, half * std::sqrt(2.0)};
        }
    };
    return std::visit(V{}, pdf);
}

// ---------------------------------------------------------------------------
// Random-waypoint density (needed by the rejection sampler below and by the
// MANET scenario).
// ---------------------------------------------------------------------------

inline double waypoint_density(const Point& p, const Waypoint& w) {
    detail::require_same_dim(p, w.center);
    const double a = w.side;
    const double dx = p[0] - w.center[0];
    const double dy = p[1] - w.center[1];
    const double q = a * a / 4.0;
    if (dx * dx > q || dy * dy > q) return 0.0;
    const double a6 = a * a * a * a * a * a;
    return 36.0 / a6 * (dx * dx - q) * (dy * dy - q);
}

inline double waypoint_density_max(const Waypoint& w) {
    return 9.0 / (4.0 * w.side * w.side);  // value at the center
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace detail {
inline double sample_truncated_normal(double mu, double sigma, double truncation, RandomEngine& eng) {
    if (sigma == 0.0) return mu;
    std::normal_distribution<double> normal(mu, sigma);
    const double bound = truncation * sigma;
    for (;;) {
        const double v = normal(eng);
        if (std::abs(v - mu) <= bound) return v;
    }
}
} // namespace detail

// Draws one point from the pdf. Gaussian factors are rejection-truncated so
// every sample lies inside the support ball.
inline Point sample(const Pdf& pdf, RandomEngine& eng) {
    struct V {
        RandomEngine& eng;
        Point operator()(const PointMass& p) const { return p.at; }
        Point operator()(const DiscreteMixture& m) const {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            double u = unit(eng);
            for (const auto& a : m.atoms) {
                if (u < a.weight) return a.at;
                u -= a.weight;
            }
            return m.atoms.back().at;  // u landed in the 1e-9 weight slack
        }
        Point operator()(const GaussianProduct& g) const {
            Point p(g.mean.size());
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] = detail::sample_truncated_normal(g.mean[i], g.sigmas[i], g.truncation, eng);
            return p;
        }
        Point operator()(const UniformBox& b) const {
            Point p(b.low.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
                std::uniform_real_distribution<double> u(b.low[i], b.high[i]);
                p[i] = u(eng);
            }
            return p;
        }
        Point operator()(const DimProduct& prod) const {
            Point p(prod.factors.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (const auto* n = std::get_if<Normal1D>(&prod.factors[i])) {
                    p[i] = detail::sample_truncated_normal(n->mu, n->sigma, n->truncation, eng);
                } else {
                    const auto& u = std::get<Uniform1D>(prod.factors[i]);
                    if (u.a == u.b) {
                        p[i] = u.a;
                    } else {
                        std::uniform_real_distribution<double> dist(u.a, u.b);
                        p[i] = dist(eng);
                    }
                }
            }
            return p;
        }
        Point operator()(const Waypoint& w) const {
            const double half = 0.5 * w.side;
            std::uniform_real_distribution<double> ux(w.center[0] - half, w.center[0] + half);
            std::uniform_real_distribution<double> uy(w.center[1] - half, w.center[1] + half);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double fmax = waypoint_density_max(w);
            for (;;) {
                Point p{ux(eng), uy(eng)};
                if (unit(eng) * fmax <= waypoint_density(p, w)) return p;
            }
        }
    };
    return std::visit(V{eng}, pdf);
}

} // namespace unn
