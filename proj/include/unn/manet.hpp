#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unn/baselines.hpp"
#include "unn/classifier.hpp"
#include "unn/dataset.hpp"
#include "unn/pdf.hpp"
#include "unn/rng.hpp"

namespace unn {

// ---------------------------------------------------------------------------
// Mobile ad-hoc network demo: nodes move under the random-waypoint model, so
// their positions are Waypoint pdfs. Test points are labelled by the network
// demanding the least transmission power and then classified.
// ---------------------------------------------------------------------------

// Draws one node position (rejection sampling against the density maximum).
inline Point waypoint_sample(const Waypoint& w, RandomEngine& eng) {
    return sample(Pdf{w}, eng);
}

// Monte Carlo estimate of the expected minimum transmission power from v to
// the nearest node of the network: E[(distance to nearest node)^alpha] over
// n_outcomes joint draws of all node positions. Proportionality constant 1.
inline double network_power(const Point& v, std::span<const Pdf> network, double alpha_loss,
                            int n_outcomes, RandomEngine& eng) {
    if (network.empty()) throw std::invalid_argument("network_power: empty network");
    if (n_outcomes < 1) throw std::invalid_argument("network_power: n_outcomes must be >= 1");
    double total = 0.0;
    for (int m = 0; m < n_outcomes; ++m) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& pdf : network) nearest = std::min(nearest, distance(v, sample(pdf, eng)));
        total += std::pow(nearest, alpha_loss);
    }
    return total / n_outcomes;
}

// Unit square centered at the origin; node mobility squares are kept inside.
struct ManetScenario {
    std::vector<Waypoint> red;   // 10 nodes, 0.2-side squares, anywhere
    std::vector<Waypoint> blue;  // 5 nodes, 0.05-side squares, lower-right corner
    double alpha_loss = 2.0;
};

inline ManetScenario make_manet_scenario(std::uint64_t seed, double alpha_loss = 2.0) {
    ManetScenario sc;
    sc.alpha_loss = alpha_loss;
    auto eng = make_engine(derive_seed(seed, kSaltManet));

    auto place = [&](double side, double lo_x, double hi_x, double lo_y, double hi_y) {
        // clip centers so the whole mobility square stays inside the area
        const double h = side / 2.0;
        std::uniform_real_distribution<double> ux(lo_x + h, hi_x - h);
        std::uniform_real_distribution<double> uy(lo_y + h, hi_y - h);
        return Waypoint{Point{ux(eng), uy(eng)}, side};
    };
    for (int i = 0; i < 10; ++i) sc.red.push_back(place(0.2, -0.5, 0.5, -0.5, 0.5));
    for (int i = 0; i < 5; ++i) sc.blue.push_back(place(0.05, 0.0, 0.5, -0.5, 0.0));
    return sc;
}

inline Dataset scenario_dataset(const ManetScenario& sc) {
    std::vector<UncertainObject> objects;
    for (const auto& w : sc.red) objects.push_back(make_object(Pdf{w}, "red"));
    for (const auto& w : sc.blue) objects.push_back(make_object(Pdf{w}, "blue"));
    return make_dataset(std::move(objects));
}

struct ManetParams {
    int test_points = 2500;
    int power_samples = 10000;  // outcomes per power estimate
    int boundary_grid = 50;     // raster resolution per axis
    int m_outcomes = 0;         // eKNN outcomes; 0 resolves to the UNN sample count
    UnnParams unn;              // k = 1 by default
    std::uint64_t seed = 0;
};

struct ManetResult {
    double unn_accuracy = 0.0;
    double eknn_accuracy = 0.0;  // mean per-outcome agreement with the power label
    struct TestPoint {
        Point at;
        std::string truth;
        std::string unn_label;
        double unn_prob_red = 0.0;
        double eknn_agreement = 0.0;
    };
    std::vector<TestPoint> points;
    struct GridCell {
        double x = 0.0;
        double y = 0.0;
        double prob_red = 0.0;
    };
    std::vector<GridCell> boundary;
};

// Ground-truth label: the network reaching v with the least expected power.
inline std::string power_label(const Point& v, const ManetScenario& sc, int n_outcomes,
                               std::uint64_t seed) {
    std::vector<Pdf> red(sc.red.begin(), sc.red.end());
    std::vector<Pdf> blue(sc.blue.begin(), sc.blue.end());
    auto eng_red = make_engine(derive_seed(seed, kSaltPower, 0));
    auto eng_blue = make_engine(derive_seed(seed, kSaltPower, 1));
    const double p_red = network_power(v, red, sc.alpha_loss, n_outcomes, eng_red);
    const double p_blue = network_power(v, blue, sc.alpha_loss, n_outcomes, eng_blue);
    return p_red <= p_blue ? "red" : "blue";
}

inline ManetResult run_manet_experiment(const ManetScenario& sc, const ManetParams& params) {
    const Dataset data = scenario_dataset(sc);
    const int m_outcomes = params.m_outcomes > 0 ? params.m_outcomes
                                                 : params.unn.resolved_samples(data.dim);

    ManetResult result;
    auto eng = make_engine(derive_seed(params.seed, kSaltManet, 1));
    std::uniform_real_distribution<double> unit(-0.5, 0.5);

    int unn_correct = 0;
    double eknn_total = 0.0;
    for (int i = 0; i < params.test_points; ++i) {
        ManetResult::TestPoint tp;
        tp.at = Point{unit(eng), unit(eng)};
        tp.truth = power_label(tp.at, sc, params.power_samples,
                               derive_seed(params.seed, kSaltPower, static_cast<std::uint64_t>(i) + 2));

        UnnParams unn_params = params.unn;
        unn_params.seed = params.seed;
        unn_params.query_index = static_cast<std::uint64_t>(i);
        const auto unn_result = classify(tp.at, data, unn_params);
        tp.unn_label = unn_result.label;
        tp.unn_prob_red = unn_result.class_probs.at("red");

        const auto ek = eknn(tp.at, data, params.unn.k, m_outcomes,
                             derive_seed(params.seed, kSaltOutcome, static_cast<std::uint64_t>(i)));
        tp.eknn_agreement = ek.agreement_with(tp.truth);

        if (tp.unn_label == tp.truth) ++unn_correct;
        eknn_total += tp.eknn_agreement;
        result.points.push_back(std::move(tp));
    }
    result.unn_accuracy = static_cast<double>(unn_correct) / params.test_points;
    result.eknn_accuracy = eknn_total / params.test_points;

    // red-class probability raster (cell centers across the unit square)
    const int g = params.boundary_grid;
    for (int iy = 0; iy < g; ++iy) {
        for (int ix = 0; ix < g; ++ix) {
            ManetResult::GridCell cell;
            cell.x = -0.5 + (ix + 0.5) / g;
            cell.y = -0.5 + (iy + 0.5) / g;
            UnnParams unn_params = params.unn;
            unn_params.seed = params.seed;
            unn_params.query_index = derive_seed(kSaltManet, static_cast<std::uint64_t>(iy),
                                                 static_cast<std::uint64_t>(ix));
            cell.prob_red = classify(Point{cell.x, cell.y}, data, unn_params).class_probs.at("red");
            result.boundary.push_back(cell);
        }
    }
    return result;
}

} // namespace unn
