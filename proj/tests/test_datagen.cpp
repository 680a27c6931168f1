#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "unn/datagen.hpp"

using namespace unn;
using Catch::Approx;

namespace {

// Support half-width of each 1-D factor (4r by construction).
std::vector<double> factor_half_widths(const UncertainObject& obj) {
    std::vector<double> out;
    for (const auto& f : std::get<DimProduct>(obj.pdf).factors) {
        if (const auto* n = std::get_if<Normal1D>(&f)) out.push_back(n->truncation * n->sigma);
        else {
            const auto& u = std::get<Uniform1D>(f);
            out.push_back(0.5 * (u.b - u.a));
        }
    }
    return out;
}

} // namespace

TEST_CASE("column standard deviations", "[datagen]") {
    const std::vector<LabeledPoint> pts{{{0.0, 1.0}, "a"}, {{2.0, 1.0}, "b"}, {{4.0, 1.0}, "a"}};
    const auto sig = column_std_devs(pts);
    CHECK(sig[0] == Approx(std::sqrt(8.0 / 3.0)));
    CHECK(sig[1] == 0.0);
}

TEST_CASE("spread injection", "[datagen]") {
    auto eng = make_engine(1234);
    const auto certain = testutil::random_certain_points(eng, 30, 3);

    SECTION("s = 0 yields point masses at the original coordinates") {
        const auto data = inject_uncertainty(certain, make_spread_config(certain, 0.0, 1));
        REQUIRE(data.size() == certain.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            CHECK(std::get<PointMass>(data.objects[i].pdf).at == certain[i].point);
            CHECK(data.objects[i].label == certain[i].label);
        }
    }

    SECTION("support half-widths stay within the 4r bounds") {
        const double s = 0.1;
        const auto sigmas = column_std_devs(certain);
        const auto data = inject_uncertainty(certain, make_spread_config(certain, s, 1));
        for (const auto& obj : data.objects) {
            const auto widths = factor_half_widths(obj);
            for (std::size_t j = 0; j < widths.size(); ++j) {
                CHECK(widths[j] >= 4.0 * 0.01 * s * sigmas[j] - 1e-12);
                CHECK(widths[j] <= 4.0 * s * sigmas[j] + 1e-12);
            }
        }
    }

    SECTION("supports grow monotonically with s under a shared seed") {
        const auto lo = inject_uncertainty(certain, make_spread_config(certain, 0.05, 3));
        const auto hi = inject_uncertainty(certain, make_spread_config(certain, 0.15, 3));
        for (std::size_t i = 0; i < lo.size(); ++i) {
            const auto wl = factor_half_widths(lo.objects[i]);
            const auto wh = factor_half_widths(hi.objects[i]);
            for (std::size_t j = 0; j < wl.size(); ++j) CHECK(wl[j] <= wh[j] + 1e-15);
        }
    }

    SECTION("sample means stay near the original points") {
        const auto data = inject_uncertainty(certain, make_spread_config(certain, 0.2, 5));
        const auto sigmas = column_std_devs(certain);
        auto sample_eng = make_engine(777);
        for (std::size_t i = 0; i < 3; ++i) {
            const int n = 10000;
            Point mean(3, 0.0);
            for (int s = 0; s < n; ++s) {
                const auto p = sample(data.objects[i].pdf, sample_eng);
                for (std::size_t j = 0; j < 3; ++j) mean[j] += p[j];
            }
            for (std::size_t j = 0; j < 3; ++j) {
                mean[j] /= n;
                // factor std is at most 0.2 * sigma_j (normal) or 4r/sqrt(3) (uniform)
                const double se = 4.0 * 0.2 * sigmas[j] / std::sqrt(3.0 * n);
                CHECK(std::abs(mean[j] - certain[i].point[j]) <= 3.0 * se + 1e-9);
            }
        }
    }
}

TEST_CASE("gaussian injection", "[datagen]") {
    auto eng = make_engine(9);
    const auto certain = testutil::random_certain_points(eng, 20, 2);
    const auto sigmas = column_std_devs(certain);

    SECTION("s = 0 yields point masses") {
        const auto data = inject_gaussian_uncertainty(certain, 0.0, sigmas, 2);
        for (const auto& obj : data.objects) CHECK(std::holds_alternative<PointMass>(obj.pdf));
    }
    SECTION("drawn stds respect the 2 s sigma bound") {
        const double s = 1.5;
        const auto data = inject_gaussian_uncertainty(certain, s, sigmas, 2);
        for (const auto& obj : data.objects) {
            const auto& factors = std::get<DimProduct>(obj.pdf).factors;
            for (std::size_t j = 0; j < factors.size(); ++j) {
                const auto& n = std::get<Normal1D>(factors[j]);
                CHECK(n.sigma >= 0.0);
                CHECK(n.sigma <= 2.0 * s * sigmas[j]);
            }
        }
    }
    SECTION("sample variance matches the drawn sigma") {
        const auto data = inject_gaussian_uncertainty(certain, 1.0, sigmas, 4);
        const auto& obj = data.objects[0];
        const auto& n0 = std::get<Normal1D>(std::get<DimProduct>(obj.pdf).factors[0]);
        auto sample_eng = make_engine(5);
        const int n = 20000;
        double sum = 0.0, sum_sq = 0.0;
        for (int s = 0; s < n; ++s) {
            const double v = sample(obj.pdf, sample_eng)[0];
            sum += v;
            sum_sq += v * v;
        }
        const double var = sum_sq / n - (sum / n) * (sum / n);
        // truncation at 4 sigma trims ~0.01% of the variance
        CHECK(std::sqrt(var) == Approx(n0.sigma).epsilon(0.05));
    }
}

TEST_CASE("midpoint queries", "[datagen]") {
    const std::vector<LabeledPoint> pts{{{0.0, 0.0}, "a"}, {{2.0, 2.0}, "b"}};
    auto eng = make_engine(3);
    const auto qs = midpoint_queries(pts, 5, eng);
    REQUIRE(qs.size() == 5);
    for (const auto& q : qs) CHECK(q == Point{1.0, 1.0});  // only one distinct pair

    auto eng_a = make_engine(8);
    auto eng_b = make_engine(8);
    auto big_eng = make_engine(10);
    const auto data = testutil::random_certain_points(big_eng, 40, 2);
    const auto qa = midpoint_queries(data, 25, eng_a);
    const auto qb = midpoint_queries(data, 25, eng_b);
    CHECK(qa == qb);  // deterministic under the seed
    double lo = 1e9, hi = -1e9;
    for (const auto& lp : data) {
        lo = std::min({lo, lp.point[0], lp.point[1]});
        hi = std::max({hi, lp.point[0], lp.point[1]});
    }
    for (const auto& q : qa) {
        CHECK(q[0] >= lo);
        CHECK(q[0] <= hi);
        CHECK(q[1] >= lo);
        CHECK(q[1] <= hi);
    }
}

TEST_CASE("border queries", "[datagen]") {
    SECTION("midpoint of a symmetric pair is accepted") {
        const std::vector<LabeledPoint> pts{{{-1.0, 0.0}, "a"}, {{1.0, 0.0}, "b"}};
        CHECK(is_border_query({0.0, 0.0}, pts, 1));
        auto eng = make_engine(1);
        const auto qs = border_queries(pts, 1, 3, eng);
        REQUIRE(qs.size() == 3);
        for (const auto& q : qs) CHECK(is_border_query(q, pts, 1));
    }
    SECTION("a query ten times closer to one class is rejected") {
        const std::vector<LabeledPoint> pts{{{-1.0, 0.0}, "a"}, {{10.0, 0.0}, "b"}};
        CHECK_FALSE(is_border_query({0.0, 0.0}, pts, 1));
    }
    SECTION("returned queries satisfy the ratio bound on recomputation") {
        auto eng = make_engine(44);
        const auto pts = testutil::random_certain_points(eng, 30, 2);
        auto qeng = make_engine(45);
        const auto qs = border_queries(pts, 2, 10, qeng);
        for (const auto& q : qs) CHECK(is_border_query(q, pts, 2));
    }
    SECTION("gives up with a diagnostic when no border exists") {
        const std::vector<LabeledPoint> pts{
            {{0.0}, "a"}, {{37.0}, "a"}, {{100.0}, "b"}, {{151.0}, "b"},
        };
        auto eng = make_engine(2);
        CHECK_THROWS_AS(border_queries(pts, 2, 1, eng, 500), std::runtime_error);
    }
}

TEST_CASE("ten fold cross validation", "[datagen]") {
    UnnParams params;
    const CvClassifier unn_cls = [&](const UncertainObject& obj, const Dataset& train) {
        return classify_uncertain(obj, train, params).label;
    };

    SECTION("perfectly separable point masses score 1.0") {
        std::vector<UncertainObject> objects;
        for (int i = 0; i < 12; ++i)
            objects.push_back(make_object(PointMass{{static_cast<double>(i % 4), 0.0}}, "a"));
        for (int i = 0; i < 12; ++i)
            objects.push_back(make_object(PointMass{{100.0 + i % 4, 3.0}}, "b"));
        const auto data = make_dataset(std::move(objects));
        const auto report = ten_fold_cv(data, unn_cls, 6);
        CHECK(report.mean == 1.0);
        CHECK(report.stddev == 0.0);
        CHECK(report.stratified);
        REQUIRE(report.fold_accuracy.size() == 10);
    }

    SECTION("fold sizes differ by at most one and splits are seed-stable") {
        auto eng = make_engine(60);
        const auto data = testutil::random_point_mass_dataset(eng, 47, 2);
        const auto a = ten_fold_cv(data, unn_cls, 123);
        const auto b = ten_fold_cv(data, unn_cls, 123);
        CHECK(a.fold_accuracy == b.fold_accuracy);
        // reconstruct fold sizes from a counting classifier
        std::vector<int> sizes;
        const CvClassifier counter = [&](const UncertainObject&, const Dataset& train) {
            sizes.push_back(static_cast<int>(47 - train.size()));
            return std::string("x");
        };
        ten_fold_cv(data, counter, 123);
        std::sort(sizes.begin(), sizes.end());
        CHECK(sizes.back() - sizes.front() <= 1);
    }

    SECTION("a tiny class forces the non-stratified fallback") {
        std::vector<UncertainObject> objects;
        for (int i = 0; i < 20; ++i)
            objects.push_back(make_object(PointMass{{static_cast<double>(i), 0.0}}, "a"));
        for (int i = 0; i < 4; ++i)
            objects.push_back(make_object(PointMass{{50.0 + i, 0.0}}, "b"));
        const auto data = make_dataset(std::move(objects));
        const auto report = ten_fold_cv(data, unn_cls, 1);
        CHECK_FALSE(report.stratified);
    }
}

TEST_CASE("spread zero degeneracy", "[datagen]") {
    auto eng = make_engine(100);
    UnnParams params;
    int checked = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto certain = testutil::random_certain_points(eng, 25, 2);
        const auto data = inject_uncertainty(certain, make_spread_config(certain, 0.0, trial));
        std::uniform_real_distribution<double> coord(-10.0, 10.0);
        for (int i = 0; i < 20; ++i) {
            const Point q{coord(eng), coord(eng)};
            REQUIRE(classify(q, data, params).label == certain_knn(q, certain, 1));
            ++checked;
        }
    }
    CHECK(checked == 100);
}
