#include <doctest.h>

#include "crackmusic/calibrate.hpp"
#include "crackmusic/forward_asym.hpp"

using namespace crackmusic;

TEST_CASE("estimate_k: exact case and scale consistency") {
    const Point2 y{0.0, -1.0};
    const double k = kTwoPi / 0.4;
    const Point2 peak = (k / 20.0) * y;
    CHECK(estimate_k(peak, y, 20.0) == doctest::Approx(k).epsilon(1e-15));
    for (double alpha : {0.5, 1.7, 3.0}) {
        const Point2 off{0.013, -0.61};
        CHECK(estimate_k(alpha * off, y, 20.0) == doctest::Approx(alpha * estimate_k(off, y, 20.0)));
    }
    CHECK_THROWS_AS(estimate_k(peak, {0, 0}, 20.0), ArgumentError);
    CHECK_THROWS_AS(estimate_k(peak, y, 0.0), ArgumentError);
    CHECK_THROWS_AS(estimate_k(-1.0 * peak, y, 20.0), NumericError);
}

TEST_CASE("safe cone membership") {
    const SafeCone c({1.0, 0.0}, kPi / 2);
    CHECK(c.contains({1.0, 1.0}));
    CHECK(c.contains({0.0, 0.0}));
    CHECK_FALSE(c.contains({-1.0, -0.1}));
    CHECK_FALSE(c.contains({1.0, -0.1}));
    CHECK_THROWS_AS(SafeCone({1, 0}, 0.0), ArgumentError);
}

TEST_CASE("safe cone is invariant under scaling of the images") {
    const auto arc = scenarios::extended_arc();
    std::vector<Point2> samples;
    for (int i = 1; i < 20; ++i) samples.push_back(arc.point(-1.0 + i / 10.0));
    for (double ratio : {0.5, 0.785, 1.3}) {
        std::vector<Point2> scaled;
        for (const auto& p : samples) scaled.push_back(ratio * p);
        const auto c = safe_cone({ratio * arc.start(), ratio * arc.end()}, scaled);
        const auto ref = safe_cone({arc.start(), arc.end()}, samples);
        CHECK(distance(c.start_ray(), ref.start_ray()) < 1e-12);
        CHECK(c.span() == doctest::Approx(ref.span()));
        CHECK(c.contains({0.0, 1.0}));
        CHECK_FALSE(c.contains({0.0, -1.0}));
    }
    CHECK_THROWS_AS(safe_cone({{1, 0}, {2, 0}}, samples), ArgumentError);
}

TEST_CASE("bright set end points") {
    ImageMap map;
    map.grid = ImageGrid{0, 1, 0, 1, 0.25};
    map.values.assign(25, 0.0);
    map.at(0, 2) = 1.0;
    map.at(4, 2) = 0.9;
    map.at(2, 2) = 0.95;
    const auto b = bright_set(map, 0.8);
    CHECK(b.points.size() == 3);
    CHECK(distance(b.endpoints.first, {0.0, 0.5}) < 1e-15);
    CHECK(distance(b.endpoints.second, {1.0, 0.5}) < 1e-15);
}

namespace {

MsrMatrix small_scatterer_data(double k, Point2 y, const std::vector<Crack>& extra = {}) {
    Scene s{{SegmentCrack(y, 0.05, 0.0)}, k};
    for (const auto& c : extra) s.cracks.push_back(c);
    return assemble_msr(s, 0.05, make_directions(32));
}

}  // namespace

TEST_CASE("calibration recovers k from a small scatterer") {
    const double k = kTwoPi / 0.4;
    const Point2 y{0.0, -1.0};
    const auto data = small_scatterer_data(k, y, {SegmentCrack({0.5, 0.6}, 0.05, 0.0)});
    CalibrationPlan plan;
    plan.location = y;
    plan.kind = ScattererKind::small_crack;
    plan.eta = 20.0;
    const auto r = calibrate_and_image(data, plan, ImageGrid{}, SignalDimMethod::manual(2));
    CHECK(std::abs(r.k_hat - k) / k < 0.05);
    CHECK(r.eta_used == 20.0);
    CHECK_FALSE(r.ambiguous);
    CHECK(r.reimaged.eta == r.k_hat);
    CHECK(r.residual < 0.02);
}

TEST_CASE("calibration at eta = k returns k") {
    const double k = 14.0;
    const Point2 y{0.6, -0.8};
    const auto data = small_scatterer_data(k, y);
    CalibrationPlan plan;
    plan.location = y;
    plan.eta = k;
    const auto r = calibrate_and_image(data, plan, ImageGrid{-1.5, 1.5, -1.5, 1.5, 0.01}, SignalDimMethod::manual(1));
    CHECK(std::abs(r.k_hat - k) / k < 0.01 / norm(y));
}

TEST_CASE("scatterer inside the crack sector is flagged") {
    const double k = kTwoPi / 0.4;
    const Point2 y{0.0, 1.0};
    const auto data = small_scatterer_data(k, y, {SegmentCrack({0.5, 0.6}, 0.05, 0.0)});
    CalibrationPlan plan;
    plan.location = y;
    plan.unsafe_region = SafeCone({1.0, 0.0}, kPi);
    const auto r = calibrate_and_image(data, plan, ImageGrid{}, SignalDimMethod::manual(2));
    CHECK(r.ambiguous);
}

TEST_CASE("no peak near the ray is a calibration failure") {
    const double k = kTwoPi / 0.4;
    const auto data = assemble_msr(Scene{{SegmentCrack({0.8, 0.0}, 0.05, 0.0)}, k}, 0.05, make_directions(32));
    CalibrationPlan plan;
    plan.location = {0.0, -1.0};
    CHECK_THROWS_AS(calibrate_and_image(data, plan, ImageGrid{}, SignalDimMethod::manual(1)), NumericError);
    plan.eta = -1.0;
    CHECK_THROWS_AS(calibrate_and_image(data, plan, ImageGrid{}, SignalDimMethod::manual(1)), ArgumentError);
}
