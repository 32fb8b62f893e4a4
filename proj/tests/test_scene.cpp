#include <doctest.h>

#include <cmath>

#include "crackmusic/scene.hpp"

using namespace crackmusic;

TEST_CASE("closed direction sets repeat the first direction") {
    const auto d = make_directions(16);
    CHECK(d.size() == 16);
    CHECK(d.mode() == DirectionMode::closed);
    CHECK(d.angle(0) == 0.0);
    CHECK(d.angle(15) == kTwoPi);
    CHECK(std::abs(d.angle(1) - kTwoPi / 15.0) < 1e-15);
    CHECK(distance(d.direction(0), d.direction(15)) < 1e-15);
}

TEST_CASE("open direction sets are equispaced without repeats") {
    const auto d = make_directions(8, DirectionMode::open);
    CHECK(std::abs(d.angle(7) - 7.0 * kTwoPi / 8.0) < 1e-15);
    for (std::size_t n = 0; n < 8; ++n) CHECK(std::abs(norm(d.direction(n)) - 1.0) < 1e-15);
}

TEST_CASE("quadrature weights sum to one") {
    for (auto mode : {DirectionMode::closed, DirectionMode::open}) {
        double sum = 0.0;
        for (double w : make_directions(33, mode).quadrature_weights()) sum += w;
        CHECK(std::abs(sum - 1.0) < 1e-14);
    }
    const auto w = make_directions(5).quadrature_weights();
    CHECK(w.front() == doctest::Approx(0.125));
    CHECK(w[1] == doctest::Approx(0.25));
}

TEST_CASE("direction sets reject fewer than two directions") {
    CHECK_THROWS_AS(make_directions(1), ArgumentError);
    CHECK_THROWS_AS(direction_mode_from_string("spiral"), ArgumentError);
    CHECK(direction_mode_from_string(to_string(DirectionMode::open)) == DirectionMode::open);
}

TEST_CASE("segment geometry") {
    const SegmentCrack c({1.0, 2.0}, 0.5, kPi / 2);
    CHECK(distance(c.point(-1.0), {1.0, 1.5}) < 1e-15);
    CHECK(distance(c.point(1.0), {1.0, 2.5}) < 1e-15);
    CHECK(c.length() == doctest::Approx(1.0));
    CHECK_FALSE(c.is_small(kTwoPi / 0.5));
    CHECK(SegmentCrack({0, 0}, 0.05, 0.0).is_small(kTwoPi / 0.5));
}

TEST_CASE("parametric crack interpolates polynomials exactly") {
    const auto arc = ParametricCrack::from_function([](double s) { return Point2{s, s * s * s - 0.5 * s}; }, 9);
    for (double s : {-0.9, -0.31, 0.0, 0.42, 1.0}) {
        CHECK(distance(arc.point(s), {s, s * s * s - 0.5 * s}) < 1e-13);
        CHECK(distance(arc.derivative(s), {1.0, 3 * s * s - 0.5}) < 1e-12);
    }
    CHECK(distance(arc.start(), {-1.0, -0.5}) < 1e-14);
    CHECK(distance(arc.end(), {1.0, 0.5}) < 1e-14);
}

TEST_CASE("extended arc geometry") {
    const auto arc = scenarios::extended_arc();
    CHECK(distance(arc.start(), {-1.0, -0.2}) < 1e-14);
    CHECK(distance(arc.end(), {1.0, 0.2}) < 1e-14);
    CHECK(arc.arclength() == doctest::Approx(2.387898).epsilon(1e-6));
    const double s = 0.37;
    const double y = 0.5 * std::cos(0.5 * kPi * s) + 0.2 * std::sin(0.5 * kPi * s) - 0.1 * std::cos(1.5 * kPi * s);
    CHECK(distance(arc.point(s), {s, y}) < 1e-12);
}

TEST_CASE("three small cracks") {
    const auto cracks = scenarios::three_small_cracks(0.05);
    REQUIRE(cracks.size() == 3);
    CHECK(distance(crack_center(cracks[0]), {-0.6, -0.2}) < 1e-15);
    CHECK(distance(crack_center(cracks[1]), rotate({0.4, 0.35}, kPi / 4)) < 1e-15);
    CHECK(distance(crack_center(cracks[2]), rotate({0.25, -0.6}, 7 * kPi / 6)) < 1e-15);
    // Gamma_2: R(pi/4)[s+0.4, s+0.35] runs along (0, 1) with half-length sqrt(2) h
    CHECK(distance(crack_point(cracks[1], 1.0), rotate({0.45, 0.4}, kPi / 4)) < 1e-14);
    CHECK(distance(crack_point(cracks[2], 1.0), rotate({0.3, -0.55}, 7 * kPi / 6)) < 1e-14);
}

TEST_CASE("scene validation and separation") {
    Scene s{scenarios::three_small_cracks(), kTwoPi / 0.5};
    CHECK_NOTHROW(s.validate());
    CHECK(s.segments_only());
    CHECK(separation_ok(s).ok);
    CHECK_FALSE(separation_ok(s, 20.0).ok);
    CHECK_FALSE(separation_ok(s, 20.0).failing_pairs.empty());
    Scene empty{{}, 1.0};
    CHECK_THROWS_AS(empty.validate(), ArgumentError);
    Scene bad{scenarios::three_small_cracks(), -1.0};
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("incident plane wave") {
    const Complex u = incident_field({0.3, 0.1}, {0.6, 0.8}, 2.0);
    CHECK(std::abs(u - std::polar(1.0, 2.0 * (0.18 + 0.08))) < 1e-15);
    CHECK_THROWS_AS(incident_field({0, 0}, {1.0, 1.0}, 2.0), ArgumentError);
}
