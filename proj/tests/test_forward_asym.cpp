#include <doctest.h>

#include "crackmusic/forward_asym.hpp"
#include "crackmusic/music.hpp"

using namespace crackmusic;

namespace {
Scene paper_scene() { return {scenarios::three_small_cracks(0.05), kTwoPi / 0.5}; }
}

TEST_CASE("asymptotic MSR matrix is exactly symmetric") {
    const auto k = assemble_msr(paper_scene(), 0.05, make_directions(16));
    CHECK(k.size() == 16);
    CHECK(k.provenance == Provenance::asymptotic);
    CHECK(k.crack_scale.value() == 0.05);
    CHECK(symmetry_defect(k.entries) == 0.0);
}

TEST_CASE("asymptotic MSR matrix has rank equal to the crack count") {
    const auto k = assemble_msr(paper_scene(), 0.05, make_directions(16));
    const auto sv = svd_msr(k).singular_values;
    CHECK(sv(2) / sv(0) > 1e-3);
    CHECK(sv(3) / sv(0) < 1e-8);
}

TEST_CASE("single crack entries follow the plane-wave product") {
    const double wn = 10.0;
    const double h = 0.01;
    const Point2 z{0.2, -0.4};
    const Scene s{{SegmentCrack(z, h, 0.3)}, wn};
    const Point2 obs{0.6, 0.8};
    const Point2 inc{1.0, 0.0};
    const Complex c = -kTwoPi / std::log(h / 2.0);
    const Complex expected = c * std::polar(1.0, wn * dot(inc - obs, z));
    CHECK(std::abs(farfield_asym(obs, inc, s, h) - expected) < 1e-14);
}

TEST_CASE("asymptotic model preconditions") {
    CHECK_THROWS_AS(assemble_msr(paper_scene(), 0.0, make_directions(8)), ArgumentError);
    CHECK_THROWS_AS(assemble_msr(paper_scene(), 2.5, make_directions(8)), ArgumentError);
    const Scene arc{{scenarios::extended_arc()}, 10.0};
    CHECK_THROWS_AS(assemble_msr(arc, 0.05, make_directions(8)), ArgumentError);
}

TEST_CASE("steering factor reproduces K") {
    const auto dirs = make_directions(12);
    const auto k = assemble_msr(paper_scene(), 0.05, dirs);
    const CMatrix a = steering_factor(paper_scene(), dirs);
    CHECK(a.rows() == 12);
    CHECK(a.cols() == 3);
    const Complex c = -kTwoPi / std::log(0.025);
    CHECK((c * a * a.transpose() - k.entries).norm() < 1e-12 * k.entries.norm());
}
