#include <doctest.h>

#include <cmath>

#include "crackmusic/forward_asym.hpp"
#include "crackmusic/noise.hpp"

using namespace crackmusic;

namespace {
MsrMatrix clean(std::size_t n = 32) {
    return assemble_msr(Scene{scenarios::three_small_cracks(), kTwoPi / 0.5}, 0.05, make_directions(n));
}
}

TEST_CASE("same seed gives identical noise") {
    const auto k = clean();
    const auto a = add_awgn(k, 20.0, 7);
    const auto b = add_awgn(k, 20.0, 7);
    CHECK(a.entries == b.entries);
    CHECK(a.snr_db.value() == 20.0);
    CHECK(a.seed.value() == 7);
    CHECK_FALSE(add_awgn(k, 20.0, 8).entries == a.entries);
}

TEST_CASE("measured SNR matches the requested level") {
    const auto k = clean();
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        for (double snr : {10.0, 20.0, 30.0}) {
            const double measured = measured_snr_db(k.entries, add_awgn(k, snr, seed).entries);
            CHECK(std::abs(measured - snr) < 0.5);
        }
    }
}

TEST_CASE("noise-free level leaves the data untouched") {
    const auto k = clean(8);
    const auto out = add_awgn(k, kNoiseFree, 3);
    CHECK(out.entries == k.entries);
    CHECK_FALSE(out.snr_db.has_value());
}

TEST_CASE("noise is circular: real and imaginary parts carry equal power") {
    const auto k = clean(64);
    const CMatrix e = add_awgn(k, 0.0, 11).entries - k.entries;
    const double re = e.real().squaredNorm();
    const double im = e.imag().squaredNorm();
    CHECK(std::abs(re / im - 1.0) < 0.1);
}

TEST_CASE("invalid noise requests") {
    const auto k = clean(8);
    CHECK_THROWS_AS(add_awgn(k, std::nan(""), 1), ArgumentError);
    CHECK_THROWS_AS(add_awgn(k, -kNoiseFree, 1), ArgumentError);
    CHECK_THROWS_AS(measured_snr_db(k.entries, CMatrix::Zero(3, 3)), ArgumentError);
}
