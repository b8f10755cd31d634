#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "v2psim/errors.hpp"
#include "v2psim/linkphy.hpp"
#include "v2psim/rng.hpp"

using namespace v2psim;

TEST_CASE("resource grid follows the standard bandwidth table") {
    CHECK(ResourceGrid::for_bandwidth_mhz(1.4).rb_count == 6);
    CHECK(ResourceGrid::for_bandwidth_mhz(3.0).rb_count == 15);
    CHECK(ResourceGrid::for_bandwidth_mhz(5.0).rb_count == 25);
    CHECK(ResourceGrid::for_bandwidth_mhz(10.0).rb_count == 50);
    CHECK(ResourceGrid::for_bandwidth_mhz(15.0).rb_count == 75);
    CHECK(ResourceGrid::for_bandwidth_mhz(20.0).rb_count == 100);
    CHECK_THROWS_AS(ResourceGrid::for_bandwidth_mhz(7.0), AllocationOutOfRange);
}

TEST_CASE("subframe capacity scales with blocks, modulation and code rate") {
    CHECK(bits_per_subframe(50) == 16800);  // 50 RB, 16-QAM, rate 1/2
    CHECK(bits_per_subframe(1) == 336);
    CHECK(bits_per_subframe(50, McsProfile{2, 1.0 / 3.0}) == 5600);  // QPSK, rate 1/3
}

TEST_CASE("transmission time is a whole number of subframes") {
    CHECK(tx_duration_ms(10000, 50) == doctest::Approx(1.0));
    CHECK(tx_duration_ms(10000, 5) == doctest::Approx(6.0));  // 1680 bits per subframe
    CHECK(tx_duration_ms(1, 50) == doctest::Approx(1.0));
    CHECK(tx_duration_ms(16801, 50) == doctest::Approx(2.0));
    CHECK_THROWS_AS(tx_duration_ms(0, 50), EmptyPacket);
    CHECK_THROWS_AS(tx_duration_ms(-4, 50), EmptyPacket);
}

TEST_CASE("effective SNR is exact on a flat channel") {
    const std::array<double, 4> flat{3.7, 3.7, 3.7, 3.7};
    CHECK(effective_snr_db(flat) == doctest::Approx(3.7).epsilon(1e-12));
    const std::array<double, 1> one{-11.25};
    CHECK(effective_snr_db(one) == doctest::Approx(-11.25).epsilon(1e-12));
}

TEST_CASE("effective SNR of a dispersive channel sits strictly inside the extremes") {
    const std::array<double, 2> two{0.0, 20.0};

    // independent evaluation of the exponential mapping for two blocks
    const double beta = 7.0;
    const double s_lo = std::pow(10.0, 0.0 / 10.0);
    const double s_hi = std::pow(10.0, 20.0 / 10.0);
    const double mean = 0.5 * (std::exp(-s_lo / beta) + std::exp(-s_hi / beta));
    const double expected = 10.0 * std::log10(-beta * std::log(mean));

    const double got = effective_snr_db(two);
    CHECK(got == doctest::Approx(expected).epsilon(1e-9));
    CHECK(got == doctest::Approx(7.673).epsilon(3e-4));
    CHECK(got > 0.0);
    CHECK(got < 20.0);
}

TEST_CASE("effective SNR is bounded by min and max for random inputs") {
    rng::Engine eng = rng::make_stream(5, "phy");
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> snrs(1 + static_cast<std::size_t>(rng::uniform(eng, 0.0, 49.0)));
        double lo = 1e9, hi = -1e9;
        for (double& s : snrs) {
            s = rng::uniform(eng, -25.0, 35.0);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        const double eff = effective_snr_db(snrs);
        CHECK(eff >= lo - 1e-9);
        CHECK(eff <= hi + 1e-9);
    }
    CHECK_THROWS_AS(effective_snr_db(std::span<const double>{}), EmptyList);
}

TEST_CASE("block error curve is logistic with clamped tails") {
    const BlerCurve curve;
    CHECK(curve.at(curve.s0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(curve.at(-8.0) == doctest::Approx(0.80040).epsilon(2e-5));
    CHECK(curve.at(0.0) == doctest::Approx(0.1002).epsilon(2e-3));
    CHECK(curve.at(60.0) == doctest::Approx(1e-6).epsilon(1e-9));
    CHECK(curve.at(-60.0) == doctest::Approx(1.0 - 1e-6).epsilon(1e-9));
    for (double s = -20.0; s < 20.0; s += 0.5)
        CHECK(curve.at(s + 0.5) < curve.at(s));  // monotone decreasing
}

TEST_CASE("harq outcomes at the deterministic ends") {
    rng::Engine eng = rng::make_stream(1, "phy");
    SUBCASE("perfect channel delivers on the first try") {
        for (int i = 0; i < 32; ++i) {
            const HarqOutcome out = transmit_with_harq(0.0, 4, eng);
            CHECK(out.delivered);
            CHECK(out.attempts == 1);
            CHECK(out.added_delay_ms == 0.0);
        }
    }
    SUBCASE("certain failure exhausts every attempt") {
        for (int i = 0; i < 32; ++i) {
            const HarqOutcome out = transmit_with_harq(1.0, 3, eng);
            CHECK_FALSE(out.delivered);
            CHECK(out.attempts == 3);
            CHECK(out.added_delay_ms == doctest::Approx(2.0 * kHarqRttMs));
        }
    }
}

TEST_CASE("harq statistics match the independent-attempt closed form") {
    // p = 0.5, 4 attempts: P(delivered) = 1 - p^4 = 0.9375,
    // E[attempts] = sum_{k=0}^{3} p^k = 1.875
    rng::Engine eng = rng::make_stream(42, "phy");
    const int trials = 200000;
    long delivered = 0;
    long attempts = 0;
    for (int i = 0; i < trials; ++i) {
        const HarqOutcome out = transmit_with_harq(0.5, 4, eng);
        delivered += out.delivered ? 1 : 0;
        attempts += out.attempts;
    }
    const double p_del = static_cast<double>(delivered) / trials;
    const double mean_att = static_cast<double>(attempts) / trials;
    CHECK(p_del == doctest::Approx(0.9375).epsilon(0.006));
    CHECK(mean_att == doctest::Approx(1.875).epsilon(0.006));
}

TEST_CASE("snr-driven harq overload agrees with the curve") {
    const BlerCurve curve;
    const double snr = -4.90;  // 50% point
    rng::Engine a = rng::make_stream(9, "phy");
    rng::Engine b = rng::make_stream(9, "phy");
    for (int i = 0; i < 64; ++i) {
        const HarqOutcome via_snr = transmit_with_harq(snr, curve, 4, a);
        const HarqOutcome via_prob = transmit_with_harq(curve.at(snr), 4, b);
        CHECK(via_snr.delivered == via_prob.delivered);
        CHECK(via_snr.attempts == via_prob.attempts);
    }
}
