#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "v2psim/channel.hpp"
#include "v2psim/errors.hpp"
#include "v2psim/rng.hpp"

using namespace v2psim;

TEST_CASE("doppler frequency follows v/c * fc") {
    CHECK(doppler_frequency_hz(80.0, 5.9) == doctest::Approx(437.34).epsilon(0.0003));
    CHECK(doppler_frequency_hz(3.0, 5.9) == doctest::Approx(16.40).epsilon(0.003));
    CHECK(doppler_frequency_hz(0.0, 5.9) == 0.0);
}

TEST_CASE("tap profiles carry the published delay lines") {
    const TapProfile& epa = TapProfile::epa();
    REQUIRE(epa.delay_ns.size() == 7);
    REQUIRE(epa.power_db.size() == 7);
    CHECK(epa.delay_ns.front() == 0.0);
    CHECK(epa.power_db.front() == 0.0);
    CHECK(epa.delay_ns.back() == doctest::Approx(410.0));

    const TapProfile& eva = TapProfile::eva();
    REQUIRE(eva.delay_ns.size() == 9);
    REQUIRE(eva.power_db.size() == 9);
    CHECK(eva.delay_ns.back() == doctest::Approx(2510.0));
    CHECK(eva.power_db.back() == doctest::Approx(-16.9));
}

TEST_CASE("fading grid has ceil(duration/interval) rows and averages 0 dB") {
    rng::Engine eng = rng::make_stream(7, "fading/epa");
    const FadingTrace tr = generate_fading_trace(TapProfile::epa(), 100.0, 10000.0, 1.0, 50, eng);
    REQUIRE(tr.rows() == 10000);
    REQUIRE(tr.rb_count() == 50);
    CHECK(tr.profile_name == "EPA");
    CHECK(tr.doppler_hz == doctest::Approx(100.0));

    // unit mean power per resource block (linear average of the dB samples)
    for (std::size_t rb = 0; rb < tr.rb_count(); ++rb) {
        double acc = 0.0;
        for (std::size_t row = 0; row < tr.rows(); ++row)
            acc += std::pow(10.0, tr.gain_db(row, rb) / 10.0);
        const double mean_db = 10.0 * std::log10(acc / static_cast<double>(tr.rows()));
        CHECK(std::abs(mean_db) <= 0.5);
    }
}

TEST_CASE("a single-tap channel is frequency flat") {
    const TapProfile flat{"flat", {0.0}, {0.0}};
    rng::Engine eng = rng::make_stream(9, "fading/epa");
    const FadingTrace tr = generate_fading_trace(flat, 50.0, 100.0, 1.0, 10, eng);
    for (std::size_t row = 0; row < tr.rows(); ++row)
        for (std::size_t rb = 1; rb < tr.rb_count(); ++rb)
            CHECK(tr.gain_db(row, rb) == doctest::Approx(tr.gain_db(row, 0)).epsilon(1e-9));
}

TEST_CASE("zero doppler freezes the channel in time") {
    rng::Engine eng = rng::make_stream(13, "fading/eva");
    const FadingTrace tr = generate_fading_trace(TapProfile::eva(), 0.0, 100.0, 1.0, 6, eng);
    for (std::size_t row = 1; row < tr.rows(); ++row)
        for (std::size_t rb = 0; rb < tr.rb_count(); ++rb)
            CHECK(tr.gain_db(row, rb) == tr.gain_db(0, rb));
}

TEST_CASE("fading envelope is Rayleigh distributed") {
    rng::Engine eng = rng::make_stream(17, "fading/eva");
    const FadingTrace tr =
        generate_fading_trace(TapProfile::eva(), 437.34, 20000.0, 1.0, 1, eng);
    std::vector<double> amp(tr.rows());
    double power = 0.0;
    for (std::size_t row = 0; row < tr.rows(); ++row) {
        amp[row] = std::pow(10.0, tr.gain_db(row, 0) / 20.0);
        power += amp[row] * amp[row];
    }
    const double sigma2 = power / (2.0 * static_cast<double>(amp.size()));
    std::sort(amp.begin(), amp.end());
    double d_stat = 0.0;
    const double n = static_cast<double>(amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double cdf = 1.0 - std::exp(-amp[i] * amp[i] / (2.0 * sigma2));
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i) / n));
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i + 1) / n));
    }
    CHECK(d_stat < 0.02);
}

TEST_CASE("tap autocorrelation tracks the zeroth Bessel function") {
    const double fd = 100.0;
    const double dt = 0.5e-3;
    const int samples = 400;
    const int realizations = 100;
    const int max_lag = 8;

    std::vector<double> t_s(samples);
    for (int k = 0; k < samples; ++k) t_s[static_cast<std::size_t>(k)] = k * dt;

    rng::Engine eng = rng::make_stream(23, "fading/offsets");
    std::vector<double> num(static_cast<std::size_t>(max_lag) + 1, 0.0);
    std::vector<double> den(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int r = 0; r < realizations; ++r) {
        const std::vector<std::complex<double>> h = synth_tap_process(fd, t_s, eng);
        for (int lag = 0; lag <= max_lag; ++lag) {
            for (int k = 0; k + lag < samples; ++k) {
                const auto& a = h[static_cast<std::size_t>(k)];
                const auto& b = h[static_cast<std::size_t>(k + lag)];
                num[static_cast<std::size_t>(lag)] += (a * std::conj(b)).real();
                den[static_cast<std::size_t>(lag)] += std::norm(a);
            }
        }
    }
    for (int lag = 1; lag <= max_lag; ++lag) {
        const double rho = num[static_cast<std::size_t>(lag)] / den[static_cast<std::size_t>(lag)];
        const double expected = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * lag * dt);
        CHECK(std::abs(rho - expected) <= 0.05);
    }
}

TEST_CASE("path loss anchors at the 1 m free-space intercept") {
    CHECK(pathloss_db(1.0, 5.9) == doctest::Approx(47.9).epsilon(0.002));
    // urban exponent: two decades add 54 dB
    CHECK(pathloss_db(100.0, 5.9) - pathloss_db(1.0, 5.9) == doctest::Approx(54.0).epsilon(1e-9));
    // explicit exponent override
    CHECK(pathloss_db(10.0, 5.9, 2.0) - pathloss_db(1.0, 5.9, 2.0) ==
          doctest::Approx(20.0).epsilon(1e-9));
    CHECK_THROWS_AS(pathloss_db(0.0, 5.9), NonpositiveDistance);
    CHECK_THROWS_AS(pathloss_db(-5.0, 5.9), NonpositiveDistance);
}

TEST_CASE("thermal noise floor") {
    CHECK(noise_floor_dbm(10.0) == doctest::Approx(-95.0).epsilon(1e-9));
    CHECK(noise_floor_dbm(1e-6) == doctest::Approx(-165.0).epsilon(1e-9));  // 1 Hz
    CHECK(noise_floor_dbm(20.0) == doctest::Approx(-91.99).epsilon(0.0001));
}

TEST_CASE("link SNR composes the budget terms") {
    CHECK(link_snr_db(23.0, 80.0, -2.0, -95.0) == 36.0);
    CHECK(link_snr_db(0.0, 0.0, 0.0, 0.0) == 0.0);
    CHECK(link_snr_db(46.0, 100.0, 3.5, -95.0) == doctest::Approx(44.5).epsilon(1e-12));
}

TEST_CASE("binary fading grids round-trip bit for bit") {
    rng::Engine eng = rng::make_stream(31, "fading/eva");
    const FadingTrace tr = generate_fading_trace(TapProfile::eva(), 30.0, 17.0, 1.0, 3, eng);
    std::stringstream buf;
    write_fading_binary(tr, buf);
    const FadingTrace back = read_fading_binary(buf);
    REQUIRE(back.rows() == tr.rows());
    REQUIRE(back.rb_count() == tr.rb_count());
    CHECK(back.raw() == tr.raw());  // bitwise
}

TEST_CASE("binary reader rejects damaged grids") {
    rng::Engine eng = rng::make_stream(31, "fading/eva");
    const FadingTrace tr = generate_fading_trace(TapProfile::eva(), 30.0, 17.0, 1.0, 3, eng);
    std::stringstream buf;
    write_fading_binary(tr, buf);
    const std::string whole = buf.str();

    SUBCASE("truncated payload") {
        std::stringstream cut(whole.substr(0, whole.size() / 2));
        CHECK_THROWS_AS(read_fading_binary(cut), FadingTooShort);
    }
    SUBCASE("truncated header") {
        std::stringstream cut(whole.substr(0, 9));
        CHECK_THROWS_AS(read_fading_binary(cut), FadingTooShort);
    }
    SUBCASE("implausible dimensions") {
        std::string zeroed = whole;
        for (int i = 0; i < 8; ++i) zeroed[static_cast<std::size_t>(i)] = '\0';  // rows = 0
        std::stringstream cut(zeroed);
        CHECK_THROWS_AS(read_fading_binary(cut), FadingTooShort);
    }
}

TEST_CASE("grid lookups are bounds-checked") {
    FadingTrace tr(4, 2, 1.0);
    CHECK(tr.gain_db(3, 1) == 0.0);
    CHECK_THROWS_AS(tr.gain_db(4, 0), FadingTooShort);
    CHECK_THROWS_AS(tr.gain_db(0, 2), FadingTooShort);
}

TEST_CASE("metadata sidecar names the synthesis parameters") {
    rng::Engine eng = rng::make_stream(31, "fading/eva");
    const FadingTrace tr = generate_fading_trace(TapProfile::eva(), 30.0, 17.0, 1.0, 3, eng);
    std::stringstream meta;
    write_fading_metadata(tr, meta);
    const std::string text = meta.str();
    CHECK(text.find("profile = EVA") != std::string::npos);
    CHECK(text.find("doppler_hz = 30.000000") != std::string::npos);
    CHECK(text.find("sample_interval_ms = 1.000000") != std::string::npos);
    CHECK(text.find("rb_count = 3") != std::string::npos);
    CHECK(text.find("rows = 17") != std::string::npos);
}

TEST_CASE("fading csv starts with its header row") {
    FadingTrace tr(1, 2, 1.0);
    tr.gain_db(0, 0) = -3.0;
    tr.gain_db(0, 1) = 1.5;
    std::stringstream out;
    write_fading_csv(tr, out);
    std::string line;
    REQUIRE(std::getline(out, line));
    CHECK(line == "t_ms,rb,gain_db");
    REQUIRE(std::getline(out, line));
    CHECK(line == "0.000000,0,-3.000000");
}

TEST_CASE("degenerate grid requests are rejected") {
    rng::Engine eng = rng::make_stream(1, "fading/epa");
    CHECK_THROWS_AS(generate_fading_trace(TapProfile::epa(), 10.0, 0.0, 1.0, 1, eng),
                    FadingTooShort);
    CHECK_THROWS_AS(generate_fading_trace(TapProfile::epa(), 10.0, 5.0, -1.0, 1, eng),
                    FadingTooShort);
    CHECK_THROWS_AS(generate_fading_trace(TapProfile::epa(), 10.0, 5.0, 1.0, 0, eng),
                    FadingTooShort);
}
