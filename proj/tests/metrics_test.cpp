#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "v2psim/errors.hpp"
#include "v2psim/metrics.hpp"

using namespace v2psim;

namespace {

SimulationResult tiny_result() {
    SimulationResult r;
    PacketRecord pkt;
    for (double e2e : {10.0, 20.0, 30.0}) {
        ReceiverOutcome rx;
        rx.delivered = true;
        rx.e2e_ms = e2e;
        pkt.receivers.push_back(rx);
    }
    ReceiverOutcome lost;  // undelivered outcomes never enter the mean
    pkt.receivers.push_back(lost);
    r.packets.push_back(pkt);
    r.attempted = 4;
    r.delivered = 3;
    return r;
}

}  // namespace

TEST_CASE("summarize averages delivered outcomes only") {
    const RunMetrics m = summarize(tiny_result());
    CHECK(m.mean_e2e_ms == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(m.delivered == 3);
    CHECK(m.attempted == 4);
    CHECK(m.pdr == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("summarize refuses an empty delivery set") {
    SimulationResult r;
    r.packets.emplace_back();
    r.attempted = 2;
    CHECK_THROWS_AS(summarize(r), NoDeliveredPackets);
}

TEST_CASE("aggregate reports mean and standard error of per-run means") {
    const std::array<double, 2> two{10.0, 30.0};
    const Aggregate a = aggregate(two);
    CHECK(a.mean == doctest::Approx(20.0).epsilon(1e-12));
    // sample sd = sqrt(200) = 14.142..., stderr = sd / sqrt(2) = 10
    CHECK(a.stderr_ == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(a.runs == 2);

    const std::array<double, 1> one{42.0};
    const Aggregate single = aggregate(one);
    CHECK(single.mean == doctest::Approx(42.0));
    CHECK(single.stderr_ == 0.0);
    CHECK(single.runs == 1);

    CHECK_THROWS_AS(aggregate(std::span<const double>{}), EmptyList);
}

TEST_CASE("aggregate is permutation invariant") {
    const std::array<double, 5> fwd{3.5, 1.25, -2.0, 7.75, 0.5};
    std::array<double, 5> rev = fwd;
    std::reverse(rev.begin(), rev.end());
    const Aggregate a = aggregate(fwd);
    const Aggregate b = aggregate(rev);
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
    CHECK(a.stderr_ == doctest::Approx(b.stderr_).epsilon(1e-12));
}

TEST_CASE("latency gain of the edge deployment") {
    CHECK(mec_gain(62.0, 15.0) == doctest::Approx(47.0 / 62.0).epsilon(1e-12));
    CHECK(mec_gain(50.0, 50.0) == 0.0);
    CHECK_THROWS_AS(mec_gain(0.0, 10.0), NoDeliveredPackets);
    CHECK_THROWS_AS(mec_gain(-1.0, 10.0), NoDeliveredPackets);
}

TEST_CASE("rank correlation on clean and tied data") {
    const std::array<double, 4> up{1.0, 2.0, 3.0, 4.0};
    const std::array<double, 4> up2{10.0, 20.0, 40.0, 80.0};
    std::array<double, 4> down = up2;
    std::reverse(down.begin(), down.end());
    CHECK(spearman_rho(up, up2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spearman_rho(up, down) == doctest::Approx(-1.0).epsilon(1e-12));

    // tie gets the average rank: rho = sqrt(3)/2 for {1,1,2} vs {5,7,9}
    const std::array<double, 3> tied{1.0, 1.0, 2.0};
    const std::array<double, 3> ys{5.0, 7.0, 9.0};
    CHECK(spearman_rho(tied, ys) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));

    const std::array<double, 3> flat{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(spearman_rho(flat, ys), EmptyList);
    const std::array<double, 1> shorty{1.0};
    CHECK_THROWS_AS(spearman_rho(shorty, shorty), EmptyList);
    const std::array<double, 2> mismatched{1.0, 2.0};
    CHECK_THROWS_AS(spearman_rho(mismatched, ys), EmptyList);
}

TEST_CASE("single-attempt delivery sweep matches the error curve") {
    const BlerCurve curve;
    const std::array<double, 3> snrs{-8.0, 0.0, 10.0};
    const std::vector<SnrPoint> pts = sweep_pdr_snr(snrs, 20000, curve, 1);
    REQUIRE(pts.size() == 3);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].snr_db == doctest::Approx(snrs[i]));
        const double expected = 1.0 - curve.at(snrs[i]);
        CHECK(pts[i].pdr == doctest::Approx(expected).epsilon(0.05));
        const double se = std::sqrt(pts[i].pdr * (1.0 - pts[i].pdr) / 20000.0);
        CHECK(pts[i].stderr_ == doctest::Approx(se).epsilon(1e-12));
    }
    // better channel, better delivery
    CHECK(pts[0].pdr < pts[1].pdr);
    CHECK(pts[1].pdr < pts[2].pdr);
}

TEST_CASE("snr sweep is trial-count and seed deterministic") {
    const BlerCurve curve;
    const std::array<double, 2> snrs{-5.0, 5.0};
    const std::vector<SnrPoint> a = sweep_pdr_snr(snrs, 5000, curve, 9);
    const std::vector<SnrPoint> b = sweep_pdr_snr(snrs, 5000, curve, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].pdr == b[i].pdr);
    CHECK_THROWS_AS(sweep_pdr_snr(std::span<const double>{}, 10, curve, 1), EmptyList);
    CHECK_THROWS_AS(sweep_pdr_snr(snrs, 0, curve, 1), EmptyList);
}

TEST_CASE("density sweep is schedule independent and ordered") {
    ScenarioConfig base;
    base.sim_duration_s = 2.0;
    base.vru_count = 6;
    base.seed = 5;
    const std::array<double, 2> densities{0.01, 0.02};

    const std::vector<DensityPoint> serial = sweep_density(base, densities, 3, 1);
    const std::vector<DensityPoint> threaded = sweep_density(base, densities, 3, 4);

    REQUIRE(serial.size() == 4);  // two densities x two modes
    CHECK(serial[0].density == doctest::Approx(0.01));
    CHECK(serial[0].mode == NetworkMode::conventional);
    CHECK(serial[1].density == doctest::Approx(0.01));
    CHECK(serial[1].mode == NetworkMode::mec);
    CHECK(serial[2].density == doctest::Approx(0.02));
    CHECK(serial[3].density == doctest::Approx(0.02));

    REQUIRE(threaded.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].mean_ms == threaded[i].mean_ms);  // bitwise: seeds pre-derived
        CHECK(serial[i].stderr_ms == threaded[i].stderr_ms);
        CHECK(serial[i].pdr == threaded[i].pdr);
        CHECK(serial[i].runs == 3);
    }

    // the edge deployment must beat the conventional core at every density
    CHECK(serial[1].mean_ms < serial[0].mean_ms);
    CHECK(serial[3].mean_ms < serial[2].mean_ms);

    CHECK_THROWS_AS(sweep_density(base, std::span<const double>{}, 1, 1), EmptyList);
    CHECK_THROWS_AS(sweep_density(base, densities, 0, 1), EmptyList);
}

TEST_CASE("table writers format points verbatim") {
    DensityPoint d;
    d.density = 0.05;
    d.mode = NetworkMode::conventional;
    d.mean_ms = 67.5;
    d.stderr_ms = 0.25;
    d.pdr = 0.9375;
    d.runs = 100;
    const std::array<DensityPoint, 1> dp{d};

    std::stringstream csv;
    write_density_csv(dp, csv);
    CHECK(csv.str() ==
          "density,mode,mean_ms,stderr_ms,pdr,runs\n"
          "0.050000,conventional,67.500000,0.250000,0.937500,100\n");

    std::stringstream dat;
    write_density_dat(dp, dat);
    CHECK(dat.str() ==
          "# density mode mean_ms stderr_ms pdr runs\n"
          "0.050000 conventional 67.500000 0.250000 0.937500 100\n");

    SnrPoint s;
    s.snr_db = -8.0;
    s.pdr = 0.1996;
    s.stderr_ = 0.00126;
    const std::array<SnrPoint, 1> sp{s};

    std::stringstream scsv;
    write_snr_csv(sp, scsv);
    CHECK(scsv.str() ==
          "snr_db,pdr,stderr\n"
          "-8.000000,0.199600,0.001260\n");

    std::stringstream sdat;
    write_snr_dat(sp, sdat);
    CHECK(sdat.str() ==
          "# snr_db pdr stderr\n"
          "-8.000000 0.199600 0.001260\n");
}
