#include "v2psim/linkphy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "v2psim/errors.hpp"

namespace v2psim {

ResourceGrid ResourceGrid::for_bandwidth_mhz(double bandwidth_mhz) {
    struct Entry {
        double mhz;
        int rbs;
    };
    static constexpr Entry table[] = {{1.4, 6}, {3.0, 15}, {5.0, 25},
                                      {10.0, 50}, {15.0, 75}, {20.0, 100}};
    for (const Entry& e : table)
        if (std::abs(bandwidth_mhz - e.mhz) < 1e-9) return ResourceGrid{e.rbs};
    throw AllocationOutOfRange("no standard resource grid for " + std::to_string(bandwidth_mhz) +
                               " MHz");
}

int bits_per_subframe(int rb_count, const McsProfile& mcs) {
    if (rb_count <= 0)
        throw AllocationOutOfRange("allocation of " + std::to_string(rb_count) +
                                   " resource blocks");
    const double bits = static_cast<double>(rb_count) * kSubcarriersPerRb * kSymbolsPerSlot *
                        kSlotsPerSubframe * mcs.modulation_bits * mcs.code_rate;
    return static_cast<int>(std::llround(bits));
}

double tx_duration_ms(int packet_bits, int rb_count, const McsProfile& mcs) {
    if (packet_bits <= 0)
        throw EmptyPacket("packet of " + std::to_string(packet_bits) + " bits");
    const int per_subframe = bits_per_subframe(rb_count, mcs);
    const int subframes = (packet_bits + per_subframe - 1) / per_subframe;
    return subframes * kSubframeMs;
}

double effective_snr_db(std::span<const double> snr_db, double beta) {
    if (snr_db.empty()) throw EmptyList("effective SNR over zero blocks");
    // the smallest dB value is also the smallest linear value, so the shift
    // reference costs one extra exp instead of a second pass
    constexpr double kDbToNat = std::numbers::ln10 / 10.0;
    double min_db = std::numeric_limits<double>::infinity();
    for (double s : snr_db) min_db = std::min(min_db, s);
    const double min_linear = std::exp(min_db * kDbToNat);
    // shift by the smallest exponent so the sum cannot underflow, and so a
    // flat input reduces to exactly that input
    double acc = 0.0;
    for (double s : snr_db) acc += std::exp(-(std::exp(s * kDbToNat) - min_linear) / beta);
    const double effective_linear =
        min_linear - beta * std::log(acc / static_cast<double>(snr_db.size()));
    return 10.0 * std::log10(effective_linear);
}

double BlerCurve::at(double snr_db) const {
    const double p = 1.0 / (1.0 + std::exp(k * (snr_db - s0)));
    return std::clamp(p, 1e-6, 1.0 - 1e-6);
}

HarqOutcome transmit_with_harq(double fail_prob, int max_attempts, rng::Engine& eng) {
    HarqOutcome out;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        out.attempts = attempt;
        if (rng::uniform01(eng) >= fail_prob) {
            out.delivered = true;
            out.added_delay_ms = (attempt - 1) * kHarqRttMs;
            return out;
        }
    }
    out.delivered = false;
    out.attempts = max_attempts;
    out.added_delay_ms = (max_attempts - 1) * kHarqRttMs;
    return out;
}

HarqOutcome transmit_with_harq(double effective_snr_db, const BlerCurve& curve, int max_attempts,
                               rng::Engine& eng) {
    return transmit_with_harq(curve.at(effective_snr_db), max_attempts, eng);
}

}  // namespace v2psim
