#pragma once

#include <span>

#include "v2psim/rng.hpp"

namespace v2psim {

// OFDM numerology shared by every allocation: 12 subcarriers per resource
// block, 7 symbols per slot, 2 slots per 1 ms subframe.
struct ResourceGrid {
    int rb_count = 50;

    static ResourceGrid for_bandwidth_mhz(double bandwidth_mhz);
};

inline constexpr int kSubcarriersPerRb = 12;
inline constexpr int kSymbolsPerSlot = 7;
inline constexpr int kSlotsPerSubframe = 2;
inline constexpr double kSubframeMs = 1.0;
inline constexpr double kHarqRttMs = 8.0;

struct McsProfile {
    int modulation_bits = 4;  // 16-QAM
    double code_rate = 0.5;
};

// information bits one subframe carries on rb_count blocks
int bits_per_subframe(int rb_count, const McsProfile& mcs = {});

// whole subframes needed to move a packet; throws EmptyPacket for bits <= 0
double tx_duration_ms(int packet_bits, int rb_count, const McsProfile& mcs = {});

// Exponential effective SNR mapping: collapses per-block SNRs into the
// single value that would see the same block error rate on a flat channel.
// Exact identity on flat input; throws EmptyList on an empty span.
double effective_snr_db(std::span<const double> snr_db, double beta = 7.0);

// Logistic block-error curve, clamped away from 0 and 1 so HARQ chains
// never become deterministic.
struct BlerCurve {
    double k = 0.448;    // slope, 1/dB
    double s0 = -4.90;   // 50% error point, dB

    double at(double snr_db) const;
};

struct HarqOutcome {
    bool delivered = false;
    int attempts = 0;
    double added_delay_ms = 0.0;  // retransmission round trips beyond the first try
};

// independent-attempt HARQ: each try fails with the given probability, each
// retry costs one fixed round trip
HarqOutcome transmit_with_harq(double fail_prob, int max_attempts, rng::Engine& eng);
HarqOutcome transmit_with_harq(double effective_snr_db, const BlerCurve& curve, int max_attempts,
                               rng::Engine& eng);

}  // namespace v2psim
