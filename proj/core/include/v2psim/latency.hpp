#pragma once

#include "v2psim/rng.hpp"
#include "v2psim/scenario.hpp"

namespace v2psim {

// Additive delay components of one alert, all in milliseconds. The wired
// legs (backhaul, transport, core) are traversed twice: uplink toward the
// server and back down toward the radio.
struct LatencyBreakdown {
    double t_ul = 0.0;   // radio uplink: access wait + transmissions
    double t_bh = 0.0;   // eNodeB <-> aggregation backhaul, one direction
    double t_tn = 0.0;   // transport network toward the core, one direction
    double t_cn = 0.0;   // core network traversal, one direction
    double t_exc = 0.0;  // server message exchange/processing
    double t_dl = 0.0;   // radio downlink: scheduling wait + transmissions
};

double one_way_latency_ms(const LatencyBreakdown& b);
double e2e_latency_ms(const LatencyBreakdown& b);

inline constexpr double kUplinkAccessDelayMs = 4.0;
inline constexpr double kDownlinkSchedDelayMs = 1.0;
inline constexpr double kExchangeDelayMs = 2.0;
inline constexpr double kBackhaulMinMs = 1.0;
inline constexpr double kBackhaulMaxMs = 5.0;
inline constexpr double kWiredNetworkMinMs = 15.0;
inline constexpr double kWiredNetworkMaxMs = 35.0;
inline constexpr double kTransportShare = 0.4;  // transport/core split of the wired draw

// Draws the wired-side components for one alert. A server at the edge
// bypasses the transport and core legs entirely; the radio legs are supplied
// by the caller, which knows transmission times and retransmission counts.
class LatencyModel {
public:
    explicit LatencyModel(NetworkMode mode) : mode_(mode) {}

    NetworkMode mode() const { return mode_; }

    // backhaul plus the jointly drawn transport/core pair, one direction
    void sample_network(rng::Engine& eng, double& t_bh, double& t_tn, double& t_cn) const;

    static double uplink_ms(double tx_ms, double harq_added_ms) {
        return kUplinkAccessDelayMs + tx_ms + harq_added_ms;
    }
    static double downlink_ms(double tx_ms, double harq_added_ms, double grant_offset_ms) {
        return kDownlinkSchedDelayMs + grant_offset_ms + tx_ms + harq_added_ms;
    }

    LatencyBreakdown sample_breakdown(rng::Engine& eng, double ul_tx_ms, double ul_harq_added_ms,
                                      double dl_tx_ms, double dl_harq_added_ms,
                                      double grant_offset_ms) const;

private:
    NetworkMode mode_;
};

}  // namespace v2psim
