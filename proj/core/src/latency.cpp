#include "v2psim/latency.hpp"

namespace v2psim {

double one_way_latency_ms(const LatencyBreakdown& b) {
    return b.t_ul + b.t_bh + b.t_tn + b.t_cn + b.t_exc;
}

double e2e_latency_ms(const LatencyBreakdown& b) {
    return b.t_ul + 2.0 * (b.t_bh + b.t_tn + b.t_cn) + b.t_exc + b.t_dl;
}

void LatencyModel::sample_network(rng::Engine& eng, double& t_bh, double& t_tn,
                                  double& t_cn) const {
    t_bh = rng::uniform(eng, kBackhaulMinMs, kBackhaulMaxMs);
    // transport and core are one joint draw split by share: an alert that
    // hits a congested path sees both legs slow together
    const double wired = rng::uniform(eng, kWiredNetworkMinMs, kWiredNetworkMaxMs);
    if (mode_ == NetworkMode::mec) {
        t_tn = 0.0;
        t_cn = 0.0;
    } else {
        t_tn = kTransportShare * wired;
        t_cn = (1.0 - kTransportShare) * wired;
    }
}

LatencyBreakdown LatencyModel::sample_breakdown(rng::Engine& eng, double ul_tx_ms,
                                                double ul_harq_added_ms, double dl_tx_ms,
                                                double dl_harq_added_ms,
                                                double grant_offset_ms) const {
    LatencyBreakdown b;
    b.t_ul = uplink_ms(ul_tx_ms, ul_harq_added_ms);
    sample_network(eng, b.t_bh, b.t_tn, b.t_cn);
    b.t_exc = kExchangeDelayMs;
    b.t_dl = downlink_ms(dl_tx_ms, dl_harq_added_ms, grant_offset_ms);
    return b;
}

}  // namespace v2psim
