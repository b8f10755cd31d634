#include "v2psim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "v2psim/errors.hpp"

namespace v2psim {

namespace {

// vehicle-side fading is synthesized once per run at a fixed reference speed;
// per-link time offsets decorrelate the links that share it
constexpr double kVehicleDopplerRefKmh = 80.0;

std::size_t fading_row(const FadingTrace& fad, double t_s, std::size_t offset) {
    const double idx = std::floor(t_s * 1000.0 / fad.sample_interval_ms());
    return (static_cast<std::size_t>(idx) + offset) % fad.rows();
}

void fill_rb_snr(std::vector<double>& out, const FadingTrace& fad, std::size_t row,
                 double base_snr_db) {
    out.resize(fad.rb_count());
    for (std::size_t rb = 0; rb < fad.rb_count(); ++rb)
        out[rb] = base_snr_db + fad.gain_db(row, rb);
}

double node_distance(const MobilityTrace& trace, NodeId a, NodeId b, double t_s) {
    const MobilityTrace::State sa = trace.position_at(a, t_s);
    const MobilityTrace::State sb = trace.position_at(b, t_s);
    return std::max(std::hypot(sa.x_m - sb.x_m, sa.y_m - sb.y_m), 1.0);
}

// everything known about an in-flight packet between its events
struct PendingDelivery {
    double core_done_s = 0.0;
    std::vector<double> delivery_s;  // per delivered receiver, absolute time
};

}  // namespace

void EventQueue::push(double t_s, EventKind kind, std::uint32_t packet_id, NodeId node) {
    heap_.push(Event{t_s, next_seq_++, kind, packet_id, node});
}

Event EventQueue::pop() {
    if (heap_.empty()) throw EmptyQueue("pop from an empty event queue");
    Event e = heap_.top();
    heap_.pop();
    return e;
}

SimulationResult run_simulation(const ValidatedConfig& cfg) {
    rng::Engine mobility_eng = rng::make_stream(cfg->seed, "mobility");
    const MobilityTrace trace = generate_intersection_traffic(cfg, mobility_eng);
    return run_simulation(cfg, trace);
}

SimulationResult run_simulation(const ValidatedConfig& cfg, const MobilityTrace& trace) {
    if (trace.duration_s() + 1e-9 < cfg->sim_duration_s)
        throw TraceTooShort("trace covers " + std::to_string(trace.duration_s()) +
                            " s of a " + std::to_string(cfg->sim_duration_s) + " s run");
    const std::vector<NodeId> enbs = trace.nodes_of(NodeClass::enb);
    if (enbs.empty()) throw UnknownNode("trace has no eNodeB node");
    const NodeId enb = enbs.front();
    const std::vector<NodeId> vrus = trace.nodes_of(NodeClass::vru);

    const ResourceGrid grid = ResourceGrid::for_bandwidth_mhz(cfg->bandwidth_mhz);
    const McsProfile mcs;
    const BlerCurve curve{cfg->bler_k, cfg->bler_s0};
    const LatencyModel model(cfg->network_mode);

    // one fading realization per direction, shared by all links of that kind
    const double fading_ms = cfg->sim_duration_s * 1000.0 + 256.0;
    rng::Engine fad_ul_eng = rng::make_stream(cfg->seed, "fading/epa");
    rng::Engine fad_dl_eng = rng::make_stream(cfg->seed, "fading/eva");
    const FadingTrace ul_fading = generate_fading_trace(
        TapProfile::epa(), doppler_frequency_hz(cfg->pedestrian_speed_kmh, cfg->carrier_freq_ghz),
        fading_ms, 1.0, static_cast<std::size_t>(grid.rb_count), fad_ul_eng);
    const FadingTrace dl_fading = generate_fading_trace(
        TapProfile::eva(), doppler_frequency_hz(kVehicleDopplerRefKmh, cfg->carrier_freq_ghz),
        fading_ms, 1.0, static_cast<std::size_t>(grid.rb_count), fad_dl_eng);

    rng::Engine offset_eng = rng::make_stream(cfg->seed, "fading/offsets");
    std::unordered_map<NodeId, std::size_t> ul_offset;
    for (NodeId id : vrus)
        ul_offset[id] = static_cast<std::size_t>(rng::uniform01(offset_eng) * ul_fading.rows());
    std::unordered_map<NodeId, std::size_t> dl_offset;
    for (NodeId id : trace.nodes_of(NodeClass::vehicle))
        dl_offset[id] = static_cast<std::size_t>(rng::uniform01(offset_eng) * dl_fading.rows());

    // per-VRU Poisson alert arrivals, merged chronologically
    struct Arrival {
        double t_s;
        NodeId vru;
    };
    std::vector<Arrival> arrivals;
    for (NodeId id : vrus) {
        rng::Engine eng = rng::make_stream(cfg->seed, "traffic/" + std::to_string(id));
        double t = rng::exponential(eng, cfg->cam_rate_hz);
        while (t < cfg->sim_duration_s) {
            arrivals.push_back({t, id});
            t += rng::exponential(eng, cfg->cam_rate_hz);
        }
    }
    std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
        return a.t_s != b.t_s ? a.t_s < b.t_s : a.vru < b.vru;
    });

    rng::Engine wired_eng = rng::make_stream(cfg->seed, "wired");
    rng::Engine phy_eng = rng::make_stream(cfg->seed, "phy");
    const double noise_dbm = noise_floor_dbm(cfg->bandwidth_mhz);

    SimulationResult result;
    result.mode = cfg->network_mode;
    result.packets.resize(arrivals.size());
    std::vector<PendingDelivery> pending(arrivals.size());

    EventQueue queue;
    for (std::size_t i = 0; i < arrivals.size(); ++i)
        queue.push(arrivals[i].t_s, EventKind::packet_generated,
                   static_cast<std::uint32_t>(i), arrivals[i].vru);

    std::vector<double> rb_snr;
    const double ul_tx_ms = tx_duration_ms(cfg->packet_size_bits, grid.rb_count, mcs);
    const double dl_tx_ms = ul_tx_ms;

    while (!queue.empty()) {
        const Event ev = queue.pop();
        PacketRecord& pkt = result.packets[ev.packet_id];
        PendingDelivery& pend = pending[ev.packet_id];
        switch (ev.kind) {
            case EventKind::packet_generated: {
                pkt.packet_id = ev.packet_id;
                pkt.vru = ev.node;
                pkt.generated_at_s = ev.t_s;

                const MobilityTrace::State src = trace.position_at(ev.node, ev.t_s);
                std::vector<NodeId> receivers =
                    cfg->delivery_mode == DeliveryMode::broadcast
                        ? trace.in_range_vehicles(src.x_m, src.y_m, ev.t_s,
                                                  cfg->transmission_range_m)
                        : trace.nearest_vehicles(src.x_m, src.y_m, ev.t_s, cfg->nearest_k);
                result.attempted += static_cast<long>(receivers.size());

                // uplink try chain
                const double ul_pl =
                    pathloss_db(node_distance(trace, ev.node, enb, ev.t_s), cfg->carrier_freq_ghz);
                const double ul_base = link_snr_db(cfg->vru_tx_power_dbm, ul_pl, 0.0, noise_dbm);
                fill_rb_snr(rb_snr, ul_fading, fading_row(ul_fading, ev.t_s, ul_offset[ev.node]),
                            ul_base);
                const double ul_eff = effective_snr_db(rb_snr);
                const double ul_bler = curve.at(ul_eff);
                const double ul_fail =
                    ul_bler + cfg->collision_prob - ul_bler * cfg->collision_prob;
                const HarqOutcome ul =
                    transmit_with_harq(ul_fail, cfg->harq_max_attempts, phy_eng);

                double t_bh = 0.0, t_tn = 0.0, t_cn = 0.0;
                model.sample_network(wired_eng, t_bh, t_tn, t_cn);

                pkt.uplink_delivered = ul.delivered;
                pkt.uplink_attempts = ul.attempts;
                pkt.t_ul = LatencyModel::uplink_ms(ul_tx_ms, ul.added_delay_ms);
                pkt.t_bh = t_bh;
                pkt.t_tn = t_tn;
                pkt.t_cn = t_cn;
                pkt.t_exc = kExchangeDelayMs;

                if (!ul.delivered) {
                    result.drops.push_back({ev.packet_id, "uplink", "harq_exhausted"});
                    break;
                }
                if (receivers.empty())
                    result.drops.push_back({ev.packet_id, "downlink", "no_receivers_in_range"});

                const double uplink_done_s = ev.t_s + pkt.t_ul / 1000.0;
                pend.core_done_s =
                    uplink_done_s + (2.0 * (t_bh + t_tn + t_cn) + pkt.t_exc) / 1000.0;

                // downlink outcomes are fully determined here; the remaining
                // events retire them in time order
                pkt.receivers.reserve(receivers.size());
                pend.delivery_s.reserve(receivers.size());
                for (std::size_t rank = 0; rank < receivers.size(); ++rank) {
                    const NodeId rx = receivers[rank];
                    const double grant_ms =
                        std::floor(static_cast<double>(rank) / cfg->dl_grants_per_subframe) *
                        kSubframeMs;
                    const double dl_pl = pathloss_db(
                        node_distance(trace, enb, rx, pend.core_done_s), cfg->carrier_freq_ghz);
                    const double dl_base =
                        link_snr_db(cfg->enb_tx_power_dbm, dl_pl, 0.0, noise_dbm);
                    fill_rb_snr(rb_snr, dl_fading,
                                fading_row(dl_fading, pend.core_done_s, dl_offset[rx]), dl_base);
                    const HarqOutcome dl = transmit_with_harq(
                        curve.at(effective_snr_db(rb_snr)), cfg->harq_max_attempts, phy_eng);

                    ReceiverOutcome out;
                    out.vehicle = rx;
                    out.attempts = dl.attempts;
                    if (dl.delivered) {
                        out.delivered = true;
                        out.t_dl_ms =
                            LatencyModel::downlink_ms(dl_tx_ms, dl.added_delay_ms, grant_ms);
                        LatencyBreakdown b{pkt.t_ul, t_bh, t_tn, t_cn, pkt.t_exc, out.t_dl_ms};
                        out.e2e_ms = e2e_latency_ms(b);
                        pend.delivery_s.push_back(ev.t_s + out.e2e_ms / 1000.0);
                    } else {
                        pend.delivery_s.push_back(-1.0);
                    }
                    pkt.receivers.push_back(out);
                }
                queue.push(uplink_done_s, EventKind::uplink_done, ev.packet_id, ev.node);
                break;
            }
            case EventKind::uplink_done:
                queue.push(pend.core_done_s, EventKind::core_done, ev.packet_id, ev.node);
                break;
            case EventKind::core_done:
                for (std::size_t i = 0; i < pkt.receivers.size(); ++i) {
                    if (pkt.receivers[i].delivered)
                        queue.push(pend.delivery_s[i], EventKind::downlink_done, ev.packet_id,
                                   pkt.receivers[i].vehicle);
                    else
                        result.drops.push_back({ev.packet_id, "downlink", "harq_exhausted"});
                }
                break;
            case EventKind::downlink_done:
                for (ReceiverOutcome& out : pkt.receivers) {
                    if (out.vehicle == ev.node && out.delivered && out.delivered_at_s == 0.0) {
                        out.delivered_at_s = ev.t_s;
                        break;
                    }
                }
                result.delivered += 1;
                break;
        }
    }
    return result;
}

void write_packet_csv(const SimulationResult& result, std::ostream& out) {
    out << "packet_id,vehicle_id,mode,t_ul,t_bh,t_tn,t_cn,t_exc,t_dl,e2e\n";
    const std::string mode = to_string(result.mode);
    char buf[256];
    for (const PacketRecord& pkt : result.packets) {
        for (const ReceiverOutcome& rx : pkt.receivers) {
            if (!rx.delivered) continue;
            std::snprintf(buf, sizeof buf, "%u,%u,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                          pkt.packet_id, rx.vehicle, mode.c_str(), pkt.t_ul, pkt.t_bh, pkt.t_tn,
                          pkt.t_cn, pkt.t_exc, rx.t_dl_ms, rx.e2e_ms);
            out << buf;
        }
    }
}

void write_drop_csv(const SimulationResult& result, std::ostream& out) {
    out << "packet_id,stage,reason\n";
    for (const DropRecord& d : result.drops)
        out << d.packet_id << ',' << d.stage << ',' << d.reason << '\n';
}

}  // namespace v2psim
