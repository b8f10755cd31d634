#pragma once

#include <cstdint>
#include <iosfwd>
#include <queue>
#include <string>
#include <vector>

#include "v2psim/channel.hpp"
#include "v2psim/latency.hpp"
#include "v2psim/linkphy.hpp"
#include "v2psim/mobility.hpp"
#include "v2psim/scenario.hpp"

namespace v2psim {

enum class EventKind { packet_generated, uplink_done, core_done, downlink_done };

struct Event {
    double t_s = 0.0;
    std::uint64_t seq = 0;  // insertion order breaks time ties FIFO
    EventKind kind = EventKind::packet_generated;
    std::uint32_t packet_id = 0;
    NodeId node = 0;  // generating VRU, or receiving vehicle for downlink_done
};

class EventQueue {
public:
    void push(double t_s, EventKind kind, std::uint32_t packet_id, NodeId node);
    Event pop();  // throws EmptyQueue
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.t_s != b.t_s) return a.t_s > b.t_s;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

struct ReceiverOutcome {
    NodeId vehicle = 0;
    bool delivered = false;
    int attempts = 0;
    double t_dl_ms = 0.0;
    double e2e_ms = 0.0;
    double delivered_at_s = 0.0;
};

struct PacketRecord {
    std::uint32_t packet_id = 0;
    NodeId vru = 0;
    double generated_at_s = 0.0;
    bool uplink_delivered = false;
    int uplink_attempts = 0;
    // shared legs in ms; t_dl and e2e vary per receiver
    double t_ul = 0.0;
    double t_bh = 0.0;
    double t_tn = 0.0;
    double t_cn = 0.0;
    double t_exc = 0.0;
    std::vector<ReceiverOutcome> receivers;
};

struct DropRecord {
    std::uint32_t packet_id = 0;
    std::string stage;
    std::string reason;
};

struct SimulationResult {
    NetworkMode mode = NetworkMode::conventional;
    std::vector<PacketRecord> packets;
    std::vector<DropRecord> drops;
    long attempted = 0;  // receiver deliveries attempted, uplink losses included
    long delivered = 0;
};

// Runs one scenario end to end on a freshly generated intersection trace.
SimulationResult run_simulation(const ValidatedConfig& cfg);
// Same, but on a caller-supplied trace (which must cover the configured
// duration and contain VRU and eNodeB nodes); throws TraceTooShort.
SimulationResult run_simulation(const ValidatedConfig& cfg, const MobilityTrace& trace);

// packet_id,vehicle_id,mode,t_ul,t_bh,t_tn,t_cn,t_exc,t_dl,e2e - one row per
// delivered receiver
void write_packet_csv(const SimulationResult& result, std::ostream& out);
// packet_id,stage,reason
void write_drop_csv(const SimulationResult& result, std::ostream& out);

}  // namespace v2psim
