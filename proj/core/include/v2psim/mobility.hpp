#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "v2psim/rng.hpp"
#include "v2psim/scenario.hpp"

namespace v2psim {

using NodeId = std::uint32_t;

enum class NodeClass { vehicle, vru, enb };

struct Waypoint {
    double t_s = 0.0;
    double x_m = 0.0;
    double y_m = 0.0;
    double speed_mps = 0.0;  // speed over the segment starting at this waypoint
};

struct NodeTrack {
    NodeId id = 0;
    NodeClass cls = NodeClass::vehicle;
    std::vector<Waypoint> waypoints;
};

// Immutable after generation/parsing; all queries are read-only.
class MobilityTrace {
public:
    struct State {
        double x_m;
        double y_m;
        double speed_mps;
    };

    NodeId add_node(NodeId id, NodeClass cls);
    // throws NonMonotoneTime unless t strictly exceeds the node's last waypoint
    void add_waypoint(NodeId id, const Waypoint& wp);
    void set_duration(double duration_s) { duration_s_ = duration_s; }

    // piecewise-linear interpolation, clamped to the last waypoint
    State position_at(NodeId id, double t_s) const;

    // k nearest vehicle nodes to (x, y) at time t, ascending distance,
    // ties broken by node id; fewer than k if fewer vehicles exist
    std::vector<NodeId> nearest_vehicles(double x_m, double y_m, double t_s, int k) const;

    // all vehicle nodes within the closed ball of radius range_m
    std::vector<NodeId> in_range_vehicles(double x_m, double y_m, double t_s, double range_m) const;

    std::vector<NodeId> nodes_of(NodeClass cls) const;
    bool has_node(NodeId id) const;
    const NodeTrack& track(NodeId id) const;
    const std::vector<NodeTrack>& tracks() const { return tracks_; }
    double duration_s() const { return duration_s_; }
    // largest sustained segment speed (instantaneous wrap jumps excluded)
    double max_speed_mps() const;

private:
    const NodeTrack* find(NodeId id) const;

    std::vector<NodeTrack> tracks_;
    std::unordered_map<NodeId, std::size_t> index_;
    double duration_s_ = 0.0;
};

// Synthetic intersection traffic: car-following vehicles on the x-axis road,
// a VRU crossing cluster around x = 0, one eNodeB at (0, 50). Sampled every
// 100 ms for the configured duration; vehicles wrap around at the road ends.
MobilityTrace generate_intersection_traffic(const ValidatedConfig& cfg, rng::Engine& eng);

// Matern type-II hard-core placement on the road, constant-velocity motion
// thereafter. Throws InfeasibleDensity when density * repulsion_m >= 1.
MobilityTrace generate_matern_placement(const ValidatedConfig& cfg, double repulsion_m,
                                        rng::Engine& eng);

// Movement-script grammar:
//   $node_(I) set X_ <v>   (same for Y_, Z_; Z parsed and discarded)
//   $ns_ at <t> "$node_(I) setdest <x> <y> <speed>"
MobilityTrace parse_movement_trace(std::istream& in);
MobilityTrace parse_movement_trace_file(const std::string& path);
void write_movement_trace(const MobilityTrace& trace, std::ostream& out);

// car-following constants (Krauss-style update)
inline constexpr double kCarAccelCapMps2 = 2.6;
inline constexpr double kCarDecelCapMps2 = 4.5;
inline constexpr double kCarHeadwayTauS = 1.0;
inline constexpr double kCarMinGapM = 2.5;
inline constexpr double kLaneWidthM = 3.5;
inline constexpr double kTraceSampleIntervalS = 0.1;
inline constexpr double kEnbX = 0.0;
inline constexpr double kEnbY = 50.0;
inline constexpr double kVruStripHalfWidthM = 5.0;

}  // namespace v2psim
