#include "v2psim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "v2psim/errors.hpp"

namespace v2psim {

namespace {

// snap to the microsecond grid used by the movement-script format
double snap_us(double t) { return std::round(t * 1e6) / 1e6; }

double round6(double v) { return std::round(v * 1e6) / 1e6; }

// Appends a waypoint and back-fills the previous waypoint's segment speed so
// stored speeds always agree with the positions they connect.
void push_waypoint(std::vector<Waypoint>& wps, double t, double x, double y) {
    if (!wps.empty()) {
        Waypoint& prev = wps.back();
        const double dt = t - prev.t_s;
        const double dist = std::hypot(x - prev.x_m, y - prev.y_m);
        prev.speed_mps = dt > 0.0 ? dist / dt : 0.0;
    }
    wps.push_back(Waypoint{t, x, y, 0.0});
}

// Constant-velocity motion along +x with ring wrap-around at +L/2. Wraps are
// encoded as a 1 us re-entry segment so interpolation stays single-valued.
void emit_linear_x_motion(std::vector<Waypoint>& wps, double x0, double y, double v, double t_end,
                          double road_length) {
    const double half = road_length / 2.0;
    push_waypoint(wps, 0.0, x0, y);
    if (v <= 0.0) {
        push_waypoint(wps, t_end, x0, y);
        return;
    }
    double t_prev = 0.0;
    double x_prev = x0;
    for (;;) {
        double t_cross = snap_us(t_prev + (half - x_prev) / v);
        t_cross = std::max(t_cross, t_prev + 1e-6);
        if (t_cross > t_end - 2e-6) break;
        push_waypoint(wps, t_cross, half, y);
        push_waypoint(wps, t_cross + 1e-6, -half, y);
        t_prev = t_cross + 1e-6;
        x_prev = -half;
    }
    push_waypoint(wps, t_end, x_prev + v * (t_end - t_prev), y);
}

struct VruPlacement {
    double x;
    double y0;
};

std::vector<VruPlacement> draw_vru_cluster(const ValidatedConfig& cfg, rng::Engine& eng) {
    std::vector<VruPlacement> out;
    out.reserve(static_cast<std::size_t>(cfg->vru_count));
    for (int i = 0; i < cfg->vru_count; ++i) {
        const double x = rng::uniform(eng, -kVruStripHalfWidthM, kVruStripHalfWidthM);
        const double y0 = rng::uniform(eng, -7.0, -3.0);
        out.push_back({x, y0});
    }
    return out;
}

// VRUs walk straight across the road at constant pedestrian speed; the eNodeB
// is a single static node. Shared by both vehicle-placement generators.
void add_crossing_vrus_and_enb(MobilityTrace& trace, const ValidatedConfig& cfg, NodeId first_id,
                               rng::Engine& eng) {
    const double v_ped = cfg->pedestrian_speed_kmh / 3.6;
    const double t_end = cfg->sim_duration_s;
    NodeId id = first_id;
    for (const VruPlacement& p : draw_vru_cluster(cfg, eng)) {
        trace.add_node(id, NodeClass::vru);
        std::vector<Waypoint> wps;
        push_waypoint(wps, 0.0, p.x, p.y0);
        push_waypoint(wps, t_end, p.x, p.y0 + v_ped * t_end);
        for (const Waypoint& wp : wps) trace.add_waypoint(id, wp);
        ++id;
    }
    trace.add_node(id, NodeClass::enb);
    trace.add_waypoint(id, Waypoint{0.0, kEnbX, kEnbY, 0.0});
}

std::vector<int> split_across_lanes(int total, int lanes) {
    std::vector<int> out(static_cast<std::size_t>(lanes), total / lanes);
    for (int l = 0; l < total % lanes; ++l) out[static_cast<std::size_t>(l)] += 1;
    return out;
}

}  // namespace

NodeId MobilityTrace::add_node(NodeId id, NodeClass cls) {
    if (index_.count(id) != 0)
        throw UnknownNodeReference("node " + std::to_string(id) + " added twice");
    index_.emplace(id, tracks_.size());
    tracks_.push_back(NodeTrack{id, cls, {}});
    return id;
}

void MobilityTrace::add_waypoint(NodeId id, const Waypoint& wp) {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownNode("node " + std::to_string(id) + " does not exist");
    std::vector<Waypoint>& wps = tracks_[it->second].waypoints;
    if (wps.empty()) {
        if (wp.t_s != 0.0)
            throw NonMonotoneTime("node " + std::to_string(id) +
                                  ": first waypoint must be at t=0");
    } else if (wp.t_s <= wps.back().t_s) {
        throw NonMonotoneTime("node " + std::to_string(id) + ": waypoint time " +
                              std::to_string(wp.t_s) + " does not increase");
    }
    wps.push_back(wp);
    duration_s_ = std::max(duration_s_, wp.t_s);
}

const NodeTrack* MobilityTrace::find(NodeId id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &tracks_[it->second];
}

bool MobilityTrace::has_node(NodeId id) const { return index_.count(id) != 0; }

const NodeTrack& MobilityTrace::track(NodeId id) const {
    const NodeTrack* t = find(id);
    if (t == nullptr) throw UnknownNode("node " + std::to_string(id) + " does not exist");
    return *t;
}

MobilityTrace::State MobilityTrace::position_at(NodeId id, double t_s) const {
    if (t_s < 0.0) throw TimeOutOfRange("negative query time " + std::to_string(t_s));
    const NodeTrack& trk = track(id);
    const std::vector<Waypoint>& wps = trk.waypoints;
    if (wps.empty()) throw TimeOutOfRange("node " + std::to_string(id) + " has no waypoints");
    if (t_s >= wps.back().t_s) return State{wps.back().x_m, wps.back().y_m, 0.0};
    // first segment with wps[i].t_s <= t_s < wps[i+1].t_s
    auto it = std::upper_bound(wps.begin(), wps.end(), t_s,
                               [](double t, const Waypoint& w) { return t < w.t_s; });
    const Waypoint& b = *it;
    const Waypoint& a = *(it - 1);
    const double f = (t_s - a.t_s) / (b.t_s - a.t_s);
    return State{a.x_m + f * (b.x_m - a.x_m), a.y_m + f * (b.y_m - a.y_m), a.speed_mps};
}

std::vector<NodeId> MobilityTrace::nearest_vehicles(double x_m, double y_m, double t_s,
                                                    int k) const {
    std::vector<std::pair<double, NodeId>> dist;
    for (const NodeTrack& trk : tracks_) {
        if (trk.cls != NodeClass::vehicle) continue;
        const State s = position_at(trk.id, t_s);
        dist.emplace_back(std::hypot(s.x_m - x_m, s.y_m - y_m), trk.id);
    }
    std::sort(dist.begin(), dist.end());
    std::vector<NodeId> out;
    const std::size_t n = std::min<std::size_t>(dist.size(), k > 0 ? static_cast<std::size_t>(k) : 0);
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(dist[i].second);
    return out;
}

std::vector<NodeId> MobilityTrace::in_range_vehicles(double x_m, double y_m, double t_s,
                                                     double range_m) const {
    std::vector<NodeId> out;
    for (const NodeTrack& trk : tracks_) {
        if (trk.cls != NodeClass::vehicle) continue;
        const State s = position_at(trk.id, t_s);
        if (std::hypot(s.x_m - x_m, s.y_m - y_m) <= range_m) out.push_back(trk.id);
    }
    return out;
}

std::vector<NodeId> MobilityTrace::nodes_of(NodeClass cls) const {
    std::vector<NodeId> out;
    for (const NodeTrack& trk : tracks_)
        if (trk.cls == cls) out.push_back(trk.id);
    return out;
}

double MobilityTrace::max_speed_mps() const {
    // Fastest sustained segment. Ring wrap-around is stored as a near-instant
    // jump whose nominal speed is meaningless, so sub-10 us segments are skipped.
    double v = 0.0;
    for (const NodeTrack& trk : tracks_) {
        for (std::size_t i = 0; i + 1 < trk.waypoints.size(); ++i) {
            if (trk.waypoints[i + 1].t_s - trk.waypoints[i].t_s < 1e-5) continue;
            v = std::max(v, trk.waypoints[i].speed_mps);
        }
    }
    return v;
}

MobilityTrace generate_intersection_traffic(const ValidatedConfig& cfg, rng::Engine& eng) {
    MobilityTrace trace;
    trace.set_duration(cfg->sim_duration_s);

    const double road = cfg->road_length_m;
    const double half = road / 2.0;
    const double dt = kTraceSampleIntervalS;
    const long steps = std::lround(cfg->sim_duration_s / dt);
    const std::vector<int> lane_counts = split_across_lanes(vehicle_count(cfg), cfg->lane_count);

    NodeId next_id = 0;
    for (int lane = 0; lane < cfg->lane_count; ++lane) {
        const int n = lane_counts[static_cast<std::size_t>(lane)];
        if (n == 0) continue;
        const double lane_y = kLaneWidthM * lane;

        // equal spacing with forward jitter small enough to keep min gaps
        const double spacing = road / n;
        const double jitter_span = std::max(0.0, spacing - kCarMinGapM) / 2.0;
        std::vector<double> pos(static_cast<std::size_t>(n));
        std::vector<double> vel(static_cast<std::size_t>(n));
        std::vector<double> vdes(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            pos[static_cast<std::size_t>(i)] =
                -half + spacing * i + rng::uniform(eng, 0.0, jitter_span);
            vdes[static_cast<std::size_t>(i)] =
                rng::uniform(eng, cfg->vehicle_speed_range_kmh.lo, cfg->vehicle_speed_range_kmh.hi) /
                3.6;
            vel[static_cast<std::size_t>(i)] = vdes[static_cast<std::size_t>(i)];
        }

        std::vector<std::vector<Waypoint>> wps(static_cast<std::size_t>(n));
        std::vector<NodeId> ids(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            ids[static_cast<std::size_t>(i)] = next_id++;
            push_waypoint(wps[static_cast<std::size_t>(i)], 0.0, pos[static_cast<std::size_t>(i)],
                          lane_y);
        }

        std::vector<double> pos_new(static_cast<std::size_t>(n));
        std::vector<double> vel_new(static_cast<std::size_t>(n));
        for (long k = 0; k < steps; ++k) {
            const double t0 = k * dt;
            const double t1 = (k + 1) * dt;
            for (int i = 0; i < n; ++i) {
                const std::size_t si = static_cast<std::size_t>(i);
                const double imperfection = rng::uniform01(eng);
                double gap = std::numeric_limits<double>::infinity();
                double v_lead = 0.0;
                if (n > 1) {
                    const std::size_t lead = static_cast<std::size_t>((i + 1) % n);
                    gap = pos[lead] - pos[si];
                    if (gap <= 0.0) gap += road;
                    v_lead = vel[lead];
                }
                // Krauss-style safe speed against the leader's pre-step state
                const double v_safe = n > 1
                                          ? v_lead + (gap - kCarMinGapM) / kCarHeadwayTauS
                                          : std::numeric_limits<double>::infinity();
                double v = std::min({vdes[si], vel[si] + kCarAccelCapMps2 * dt, v_safe});
                v = std::max(0.0, v - 0.4 * kCarAccelCapMps2 * dt * imperfection);
                v = std::max(v, vel[si] - kCarDecelCapMps2 * dt);
                v = std::max(v, 0.0);
                double x = pos[si] + v * dt;
                // hard clamp: never advance past the leader's pre-step position
                if (n > 1) x = std::min(x, pos[si] + std::max(0.0, gap - kCarMinGapM));
                vel_new[si] = (x - pos[si]) / dt;
                pos_new[si] = x;
            }
            for (int i = 0; i < n; ++i) {
                const std::size_t si = static_cast<std::size_t>(i);
                std::vector<Waypoint>& w = wps[si];
                double x = pos_new[si];
                if (x >= half) {
                    // wrap: exit at +L/2, re-enter at -L/2 one microsecond later
                    const double v_eff = vel_new[si];
                    double t_cross = v_eff > 0.0 ? t0 + (half - pos[si]) / v_eff : t1 - 2e-6;
                    t_cross = std::min(std::max(snap_us(t_cross), t0 + 1e-6), t1 - 2e-6);
                    push_waypoint(w, t_cross, half, kLaneWidthM * lane);
                    push_waypoint(w, t_cross + 1e-6, -half, kLaneWidthM * lane);
                    x -= road;
                }
                push_waypoint(w, t1, x, kLaneWidthM * lane);
                pos[si] = x;
                vel[si] = vel_new[si];
            }
        }

        for (int i = 0; i < n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            trace.add_node(ids[si], NodeClass::vehicle);
            for (const Waypoint& wp : wps[si]) trace.add_waypoint(ids[si], wp);
        }
    }

    add_crossing_vrus_and_enb(trace, cfg, next_id, eng);
    trace.set_duration(cfg->sim_duration_s);
    return trace;
}

namespace {

// One lane of a Matern type-II hard-core process conditioned on an exact
// point count. Thinning a Poisson parent process cannot exceed intensity
// 1/(2r), so the dense regime falls back to direct conditional sampling via
// order statistics on the gap-transformed interval.
std::vector<double> matern_lane_positions(int n, double road, double density, double repulsion,
                                          rng::Engine& eng) {
    const double half = road / 2.0;
    std::vector<double> pts;
    if (n <= 0) return pts;

    const double two_r_lambda = 2.0 * repulsion * density;
    if (two_r_lambda < 1.0 && repulsion > 0.0) {
        const double parent_intensity = -std::log(1.0 - two_r_lambda) / (2.0 * repulsion);
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::vector<std::pair<double, double>> parents;  // (position, mark)
            double x = -half + rng::exponential(eng, parent_intensity);
            while (x < half) {
                parents.emplace_back(x, rng::uniform01(eng));
                x += rng::exponential(eng, parent_intensity);
            }
            std::vector<double> kept;
            for (std::size_t i = 0; i < parents.size(); ++i) {
                bool survives = true;
                for (std::size_t j = 0; j < parents.size(); ++j) {
                    if (j == i) continue;
                    if (std::abs(parents[j].first - parents[i].first) < repulsion &&
                        parents[j].second < parents[i].second) {
                        survives = false;
                        break;
                    }
                }
                if (survives) kept.push_back(parents[i].first);
            }
            if (static_cast<int>(kept.size()) == n) {
                std::sort(kept.begin(), kept.end());
                return kept;
            }
        }
        // fall through: condition directly on the count
    }

    const double effective = road - (n - 1) * repulsion;
    if (effective <= 0.0)
        throw InfeasibleDensity("hard-core spacing does not fit " + std::to_string(n) +
                                " vehicles on " + std::to_string(road) + " m");
    std::vector<double> u(static_cast<std::size_t>(n));
    for (double& v : u) v = rng::uniform(eng, 0.0, effective);
    std::sort(u.begin(), u.end());
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] += -half + repulsion * i;
    return u;
}

}  // namespace

MobilityTrace generate_matern_placement(const ValidatedConfig& cfg, double repulsion_m,
                                        rng::Engine& eng) {
    if (repulsion_m < 0.0)
        throw InfeasibleDensity("negative repulsion distance " + std::to_string(repulsion_m));
    if (cfg->vehicle_density * repulsion_m >= 1.0)
        throw InfeasibleDensity("density " + std::to_string(cfg->vehicle_density) +
                                " /m with repulsion " + std::to_string(repulsion_m) +
                                " m exceeds the hard-core packing bound");

    MobilityTrace trace;
    trace.set_duration(cfg->sim_duration_s);
    const std::vector<int> lane_counts = split_across_lanes(vehicle_count(cfg), cfg->lane_count);

    NodeId next_id = 0;
    for (int lane = 0; lane < cfg->lane_count; ++lane) {
        const int n = lane_counts[static_cast<std::size_t>(lane)];
        const std::vector<double> xs =
            matern_lane_positions(n, cfg->road_length_m, cfg->vehicle_density, repulsion_m, eng);
        const double lane_y = kLaneWidthM * lane;
        for (double x0 : xs) {
            const double v = rng::uniform(eng, cfg->vehicle_speed_range_kmh.lo,
                                          cfg->vehicle_speed_range_kmh.hi) /
                             3.6;
            const NodeId id = next_id++;
            trace.add_node(id, NodeClass::vehicle);
            std::vector<Waypoint> wps;
            emit_linear_x_motion(wps, x0, lane_y, v, cfg->sim_duration_s, cfg->road_length_m);
            for (const Waypoint& wp : wps) trace.add_waypoint(id, wp);
        }
    }

    add_crossing_vrus_and_enb(trace, cfg, next_id, eng);
    trace.set_duration(cfg->sim_duration_s);
    return trace;
}

namespace {

struct ScriptEvent {
    int line = 0;
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double speed = 0.0;
};

struct ScriptNode {
    bool has_x = false;
    bool has_y = false;
    double x0 = 0.0;
    double y0 = 0.0;
    std::vector<ScriptEvent> events;
};

bool only_whitespace(const char* s) {
    for (; *s != '\0'; ++s)
        if (std::strchr(" \t\r", *s) == nullptr) return false;
    return true;
}

}  // namespace

MobilityTrace parse_movement_trace(std::istream& in) {
    std::map<NodeId, ScriptNode> nodes;  // ordered so compiled ids are stable
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const char* s = line.c_str() + first;

        unsigned id = 0;
        char axis[3] = {0, 0, 0};
        double v0 = 0.0, v1 = 0.0, v2 = 0.0, t = 0.0;
        int consumed = -1;
        if (std::sscanf(s, "$node_(%u) set %2[XYZ_] %lf%n", &id, axis, &v0, &consumed) == 3 &&
            consumed > 0 && only_whitespace(s + consumed)) {
            if (std::strcmp(axis, "X_") != 0 && std::strcmp(axis, "Y_") != 0 &&
                std::strcmp(axis, "Z_") != 0)
                throw SyntaxError("line " + std::to_string(lineno) + ": unknown axis '" + axis +
                                  "'");
            ScriptNode& node = nodes[id];
            if (axis[0] == 'X') {
                node.has_x = true;
                node.x0 = v0;
            } else if (axis[0] == 'Y') {
                node.has_y = true;
                node.y0 = v0;
            }
            // Z_ is accepted and discarded: motion is planar
            continue;
        }
        consumed = -1;
        if (std::sscanf(s, "$ns_ at %lf \"$node_(%u) setdest %lf %lf %lf\"%n", &t, &id, &v0, &v1,
                        &v2, &consumed) == 5 &&
            consumed > 0 && only_whitespace(s + consumed)) {
            if (t < 0.0)
                throw SyntaxError("line " + std::to_string(lineno) + ": negative event time");
            if (v2 < 0.0)
                throw SyntaxError("line " + std::to_string(lineno) + ": negative speed");
            auto it = nodes.find(id);
            if (it == nodes.end() || !it->second.has_x || !it->second.has_y)
                throw UnknownNodeReference("line " + std::to_string(lineno) + ": node " +
                                           std::to_string(id) +
                                           " has no initial position before setdest");
            if (!it->second.events.empty() && t <= it->second.events.back().t)
                throw NonMonotoneTime("line " + std::to_string(lineno) + ": node " +
                                      std::to_string(id) + " event time " + std::to_string(t) +
                                      " does not increase");
            it->second.events.push_back(ScriptEvent{lineno, t, v0, v1, v2});
            continue;
        }
        throw SyntaxError("line " + std::to_string(lineno) + ": unrecognized statement: " + line);
    }

    MobilityTrace trace;
    for (const auto& [id, node] : nodes) {
        if (!node.has_x || !node.has_y)
            throw UnknownNodeReference("node " + std::to_string(id) +
                                       " is missing an initial X_/Y_ position");
        trace.add_node(id, NodeClass::vehicle);
        std::vector<Waypoint> wps;
        push_waypoint(wps, 0.0, node.x0, node.y0);
        double cur_x = node.x0;
        double cur_y = node.y0;
        double moving_until = 0.0;  // arrival time of the leg in progress
        double dest_x = node.x0;
        double dest_y = node.y0;
        for (const ScriptEvent& ev : node.events) {
            // resolve position at the event time under the previous leg
            if (moving_until > 0.0) {
                if (ev.t >= moving_until) {
                    if (moving_until > wps.back().t_s)
                        push_waypoint(wps, moving_until, dest_x, dest_y);
                    cur_x = dest_x;
                    cur_y = dest_y;
                } else {
                    const double f = (ev.t - wps.back().t_s) / (moving_until - wps.back().t_s);
                    cur_x += f * (dest_x - cur_x);
                    cur_y += f * (dest_y - cur_y);
                }
                moving_until = 0.0;
            }
            if (ev.t > wps.back().t_s) push_waypoint(wps, ev.t, cur_x, cur_y);
            const double dist = std::hypot(ev.x - cur_x, ev.y - cur_y);
            if (ev.speed <= 0.0 || dist <= 0.0) continue;  // a zero-speed setdest holds in place
            dest_x = ev.x;
            dest_y = ev.y;
            moving_until = ev.t + dist / ev.speed;
        }
        if (moving_until > wps.back().t_s) push_waypoint(wps, moving_until, dest_x, dest_y);
        for (const Waypoint& wp : wps) trace.add_waypoint(id, wp);
    }
    return trace;
}

MobilityTrace parse_movement_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SyntaxError("cannot open movement script: " + path);
    return parse_movement_trace(in);
}

void write_movement_trace(const MobilityTrace& trace, std::ostream& out) {
    std::vector<const NodeTrack*> tracks;
    for (const NodeTrack& trk : trace.tracks())
        if (!trk.waypoints.empty()) tracks.push_back(&trk);
    std::sort(tracks.begin(), tracks.end(),
              [](const NodeTrack* a, const NodeTrack* b) { return a->id < b->id; });

    char buf[160];
    for (const NodeTrack* trk : tracks) {
        const Waypoint& w0 = trk->waypoints.front();
        std::snprintf(buf, sizeof buf, "$node_(%u) set X_ %.6f\n", trk->id, w0.x_m);
        out << buf;
        std::snprintf(buf, sizeof buf, "$node_(%u) set Y_ %.6f\n", trk->id, w0.y_m);
        out << buf;
        std::snprintf(buf, sizeof buf, "$node_(%u) set Z_ %.6f\n", trk->id, 0.0);
        out << buf;
    }

    // Events carry absolute times and destinations, so per-leg rounding never
    // accumulates. Speeds are derived from the printed endpoint values and
    // rounded *up* at the last digit: the replayed node arrives no later than
    // the original, then holds at the exact printed destination.
    struct Line {
        double t;
        NodeId id;
        std::string text;
    };
    std::vector<Line> lines;
    for (const NodeTrack* trk : tracks) {
        const std::vector<Waypoint>& wps = trk->waypoints;
        for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
            const Waypoint& a = wps[i];
            const Waypoint& b = wps[i + 1];
            const double t0 = round6(a.t_s);
            const double t1 = round6(b.t_s);
            if (t1 <= t0) continue;
            // cap leg duration so the speed-rounding drift stays under 1e-6 m
            const int chunks = std::max(1, static_cast<int>(std::ceil((b.t_s - a.t_s) / 0.2)));
            double px = round6(a.x_m);
            double py = round6(a.y_m);
            double pt = t0;
            for (int c = 1; c <= chunks; ++c) {
                double qt, qx, qy;
                if (c == chunks) {
                    qt = t1;
                    qx = round6(b.x_m);
                    qy = round6(b.y_m);
                } else {
                    // pick the boundary time on the grid, then place the
                    // boundary point on the original segment at that time
                    qt = round6(a.t_s + (b.t_s - a.t_s) * c / chunks);
                    const double f = (qt - a.t_s) / (b.t_s - a.t_s);
                    qx = round6(a.x_m + f * (b.x_m - a.x_m));
                    qy = round6(a.y_m + f * (b.y_m - a.y_m));
                }
                if (qt <= pt) continue;
                const double dist = std::hypot(qx - px, qy - py);
                if (dist > 0.0) {
                    const double speed = std::ceil(dist / (qt - pt) * 1e6) / 1e6;
                    std::snprintf(buf, sizeof buf,
                                  "$ns_ at %.6f \"$node_(%u) setdest %.6f %.6f %.6f\"\n", pt,
                                  trk->id, qx, qy, speed);
                    lines.push_back({pt, trk->id, buf});
                }
                px = qx;
                py = qy;
                pt = qt;
            }
        }
    }
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return a.t != b.t ? a.t < b.t : a.id < b.id;
    });
    for (const Line& l : lines) out << l.text;
}

}  // namespace v2psim
