#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace v2psim {

enum class NetworkMode { conventional, mec };
enum class DeliveryMode { broadcast, nearest_k };

std::string to_string(NetworkMode mode);
std::string to_string(DeliveryMode mode);
NetworkMode network_mode_from_string(const std::string& s);

struct ScenarioConfig;

// Applies "broadcast" or "nearest_k(K)" to delivery_mode (and nearest_k).
void apply_delivery_mode(ScenarioConfig& cfg, const std::string& value);

struct SpeedRangeKmh {
    double lo = 70.0;
    double hi = 110.0;
};

// One scenario, fully seeding a run. Field names double as config-file keys.
struct ScenarioConfig {
    double road_length_m = 1000.0;
    int lane_count = 1;
    double vehicle_density = 0.05;  // vehicles per meter per lane
    SpeedRangeKmh vehicle_speed_range_kmh;
    double pedestrian_speed_kmh = 3.0;
    int vru_count = 80;
    double vru_tx_power_dbm = 23.0;
    double enb_tx_power_dbm = 46.0;
    double bandwidth_mhz = 10.0;
    double carrier_freq_ghz = 5.9;
    int packet_size_bits = 10000;
    double transmission_range_m = 500.0;
    double cam_rate_hz = 1.0;  // per-VRU Poisson packet generation rate
    NetworkMode network_mode = NetworkMode::conventional;
    DeliveryMode delivery_mode = DeliveryMode::broadcast;
    int nearest_k = 5;
    int harq_max_attempts = 4;
    double sim_duration_s = 10.0;
    std::uint64_t seed = 1;

    // engine and calibration knobs
    bool allow_density_override = false;
    double bler_k = 0.448;
    double bler_s0 = -4.90;
    double collision_prob = 0.0;
    int dl_grants_per_subframe = 8;
};

// Frozen, validated copy of a ScenarioConfig. Immutable after construction,
// safe to share across concurrent runs.
class ValidatedConfig {
public:
    const ScenarioConfig& get() const { return cfg_; }
    const ScenarioConfig* operator->() const { return &cfg_; }

private:
    friend ValidatedConfig validate_config(const ScenarioConfig& cfg);
    explicit ValidatedConfig(const ScenarioConfig& cfg) : cfg_(cfg) {}
    ScenarioConfig cfg_;
};

// Returns a frozen copy or throws ConfigError listing every violated invariant.
ValidatedConfig validate_config(const ScenarioConfig& cfg);
inline ValidatedConfig validate_config(const ValidatedConfig& cfg) { return validate_config(cfg.get()); }

// round(density * road_length * lanes)
int vehicle_count(const ValidatedConfig& cfg);

// Flat `key = value` text format, '#' comments, keys exactly the field names
// above. Unknown keys are errors.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);
void write_config(const ScenarioConfig& cfg, std::ostream& out);

}  // namespace v2psim
