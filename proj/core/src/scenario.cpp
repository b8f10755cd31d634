#include "v2psim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "v2psim/errors.hpp"

namespace v2psim {

std::string to_string(NetworkMode mode) {
    return mode == NetworkMode::conventional ? "conventional" : "mec";
}

std::string to_string(DeliveryMode mode) {
    return mode == DeliveryMode::broadcast ? "broadcast" : "nearest_k";
}

NetworkMode network_mode_from_string(const std::string& s) {
    if (s == "conventional") return NetworkMode::conventional;
    if (s == "mec") return NetworkMode::mec;
    throw MissingField("network_mode must be 'conventional' or 'mec', got '" + s + "'");
}

ValidatedConfig validate_config(const ScenarioConfig& cfg) {
    std::vector<RangeViolation> v;
    auto require = [&](bool ok, const char* field, const char* bound) {
        if (!ok) v.push_back({field, bound});
    };
    auto finite_positive = [&](double x, const char* field) {
        require(std::isfinite(x) && x > 0.0, field, "must be finite and > 0");
    };

    finite_positive(cfg.road_length_m, "road_length_m");
    require(cfg.lane_count >= 1, "lane_count", "must be >= 1");
    if (!cfg.allow_density_override) {
        require(cfg.vehicle_density >= 0.01 && cfg.vehicle_density <= 0.09, "vehicle_density",
                "must lie in [0.01, 0.09] unless allow_density_override is set");
    } else {
        finite_positive(cfg.vehicle_density, "vehicle_density");
    }
    require(std::isfinite(cfg.vehicle_speed_range_kmh.lo) && std::isfinite(cfg.vehicle_speed_range_kmh.hi) &&
                cfg.vehicle_speed_range_kmh.lo >= 0.0 &&
                cfg.vehicle_speed_range_kmh.lo <= cfg.vehicle_speed_range_kmh.hi,
            "vehicle_speed_range_kmh", "lower bound must be >= 0 and <= upper bound");
    require(std::isfinite(cfg.pedestrian_speed_kmh) && cfg.pedestrian_speed_kmh >= 0.0,
            "pedestrian_speed_kmh", "must be finite and >= 0");
    require(cfg.vru_count > 0, "vru_count", "must be > 0");
    require(std::isfinite(cfg.vru_tx_power_dbm), "vru_tx_power_dbm", "must be finite");
    require(std::isfinite(cfg.enb_tx_power_dbm), "enb_tx_power_dbm", "must be finite");
    finite_positive(cfg.bandwidth_mhz, "bandwidth_mhz");
    finite_positive(cfg.carrier_freq_ghz, "carrier_freq_ghz");
    require(cfg.packet_size_bits > 0, "packet_size_bits", "must be > 0");
    finite_positive(cfg.transmission_range_m, "transmission_range_m");
    require(std::isfinite(cfg.cam_rate_hz) && cfg.cam_rate_hz >= 0.0, "cam_rate_hz",
            "must be finite and >= 0");
    require(cfg.nearest_k >= 1, "nearest_k", "must be >= 1");
    require(cfg.harq_max_attempts >= 1, "harq_max_attempts", "must be >= 1");
    finite_positive(cfg.sim_duration_s, "sim_duration_s");
    require(std::isfinite(cfg.bler_k) && cfg.bler_k > 0.0, "bler_k", "must be finite and > 0");
    require(std::isfinite(cfg.bler_s0), "bler_s0", "must be finite");
    require(cfg.collision_prob >= 0.0 && cfg.collision_prob <= 1.0, "collision_prob",
            "must lie in [0, 1]");
    require(cfg.dl_grants_per_subframe >= 1, "dl_grants_per_subframe", "must be >= 1");

    if (!v.empty()) throw ConfigError(std::move(v));
    return ValidatedConfig(cfg);
}

int vehicle_count(const ValidatedConfig& cfg) {
    return static_cast<int>(std::llround(cfg->vehicle_density * cfg->road_length_m *
                                         static_cast<double>(cfg->lane_count)));
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw MissingField("key '" + key + "' has non-numeric value '" + value + "'");
    }
    if (pos != value.size()) {
        throw MissingField("key '" + key + "' has trailing characters in value '" + value + "'");
    }
    return x;
}

long parse_integer(const std::string& key, const std::string& value) {
    double x = parse_number(key, value);
    if (x != std::floor(x)) {
        throw MissingField("key '" + key + "' expects an integer, got '" + value + "'");
    }
    return static_cast<long>(x);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw MissingField("key '" + key + "' expects true/false, got '" + value + "'");
}

// "70,110" -> closed interval
SpeedRangeKmh parse_speed_range(const std::string& key, const std::string& value) {
    auto comma = value.find(',');
    if (comma == std::string::npos) {
        throw MissingField("key '" + key + "' expects 'lo,hi', got '" + value + "'");
    }
    SpeedRangeKmh r;
    r.lo = parse_number(key, trim(value.substr(0, comma)));
    r.hi = parse_number(key, trim(value.substr(comma + 1)));
    return r;
}

}  // namespace

// "broadcast" or "nearest_k(K)"
void apply_delivery_mode(ScenarioConfig& cfg, const std::string& value) {
    if (value == "broadcast") {
        cfg.delivery_mode = DeliveryMode::broadcast;
        return;
    }
    if (value.rfind("nearest_k(", 0) == 0 && value.back() == ')') {
        cfg.delivery_mode = DeliveryMode::nearest_k;
        cfg.nearest_k = static_cast<int>(
            parse_integer("delivery_mode", value.substr(10, value.size() - 11)));
        return;
    }
    throw MissingField("delivery_mode must be 'broadcast' or 'nearest_k(K)', got '" + value + "'");
}

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw MissingField("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw MissingField("config line " + std::to_string(line_no) + ": key '" + key +
                               "' has no value");
        }

        if (key == "road_length_m") cfg.road_length_m = parse_number(key, value);
        else if (key == "lane_count") cfg.lane_count = static_cast<int>(parse_integer(key, value));
        else if (key == "vehicle_density") cfg.vehicle_density = parse_number(key, value);
        else if (key == "vehicle_speed_range_kmh") cfg.vehicle_speed_range_kmh = parse_speed_range(key, value);
        else if (key == "pedestrian_speed_kmh") cfg.pedestrian_speed_kmh = parse_number(key, value);
        else if (key == "vru_count") cfg.vru_count = static_cast<int>(parse_integer(key, value));
        else if (key == "vru_tx_power_dbm") cfg.vru_tx_power_dbm = parse_number(key, value);
        else if (key == "enb_tx_power_dbm") cfg.enb_tx_power_dbm = parse_number(key, value);
        else if (key == "bandwidth_mhz") cfg.bandwidth_mhz = parse_number(key, value);
        else if (key == "carrier_freq_ghz") cfg.carrier_freq_ghz = parse_number(key, value);
        else if (key == "packet_size_bits") cfg.packet_size_bits = static_cast<int>(parse_integer(key, value));
        else if (key == "transmission_range_m") cfg.transmission_range_m = parse_number(key, value);
        else if (key == "cam_rate_hz") cfg.cam_rate_hz = parse_number(key, value);
        else if (key == "network_mode") cfg.network_mode = network_mode_from_string(value);
        else if (key == "delivery_mode") apply_delivery_mode(cfg, value);
        else if (key == "nearest_k") cfg.nearest_k = static_cast<int>(parse_integer(key, value));
        else if (key == "harq_max_attempts") cfg.harq_max_attempts = static_cast<int>(parse_integer(key, value));
        else if (key == "sim_duration_s") cfg.sim_duration_s = parse_number(key, value);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(key, value));
        else if (key == "allow_density_override") cfg.allow_density_override = parse_bool(key, value);
        else if (key == "bler_k") cfg.bler_k = parse_number(key, value);
        else if (key == "bler_s0") cfg.bler_s0 = parse_number(key, value);
        else if (key == "collision_prob") cfg.collision_prob = parse_number(key, value);
        else if (key == "dl_grants_per_subframe") cfg.dl_grants_per_subframe = static_cast<int>(parse_integer(key, value));
        else {
            throw MissingField("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingField("cannot open config file '" + path + "'");
    return parse_config(in);
}

void write_config(const ScenarioConfig& cfg, std::ostream& out) {
    out << "road_length_m = " << cfg.road_length_m << "\n";
    out << "lane_count = " << cfg.lane_count << "\n";
    out << "vehicle_density = " << cfg.vehicle_density << "\n";
    out << "vehicle_speed_range_kmh = " << cfg.vehicle_speed_range_kmh.lo << ","
        << cfg.vehicle_speed_range_kmh.hi << "\n";
    out << "pedestrian_speed_kmh = " << cfg.pedestrian_speed_kmh << "\n";
    out << "vru_count = " << cfg.vru_count << "\n";
    out << "vru_tx_power_dbm = " << cfg.vru_tx_power_dbm << "\n";
    out << "enb_tx_power_dbm = " << cfg.enb_tx_power_dbm << "\n";
    out << "bandwidth_mhz = " << cfg.bandwidth_mhz << "\n";
    out << "carrier_freq_ghz = " << cfg.carrier_freq_ghz << "\n";
    out << "packet_size_bits = " << cfg.packet_size_bits << "\n";
    out << "transmission_range_m = " << cfg.transmission_range_m << "\n";
    out << "cam_rate_hz = " << cfg.cam_rate_hz << "\n";
    out << "network_mode = " << to_string(cfg.network_mode) << "\n";
    if (cfg.delivery_mode == DeliveryMode::broadcast) {
        out << "delivery_mode = broadcast\n";
    } else {
        out << "delivery_mode = nearest_k(" << cfg.nearest_k << ")\n";
    }
    out << "harq_max_attempts = " << cfg.harq_max_attempts << "\n";
    out << "sim_duration_s = " << cfg.sim_duration_s << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "allow_density_override = " << (cfg.allow_density_override ? "true" : "false") << "\n";
    out << "bler_k = " << cfg.bler_k << "\n";
    out << "bler_s0 = " << cfg.bler_s0 << "\n";
    out << "collision_prob = " << cfg.collision_prob << "\n";
    out << "dl_grants_per_subframe = " << cfg.dl_grants_per_subframe << "\n";
}

}  // namespace v2psim
