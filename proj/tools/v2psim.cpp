// Command-line front end: scenario runs, density/SNR sweeps, and mobility /
// fading trace generation or validation. Exit codes: 0 success, 1 usage
// error, 2 runtime failure (the error name is printed to stderr).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "v2psim/channel.hpp"
#include "v2psim/engine.hpp"
#include "v2psim/errors.hpp"
#include "v2psim/metrics.hpp"
#include "v2psim/mobility.hpp"
#include "v2psim/scenario.hpp"

namespace {

using namespace v2psim;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("IoError", "cannot open " + path + " for writing");
    return out;
}

ScenarioConfig load_config(const std::string& path) {
    return path.empty() ? ScenarioConfig{} : parse_config_file(path);
}

// shared scenario flags; each returns true when the flag was set
struct ScenarioFlags {
    std::string config_path;
    std::string mode;
    std::string delivery;
    double density = 0.0;
    std::uint64_t seed = 0;
    bool has_density = false;
    bool has_seed = false;
    bool allow_density_override = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file (key = value)");
        cmd->add_option("--mode", mode, "network mode: conventional or mec");
        cmd->add_option("--delivery", delivery, "delivery mode: broadcast or nearest_k(K)");
        cmd->add_option("--density", density, "vehicles per meter per lane")
            ->each([this](const std::string&) { has_density = true; });
        cmd->add_option("--seed", seed, "master seed for every random stream")
            ->each([this](const std::string&) { has_seed = true; });
        cmd->add_flag("--allow-density-override", allow_density_override,
                      "accept densities outside the studied range");
    }

    ScenarioConfig resolve() const {
        ScenarioConfig cfg = load_config(config_path);
        if (!mode.empty()) cfg.network_mode = network_mode_from_string(mode);
        if (!delivery.empty()) apply_delivery_mode(cfg, delivery);
        if (has_density) cfg.vehicle_density = density;
        if (has_seed) cfg.seed = seed;
        if (allow_density_override) cfg.allow_density_override = true;
        return cfg;
    }
};

void write_metrics_report(const ScenarioConfig& cfg, const RunMetrics& m, std::ostream& out) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "mean_ms = %.6f\n", m.mean_e2e_ms);
    out << buf;
    out << "stderr_ms = 0.000000\n";  // single run: no cross-run dispersion
    out << "run_count = 1\n";
    std::snprintf(buf, sizeof buf, "pdr = %.6f\n", m.pdr);
    out << buf;
    out << "delivered = " << m.delivered << "\n";
    out << "attempted = " << m.attempted << "\n";
    out << "mode = " << to_string(cfg.network_mode) << "\n";
    std::snprintf(buf, sizeof buf, "density = %.6f\n", cfg.vehicle_density);
    out << buf;
    if (cfg.delivery_mode == DeliveryMode::broadcast)
        out << "delivery_mode = broadcast\n";
    else
        out << "delivery_mode = nearest_k(" << cfg.nearest_k << ")\n";
}

int cmd_run(const ScenarioFlags& flags, const std::string& out_dir) {
    const ValidatedConfig cfg = validate_config(flags.resolve());
    const SimulationResult result = run_simulation(cfg);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    {
        std::ofstream out = open_out((dir / "packets.csv").string());
        write_packet_csv(result, out);
    }
    {
        std::ofstream out = open_out((dir / "drops.csv").string());
        write_drop_csv(result, out);
    }
    const RunMetrics m = summarize(result);
    {
        std::ofstream out = open_out((dir / "metrics.txt").string());
        write_metrics_report(cfg.get(), m, out);
    }
    std::printf("packets %zu delivered %ld/%ld pdr %.4f mean %.3f ms\n", result.packets.size(),
                m.delivered, m.attempted, m.pdr, m.mean_e2e_ms);
    return 0;
}

std::string dat_path_for(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".dat");
    return p.string();
}

int cmd_sweep_density(const ScenarioFlags& flags, int from, int to, int step, int runs, int jobs,
                      const std::string& out_path, bool gnuplot) {
    if (step <= 0 || to < from)
        throw ConfigError({RangeViolation{"sweep range", "--from <= --to and --step > 0"}});
    ScenarioConfig base = flags.resolve();
    std::vector<double> densities;
    for (int n = from; n <= to; n += step)
        densities.push_back(static_cast<double>(n) / (base.road_length_m * base.lane_count));

    const std::vector<DensityPoint> points = sweep_density(base, densities, runs, jobs);
    {
        std::ofstream out = open_out(out_path);
        write_density_csv(points, out);
    }
    if (gnuplot) {
        std::ofstream out = open_out(dat_path_for(out_path));
        write_density_dat(points, out);
    }

    // convenience summary: per-density latency gain of the edge deployment
    for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
        const DensityPoint& conv = points[i];
        const DensityPoint& mec = points[i + 1];
        std::printf("density %.3f conv %.3f ms mec %.3f ms gain %.4f\n", conv.density,
                    conv.mean_ms, mec.mean_ms, mec_gain(conv.mean_ms, mec.mean_ms));
    }
    return 0;
}

int cmd_sweep_snr(const ScenarioFlags& flags, double from, double to, double step, int packets,
                  const std::string& out_path, bool gnuplot) {
    if (step <= 0.0 || to < from)
        throw ConfigError({RangeViolation{"sweep range", "--from <= --to and --step > 0"}});
    const ScenarioConfig base = flags.resolve();
    std::vector<double> snrs;
    for (double s = from; s <= to + 1e-9; s += step) snrs.push_back(s);

    const BlerCurve curve{base.bler_k, base.bler_s0};
    const std::vector<SnrPoint> points = sweep_pdr_snr(snrs, packets, curve, base.seed);
    {
        std::ofstream out = open_out(out_path);
        write_snr_csv(points, out);
    }
    if (gnuplot) {
        std::ofstream out = open_out(dat_path_for(out_path));
        write_snr_dat(points, out);
    }
    for (const SnrPoint& p : points)
        std::printf("snr %+.1f dB pdr %.4f +/- %.4f\n", p.snr_db, p.pdr, p.stderr_);
    return 0;
}

int cmd_gen_mobility(const ScenarioFlags& flags, const std::string& model, double repulsion,
                     const std::string& out_path) {
    const ValidatedConfig cfg = validate_config(flags.resolve());
    rng::Engine eng = rng::make_stream(cfg->seed, "mobility");
    MobilityTrace trace;
    if (model == "intersection") {
        trace = generate_intersection_traffic(cfg, eng);
    } else if (model == "matern") {
        trace = generate_matern_placement(cfg, repulsion, eng);
    } else {
        throw ConfigError({RangeViolation{"--model", "intersection or matern"}});
    }
    std::ofstream out = open_out(out_path);
    write_movement_trace(trace, out);
    std::printf("nodes %zu duration %.1f s -> %s\n", trace.tracks().size(), trace.duration_s(),
                out_path.c_str());
    return 0;
}

int cmd_gen_fading(const std::string& model, double speed_kmh, double carrier_ghz,
                   double duration_s, double interval_ms, int rbs, std::uint64_t seed,
                   const std::string& out_path, const std::string& binary_path) {
    const TapProfile* profile = nullptr;
    if (model == "eva")
        profile = &TapProfile::eva();
    else if (model == "epa")
        profile = &TapProfile::epa();
    else
        throw ConfigError({RangeViolation{"--model", "eva or epa"}});

    const double doppler = doppler_frequency_hz(speed_kmh, carrier_ghz);
    rng::Engine eng = rng::make_stream(seed, "fading/" + model);
    const FadingTrace trace = generate_fading_trace(*profile, doppler, duration_s * 1000.0,
                                                    interval_ms, rbs, eng);
    {
        std::ofstream out = open_out(out_path);
        write_fading_csv(trace, out);
    }
    {
        std::ofstream out = open_out(out_path + ".meta");
        write_fading_metadata(trace, out);
    }
    if (!binary_path.empty()) {
        std::ofstream out = open_out(binary_path);
        write_fading_binary(trace, out);
    }
    std::printf("%s doppler %.1f Hz grid %zux%zu -> %s\n", profile->name.c_str(), doppler,
                trace.rows(), trace.rb_count(), out_path.c_str());
    return 0;
}

int cmd_parse_trace(const std::string& in_path, const std::string& out_path) {
    const MobilityTrace trace = parse_movement_trace_file(in_path);
    std::size_t waypoints = 0;
    for (const NodeTrack& trk : trace.tracks()) waypoints += trk.waypoints.size();
    std::printf("nodes %zu waypoints %zu duration %.6f s max speed %.3f m/s\n",
                trace.tracks().size(), waypoints, trace.duration_s(), trace.max_speed_mps());
    if (!out_path.empty()) {
        std::ofstream out = open_out(out_path);
        write_movement_trace(trace, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LTE V2P intersection-alert latency simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "simulate one scenario and write packet/drop CSVs");
    ScenarioFlags run_flags;
    run_flags.attach(run);
    std::string run_out = ".";
    run->add_option("--out", run_out, "output directory");

    // sweep-density
    auto* sd = app.add_subcommand("sweep-density", "latency/PDR vs vehicle count, both modes");
    ScenarioFlags sd_flags;
    sd_flags.attach(sd);
    int sd_from = 10, sd_to = 90, sd_step = 10, sd_runs = 100, sd_jobs = 1;
    std::string sd_out = "density_sweep.csv";
    bool sd_gnuplot = false;
    sd->add_option("--from", sd_from, "first vehicle count");
    sd->add_option("--to", sd_to, "last vehicle count");
    sd->add_option("--step", sd_step, "vehicle count increment");
    sd->add_option("--runs", sd_runs, "independent runs per point");
    sd->add_option("--jobs", sd_jobs, "worker threads (never changes results)");
    sd->add_option("--out", sd_out, "output CSV path");
    sd->add_flag("--gnuplot", sd_gnuplot, "also write a whitespace-separated .dat file");

    // sweep-snr
    auto* ss = app.add_subcommand("sweep-snr", "single-attempt delivery ratio vs effective SNR");
    ScenarioFlags ss_flags;
    ss_flags.attach(ss);
    double ss_from = -10.0, ss_to = 10.0, ss_step = 1.0;
    int ss_packets = 100000;
    std::string ss_out = "snr_sweep.csv";
    bool ss_gnuplot = false;
    ss->add_option("--from", ss_from, "first SNR (dB)");
    ss->add_option("--to", ss_to, "last SNR (dB)");
    ss->add_option("--step", ss_step, "SNR increment (dB)");
    ss->add_option("--packets", ss_packets, "Monte Carlo packets per point");
    ss->add_option("--out", ss_out, "output CSV path");
    ss->add_flag("--gnuplot", ss_gnuplot, "also write a whitespace-separated .dat file");

    // gen-mobility
    auto* gm = app.add_subcommand("gen-mobility", "generate a movement script");
    ScenarioFlags gm_flags;
    gm_flags.attach(gm);
    std::string gm_model = "intersection";
    double gm_repulsion = 10.0;
    std::string gm_out = "mobility.tcl";
    gm->add_option("--model", gm_model, "intersection (car following) or matern (hard core)");
    gm->add_option("--repulsion", gm_repulsion, "hard-core spacing in meters (matern)");
    gm->add_option("--out", gm_out, "output movement script path");

    // gen-fading
    auto* gf = app.add_subcommand("gen-fading", "synthesize a fading gain grid");
    std::string gf_model = "eva";
    double gf_speed = 80.0, gf_carrier = 5.9, gf_duration = 10.0, gf_interval = 1.0;
    int gf_rbs = 50;
    std::uint64_t gf_seed = 1;
    std::string gf_out = "fading.csv";
    std::string gf_binary;
    gf->add_option("--model", gf_model, "tap profile: eva or epa");
    gf->add_option("--speed", gf_speed, "terminal speed (km/h)");
    gf->add_option("--carrier", gf_carrier, "carrier frequency (GHz)");
    gf->add_option("--duration", gf_duration, "trace duration (s)");
    gf->add_option("--interval", gf_interval, "sample interval (ms)");
    gf->add_option("--rbs", gf_rbs, "resource blocks across the band");
    gf->add_option("--seed", gf_seed, "master seed");
    gf->add_option("--out", gf_out, "output CSV path (metadata sidecar: <out>.meta)");
    gf->add_option("--binary", gf_binary, "also write the bit-exact binary grid here");

    // parse-trace
    auto* pt = app.add_subcommand("parse-trace", "validate (and optionally rewrite) a movement script");
    std::string pt_in, pt_out;
    pt->add_option("--in", pt_in, "movement script to parse")->required();
    pt->add_option("--out", pt_out, "rewrite the parsed trace here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags, run_out);
        if (sd->parsed())
            return cmd_sweep_density(sd_flags, sd_from, sd_to, sd_step, sd_runs, sd_jobs, sd_out,
                                     sd_gnuplot);
        if (ss->parsed())
            return cmd_sweep_snr(ss_flags, ss_from, ss_to, ss_step, ss_packets, ss_out,
                                 ss_gnuplot);
        if (gm->parsed()) return cmd_gen_mobility(gm_flags, gm_model, gm_repulsion, gm_out);
        if (gf->parsed())
            return cmd_gen_fading(gf_model, gf_speed, gf_carrier, gf_duration, gf_interval,
                                  gf_rbs, gf_seed, gf_out, gf_binary);
        if (pt->parsed()) return cmd_parse_trace(pt_in, pt_out);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: InternalError: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
