#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "v2psim/engine.hpp"
#include "v2psim/linkphy.hpp"
#include "v2psim/scenario.hpp"

namespace v2psim {

// per-run summary over delivered receiver outcomes
struct RunMetrics {
    double mean_e2e_ms = 0.0;
    double pdr = 0.0;
    long delivered = 0;
    long attempted = 0;
};

// throws NoDeliveredPackets when nothing made it through
RunMetrics summarize(const SimulationResult& result);

// mean of per-run means with its standard error (0 for a single run)
struct Aggregate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int runs = 0;
};

Aggregate aggregate(std::span<const double> per_run_means);  // throws EmptyList

// relative latency reduction of the edge deployment
double mec_gain(double conventional_ms, double mec_ms);

// rank correlation (average ranks on ties); throws EmptyList below 2 points
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

struct DensityPoint {
    double density = 0.0;  // vehicles per meter per lane
    NetworkMode mode = NetworkMode::conventional;
    double mean_ms = 0.0;
    double stderr_ms = 0.0;
    double pdr = 0.0;  // pooled over all runs of the point
    int runs = 0;
};

// Repeats the scenario across densities and both network modes, `runs`
// independently seeded repetitions each. `jobs` only controls how many
// worker threads execute the (pre-seeded) runs, never the results.
std::vector<DensityPoint> sweep_density(const ScenarioConfig& base,
                                        std::span<const double> densities, int runs, int jobs = 1);

struct SnrPoint {
    double snr_db = 0.0;
    double pdr = 0.0;  // delivery fraction of single transmission attempts
    double stderr_ = 0.0;
};

// Monte Carlo single-attempt delivery probability at pinned effective SNRs.
std::vector<SnrPoint> sweep_pdr_snr(std::span<const double> snr_db, int trials,
                                    const BlerCurve& curve, std::uint64_t seed);

void write_density_csv(std::span<const DensityPoint> points, std::ostream& out);
void write_snr_csv(std::span<const SnrPoint> points, std::ostream& out);
// whitespace-separated variants with a '#' comment header, ready for gnuplot
void write_density_dat(std::span<const DensityPoint> points, std::ostream& out);
void write_snr_dat(std::span<const SnrPoint> points, std::ostream& out);

}  // namespace v2psim
