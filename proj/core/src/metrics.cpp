#include "v2psim/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "v2psim/errors.hpp"
#include "v2psim/rng.hpp"

namespace v2psim {

RunMetrics summarize(const SimulationResult& result) {
    RunMetrics m;
    m.attempted = result.attempted;
    double sum = 0.0;
    for (const PacketRecord& pkt : result.packets) {
        for (const ReceiverOutcome& rx : pkt.receivers) {
            if (!rx.delivered) continue;
            sum += rx.e2e_ms;
            m.delivered += 1;
        }
    }
    if (m.delivered == 0) throw NoDeliveredPackets("run delivered nothing to average");
    m.mean_e2e_ms = sum / static_cast<double>(m.delivered);
    m.pdr = m.attempted > 0
                ? static_cast<double>(m.delivered) / static_cast<double>(m.attempted)
                : 0.0;
    return m;
}

Aggregate aggregate(std::span<const double> per_run_means) {
    if (per_run_means.empty()) throw EmptyList("aggregate of zero runs");
    Aggregate a;
    a.runs = static_cast<int>(per_run_means.size());
    a.mean = std::accumulate(per_run_means.begin(), per_run_means.end(), 0.0) / a.runs;
    if (a.runs == 1) return a;
    double ss = 0.0;
    for (double v : per_run_means) ss += (v - a.mean) * (v - a.mean);
    const double sd = std::sqrt(ss / (a.runs - 1));
    a.stderr_ = sd / std::sqrt(static_cast<double>(a.runs));
    return a;
}

double mec_gain(double conventional_ms, double mec_ms) {
    if (conventional_ms <= 0.0)
        throw NoDeliveredPackets("gain against a nonpositive baseline latency");
    return (conventional_ms - mec_ms) / conventional_ms;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }
    return rank;
}

}  // namespace

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw EmptyList("rank correlation needs two equally sized samples of 2+");
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw EmptyList("rank correlation of a constant sample");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<DensityPoint> sweep_density(const ScenarioConfig& base,
                                        std::span<const double> densities, int runs, int jobs) {
    if (densities.empty()) throw EmptyList("density sweep over zero densities");
    if (runs < 1) throw EmptyList("density sweep needs at least one run");

    struct Task {
        std::size_t density_idx;
        NetworkMode mode;
        int run;
    };
    std::vector<Task> tasks;
    for (std::size_t d = 0; d < densities.size(); ++d)
        for (NetworkMode mode : {NetworkMode::conventional, NetworkMode::mec})
            for (int r = 0; r < runs; ++r) tasks.push_back({d, mode, r});

    // every task carries its own derived seed, so thread count and schedule
    // cannot change any result
    struct TaskResult {
        double mean_ms = 0.0;
        long delivered = 0;
        long attempted = 0;
    };
    std::vector<TaskResult> results(tasks.size());
    std::mutex fail_mutex;
    std::exception_ptr failure;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                const Task& t = tasks[i];
                ScenarioConfig cfg = base;
                cfg.vehicle_density = densities[t.density_idx];
                cfg.network_mode = t.mode;
                const std::string tag = "sweep/d" + std::to_string(t.density_idx) + "/m" +
                                        to_string(t.mode) + "/r" + std::to_string(t.run);
                cfg.seed = rng::splitmix64(base.seed ^ rng::hash_tag(tag));
                const RunMetrics m = summarize(run_simulation(validate_config(cfg)));
                results[i] = {m.mean_e2e_ms, m.delivered, m.attempted};
            } catch (...) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const int thread_count = std::clamp<int>(jobs, 1, static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<DensityPoint> points;
    for (std::size_t d = 0; d < densities.size(); ++d) {
        for (NetworkMode mode : {NetworkMode::conventional, NetworkMode::mec}) {
            std::vector<double> means;
            long delivered = 0, attempted = 0;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].density_idx != d || tasks[i].mode != mode) continue;
                means.push_back(results[i].mean_ms);
                delivered += results[i].delivered;
                attempted += results[i].attempted;
            }
            const Aggregate a = aggregate(means);
            DensityPoint p;
            p.density = densities[d];
            p.mode = mode;
            p.mean_ms = a.mean;
            p.stderr_ms = a.stderr_;
            p.pdr = attempted > 0 ? static_cast<double>(delivered) / attempted : 0.0;
            p.runs = a.runs;
            points.push_back(p);
        }
    }
    return points;
}

std::vector<SnrPoint> sweep_pdr_snr(std::span<const double> snr_db, int trials,
                                    const BlerCurve& curve, std::uint64_t seed) {
    if (snr_db.empty()) throw EmptyList("SNR sweep over zero points");
    if (trials < 1) throw EmptyList("SNR sweep needs at least one trial");
    std::vector<SnrPoint> out;
    out.reserve(snr_db.size());
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
        rng::Engine eng = rng::make_stream(seed, "snr/" + std::to_string(i));
        const double bler = curve.at(snr_db[i]);
        long ok = 0;
        for (int t = 0; t < trials; ++t)
            if (rng::uniform01(eng) >= bler) ++ok;
        SnrPoint p;
        p.snr_db = snr_db[i];
        p.pdr = static_cast<double>(ok) / trials;
        p.stderr_ = std::sqrt(p.pdr * (1.0 - p.pdr) / trials);
        out.push_back(p);
    }
    return out;
}

void write_density_csv(std::span<const DensityPoint> points, std::ostream& out) {
    out << "density,mode,mean_ms,stderr_ms,pdr,runs\n";
    char buf[160];
    for (const DensityPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.6f,%s,%.6f,%.6f,%.6f,%d\n", p.density,
                      to_string(p.mode).c_str(), p.mean_ms, p.stderr_ms, p.pdr, p.runs);
        out << buf;
    }
}

void write_snr_csv(std::span<const SnrPoint> points, std::ostream& out) {
    out << "snr_db,pdr,stderr\n";
    char buf[96];
    for (const SnrPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", p.snr_db, p.pdr, p.stderr_);
        out << buf;
    }
}

void write_density_dat(std::span<const DensityPoint> points, std::ostream& out) {
    out << "# density mode mean_ms stderr_ms pdr runs\n";
    char buf[160];
    for (const DensityPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.6f %s %.6f %.6f %.6f %d\n", p.density,
                      to_string(p.mode).c_str(), p.mean_ms, p.stderr_ms, p.pdr, p.runs);
        out << buf;
    }
}

void write_snr_dat(std::span<const SnrPoint> points, std::ostream& out) {
    out << "# snr_db pdr stderr\n";
    char buf[96];
    for (const SnrPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f\n", p.snr_db, p.pdr, p.stderr_);
        out << buf;
    }
}

}  // namespace v2psim
