#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "v2psim/rng.hpp"

namespace v2psim {

// Tapped-delay-line power/delay profile. Tap powers are relative in dB and
// are normalized to unit total power at synthesis time.
struct TapProfile {
    std::string name;
    std::vector<double> delay_ns;
    std::vector<double> power_db;

    static const TapProfile& epa();  // low delay spread, pedestrian channel
    static const TapProfile& eva();  // extended vehicular channel
};

// Frequency-selective Rayleigh fading sampled on a (time x resource-block)
// grid, stored row-major as dB gains about the 0 dB average.
class FadingTrace {
public:
    FadingTrace() = default;
    FadingTrace(std::size_t rows, std::size_t rb_count, double sample_interval_ms);

    double gain_db(std::size_t row, std::size_t rb) const;
    double& gain_db(std::size_t row, std::size_t rb);
    std::size_t rows() const { return rows_; }
    std::size_t rb_count() const { return rb_count_; }
    double sample_interval_ms() const { return sample_interval_ms_; }
    const std::vector<double>& raw() const { return gains_db_; }

    std::string profile_name;
    double doppler_hz = 0.0;

private:
    std::size_t rows_ = 0;
    std::size_t rb_count_ = 0;
    double sample_interval_ms_ = 1.0;
    std::vector<double> gains_db_;
};

double doppler_frequency_hz(double speed_kmh, double carrier_freq_ghz);

// Sum-of-sinusoids Rayleigh tap sampled at the given instants: M sinusoids
// with arrival angles on a randomly rotated uniform grid and i.i.d. phases.
// Unit average power. Exposed so the time autocorrelation can be probed at
// arbitrary lag resolution.
std::vector<std::complex<double>> synth_tap_process(double doppler_hz,
                                                    const std::vector<double>& t_s,
                                                    rng::Engine& eng);

FadingTrace generate_fading_trace(const TapProfile& profile, double doppler_hz, double duration_ms,
                                  double sample_interval_ms, std::size_t rb_count,
                                  rng::Engine& eng);

// log-distance path loss anchored at the free-space 1 m intercept, urban
// exponent 2.7; throws NonpositiveDistance for distance_m <= 0
double pathloss_db(double distance_m, double carrier_freq_ghz, double exponent = 2.7);

double noise_floor_dbm(double bandwidth_mhz, double noise_figure_db = 9.0);

// received SNR of one link: tx - pathloss + fading - noise
double link_snr_db(double tx_power_dbm, double pathloss_db, double fading_gain_db,
                   double noise_floor_dbm);

// t_ms,rb,gain_db rows for plotting
void write_fading_csv(const FadingTrace& trace, std::ostream& out);
// key=value sidecar describing how the grid was synthesized
void write_fading_metadata(const FadingTrace& trace, std::ostream& out);
// bit-exact grid: 16-byte header (u64 rows, u64 cols, little-endian) then
// row-major IEEE-754 doubles
void write_fading_binary(const FadingTrace& trace, std::ostream& out);
FadingTrace read_fading_binary(std::istream& in);

inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kResourceBlockHz = 180e3;
inline constexpr int kSinusoidsPerTap = 64;
inline constexpr double kMinLinearGain = 1e-15;

}  // namespace v2psim
