#include "v2psim/channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>

#include "v2psim/errors.hpp"

namespace v2psim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TapProfile make_epa() {
    return TapProfile{"EPA",
                      {0.0, 30.0, 70.0, 90.0, 110.0, 190.0, 410.0},
                      {0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8}};
}

TapProfile make_eva() {
    return TapProfile{"EVA",
                      {0.0, 30.0, 150.0, 310.0, 370.0, 710.0, 1090.0, 1730.0, 2510.0},
                      {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9}};
}

}  // namespace

const TapProfile& TapProfile::epa() {
    static const TapProfile p = make_epa();
    return p;
}

const TapProfile& TapProfile::eva() {
    static const TapProfile p = make_eva();
    return p;
}

FadingTrace::FadingTrace(std::size_t rows, std::size_t rb_count, double sample_interval_ms)
    : rows_(rows),
      rb_count_(rb_count),
      sample_interval_ms_(sample_interval_ms),
      gains_db_(rows * rb_count, 0.0) {}

double FadingTrace::gain_db(std::size_t row, std::size_t rb) const {
    if (row >= rows_ || rb >= rb_count_)
        throw FadingTooShort("fading lookup (" + std::to_string(row) + "," + std::to_string(rb) +
                             ") outside " + std::to_string(rows_) + "x" +
                             std::to_string(rb_count_) + " grid");
    return gains_db_[row * rb_count_ + rb];
}

double& FadingTrace::gain_db(std::size_t row, std::size_t rb) {
    if (row >= rows_ || rb >= rb_count_)
        throw FadingTooShort("fading lookup (" + std::to_string(row) + "," + std::to_string(rb) +
                             ") outside " + std::to_string(rows_) + "x" +
                             std::to_string(rb_count_) + " grid");
    return gains_db_[row * rb_count_ + rb];
}

double doppler_frequency_hz(double speed_kmh, double carrier_freq_ghz) {
    return (speed_kmh / 3.6) * carrier_freq_ghz * 1e9 / kSpeedOfLightMps;
}

std::vector<std::complex<double>> synth_tap_process(double doppler_hz,
                                                    const std::vector<double>& t_s,
                                                    rng::Engine& eng) {
    const int m_count = kSinusoidsPerTap;
    // a single rotation for the whole angle grid keeps the arrival angles
    // stratified, so the lag autocorrelation quadrature stays tight
    const double rotation = rng::uniform01(eng);
    std::vector<double> omega(m_count);
    std::vector<double> phase(m_count);
    for (int m = 0; m < m_count; ++m) {
        const double alpha = kTwoPi * (m + rotation) / m_count;
        omega[m] = kTwoPi * doppler_hz * std::cos(alpha);
        phase[m] = rng::uniform(eng, 0.0, kTwoPi);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(m_count));
    std::vector<std::complex<double>> out;
    out.reserve(t_s.size());
    for (double t : t_s) {
        std::complex<double> acc{0.0, 0.0};
        for (int m = 0; m < m_count; ++m) {
            const double arg = omega[m] * t + phase[m];
            acc += std::complex<double>(std::cos(arg), std::sin(arg));
        }
        out.push_back(acc * scale);
    }
    return out;
}

FadingTrace generate_fading_trace(const TapProfile& profile, double doppler_hz, double duration_ms,
                                  double sample_interval_ms, std::size_t rb_count,
                                  rng::Engine& eng) {
    if (duration_ms <= 0.0 || sample_interval_ms <= 0.0 || rb_count == 0)
        throw FadingTooShort("fading grid must have positive duration, interval and width");
    const std::size_t rows =
        static_cast<std::size_t>(std::llround(std::ceil(duration_ms / sample_interval_ms)));
    const std::size_t taps = profile.delay_ns.size();

    // normalize tap powers to unit total so gains average 0 dB
    std::vector<double> tap_power(taps);
    double total = 0.0;
    for (std::size_t l = 0; l < taps; ++l) {
        tap_power[l] = std::pow(10.0, profile.power_db[l] / 10.0);
        total += tap_power[l];
    }
    for (double& p : tap_power) p /= total;

    // per-sinusoid state: the sample-to-sample update is a fixed complex
    // rotation, so the whole grid needs no trig after setup
    const int m_count = kSinusoidsPerTap;
    const double dt_s = sample_interval_ms / 1000.0;
    std::vector<std::complex<double>> state(taps * m_count);
    std::vector<std::complex<double>> step(taps * m_count);
    for (std::size_t l = 0; l < taps; ++l) {
        const double rotation = rng::uniform01(eng);
        for (int m = 0; m < m_count; ++m) {
            const double alpha = kTwoPi * (m + rotation) / m_count;
            const double omega = kTwoPi * doppler_hz * std::cos(alpha);
            const double phi = rng::uniform(eng, 0.0, kTwoPi);
            state[l * m_count + m] = std::polar(1.0, phi);
            step[l * m_count + m] = std::polar(1.0, omega * dt_s);
        }
    }

    // per-(tap, rb) frequency twiddle from the tap delay
    std::vector<std::complex<double>> twiddle(taps * rb_count);
    for (std::size_t l = 0; l < taps; ++l) {
        const double amp = std::sqrt(tap_power[l] / m_count);
        for (std::size_t rb = 0; rb < rb_count; ++rb) {
            const double f_rb =
                (static_cast<double>(rb) - (static_cast<double>(rb_count) - 1.0) / 2.0) *
                kResourceBlockHz;
            twiddle[l * rb_count + rb] =
                amp * std::polar(1.0, -kTwoPi * f_rb * profile.delay_ns[l] * 1e-9);
        }
    }

    FadingTrace trace(rows, rb_count, sample_interval_ms);
    trace.profile_name = profile.name;
    trace.doppler_hz = doppler_hz;
    std::vector<std::complex<double>> tap_gain(taps);
    for (std::size_t row = 0; row < rows; ++row) {
        for (std::size_t l = 0; l < taps; ++l) {
            std::complex<double> acc{0.0, 0.0};
            for (int m = 0; m < m_count; ++m) acc += state[l * m_count + m];
            tap_gain[l] = acc;
        }
        for (std::size_t rb = 0; rb < rb_count; ++rb) {
            std::complex<double> h{0.0, 0.0};
            for (std::size_t l = 0; l < taps; ++l) h += tap_gain[l] * twiddle[l * rb_count + rb];
            trace.gain_db(row, rb) = 20.0 * std::log10(std::max(std::abs(h), kMinLinearGain));
        }
        for (std::size_t i = 0; i < state.size(); ++i) {
            state[i] *= step[i];
            // rotation accumulates magnitude drift; renormalize periodically
            if ((row & 1023u) == 1023u) state[i] /= std::abs(state[i]);
        }
    }
    return trace;
}

double pathloss_db(double distance_m, double carrier_freq_ghz, double exponent) {
    if (distance_m <= 0.0)
        throw NonpositiveDistance("path loss needs a positive distance, got " +
                                  std::to_string(distance_m));
    const double intercept_db =
        20.0 * std::log10(4.0 * std::numbers::pi * carrier_freq_ghz * 1e9 / kSpeedOfLightMps);
    return intercept_db + 10.0 * exponent * std::log10(distance_m);
}

double noise_floor_dbm(double bandwidth_mhz, double noise_figure_db) {
    return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
}

double link_snr_db(double tx_power_dbm, double pathloss_db, double fading_gain_db,
                   double noise_floor_dbm) {
    return tx_power_dbm - pathloss_db + fading_gain_db - noise_floor_dbm;
}

void write_fading_csv(const FadingTrace& trace, std::ostream& out) {
    out << "t_ms,rb,gain_db\n";
    char buf[96];
    for (std::size_t row = 0; row < trace.rows(); ++row) {
        const double t_ms = static_cast<double>(row) * trace.sample_interval_ms();
        for (std::size_t rb = 0; rb < trace.rb_count(); ++rb) {
            std::snprintf(buf, sizeof buf, "%.6f,%zu,%.6f\n", t_ms, rb, trace.gain_db(row, rb));
            out << buf;
        }
    }
}

void write_fading_metadata(const FadingTrace& trace, std::ostream& out) {
    char buf[96];
    out << "profile = " << trace.profile_name << "\n";
    std::snprintf(buf, sizeof buf, "doppler_hz = %.6f\n", trace.doppler_hz);
    out << buf;
    std::snprintf(buf, sizeof buf, "sample_interval_ms = %.6f\n", trace.sample_interval_ms());
    out << buf;
    out << "rb_count = " << trace.rb_count() << "\n";
    out << "rows = " << trace.rows() << "\n";
}

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

std::uint64_t get_u64_le(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw FadingTooShort("truncated fading grid");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

}  // namespace

void write_fading_binary(const FadingTrace& trace, std::ostream& out) {
    put_u64_le(out, trace.rows());
    put_u64_le(out, trace.rb_count());
    for (double g : trace.raw()) put_u64_le(out, std::bit_cast<std::uint64_t>(g));
}

FadingTrace read_fading_binary(std::istream& in) {
    const std::uint64_t rows = get_u64_le(in);
    const std::uint64_t cols = get_u64_le(in);
    if (rows == 0 || cols == 0 || rows > (1u << 26) || cols > (1u << 16))
        throw FadingTooShort("implausible grid dimensions " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    FadingTrace trace(rows, cols, 1.0);
    for (std::uint64_t r = 0; r < rows; ++r)
        for (std::uint64_t c = 0; c < cols; ++c)
            trace.gain_db(r, c) = std::bit_cast<double>(get_u64_le(in));
    return trace;
}

}  // namespace v2psim
