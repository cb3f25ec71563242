#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <lorasat/fft.hpp>

namespace lorasat {

// Modem parameters plus every constant derived from them. Instances are
// immutable after make(); all modem operations take the config by const
// reference and are pure functions of their inputs.
//
// With LDRO enabled the alphabet shrinks to 2^(sf-2) and the frequency slot
// spacing grows by a factor of four; chirp duration and bandwidth are
// unchanged, so N, T_c and R_s depend on sf only.
struct ModemConfig {
    int sf = 7;                 // spreading factor, 7..12
    double bandwidth_hz = 0.0;  // B
    bool ldro = false;
    int oversampling = 1;       // OSF; sample rate = OSF * B

    // Derived, filled by make().
    std::uint32_t alphabet_size = 0; // M = 2^sf, or 2^(sf-2) with LDRO
    std::uint32_t chips = 0;         // 2^sf
    std::size_t chirp_samples = 0;   // N = OSF * 2^sf
    double chirp_duration_s = 0.0;   // T_c = 2^sf / B
    double symbol_rate_hz = 0.0;     // R_s = B / 2^sf
    double bin_width_hz = 0.0;       // B / M (= R_s, or 4 R_s with LDRO)
    double sample_rate_hz = 0.0;     // OSF * B

    static ModemConfig make(int sf, double bandwidth_hz, bool ldro = false,
                            int oversampling = 1);
};

// Frame composition: n_up preamble upchirps, n_dw downchirps, then n_sym
// payload chirps of which the ones at midamble_positions are pilot upchirps
// (symbol 0). Midambles are inserted after every n_int data chirps; a final
// partial group also gets one, so a frame carrying D data chirps holds
// ceil(D / n_int) midambles.
struct FrameLayout {
    int n_up = 8;
    int n_dw = 2;
    std::size_t n_sym = 0; // payload chirps, data + midambles
    int n_int = 0;         // midamble spacing in data chirps, 0 = none
    std::vector<std::size_t> midamble_positions; // sorted, in [0, n_sym)

    // Builds the layout for n_data data chirps with midambles per n_int.
    static FrameLayout with_midambles(int n_up, int n_dw, std::size_t n_data,
                                      int n_int);

    std::size_t data_chirps() const { return n_sym - midamble_positions.size(); }
    std::size_t total_chirps() const {
        return static_cast<std::size_t>(n_up) + static_cast<std::size_t>(n_dw) + n_sym;
    }
    double toa_s(const ModemConfig& cfg) const {
        return static_cast<double>(total_chirps()) * cfg.chirp_duration_s;
    }
    bool is_midamble(std::size_t payload_pos) const;
    void validate() const; // throws std::invalid_argument on bad positions
};

using SymbolSequence = std::vector<std::uint16_t>;

// Uniformly sampled complex envelope. t0_s is the absolute time of the first
// sample on the satellite-pass clock.
struct BasebandSignal {
    std::vector<std::complex<double>> samples;
    double sample_rate_hz = 0.0;
    double t0_s = 0.0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

enum class ChirpKind { Up, Down };

// One chirp of N samples with unit amplitude. The instantaneous frequency
// starts at -B/2 + bin_width * s, rises at B/T_c, and wraps from +B/2 to
// -B/2; the phase is the closed-form piecewise quadratic of that law, so it
// is continuous at the wrap (only the frequency jumps).
BasebandSignal symbol_envelope(const ModemConfig& cfg, std::uint32_t symbol);

// Complex conjugate of symbol_envelope(cfg, 0).
BasebandSignal downchirp_envelope(const ModemConfig& cfg);

// Preamble upchirps, downchirps, then payload with pilots at the layout's
// midamble positions. payload.size() must equal layout.data_chirps().
BasebandSignal build_frame(const ModemConfig& cfg, const FrameLayout& layout,
                           const SymbolSequence& payload, double t0_s = 0.0);

// Number of payload data chirps for a payload of `payload_bits` with coding
// rate cr in 1..4 (one parity bit per 4 data bits per step of cr). No actual
// coding is performed anywhere; only the symbol count matters.
std::size_t payload_symbol_count(const ModemConfig& cfg,
                                 std::uint32_t payload_bits, int coding_rate);

struct DemodResult {
    std::size_t peak_bin = 0;   // raw DFT index of the strongest bin
    double freq_hz = 0.0;       // its signed frequency (two-sided mapping)
    double magnitude = 0.0;     // peak magnitude
    std::uint32_t symbol = 0;   // data decision, mod M
};

// Dechirp + DFT demodulator for a fixed config. Holds the reference chirp
// and scratch buffers; one instance per thread in hot loops. `received`
// names the chirp type the segment is expected to carry: an Up segment is
// multiplied by the pure downchirp reference and vice versa, collapsing a
// clean chirp to a tone whose frequency encodes symbol and/or offset.
class ChirpDemod {
public:
    explicit ChirpDemod(const ModemConfig& cfg);

    const ModemConfig& config() const { return cfg_; }

    // segment.size() must equal cfg.chirp_samples.
    DemodResult demod(std::span<const std::complex<double>> segment,
                      ChirpKind received);

private:
    ModemConfig cfg_;
    Fft fft_;
    std::vector<std::complex<double>> up_conj_;   // conj of pure upchirp
    std::vector<std::complex<double>> down_conj_; // conj of pure downchirp
    std::vector<std::complex<double>> work_;
    std::vector<std::complex<double>> spec_;
};

// One-shot convenience wrapper around ChirpDemod.
DemodResult demod_chirp(const ModemConfig& cfg,
                        std::span<const std::complex<double>> segment,
                        ChirpKind received);

// Signed frequency of DFT bin `bin` out of n at sample rate fs: bins at or
// above n/2 map to negative frequencies.
double bin_to_signed_freq(std::size_t bin, std::size_t n, double sample_rate_hz);

} // namespace lorasat
