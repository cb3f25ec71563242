#include <lorasat/modem.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lorasat {

ModemConfig ModemConfig::make(int sf, double bandwidth_hz, bool ldro, int oversampling) {
    if (sf < 7 || sf > 12) throw std::invalid_argument("ModemConfig: sf must be in 7..12");
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("ModemConfig: bandwidth must be positive");
    if (oversampling < 1) throw std::invalid_argument("ModemConfig: oversampling must be >= 1");

    ModemConfig cfg;
    cfg.sf = sf;
    cfg.bandwidth_hz = bandwidth_hz;
    cfg.ldro = ldro;
    cfg.oversampling = oversampling;
    cfg.chips = 1u << sf;
    cfg.alphabet_size = ldro ? (1u << (sf - 2)) : cfg.chips;
    cfg.chirp_samples = static_cast<std::size_t>(oversampling) * cfg.chips;
    cfg.chirp_duration_s = static_cast<double>(cfg.chips) / bandwidth_hz; // B*T_c = 2^sf
    cfg.symbol_rate_hz = bandwidth_hz / static_cast<double>(cfg.chips);
    cfg.bin_width_hz = bandwidth_hz / static_cast<double>(cfg.alphabet_size);
    cfg.sample_rate_hz = bandwidth_hz * oversampling;
    return cfg;
}

FrameLayout FrameLayout::with_midambles(int n_up, int n_dw, std::size_t n_data, int n_int) {
    if (n_up < 0 || n_dw < 0) throw std::invalid_argument("FrameLayout: negative preamble counts");
    if (n_int < 0) throw std::invalid_argument("FrameLayout: negative n_int");

    FrameLayout layout;
    layout.n_up = n_up;
    layout.n_dw = n_dw;
    layout.n_int = n_int;
    if (n_int == 0 || n_data == 0) {
        layout.n_sym = n_data;
        return layout;
    }
    // One pilot after every n_int data chirps; a trailing partial group gets
    // one as well, so the count is ceil(n_data / n_int). The first payload
    // chirp is never a midamble (the preamble supplies the initial estimate).
    std::size_t pos = 0;
    std::size_t remaining = n_data;
    while (remaining > 0) {
        std::size_t group = std::min<std::size_t>(remaining, static_cast<std::size_t>(n_int));
        pos += group;
        layout.midamble_positions.push_back(pos);
        ++pos;
        remaining -= group;
    }
    layout.n_sym = n_data + layout.midamble_positions.size();
    return layout;
}

bool FrameLayout::is_midamble(std::size_t payload_pos) const {
    return std::binary_search(midamble_positions.begin(), midamble_positions.end(), payload_pos);
}

void FrameLayout::validate() const {
    std::size_t prev = 0;
    bool first = true;
    for (std::size_t pos : midamble_positions) {
        if (pos >= n_sym) throw std::invalid_argument("FrameLayout: midamble position past n_sym");
        if (!first && pos <= prev) throw std::invalid_argument("FrameLayout: midamble positions collide");
        prev = pos;
        first = false;
    }
    if (midamble_positions.size() > n_sym)
        throw std::invalid_argument("FrameLayout: more midambles than payload chirps");
}

namespace {

// Closed-form quadratic phase of the chirp frequency law. The instantaneous
// frequency f(t) = f0 + (B/T_c) t wraps from +B/2 to -B/2 at
// t_wrap = (B/2 - f0) / (B/T_c); with f0 = -B/2 + bin_width*s the wrap lands
// exactly on sample index N - s*N/M, so the sampled phase needs no rounding.
void chirp_phase_samples(const ModemConfig& cfg, std::uint32_t symbol,
                         std::vector<std::complex<double>>& out) {
    const double b = cfg.bandwidth_hz;
    const double f0 = -0.5 * b + cfg.bin_width_hz * static_cast<double>(symbol);
    const double slope = b / cfg.chirp_duration_s;
    const double fs = cfg.sample_rate_hz;
    const std::size_t n = cfg.chirp_samples;
    const std::size_t wrap_index =
        n - static_cast<std::size_t>(symbol) * (n / cfg.alphabet_size);
    const double t_wrap = static_cast<double>(wrap_index) / fs;

    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / fs;
        double phase = 2.0 * std::numbers::pi * (f0 * t + 0.5 * slope * t * t);
        if (k >= wrap_index) {
            phase -= 2.0 * std::numbers::pi * b * (t - t_wrap);
        }
        out[k] = std::polar(1.0, phase);
    }
}

} // namespace

BasebandSignal symbol_envelope(const ModemConfig& cfg, std::uint32_t symbol) {
    if (symbol >= cfg.alphabet_size)
        throw std::invalid_argument("symbol_envelope: symbol out of alphabet range");
    BasebandSignal sig;
    sig.sample_rate_hz = cfg.sample_rate_hz;
    chirp_phase_samples(cfg, symbol, sig.samples);
    return sig;
}

BasebandSignal downchirp_envelope(const ModemConfig& cfg) {
    BasebandSignal sig = symbol_envelope(cfg, 0);
    for (auto& v : sig.samples) v = std::conj(v);
    return sig;
}

namespace {

// Symbol-s chirp as base upchirp times a rotator. The frequency-wrap term of
// the closed form contributes exp(-j 2 pi B (t - t_wrap)) which at integer
// oversampling is exp(-j 2 pi k / OSF) times unity (B t_wrap is an integer),
// so it collapses to a per-sample correction that is itself a (possibly
// trivial) root of unity. Appending through a multiplicative recurrence
// costs two complex multiplies per sample instead of a sincos.
void append_symbol_chirp(const ModemConfig& cfg,
                         const std::vector<std::complex<double>>& up0,
                         std::uint32_t symbol, std::vector<std::complex<double>>& out) {
    const std::size_t n = cfg.chirp_samples;
    const std::size_t wrap_index =
        n - static_cast<std::size_t>(symbol) * (n / cfg.alphabet_size);
    const double tone = cfg.bin_width_hz * static_cast<double>(symbol) / cfg.sample_rate_hz;
    const std::complex<double> step = std::polar(1.0, 2.0 * std::numbers::pi * tone);
    // exp(-j 2 pi / OSF); exactly 1 at critical sampling.
    const std::complex<double> wrap_step =
        cfg.oversampling == 1
            ? std::complex<double>(1.0, 0.0)
            : std::polar(1.0, -2.0 * std::numbers::pi / static_cast<double>(cfg.oversampling));

    std::complex<double> rot(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(up0[k] * rot);
        rot *= step;
        if (k + 1 > wrap_index) rot *= wrap_step;
    }
}

} // namespace

BasebandSignal build_frame(const ModemConfig& cfg, const FrameLayout& layout,
                           const SymbolSequence& payload, double t0_s) {
    layout.validate();
    if (payload.size() != layout.data_chirps())
        throw std::invalid_argument("build_frame: payload length does not match layout");
    for (std::uint16_t s : payload) {
        if (s >= cfg.alphabet_size)
            throw std::invalid_argument("build_frame: payload symbol out of range");
    }

    const std::size_t n = cfg.chirp_samples;
    BasebandSignal frame;
    frame.sample_rate_hz = cfg.sample_rate_hz;
    frame.t0_s = t0_s;
    frame.samples.reserve(layout.total_chirps() * n);

    const BasebandSignal up0 = symbol_envelope(cfg, 0);
    const BasebandSignal down = downchirp_envelope(cfg);

    for (int i = 0; i < layout.n_up; ++i)
        frame.samples.insert(frame.samples.end(), up0.samples.begin(), up0.samples.end());
    for (int i = 0; i < layout.n_dw; ++i)
        frame.samples.insert(frame.samples.end(), down.samples.begin(), down.samples.end());

    std::size_t next_data = 0;
    for (std::size_t pos = 0; pos < layout.n_sym; ++pos) {
        if (layout.is_midamble(pos)) {
            frame.samples.insert(frame.samples.end(), up0.samples.begin(), up0.samples.end());
        } else {
            append_symbol_chirp(cfg, up0.samples, payload[next_data++], frame.samples);
        }
    }
    return frame;
}

std::size_t payload_symbol_count(const ModemConfig& cfg, std::uint32_t payload_bits,
                                 int coding_rate) {
    if (payload_bits == 0) throw std::invalid_argument("payload_symbol_count: payload_bits must be positive");
    if (coding_rate < 1 || coding_rate > 4)
        throw std::invalid_argument("payload_symbol_count: coding rate must be in 1..4");
    const std::uint64_t coded_bits_x4 =
        static_cast<std::uint64_t>(payload_bits) * static_cast<std::uint64_t>(4 + coding_rate);
    const std::uint64_t bits_per_symbol = cfg.ldro ? cfg.sf - 2 : cfg.sf;
    // ceil((payload_bits * (4+cr) / 4) / bits_per_symbol), all in integers.
    return static_cast<std::size_t>((coded_bits_x4 + 4 * bits_per_symbol - 1) / (4 * bits_per_symbol));
}

double bin_to_signed_freq(std::size_t bin, std::size_t n, double sample_rate_hz) {
    const double idx = (bin >= n / 2) ? static_cast<double>(bin) - static_cast<double>(n)
                                      : static_cast<double>(bin);
    return idx * sample_rate_hz / static_cast<double>(n);
}

ChirpDemod::ChirpDemod(const ModemConfig& cfg)
    : cfg_(cfg), fft_(cfg.chirp_samples) {
    const BasebandSignal up = symbol_envelope(cfg, 0);
    up_conj_.resize(up.samples.size());
    down_conj_.resize(up.samples.size());
    for (std::size_t i = 0; i < up.samples.size(); ++i) {
        up_conj_[i] = std::conj(up.samples[i]); // = pure downchirp
        down_conj_[i] = up.samples[i];          // conj(downchirp) = pure upchirp
    }
    work_.resize(cfg.chirp_samples);
    spec_.resize(cfg.chirp_samples);
}

DemodResult ChirpDemod::demod(std::span<const std::complex<double>> segment,
                              ChirpKind received) {
    const std::size_t n = cfg_.chirp_samples;
    if (segment.size() != n)
        throw std::invalid_argument("demod_chirp: segment must hold exactly one chirp");

    const auto& ref = (received == ChirpKind::Up) ? up_conj_ : down_conj_;
    for (std::size_t i = 0; i < n; ++i) work_[i] = segment[i] * ref[i];
    fft_.forward(work_.data(), spec_.data());

    // Strictly-greater comparison makes the lowest index win ties.
    std::size_t best = 0;
    double best_mag2 = std::norm(spec_[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double m2 = std::norm(spec_[i]);
        if (m2 > best_mag2) {
            best_mag2 = m2;
            best = i;
        }
    }

    DemodResult res;
    res.peak_bin = best;
    res.freq_hz = bin_to_signed_freq(best, n, cfg_.sample_rate_hz);
    res.magnitude = std::sqrt(best_mag2);

    // Symbol decision: quantize the signed peak frequency to the nearest
    // symbol slot (multiples of bin_width) and reduce mod M. With LDRO that
    // is the nearest multiple of four DFT bins divided by four.
    const long long slot = std::llround(res.freq_hz / cfg_.bin_width_hz);
    const long long m = static_cast<long long>(cfg_.alphabet_size);
    res.symbol = static_cast<std::uint32_t>(((slot % m) + m) % m);
    return res;
}

DemodResult demod_chirp(const ModemConfig& cfg,
                        std::span<const std::complex<double>> segment,
                        ChirpKind received) {
    ChirpDemod demod(cfg);
    return demod.demod(segment, received);
}

} // namespace lorasat
