#include <doctest.h>

#include <stdexcept>

#include <lorasat/modem.hpp>

#include <cmath>
#include <complex>
#include <numbers>

using namespace lorasat;

namespace {

// Midpoint instantaneous frequency between samples k and k+1, from the phase
// increment; independent of how the waveform was synthesized.
double midpoint_freq(const BasebandSignal& sig, std::size_t k) {
    const std::complex<double> rot = sig.samples[k + 1] * std::conj(sig.samples[k]);
    return std::arg(rot) * sig.sample_rate_hz / (2.0 * std::numbers::pi);
}

} // namespace

TEST_SUITE("modem") {

TEST_CASE("config derives the design relations") {
    const ModemConfig cfg = ModemConfig::make(8, 500e3);
    CHECK(cfg.alphabet_size == 256);
    CHECK(cfg.chirp_samples == 256);
    CHECK(cfg.chirp_duration_s == doctest::Approx(5.12e-4).epsilon(1e-12));
    // B * T_c = 2^sf exactly
    CHECK(cfg.bandwidth_hz * cfg.chirp_duration_s == doctest::Approx(256.0).epsilon(1e-12));
    CHECK(cfg.bin_width_hz == doctest::Approx(cfg.symbol_rate_hz).epsilon(1e-12));

    for (int sf = 7; sf <= 12; ++sf) {
        const ModemConfig off = ModemConfig::make(sf, 125e3, false);
        const ModemConfig on = ModemConfig::make(sf, 125e3, true);
        CHECK(on.alphabet_size * 4 == off.alphabet_size);
        CHECK(on.bin_width_hz == doctest::Approx(4.0 * off.bin_width_hz).epsilon(1e-12));
        CHECK(off.chirp_samples % off.alphabet_size == 0);
        CHECK(on.chirp_samples % on.alphabet_size == 0);
        CHECK(on.chirp_duration_s == off.chirp_duration_s);
    }

    CHECK_THROWS_AS(ModemConfig::make(6, 125e3), std::invalid_argument);
    CHECK_THROWS_AS(ModemConfig::make(13, 125e3), std::invalid_argument);
    CHECK_THROWS_AS(ModemConfig::make(7, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModemConfig::make(7, 125e3, false, 0), std::invalid_argument);
}

TEST_CASE("symbol envelope frequency law") {
    const ModemConfig cfg = ModemConfig::make(8, 500e3); // M = 256, T_c = 5.12e-4 s
    const std::uint32_t s = 91;
    const BasebandSignal sig = symbol_envelope(cfg, s);
    REQUIRE(sig.samples.size() == 256);

    // Unit amplitude at every sample, phase zero at t = 0.
    for (const auto& v : sig.samples) CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sig.samples[0].real() == doctest::Approx(1.0).epsilon(1e-12));

    // Start frequency -B/2 + (B/M) s = -72265.625 Hz; the first midpoint adds
    // half a sample of the B/T_c sweep.
    const double slope = cfg.bandwidth_hz / cfg.chirp_duration_s;
    const double f_start = -72265.625;
    CHECK(midpoint_freq(sig, 0) ==
          doctest::Approx(f_start + 0.5 * slope / cfg.sample_rate_hz).epsilon(1e-9));

    // The sweep starts negative, rises through zero and wraps from +B/2 back
    // to -B/2 exactly at sample N - s*N/M = 165: the one downward sign flip
    // sits between the midpoints around sample 165.
    std::size_t wrap_at = 0;
    std::size_t flips = 0;
    for (std::size_t k = 1; k + 1 < sig.samples.size(); ++k) {
        if (midpoint_freq(sig, k - 1) > 0.0 && midpoint_freq(sig, k) < 0.0) {
            wrap_at = k;
            ++flips;
        }
    }
    CHECK(flips == 1);
    CHECK(wrap_at == 165);

    CHECK_THROWS_AS(symbol_envelope(cfg, 256), std::invalid_argument);
}

TEST_CASE("ldro start frequency uses the widened slot spacing") {
    const ModemConfig cfg = ModemConfig::make(10, 125e3, true); // M = 256, bin = 4 R_s
    const std::uint32_t s = 17;
    const BasebandSignal sig = symbol_envelope(cfg, s);
    const double slope = cfg.bandwidth_hz / cfg.chirp_duration_s;
    const double expect = -cfg.bandwidth_hz / 2 + cfg.bin_width_hz * s;
    CHECK(midpoint_freq(sig, 0) ==
          doctest::Approx(expect + 0.5 * slope / cfg.sample_rate_hz).epsilon(1e-9));
}

TEST_CASE("downchirp is the conjugate upchirp") {
    const ModemConfig cfg = ModemConfig::make(7, 125e3);
    const BasebandSignal up = symbol_envelope(cfg, 0);
    const BasebandSignal down = downchirp_envelope(cfg);

    for (std::size_t k = 0; k < up.samples.size(); ++k) {
        CHECK(std::conj(down.samples[k]) == up.samples[k]);
        // |e^{j theta}|^2: the product collapses to 1 + 0j
        const std::complex<double> prod = down.samples[k] * up.samples[k];
        CHECK(prod.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(prod.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }

    // DFT of the product peaks in bin 0.
    std::vector<std::complex<double>> prod(up.samples.size());
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = down.samples[k] * up.samples[k];
    const Fft fft(prod.size());
    const auto spec = fft.forward(prod);
    std::size_t best = 0;
    for (std::size_t k = 1; k < spec.size(); ++k)
        if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
    CHECK(best == 0);
}

TEST_CASE("frame layout midamble placement") {
    // 21 data chirps with one pilot after every 6: positions 6, 13, 20 plus
    // the trailing partial-group pilot at 24; 25 payload chirps in total.
    const FrameLayout a = FrameLayout::with_midambles(8, 2, 21, 6);
    CHECK(a.n_sym == 25);
    CHECK(a.midamble_positions == std::vector<std::size_t>{6, 13, 20, 24});
    CHECK(a.data_chirps() == 21);

    // The worked setup: 15 data chirps, spacing 4 -> 4 pilots.
    const FrameLayout b = FrameLayout::with_midambles(8, 2, 15, 4);
    CHECK(b.n_sym == 19);
    CHECK(b.midamble_positions == std::vector<std::size_t>{4, 9, 14, 18});

    const FrameLayout c = FrameLayout::with_midambles(8, 2, 20, 0);
    CHECK(c.n_sym == 20);
    CHECK(c.midamble_positions.empty());

    FrameLayout bad = a;
    bad.midamble_positions = {6, 6};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.midamble_positions = {30};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("frame assembly") {
    const ModemConfig cfg = ModemConfig::make(7, 125e3);
    const std::size_t n = cfg.chirp_samples;

    FrameLayout layout;
    layout.n_up = 8;
    layout.n_dw = 2;
    layout.n_sym = 25;
    SymbolSequence payload(25, 3);
    const BasebandSignal frame = build_frame(cfg, layout, payload, 1.5);
    CHECK(frame.samples.size() == 35 * n);
    CHECK(frame.t0_s == 1.5);

    // Degenerate payload: preamble only.
    FrameLayout empty;
    empty.n_up = 8;
    empty.n_dw = 2;
    CHECK(build_frame(cfg, empty, {}).samples.size() == 10 * n);

    // Pilot chirps equal the pure upchirp; data chirps match the closed-form
    // synthesis to rotator accuracy.
    const FrameLayout mid = FrameLayout::with_midambles(2, 2, 5, 2);
    SymbolSequence data = {9, 40, 127, 0, 63};
    const BasebandSignal f2 = build_frame(cfg, mid, data);
    const BasebandSignal up0 = symbol_envelope(cfg, 0);
    for (std::size_t pos : mid.midamble_positions) {
        const std::size_t base = (mid.total_chirps() - mid.n_sym + pos) * n;
        for (std::size_t k = 0; k < n; ++k)
            CHECK(f2.samples[base + k] == up0.samples[k]);
    }
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < mid.n_sym; ++pos) {
        if (mid.is_midamble(pos)) continue;
        const BasebandSignal ref = symbol_envelope(cfg, data[next++]);
        const std::size_t base = (mid.total_chirps() - mid.n_sym + pos) * n;
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(f2.samples[base + k] - ref.samples[k]) < 1e-10);
    }

    CHECK_THROWS_AS(build_frame(cfg, layout, SymbolSequence(24, 0)), std::invalid_argument);
    CHECK_THROWS_AS(build_frame(cfg, layout, SymbolSequence(25, 9999)), std::invalid_argument);
}

TEST_CASE("payload symbol count") {
    CHECK(payload_symbol_count(ModemConfig::make(10, 125e3), 120, 1) == 15);
    CHECK(payload_symbol_count(ModemConfig::make(12, 125e3, true), 120, 1) == 15);
    CHECK(payload_symbol_count(ModemConfig::make(7, 125e3), 1, 1) == 1);
    CHECK(payload_symbol_count(ModemConfig::make(7, 125e3), 120, 1) == 22);
    CHECK(payload_symbol_count(ModemConfig::make(12, 125e3), 120, 1) == 13);
    CHECK_THROWS_AS(payload_symbol_count(ModemConfig::make(7, 125e3), 120, 0), std::invalid_argument);
    CHECK_THROWS_AS(payload_symbol_count(ModemConfig::make(7, 125e3), 120, 5), std::invalid_argument);
    CHECK_THROWS_AS(payload_symbol_count(ModemConfig::make(7, 125e3), 0, 1), std::invalid_argument);
}

TEST_CASE("noiseless round trip across configs") {
    // Exhaustive for the small alphabets, strided for the large ones; the
    // acceptance suite runs every symbol of every config.
    for (int sf = 7; sf <= 12; ++sf) {
        for (bool ldro : {false, true}) {
            const ModemConfig cfg = ModemConfig::make(sf, 125e3, ldro);
            ChirpDemod demod(cfg);
            const std::uint32_t step = cfg.alphabet_size <= 256 ? 1 : 37;
            for (std::uint32_t s = 0; s < cfg.alphabet_size; s += step) {
                const BasebandSignal sig = symbol_envelope(cfg, s);
                const DemodResult r = demod.demod(sig.samples, ChirpKind::Up);
                REQUIRE(r.symbol == s);
                CHECK(r.magnitude == doctest::Approx(double(cfg.chirp_samples)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("round trip with oversampling") {
    const ModemConfig cfg = ModemConfig::make(7, 125e3, false, 2);
    ChirpDemod demod(cfg);
    for (std::uint32_t s = 0; s < cfg.alphabet_size; ++s) {
        const BasebandSignal sig = symbol_envelope(cfg, s);
        REQUIRE(sig.samples.size() == 256);
        CHECK(demod.demod(sig.samples, ChirpKind::Up).symbol == s);
    }

    // The frame path (rotator synthesis) agrees with the closed form at
    // OSF > 1, where the wrap factor is a nontrivial root of unity.
    const FrameLayout layout = FrameLayout::with_midambles(1, 1, 3, 0);
    const SymbolSequence data = {1, 77, 127};
    const BasebandSignal frame = build_frame(cfg, layout, data);
    const std::size_t n = cfg.chirp_samples;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const BasebandSignal ref = symbol_envelope(cfg, data[i]);
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(frame.samples[(2 + i) * n + k] - ref.samples[k]) < 1e-10);
    }
}

TEST_CASE("static offset cycles the decision") {
    // Brute force over the whole SF7 alphabet for every shift in -3..3.
    const ModemConfig cfg = ModemConfig::make(7, 125e3);
    ChirpDemod demod(cfg);
    const long m = cfg.alphabet_size;
    for (long j = -3; j <= 3; ++j) {
        for (long s = 0; s < m; ++s) {
            BasebandSignal sig = symbol_envelope(cfg, static_cast<std::uint32_t>(s));
            const double f = static_cast<double>(j) * cfg.bin_width_hz;
            for (std::size_t k = 0; k < sig.samples.size(); ++k) {
                const double t = static_cast<double>(k) / cfg.sample_rate_hz;
                sig.samples[k] *= std::polar(1.0, 2.0 * std::numbers::pi * f * t);
            }
            const long expect = ((s + j) % m + m) % m;
            CHECK(demod.demod(sig.samples, ChirpKind::Up).symbol ==
                  static_cast<std::uint32_t>(expect));
        }
    }
}

TEST_CASE("sync downchirp demod reads the static offset") {
    const ModemConfig cfg = ModemConfig::make(9, 125e3);
    for (double mult : {5.0, -5.0}) {
        BasebandSignal down = downchirp_envelope(cfg);
        const double f = mult * cfg.symbol_rate_hz;
        for (std::size_t k = 0; k < down.samples.size(); ++k) {
            const double t = static_cast<double>(k) / cfg.sample_rate_hz;
            down.samples[k] *= std::polar(1.0, 2.0 * std::numbers::pi * f * t);
        }
        const DemodResult r = demod_chirp(cfg, down.samples, ChirpKind::Down);
        CHECK(r.freq_hz == doctest::Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("ldro peaks sit four bins apart") {
    const ModemConfig cfg = ModemConfig::make(10, 125e3, true);
    ChirpDemod demod(cfg);
    std::size_t prev_bin = 0;
    for (std::uint32_t s = 0; s < 8; ++s) {
        const BasebandSignal sig = symbol_envelope(cfg, s);
        const DemodResult r = demod.demod(sig.samples, ChirpKind::Up);
        CHECK(r.symbol == s);
        if (s > 0) CHECK(r.peak_bin - prev_bin == 4);
        prev_bin = r.peak_bin;
    }
}

TEST_CASE("demod rejects wrong segment lengths") {
    const ModemConfig cfg = ModemConfig::make(7, 125e3);
    std::vector<std::complex<double>> short_seg(cfg.chirp_samples - 1);
    CHECK_THROWS_AS(demod_chirp(cfg, short_seg, ChirpKind::Up), std::invalid_argument);
}

TEST_CASE("signed frequency mapping") {
    CHECK(bin_to_signed_freq(0, 128, 125e3) == 0.0);
    CHECK(bin_to_signed_freq(1, 128, 125e3) == doctest::Approx(976.5625));
    CHECK(bin_to_signed_freq(127, 128, 125e3) == doctest::Approx(-976.5625));
    CHECK(bin_to_signed_freq(64, 128, 125e3) == doctest::Approx(-62500.0));
}

} // TEST_SUITE
