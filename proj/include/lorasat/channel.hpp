#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include <lorasat/modem.hpp>
#include <lorasat/orbit.hpp>

namespace lorasat {

// Deterministic noise stream: a standardized engine plus a Box-Muller
// transform, so identical seeds give bit-identical noise on any platform.
class NoiseRng {
public:
    explicit NoiseRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform draw in [0, 2^bits) for bits <= 32; exact, no modulo bias.
    std::uint32_t next_bits(int bits) {
        return static_cast<std::uint32_t>(engine_() >> (64 - bits));
    }

    double next_unit() { // (0, 1]
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> next_cgauss(double variance);

private:
    std::mt19937_64 engine_;
};

// SplitMix64-style avalanche mix used to derive independent per-trial and
// per-cell seeds from a master seed; adding streams never perturbs others.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t hash_string(std::string_view s); // FNV-1a 64

// Channel settings for a single frame transmission. snr_db absent means the
// explicit "no noise" sentinel.
struct ChannelConfig {
    DopplerProfile profile;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    double t_start_s = 0.0;
};

// Multiplies each sample by exp(j * phase_from_profile(...)); magnitudes are
// preserved exactly. Doppler acts as multiplicative carrier phase only;
// sampling-clock skew is ignored.
BasebandSignal apply_doppler(const BasebandSignal& in,
                             const DopplerProfile& profile, double t_start_s);

// Adds complex AWGN of per-sample variance oversampling * 10^(-snr_db/10)
// for a unit-power signal, so the in-band SNR over bandwidth B is snr_db for
// any integer oversampling factor.
BasebandSignal add_awgn(const BasebandSignal& in, double snr_db, NoiseRng& rng,
                        int oversampling = 1);

// SNR = Es/N0 / 2^sf (LDRO leaves B and T_c unchanged, so 2^sf regardless).
double snr_from_esn0(const ModemConfig& cfg, double esn0_db);

} // namespace lorasat
