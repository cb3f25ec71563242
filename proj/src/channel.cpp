#include <lorasat/channel.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lorasat {

std::complex<double> NoiseRng::next_cgauss(double variance) {
    // Box-Muller on the standardized engine output; one uniform pair per
    // complex sample keeps the stream layout fixed.
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-std::log(u1) * variance); // E|z|^2 = variance
    const double ang = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(ang), r * std::sin(ang)};
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    // SplitMix64 finalizer over the combined words.
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

BasebandSignal apply_doppler(const BasebandSignal& in, const DopplerProfile& profile,
                             double t_start_s) {
    BasebandSignal out = in;
    if (profile.kind() == DopplerProfile::Kind::Zero) return out;
    const std::vector<double> phase =
        phase_from_profile(profile, t_start_s, in.samples.size(), in.sample_rate_hz);
    for (std::size_t k = 0; k < out.samples.size(); ++k)
        out.samples[k] *= std::polar(1.0, phase[k]);
    return out;
}

BasebandSignal add_awgn(const BasebandSignal& in, double snr_db, NoiseRng& rng,
                        int oversampling) {
    if (oversampling < 1) throw std::invalid_argument("add_awgn: oversampling must be >= 1");
    // Noise power is defined in the signal bandwidth B at critical sampling;
    // at OSF times the rate the per-sample variance scales by OSF so the
    // in-band SNR stays put.
    const double variance = static_cast<double>(oversampling) * std::pow(10.0, -snr_db / 10.0);
    BasebandSignal out = in;
    for (auto& v : out.samples) v += rng.next_cgauss(variance);
    return out;
}

double snr_from_esn0(const ModemConfig& cfg, double esn0_db) {
    return esn0_db - 10.0 * std::log10(static_cast<double>(cfg.chips));
}

} // namespace lorasat
