#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <lorasat/modem.hpp>
#include <lorasat/orbit.hpp>

namespace lorasat {

enum class EstimatorKind { None, Genie, Point, Linear, MidamblePoint, MidambleLinear };

std::string_view to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(std::string_view name);
bool uses_midambles(EstimatorKind kind);

// Piecewise correction over the payload. Time runs on the payload clock
// (t = 0 at the first payload sample). Within a segment the corrected
// frequency is f0 + slope * (t - t_seg_start) and the applied factor is
// exp(-j * theta(t)) with
//   theta(t) = phase0 + 2*pi * [f0 * dt + slope/2 * dt^2],  dt = t - t_seg_start.
// phase0 is chosen so theta is continuous across segments; magnitude-only
// detection does not care, but continuous phase keeps waveforms inspectable.
struct PlanSegment {
    std::size_t start_sample = 0; // payload-relative, [start, end)
    std::size_t end_sample = 0;
    double f0_hz = 0.0;
    double slope_hz_per_s = 0.0;
    double phase0_rad = 0.0;
};

struct CompensationPlan {
    std::vector<PlanSegment> segments;

    // Throws std::invalid_argument unless segments exactly tile
    // [0, payload_samples) in order without gaps or overlap.
    void validate_tiling(std::size_t payload_samples) const;

    // Corrected frequency at payload time t (for diagnostics and tests).
    double frequency_at(double t_s, double sample_rate_hz) const;
};

// Per-anchor measurement trail for diagnostics (--dump-estimates).
struct AnchorRecord {
    double t_s = 0.0;      // anchor time on the payload clock (chirp center)
    long raw_bin = 0;      // signed DFT bin of the measured peak
    double freq_hz = 0.0;  // raw_bin * f_s / N; residual for midamble anchors
};

struct EstimateReport {
    EstimatorKind kind = EstimatorKind::None;
    std::vector<AnchorRecord> anchors;
    std::vector<double> slopes_hz_per_s;   // alpha / alpha_mid values
    std::vector<double> segment_freqs_hz;  // cumulative frequency per segment
    std::string to_json() const;
};

// Peak of the dechirped spectrum as a signed frequency (multiple of f_s/N).
// A received downchirp is multiplied by the pure upchirp, a received upchirp
// (pilot) by the pure downchirp; either way a frequency offset shows up as a
// tone at that offset. No fractional-bin interpolation.
double estimate_offset_hz(const ModemConfig& cfg,
                          std::span<const std::complex<double>> chirp,
                          ChirpKind received);

// Plan builders. `preamble_downchirps` holds exactly layout.n_dw chirps (the
// received synchronization downchirps); `payload` holds layout.n_sym chirps.
// The downchirp closest to the payload starts at -T_c on the payload clock.
// Measurements are attributed to chirp centers.

// Constant correction from the last preamble downchirp.
CompensationPlan point_plan(const ModemConfig& cfg, const FrameLayout& layout,
                            std::span<const std::complex<double>> preamble_downchirps,
                            EstimateReport* report = nullptr);

// Affine correction through the first and last preamble downchirp estimates,
// extrapolated over the whole payload. Requires n_dw >= 2.
CompensationPlan linear_plan(const ModemConfig& cfg, const FrameLayout& layout,
                             std::span<const std::complex<double>> preamble_downchirps,
                             EstimateReport* report = nullptr);

// Piecewise-constant correction: starts from the point estimate and, at each
// midamble, adds the residual measured on the already-compensated pilot to
// the running frequency. Segment boundaries sit at midamble ends.
CompensationPlan midamble_point_plan(const ModemConfig& cfg, const FrameLayout& layout,
                                     std::span<const std::complex<double>> preamble_downchirps,
                                     std::span<const std::complex<double>> payload,
                                     EstimateReport* report = nullptr);

// Piecewise-linear correction: starts from the preamble linear estimate;
// each midamble recovers the absolute offset there (applied correction plus
// measured residual), a new slope is formed against the previous anchor and
// used for the following segment. Requires n_dw >= 2 and midambles.
CompensationPlan midamble_linear_plan(const ModemConfig& cfg, const FrameLayout& layout,
                                      std::span<const std::complex<double>> preamble_downchirps,
                                      std::span<const std::complex<double>> payload,
                                      EstimateReport* report = nullptr);

// Per-chirp affine sampling of the true profile; the upper-bound baseline.
// t_payload_start_s is the absolute pass time of the first payload sample.
CompensationPlan genie_plan(const DopplerProfile& profile, double t_payload_start_s,
                            const ModemConfig& cfg, const FrameLayout& layout);

// Single zero-frequency segment spanning the payload.
CompensationPlan identity_plan(const ModemConfig& cfg, const FrameLayout& layout);

// Applies exp(-j theta(t)) segment by segment. The plan must tile the signal.
BasebandSignal apply_plan(const BasebandSignal& payload, const CompensationPlan& plan);

// Midamble spacing advisor. T = k * R_s / |xi|; n_star = ceil(T_c n_sym / T);
// n_int = ceil(n_sym / n_star). xi == 0 sets midambles_needed = false instead
// of dividing by zero.
struct MidambleAdvice {
    bool midambles_needed = false;
    double update_interval_s = 0.0; // T_point,mid
    std::size_t n_star = 0;         // recommended midamble count
    std::size_t n_int = 0;          // chirps between midambles
};

MidambleAdvice recommended_midamble_interval(const ModemConfig& cfg, double k,
                                             double xi_hz_per_s, std::size_t n_sym);

} // namespace lorasat
