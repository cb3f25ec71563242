#include <lorasat/estimators.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lorasat {

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::None: return "none";
    case EstimatorKind::Genie: return "genie";
    case EstimatorKind::Point: return "point";
    case EstimatorKind::Linear: return "linear";
    case EstimatorKind::MidamblePoint: return "midamble-point";
    case EstimatorKind::MidambleLinear: return "midamble-linear";
    }
    return "none";
}

EstimatorKind estimator_from_string(std::string_view name) {
    if (name == "none") return EstimatorKind::None;
    if (name == "genie") return EstimatorKind::Genie;
    if (name == "point") return EstimatorKind::Point;
    if (name == "linear") return EstimatorKind::Linear;
    if (name == "midamble-point") return EstimatorKind::MidamblePoint;
    if (name == "midamble-linear") return EstimatorKind::MidambleLinear;
    throw std::invalid_argument("unknown estimator: " + std::string(name));
}

bool uses_midambles(EstimatorKind kind) {
    return kind == EstimatorKind::MidamblePoint || kind == EstimatorKind::MidambleLinear;
}

void CompensationPlan::validate_tiling(std::size_t payload_samples) const {
    if (segments.empty())
        throw std::invalid_argument("CompensationPlan: no segments");
    std::size_t expected = 0;
    for (const auto& seg : segments) {
        if (seg.start_sample != expected || seg.end_sample <= seg.start_sample)
            throw std::invalid_argument("CompensationPlan: segments must tile the payload");
        expected = seg.end_sample;
    }
    if (expected != payload_samples)
        throw std::invalid_argument("CompensationPlan: segments do not cover the payload");
}

double CompensationPlan::frequency_at(double t_s, double sample_rate_hz) const {
    const double sample = t_s * sample_rate_hz;
    for (const auto& seg : segments) {
        if (sample < static_cast<double>(seg.end_sample) ||
            &seg == &segments.back()) {
            const double t0 = static_cast<double>(seg.start_sample) / sample_rate_hz;
            return seg.f0_hz + seg.slope_hz_per_s * (t_s - t0);
        }
    }
    return 0.0;
}

std::string EstimateReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"estimator\":\"" << to_string(kind) << "\",\"anchors\":[";
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (i) os << ",";
        os << "{\"t_s\":" << anchors[i].t_s << ",\"raw_bin\":" << anchors[i].raw_bin
           << ",\"freq_hz\":" << anchors[i].freq_hz << "}";
    }
    os << "],\"slopes_hz_per_s\":[";
    for (std::size_t i = 0; i < slopes_hz_per_s.size(); ++i) {
        if (i) os << ",";
        os << slopes_hz_per_s[i];
    }
    os << "],\"segment_freqs_hz\":[";
    for (std::size_t i = 0; i < segment_freqs_hz.size(); ++i) {
        if (i) os << ",";
        os << segment_freqs_hz[i];
    }
    os << "]}";
    return os.str();
}

double estimate_offset_hz(const ModemConfig& cfg,
                          std::span<const std::complex<double>> chirp,
                          ChirpKind received) {
    ChirpDemod demod(cfg);
    return demod.demod(chirp, received).freq_hz;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long freq_to_bin(const ModemConfig& cfg, double freq_hz) {
    return std::lround(freq_hz * static_cast<double>(cfg.chirp_samples) / cfg.sample_rate_hz);
}

void record_anchor(EstimateReport* report, const ModemConfig& cfg, double t_s, double freq_hz) {
    if (!report) return;
    report->anchors.push_back({t_s, freq_to_bin(cfg, freq_hz), freq_hz});
}

// Chains segment phases so the correction phase is continuous; magnitude
// detection is indifferent but waveform dumps stay readable.
void chain_phases(CompensationPlan& plan, double sample_rate_hz) {
    double phase = 0.0;
    for (auto& seg : plan.segments) {
        seg.phase0_rad = phase;
        const double dur = static_cast<double>(seg.end_sample - seg.start_sample) / sample_rate_hz;
        phase += kTwoPi * (seg.f0_hz * dur + 0.5 * seg.slope_hz_per_s * dur * dur);
    }
}

std::span<const std::complex<double>> nth_chirp(const ModemConfig& cfg,
                                                std::span<const std::complex<double>> block,
                                                std::size_t index) {
    const std::size_t n = cfg.chirp_samples;
    if (block.size() < (index + 1) * n)
        throw std::invalid_argument("estimator: received block is too short");
    return block.subspan(index * n, n);
}

// Removes the segment's affine frequency law from one chirp and measures the
// leftover offset on the dechirped spectrum. The de-rotation time origin is
// the chirp start; constant phase differences do not move the peak.
double measure_residual(ChirpDemod& demod, std::span<const std::complex<double>> chirp,
                        double f_at_chirp_start, double slope, ChirpKind received) {
    const ModemConfig& cfg = demod.config();
    const double fs = cfg.sample_rate_hz;
    std::vector<std::complex<double>> derotated(chirp.size());
    for (std::size_t k = 0; k < chirp.size(); ++k) {
        const double dt = static_cast<double>(k) / fs;
        const double theta = kTwoPi * (f_at_chirp_start * dt + 0.5 * slope * dt * dt);
        derotated[k] = chirp[k] * std::polar(1.0, -theta);
    }
    return demod.demod(derotated, received).freq_hz;
}

struct PreambleLinearFit {
    double first_hz = 0.0;  // S_linear[1]
    double last_hz = 0.0;   // S_linear[n_dw]
    double slope_hz_per_s = 0.0;
    double t_last_s = 0.0;  // payload-clock center of the last downchirp
};

// Downchirp i occupies [-(n_dw - i) T_c, -(n_dw - i - 1) T_c) on the payload
// clock; its estimate is attributed to the chirp center.
double downchirp_center_s(const ModemConfig& cfg, const FrameLayout& layout, int i) {
    return (static_cast<double>(i) - static_cast<double>(layout.n_dw) + 0.5) * cfg.chirp_duration_s;
}

PreambleLinearFit fit_preamble(const ModemConfig& cfg, const FrameLayout& layout,
                               std::span<const std::complex<double>> preamble_downchirps,
                               ChirpDemod& demod, EstimateReport* report) {
    PreambleLinearFit fit;
    fit.first_hz = demod.demod(nth_chirp(cfg, preamble_downchirps, 0), ChirpKind::Down).freq_hz;
    fit.last_hz = demod.demod(nth_chirp(cfg, preamble_downchirps, layout.n_dw - 1), ChirpKind::Down).freq_hz;
    fit.slope_hz_per_s = (fit.last_hz - fit.first_hz) /
                         (cfg.chirp_duration_s * static_cast<double>(layout.n_dw - 1));
    fit.t_last_s = downchirp_center_s(cfg, layout, layout.n_dw - 1);
    record_anchor(report, cfg, downchirp_center_s(cfg, layout, 0), fit.first_hz);
    record_anchor(report, cfg, fit.t_last_s, fit.last_hz);
    return fit;
}

} // namespace

CompensationPlan point_plan(const ModemConfig& cfg, const FrameLayout& layout,
                            std::span<const std::complex<double>> preamble_downchirps,
                            EstimateReport* report) {
    if (layout.n_dw < 1) throw std::invalid_argument("point_plan: needs at least one downchirp");
    ChirpDemod demod(cfg);
    const double s_point =
        demod.demod(nth_chirp(cfg, preamble_downchirps, layout.n_dw - 1), ChirpKind::Down).freq_hz;

    CompensationPlan plan;
    plan.segments.push_back({0, layout.n_sym * cfg.chirp_samples, s_point, 0.0, 0.0});
    if (report) {
        report->kind = EstimatorKind::Point;
        record_anchor(report, cfg, downchirp_center_s(cfg, layout, layout.n_dw - 1), s_point);
        report->segment_freqs_hz.push_back(s_point);
    }
    return plan;
}

CompensationPlan linear_plan(const ModemConfig& cfg, const FrameLayout& layout,
                             std::span<const std::complex<double>> preamble_downchirps,
                             EstimateReport* report) {
    if (layout.n_dw < 2) throw std::invalid_argument("linear_plan: needs n_dw >= 2");
    if (report) report->kind = EstimatorKind::Linear;
    ChirpDemod demod(cfg);
    const PreambleLinearFit fit = fit_preamble(cfg, layout, preamble_downchirps, demod, report);

    // Extrapolate the line through the two anchors across the whole payload:
    // f(t) = last + slope (t - t_last), anchored at the payload start.
    CompensationPlan plan;
    plan.segments.push_back({0, layout.n_sym * cfg.chirp_samples,
                             fit.last_hz + fit.slope_hz_per_s * (0.0 - fit.t_last_s),
                             fit.slope_hz_per_s, 0.0});
    if (report) {
        report->slopes_hz_per_s.push_back(fit.slope_hz_per_s);
        report->segment_freqs_hz.push_back(plan.segments[0].f0_hz);
    }
    return plan;
}

CompensationPlan midamble_point_plan(const ModemConfig& cfg, const FrameLayout& layout,
                                     std::span<const std::complex<double>> preamble_downchirps,
                                     std::span<const std::complex<double>> payload,
                                     EstimateReport* report) {
    if (layout.n_int < 1 || layout.midamble_positions.empty())
        throw std::invalid_argument("midamble_point_plan: layout has no midambles");
    if (payload.size() != layout.n_sym * cfg.chirp_samples)
        throw std::invalid_argument("midamble_point_plan: payload size mismatch");
    if (report) report->kind = EstimatorKind::MidamblePoint;

    ChirpDemod demod(cfg);
    double freq =
        demod.demod(nth_chirp(cfg, preamble_downchirps, layout.n_dw - 1), ChirpKind::Down).freq_hz;
    if (report) {
        record_anchor(report, cfg, downchirp_center_s(cfg, layout, layout.n_dw - 1), freq);
        report->segment_freqs_hz.push_back(freq);
    }

    const std::size_t n = cfg.chirp_samples;
    CompensationPlan plan;
    std::size_t seg_start = 0;
    for (std::size_t pos : layout.midamble_positions) {
        const std::size_t seg_end = (pos + 1) * n;
        plan.segments.push_back({seg_start, seg_end, freq, 0.0, 0.0});

        // The pilot sits inside the segment just emitted, so the residual is
        // measured against exactly the correction the plan applies there.
        const double residual =
            measure_residual(demod, payload.subspan(pos * n, n), freq, 0.0, ChirpKind::Up);
        record_anchor(report, cfg, (static_cast<double>(pos) + 0.5) * cfg.chirp_duration_s, residual);
        freq += residual;
        if (report) report->segment_freqs_hz.push_back(freq);
        seg_start = seg_end;
    }
    if (seg_start < layout.n_sym * n)
        plan.segments.push_back({seg_start, layout.n_sym * n, freq, 0.0, 0.0});
    chain_phases(plan, cfg.sample_rate_hz);
    return plan;
}

CompensationPlan midamble_linear_plan(const ModemConfig& cfg, const FrameLayout& layout,
                                      std::span<const std::complex<double>> preamble_downchirps,
                                      std::span<const std::complex<double>> payload,
                                      EstimateReport* report) {
    if (layout.n_dw < 2) throw std::invalid_argument("midamble_linear_plan: needs n_dw >= 2");
    if (layout.n_int < 1 || layout.midamble_positions.empty())
        throw std::invalid_argument("midamble_linear_plan: layout has no midambles");
    if (payload.size() != layout.n_sym * cfg.chirp_samples)
        throw std::invalid_argument("midamble_linear_plan: payload size mismatch");
    if (report) report->kind = EstimatorKind::MidambleLinear;

    ChirpDemod demod(cfg);
    const PreambleLinearFit fit = fit_preamble(cfg, layout, preamble_downchirps, demod, report);

    // Running anchor (time, absolute offset) and slope; both are refreshed at
    // every midamble and extrapolated forward into the following segment.
    double anchor_t = fit.t_last_s;
    double anchor_f = fit.last_hz;
    double slope = fit.slope_hz_per_s;
    if (report) report->slopes_hz_per_s.push_back(slope);

    const std::size_t n = cfg.chirp_samples;
    const double fs = cfg.sample_rate_hz;
    CompensationPlan plan;
    std::size_t seg_start = 0;
    for (std::size_t pos : layout.midamble_positions) {
        const std::size_t seg_end = (pos + 1) * n;
        const double t_seg = static_cast<double>(seg_start) / fs;
        plan.segments.push_back({seg_start, seg_end,
                                 anchor_f + slope * (t_seg - anchor_t), slope, 0.0});

        const double t_chirp = static_cast<double>(pos) * cfg.chirp_duration_s;
        const double t_mid = t_chirp + 0.5 * cfg.chirp_duration_s;
        const double f_at_chirp = anchor_f + slope * (t_chirp - anchor_t);
        const double residual =
            measure_residual(demod, payload.subspan(pos * n, n), f_at_chirp, slope, ChirpKind::Up);
        record_anchor(report, cfg, t_mid, residual);

        // Absolute offset at the pilot = applied correction there + residual;
        // new slope against the previous anchor drives the next segment.
        const double s_m = anchor_f + slope * (t_mid - anchor_t) + residual;
        slope = (s_m - anchor_f) / (t_mid - anchor_t);
        anchor_f = s_m;
        anchor_t = t_mid;
        if (report) {
            report->slopes_hz_per_s.push_back(slope);
            report->segment_freqs_hz.push_back(s_m);
        }
        seg_start = seg_end;
    }
    if (seg_start < layout.n_sym * n) {
        const double t_seg = static_cast<double>(seg_start) / fs;
        plan.segments.push_back({seg_start, layout.n_sym * n,
                                 anchor_f + slope * (t_seg - anchor_t), slope, 0.0});
    }
    chain_phases(plan, cfg.sample_rate_hz);
    return plan;
}

CompensationPlan genie_plan(const DopplerProfile& profile, double t_payload_start_s,
                            const ModemConfig& cfg, const FrameLayout& layout) {
    const std::size_t n = cfg.chirp_samples;
    CompensationPlan plan;
    plan.segments.reserve(layout.n_sym);
    for (std::size_t i = 0; i < layout.n_sym; ++i) {
        const double t_abs = t_payload_start_s + static_cast<double>(i) * cfg.chirp_duration_s;
        plan.segments.push_back({i * n, (i + 1) * n,
                                 profile.shift_hz(t_abs), profile.rate_hz_per_s(t_abs), 0.0});
    }
    if (plan.segments.empty())
        plan.segments.push_back({0, 0, 0.0, 0.0, 0.0});
    chain_phases(plan, cfg.sample_rate_hz);
    return plan;
}

CompensationPlan identity_plan(const ModemConfig& cfg, const FrameLayout& layout) {
    CompensationPlan plan;
    plan.segments.push_back({0, layout.n_sym * cfg.chirp_samples, 0.0, 0.0, 0.0});
    return plan;
}

BasebandSignal apply_plan(const BasebandSignal& payload, const CompensationPlan& plan) {
    plan.validate_tiling(payload.samples.size());
    BasebandSignal out = payload;
    const double fs = payload.sample_rate_hz;
    for (const auto& seg : plan.segments) {
        for (std::size_t k = seg.start_sample; k < seg.end_sample; ++k) {
            const double dt = static_cast<double>(k - seg.start_sample) / fs;
            const double theta = seg.phase0_rad +
                kTwoPi * (seg.f0_hz * dt + 0.5 * seg.slope_hz_per_s * dt * dt);
            out.samples[k] *= std::polar(1.0, -theta);
        }
    }
    return out;
}

MidambleAdvice recommended_midamble_interval(const ModemConfig& cfg, double k,
                                             double xi_hz_per_s, std::size_t n_sym) {
    if (!(k > 0.0) || k > 0.5)
        throw std::invalid_argument("recommended_midamble_interval: k must be in (0, 0.5]");
    if (n_sym == 0)
        throw std::invalid_argument("recommended_midamble_interval: n_sym must be positive");

    MidambleAdvice advice;
    if (xi_hz_per_s == 0.0) return advice; // no drift to track

    advice.midambles_needed = true;
    advice.update_interval_s = k * cfg.symbol_rate_hz / std::abs(xi_hz_per_s);
    advice.n_star = static_cast<std::size_t>(std::ceil(
        cfg.chirp_duration_s * static_cast<double>(n_sym) / advice.update_interval_s));
    if (advice.n_star == 0) advice.n_star = 1;
    advice.n_int = (n_sym + advice.n_star - 1) / advice.n_star;
    return advice;
}

} // namespace lorasat
