#include <lorasat/sim.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lorasat {

FrameLayout ScenarioConfig::layout() const {
    return FrameLayout::with_midambles(n_up, n_dw, data_symbols_per_frame(), n_int);
}

std::size_t ScenarioConfig::data_symbols_per_frame() const {
    return payload_symbol_count(modem, payload_bits, coding_rate);
}

std::optional<double> ScenarioConfig::effective_snr_db() const {
    if (snr_db) return snr_db;
    if (esn0_db) return snr_from_esn0(modem, *esn0_db);
    return std::nullopt;
}

void ScenarioConfig::validate() const {
    if (esn0_db && snr_db)
        throw std::invalid_argument("ScenarioConfig: give esn0_db or snr_db, not both");
    if (trials < 1) throw std::invalid_argument("ScenarioConfig: trials must be >= 1");
    switch (estimator) {
    case EstimatorKind::Linear:
    case EstimatorKind::MidambleLinear:
        if (n_dw < 2) throw std::invalid_argument("ScenarioConfig: linear estimators need n_dw >= 2");
        break;
    case EstimatorKind::Point:
    case EstimatorKind::MidamblePoint:
        if (n_dw < 1) throw std::invalid_argument("ScenarioConfig: point estimators need n_dw >= 1");
        break;
    default:
        break;
    }
    if (uses_midambles(estimator) && n_int < 1)
        throw std::invalid_argument("ScenarioConfig: midamble estimators need n_int >= 1");
}

namespace {

CompensationPlan build_plan(const ScenarioConfig& sc, const FrameLayout& layout,
                            std::span<const std::complex<double>> preamble_downchirps,
                            std::span<const std::complex<double>> payload,
                            double t_payload_start_s, EstimateReport* report) {
    switch (sc.estimator) {
    case EstimatorKind::None:
        return identity_plan(sc.modem, layout);
    case EstimatorKind::Genie:
        return genie_plan(sc.profile, t_payload_start_s, sc.modem, layout);
    case EstimatorKind::Point:
        return point_plan(sc.modem, layout, preamble_downchirps, report);
    case EstimatorKind::Linear:
        return linear_plan(sc.modem, layout, preamble_downchirps, report);
    case EstimatorKind::MidamblePoint:
        return midamble_point_plan(sc.modem, layout, preamble_downchirps, payload, report);
    case EstimatorKind::MidambleLinear:
        return midamble_linear_plan(sc.modem, layout, preamble_downchirps, payload, report);
    }
    return identity_plan(sc.modem, layout);
}

} // namespace

TrialResult run_trial(const ScenarioConfig& sc, std::uint64_t trial_index,
                      EstimateReport* report) {
    sc.validate();
    const ModemConfig& cfg = sc.modem;
    const FrameLayout layout = sc.layout();
    const std::size_t n_data = layout.data_chirps();
    const std::size_t n = cfg.chirp_samples;

    NoiseRng rng(mix_seed(sc.master_seed, trial_index));

    // M is a power of two, so masked draws are exactly uniform.
    const int bits = cfg.ldro ? cfg.sf - 2 : cfg.sf;
    SymbolSequence payload(n_data);
    for (auto& s : payload) s = static_cast<std::uint16_t>(rng.next_bits(bits));

    BasebandSignal rx = build_frame(cfg, layout, payload, sc.t_start_s);
    if (sc.profile.kind() != DopplerProfile::Kind::Zero)
        rx = apply_doppler(rx, sc.profile, sc.t_start_s);
    if (const auto snr = sc.effective_snr_db())
        rx = add_awgn(rx, *snr, rng, cfg.oversampling);

    const std::size_t payload_offset =
        (static_cast<std::size_t>(layout.n_up) + static_cast<std::size_t>(layout.n_dw)) * n;
    const std::span<const std::complex<double>> all(rx.samples);
    const auto preamble_downchirps =
        all.subspan(static_cast<std::size_t>(layout.n_up) * n,
                    static_cast<std::size_t>(layout.n_dw) * n);
    const auto payload_span = all.subspan(payload_offset, layout.n_sym * n);

    const double t_payload_start = sc.t_start_s + static_cast<double>(payload_offset) / cfg.sample_rate_hz;
    const CompensationPlan plan =
        build_plan(sc, layout, preamble_downchirps, payload_span, t_payload_start, report);

    BasebandSignal payload_rx;
    payload_rx.sample_rate_hz = cfg.sample_rate_hz;
    payload_rx.t0_s = t_payload_start;
    payload_rx.samples.assign(payload_span.begin(), payload_span.end());
    const BasebandSignal compensated = apply_plan(payload_rx, plan);

    ChirpDemod demod(cfg);
    TrialResult result;
    std::size_t next_data = 0;
    for (std::size_t pos = 0; pos < layout.n_sym; ++pos) {
        if (layout.is_midamble(pos)) continue; // pilots never count
        const auto segment =
            std::span<const std::complex<double>>(compensated.samples).subspan(pos * n, n);
        const DemodResult dec = demod.demod(segment, ChirpKind::Up);
        if (dec.symbol != payload[next_data]) ++result.errors;
        ++next_data;
        ++result.total;
    }
    return result;
}

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t total) {
    if (total == 0) return {0.0, 1.0};
    const double z = 1.959963984540054; // 95%
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // At the exact endpoints center-half == 0 (resp. center+half == 1) up to
    // rounding; pin them so 0/n and n/n report clean one-sided intervals.
    const double lo = (errors == 0) ? 0.0 : std::max(0.0, center - half);
    const double hi = (errors == total) ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::string_view cell_key) {
    return mix_seed(master_seed, hash_string(cell_key));
}

std::vector<CellResult> run_sweep(const std::vector<SweepCell>& cells, int workers) {
    std::vector<CellResult> results(cells.size());
    if (cells.empty()) return results;
    if (workers < 1) workers = 1;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const auto start = std::chrono::steady_clock::now();
            CellResult& out = results[idx];
            try {
                const ScenarioConfig& sc = cells[idx].scenario;
                std::uint64_t errors = 0;
                std::uint64_t total = 0;
                for (std::uint64_t t = 0; t < sc.trials; ++t) {
                    const TrialResult r = run_trial(sc, t);
                    errors += r.errors;
                    total += r.total;
                }
                out.point.errors = errors;
                out.point.total = total;
                out.point.ser = total ? static_cast<double>(errors) / static_cast<double>(total) : 0.0;
                const WilsonInterval ci = wilson_interval(errors, total);
                out.point.ci_lo = ci.lo;
                out.point.ci_hi = ci.hi;
            } catch (const std::exception& e) {
                out.failed = true;
                out.error = e.what();
            }
            out.point.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return results;
}

} // namespace lorasat
