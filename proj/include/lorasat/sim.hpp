#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <lorasat/channel.hpp>
#include <lorasat/estimators.hpp>
#include <lorasat/modem.hpp>
#include <lorasat/orbit.hpp>

namespace lorasat {

// One Monte Carlo cell: everything needed to synthesize, impair, compensate
// and demodulate frames. Exactly one of esn0_db / snr_db may be set; neither
// means the noiseless channel.
struct ScenarioConfig {
    ModemConfig modem;
    int n_up = 8;
    int n_dw = 2;
    int n_int = 0;
    std::uint32_t payload_bits = 120;
    int coding_rate = 1;
    DopplerProfile profile;
    double t_start_s = 0.0;
    EstimatorKind estimator = EstimatorKind::None;
    std::optional<double> esn0_db;
    std::optional<double> snr_db;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 1;

    FrameLayout layout() const;
    std::size_t data_symbols_per_frame() const;
    std::optional<double> effective_snr_db() const; // from esn0 when needed
    void validate() const;
};

struct TrialResult {
    std::uint64_t errors = 0;
    std::uint64_t total = 0;
};

// One frame: random payload, Doppler + AWGN, estimator -> plan -> demod.
// Bit-identical for identical (scenario.master_seed, trial_index). Midamble
// chirps never contribute to errors or totals. When `report` is non-null the
// estimator's measurement trail is stored there.
TrialResult run_trial(const ScenarioConfig& sc, std::uint64_t trial_index,
                      EstimateReport* report = nullptr);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// 95% Wilson score interval for errors/total.
WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t total);

struct SerPoint {
    std::uint64_t errors = 0;
    std::uint64_t total = 0;
    double ser = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double wall_time_s = 0.0;
};

// A grid cell: canonical key (stable across axis additions) + scenario.
// The key seeds the cell, so results never depend on grid position.
struct SweepCell {
    std::string key;
    ScenarioConfig scenario;
};

struct CellResult {
    SerPoint point;
    bool failed = false;
    std::string error;
};

// Evaluates all cells, possibly on `workers` threads. Results are positioned
// by cell index, independent of execution order; per-cell failures are
// reported in-place and do not stop the sweep.
std::vector<CellResult> run_sweep(const std::vector<SweepCell>& cells, int workers = 1);

// Derives the cell-level seed every trial seed descends from.
std::uint64_t cell_seed(std::uint64_t master_seed, std::string_view cell_key);

// Closed-form symbol error probability of noncoherent M-ary orthogonal
// signaling at symbol SNR esn0 (linear):
//   P_s = sum_{k=1}^{M-1} (-1)^(k+1) C(M-1,k)/(k+1) exp(-k/(k+1) esn0).
// The alternating sum is evaluated in extended precision; exact for every
// M up to 4096.
double awgn_ser_oracle(std::uint32_t alphabet_size, double esn0_linear);

} // namespace lorasat
