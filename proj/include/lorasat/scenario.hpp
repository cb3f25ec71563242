#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <lorasat/sim.hpp>

namespace lorasat {

// Grid description as read from a config file or assembled from CLI flags.
// List-valued fields are swept; the cross product becomes the sweep cells.
// n_dw / n_int equal to -1 mean "auto": resolved per estimator family
// (point family: n_dw=2; linear family: n_dw=6; n_int 1/4/12 for SF 12/10/7
// with midamble-point, 6 with midamble-linear, 0 otherwise).
struct SweepSpec {
    double bandwidth_hz = 125e3;
    int oversampling = 1;
    std::vector<int> sf{7};
    std::vector<bool> ldro{false};
    std::vector<std::string> estimators{"point"};
    std::vector<double> esn0_db;     // mutually exclusive with snr_db
    std::vector<double> snr_db;      // empty esn0+snr = noiseless
    std::vector<double> t_start_s{0.0};
    std::vector<std::uint32_t> payload_bits{120};
    int coding_rate = 1;
    int n_up = 8;
    int n_dw = -1;
    std::vector<int> n_int{-1};
    std::uint64_t trials = 100;
    std::uint64_t master_seed = 1;

    std::string profile = "leo-pass"; // zero | static | linear-ramp | leo-pass
    double altitude_m = 550e3;
    double carrier_hz = 868e6;
    double static_f0_hz = 0.0;
    double ramp_f0_hz = 0.0;
    double ramp_slope_hz_per_s = 0.0;
    double ramp_t_ref_s = 0.0;

    void validate() const; // throws std::invalid_argument with field context
    DopplerProfile make_profile() const;
    std::vector<SweepCell> expand() const;
};

int auto_n_dw(EstimatorKind kind);
int auto_n_int(EstimatorKind kind, int sf);

// Parses a JSON config. Unknown keys are rejected (fail fast); scalar values
// are accepted where lists are expected.
SweepSpec parse_sweep_spec(const std::string& json_text);
SweepSpec load_sweep_spec(const std::string& path);

} // namespace lorasat
