// Command-line front end: Doppler profile dumps, Monte Carlo SER sweeps and
// the midamble spacing advisor. Exit codes: 0 success, 2 configuration
// error, 3 runtime/domain error.

#include <CLI11.hpp>

#include <lorasat/report.hpp>
#include <lorasat/scenario.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace lorasat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct EmitFlags {
    bool csv = true;
    bool json = false;
    bool svg = false;
};

EmitFlags parse_emit(const std::string& list) {
    EmitFlags flags{false, false, false};
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "csv") flags.csv = true;
        else if (item == "json") flags.json = true;
        else if (item == "svg") flags.svg = true;
        else throw std::invalid_argument("--emit accepts csv|json|svg, got '" + item + "'");
    }
    if (!flags.csv && !flags.json && !flags.svg)
        throw std::invalid_argument("--emit selected no formats");
    return flags;
}

fs::path resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("LORASAT_OUT_DIR")) return env;
    return ".";
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << body;
}

template <typename T>
std::vector<T> split_list(const std::string& csv) {
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if constexpr (std::is_same_v<T, std::string>) {
            out.push_back(item);
        } else {
            std::istringstream is(item);
            T v;
            if (!(is >> v)) throw std::invalid_argument("bad list item '" + item + "'");
            out.push_back(v);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + csv + "'");
    return out;
}

void run_cells(const std::vector<SweepCell>& cells, const fs::path& out_dir,
               const EmitFlags& emit, int workers, bool dump_estimates) {
    fs::create_directories(out_dir);
    const auto results = run_sweep(cells, workers);

    std::vector<ResultRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        rows.push_back(make_result_row(cells[i], results[i]));

    if (emit.csv) write_file(out_dir / "results.csv", to_csv(rows));
    if (emit.json) write_file(out_dir / "results.json", to_json(rows));
    if (emit.svg) write_file(out_dir / "ser_curves.svg", ser_curves_svg(rows));

    if (dump_estimates) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (results[i].failed) continue;
            if (cells[i].scenario.estimator == EstimatorKind::None ||
                cells[i].scenario.estimator == EstimatorKind::Genie)
                continue;
            EstimateReport report;
            run_trial(cells[i].scenario, 0, &report);
            write_file(out_dir / ("estimates_" + std::to_string(i) + ".json"),
                       report.to_json() + "\n");
        }
    }

    std::size_t failed = 0;
    for (const auto& r : results)
        if (r.failed) ++failed;
    std::cout << "wrote " << rows.size() << " cells to " << out_dir.string();
    if (failed) std::cout << " (" << failed << " failed; see status column)";
    std::cout << "\n";
}

int cmd_doppler_profile(double altitude, double carrier, double t_min, double t_max,
                        double step, const std::string& out_flag, const std::string& emit_list) {
    if (!(step > 0.0)) throw std::invalid_argument("--step must be positive");
    if (t_max < t_min) throw std::invalid_argument("--t-max must be >= --t-min");
    OrbitGeometry geom;
    geom.altitude_m = altitude;
    geom.carrier_hz = carrier;
    const DopplerProfile pass = DopplerProfile::leo_pass(geom);

    std::vector<DopplerSample> samples;
    for (double t = t_min; t <= t_max + 1e-9; t += step)
        samples.push_back({t, pass.shift_hz(t), pass.rate_hz_per_s(t)});

    const EmitFlags emit = parse_emit(emit_list);
    const fs::path out_dir = resolve_out_dir(out_flag);
    fs::create_directories(out_dir);
    if (emit.csv) write_file(out_dir / "doppler_profile.csv", doppler_profile_csv(samples));
    if (emit.svg) write_file(out_dir / "doppler_profile.svg", doppler_profile_svg(samples));
    std::cout << "wrote " << samples.size() << " samples to " << out_dir.string() << "\n";
    return kExitOk;
}

int cmd_midamble_advisor(int sf, double bandwidth, bool ldro, double k, std::size_t n_sym,
                         const std::optional<double>& xi, const std::optional<double>& t_start,
                         double altitude, double carrier, bool as_json) {
    if (!xi && !t_start)
        throw std::invalid_argument("give --xi or --t-start");
    const ModemConfig cfg = ModemConfig::make(sf, bandwidth, ldro);
    double rate = 0.0;
    if (xi) {
        rate = *xi;
    } else {
        OrbitGeometry geom;
        geom.altitude_m = altitude;
        geom.carrier_hz = carrier;
        rate = DopplerProfile::leo_pass(geom).rate_hz_per_s(*t_start);
    }
    const MidambleAdvice advice = recommended_midamble_interval(cfg, k, rate, n_sym);

    if (as_json) {
        std::cout << "{\n"
                  << "  \"xi_hz_per_s\": " << format_double(rate) << ",\n"
                  << "  \"midambles_needed\": " << (advice.midambles_needed ? "true" : "false")
                  << ",\n"
                  << "  \"update_interval_s\": " << format_double(advice.update_interval_s)
                  << ",\n"
                  << "  \"n_star\": " << advice.n_star << ",\n"
                  << "  \"n_int\": " << advice.n_int << "\n"
                  << "}\n";
    } else if (!advice.midambles_needed) {
        std::cout << "no midambles needed (doppler rate is zero)\n";
    } else {
        std::cout << "update interval T = " << format_double(advice.update_interval_s)
                  << " s\nn_star = " << advice.n_star << " midambles\nn_int = " << advice.n_int
                  << " chirps between midambles\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LoRa direct-to-satellite link simulator"};
    app.require_subcommand(1);

    // doppler-profile
    auto* prof = app.add_subcommand("doppler-profile",
                                    "Dump (t, shift, rate) samples of an overhead pass");
    double altitude = 550e3, carrier = 868e6, t_min = -366.0, t_max = 366.0, step = 1.0;
    std::string prof_out, prof_emit = "csv";
    prof->add_option("--altitude", altitude, "Orbit altitude [m]");
    prof->add_option("--carrier", carrier, "Carrier frequency [Hz]");
    prof->add_option("--t-min", t_min, "Range start [s]");
    prof->add_option("--t-max", t_max, "Range end [s]");
    prof->add_option("--step", step, "Sample step [s]");
    prof->add_option("--out-dir", prof_out, "Output directory (default $LORASAT_OUT_DIR or .)");
    prof->add_option("--emit", prof_emit, "Formats: csv,svg");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run the sweep described by a config file");
    std::string sim_config, sim_out, sim_emit = "csv,json";
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false, sim_dump = false;
    int sim_workers = static_cast<int>(std::thread::hardware_concurrency());
    sim->add_option("--config", sim_config, "JSON scenario config")->required();
    sim->add_option("--seed", sim_seed, "Override the config's master seed")
        ->each([&](const std::string&) { sim_seed_set = true; });
    sim->add_option("--out-dir", sim_out, "Output directory");
    sim->add_option("--emit", sim_emit, "Formats: csv,json,svg");
    sim->add_option("--workers", sim_workers, "Worker threads");
    sim->add_flag("--dump-estimates", sim_dump, "Write per-cell estimator measurement trails");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a grid given inline axis lists");
    std::string sw_sf = "7", sw_est = "point", sw_esn0, sw_snr, sw_tstart = "0",
                sw_ldro = "0", sw_bits = "120", sw_nint = "auto", sw_profile = "leo-pass",
                sw_out, sw_emit = "csv";
    double sw_bandwidth = 125e3, sw_altitude = 550e3, sw_carrier = 868e6,
           sw_static_f0 = 0.0, sw_ramp_f0 = 0.0, sw_ramp_slope = 0.0;
    std::uint64_t sw_trials = 100, sw_seed = 1;
    int sw_ndw = -1, sw_nup = 8, sw_cr = 1;
    bool sw_dump = false;
    int sw_workers = static_cast<int>(std::thread::hardware_concurrency());
    sweep->add_option("--sf", sw_sf, "Spreading factors, comma list");
    sweep->add_option("--estimators", sw_est, "Estimators, comma list");
    sweep->add_option("--esn0", sw_esn0, "Es/N0 values [dB], comma list");
    sweep->add_option("--snr", sw_snr, "SNR values [dB], comma list");
    sweep->add_option("--t-start", sw_tstart, "Frame start times [s], comma list");
    sweep->add_option("--ldro", sw_ldro, "LDRO flags (0/1), comma list");
    sweep->add_option("--payload-bits", sw_bits, "Payload sizes [bits], comma list");
    sweep->add_option("--n-int", sw_nint, "Midamble spacing, comma list or auto");
    sweep->add_option("--n-dw", sw_ndw, "Downchirp count (-1 = per-estimator default)");
    sweep->add_option("--n-up", sw_nup, "Preamble upchirp count");
    sweep->add_option("--cr", sw_cr, "Coding rate 1..4");
    sweep->add_option("--bandwidth", sw_bandwidth, "Bandwidth [Hz]");
    sweep->add_option("--profile", sw_profile, "zero|static|linear-ramp|leo-pass");
    sweep->add_option("--altitude", sw_altitude, "Orbit altitude [m]");
    sweep->add_option("--carrier", sw_carrier, "Carrier frequency [Hz]");
    sweep->add_option("--static-f0", sw_static_f0, "Static profile offset [Hz]");
    sweep->add_option("--ramp-f0", sw_ramp_f0, "Ramp offset at t_ref [Hz]");
    sweep->add_option("--ramp-slope", sw_ramp_slope, "Ramp slope [Hz/s]");
    sweep->add_option("--trials", sw_trials, "Frames per cell");
    sweep->add_option("--seed", sw_seed, "Master seed");
    sweep->add_option("--out-dir", sw_out, "Output directory");
    sweep->add_option("--emit", sw_emit, "Formats: csv,json,svg");
    sweep->add_option("--workers", sw_workers, "Worker threads");
    sweep->add_flag("--dump-estimates", sw_dump, "Write per-cell estimator measurement trails");

    // midamble-advisor
    auto* adv = app.add_subcommand("midamble-advisor",
                                   "Recommended midamble spacing for a Doppler rate");
    int adv_sf = 10;
    double adv_bandwidth = 125e3, adv_k = 0.1, adv_altitude = 550e3, adv_carrier = 868e6;
    std::size_t adv_nsym = 15;
    bool adv_ldro = false, adv_json = false;
    std::optional<double> adv_xi, adv_tstart;
    adv->add_option("--sf", adv_sf, "Spreading factor");
    adv->add_option("--bandwidth", adv_bandwidth, "Bandwidth [Hz]");
    adv->add_flag("--ldro", adv_ldro, "LDRO mode");
    adv->add_option("--k", adv_k, "Frequency tolerance factor, (0, 0.5]");
    adv->add_option("--n-sym", adv_nsym, "Payload data chirp count");
    adv->add_option("--xi", adv_xi, "Doppler rate [Hz/s]");
    adv->add_option("--t-start", adv_tstart, "Read the rate from the pass at this time [s]");
    adv->add_option("--altitude", adv_altitude, "Orbit altitude [m] (with --t-start)");
    adv->add_option("--carrier", adv_carrier, "Carrier frequency [Hz] (with --t-start)");
    adv->add_flag("--json", adv_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (prof->parsed())
            return cmd_doppler_profile(altitude, carrier, t_min, t_max, step, prof_out, prof_emit);

        if (sim->parsed()) {
            SweepSpec spec = load_sweep_spec(sim_config);
            if (sim_seed_set) spec.master_seed = sim_seed;
            run_cells(spec.expand(), resolve_out_dir(sim_out), parse_emit(sim_emit),
                      sim_workers, sim_dump);
            return kExitOk;
        }

        if (sweep->parsed()) {
            SweepSpec spec;
            spec.bandwidth_hz = sw_bandwidth;
            spec.sf = split_list<int>(sw_sf);
            spec.estimators = split_list<std::string>(sw_est);
            if (!sw_esn0.empty()) spec.esn0_db = split_list<double>(sw_esn0);
            if (!sw_snr.empty()) spec.snr_db = split_list<double>(sw_snr);
            spec.t_start_s = split_list<double>(sw_tstart);
            spec.ldro.clear();
            for (int v : split_list<int>(sw_ldro)) spec.ldro.push_back(v != 0);
            spec.payload_bits = split_list<std::uint32_t>(sw_bits);
            if (sw_nint == "auto") {
                spec.n_int = {-1};
            } else {
                spec.n_int = split_list<int>(sw_nint);
            }
            spec.n_dw = sw_ndw;
            spec.n_up = sw_nup;
            spec.coding_rate = sw_cr;
            spec.profile = sw_profile;
            spec.altitude_m = sw_altitude;
            spec.carrier_hz = sw_carrier;
            spec.static_f0_hz = sw_static_f0;
            spec.ramp_f0_hz = sw_ramp_f0;
            spec.ramp_slope_hz_per_s = sw_ramp_slope;
            spec.trials = sw_trials;
            spec.master_seed = sw_seed;
            run_cells(spec.expand(), resolve_out_dir(sw_out), parse_emit(sw_emit),
                      sw_workers, sw_dump);
            return kExitOk;
        }

        if (adv->parsed())
            return cmd_midamble_advisor(adv_sf, adv_bandwidth, adv_ldro, adv_k, adv_nsym,
                                        adv_xi, adv_tstart, adv_altitude, adv_carrier, adv_json);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
