#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include <lorasat/channel.hpp>
#include <lorasat/estimators.hpp>
#include <lorasat/modem.hpp>
#include <lorasat/orbit.hpp>
#include <lorasat/report.hpp>
#include <lorasat/scenario.hpp>
#include <lorasat/sim.hpp>

namespace py = pybind11;
using namespace lorasat;

namespace {

ChirpKind kind_from_string(const std::string& s) {
    if (s == "up") return ChirpKind::Up;
    if (s == "down") return ChirpKind::Down;
    throw std::invalid_argument("chirp kind must be 'up' or 'down'");
}

// Parse a JSON sweep config, run it and return the CSV text (same payload
// the CLI writes to results.csv).
std::string run_scenario_json(const std::string& json_text, int workers) {
    const SweepSpec spec = parse_sweep_spec(json_text);
    const auto cells = spec.expand();
    const auto results = run_sweep(cells, workers);
    std::vector<ResultRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        rows.push_back(make_result_row(cells[i], results[i]));
    return to_csv(rows);
}

} // namespace

PYBIND11_MODULE(_lorasat, m) {
    m.doc() = "LoRa direct-to-satellite link simulator core";

    py::class_<ModemConfig>(m, "ModemConfig")
        .def_static("make", &ModemConfig::make, py::arg("sf"), py::arg("bandwidth_hz"),
                    py::arg("ldro") = false, py::arg("oversampling") = 1)
        .def_readonly("sf", &ModemConfig::sf)
        .def_readonly("bandwidth_hz", &ModemConfig::bandwidth_hz)
        .def_readonly("ldro", &ModemConfig::ldro)
        .def_readonly("oversampling", &ModemConfig::oversampling)
        .def_readonly("alphabet_size", &ModemConfig::alphabet_size)
        .def_readonly("chirp_samples", &ModemConfig::chirp_samples)
        .def_readonly("chirp_duration_s", &ModemConfig::chirp_duration_s)
        .def_readonly("symbol_rate_hz", &ModemConfig::symbol_rate_hz)
        .def_readonly("bin_width_hz", &ModemConfig::bin_width_hz)
        .def_readonly("sample_rate_hz", &ModemConfig::sample_rate_hz);

    py::class_<BasebandSignal>(m, "BasebandSignal")
        .def_readonly("samples", &BasebandSignal::samples)
        .def_readonly("sample_rate_hz", &BasebandSignal::sample_rate_hz)
        .def_readonly("t0_s", &BasebandSignal::t0_s);

    py::class_<DemodResult>(m, "DemodResult")
        .def_readonly("peak_bin", &DemodResult::peak_bin)
        .def_readonly("freq_hz", &DemodResult::freq_hz)
        .def_readonly("magnitude", &DemodResult::magnitude)
        .def_readonly("symbol", &DemodResult::symbol);

    m.def("symbol_envelope", &symbol_envelope, py::arg("cfg"), py::arg("symbol"));
    m.def("downchirp_envelope", &downchirp_envelope, py::arg("cfg"));
    m.def(
        "demod_chirp",
        [](const ModemConfig& cfg, const std::vector<std::complex<double>>& samples,
           const std::string& kind) { return demod_chirp(cfg, samples, kind_from_string(kind)); },
        py::arg("cfg"), py::arg("samples"), py::arg("received") = "up");
    m.def("payload_symbol_count", &payload_symbol_count, py::arg("cfg"),
          py::arg("payload_bits"), py::arg("coding_rate") = 1);
    m.def("snr_from_esn0", &snr_from_esn0, py::arg("cfg"), py::arg("esn0_db"));

    py::class_<OrbitGeometry>(m, "OrbitGeometry")
        .def(py::init([](double altitude_m, double carrier_hz) {
                 OrbitGeometry g;
                 g.altitude_m = altitude_m;
                 g.carrier_hz = carrier_hz;
                 return g;
             }),
             py::arg("altitude_m") = 550e3, py::arg("carrier_hz") = 868e6)
        .def_readonly("altitude_m", &OrbitGeometry::altitude_m)
        .def_readonly("carrier_hz", &OrbitGeometry::carrier_hz)
        .def("orbital_speed_ms", &OrbitGeometry::orbital_speed_ms)
        .def("slant_range_m", &OrbitGeometry::slant_range_m);

    py::class_<DopplerProfile>(m, "DopplerProfile")
        .def_static("zero", &DopplerProfile::zero)
        .def_static("static_offset", &DopplerProfile::static_offset, py::arg("f0_hz"))
        .def_static("linear_ramp", &DopplerProfile::linear_ramp, py::arg("f0_hz"),
                    py::arg("slope_hz_per_s"), py::arg("t_ref_s") = 0.0)
        .def_static("leo_pass", &DopplerProfile::leo_pass, py::arg("geometry"))
        .def("shift_hz", &DopplerProfile::shift_hz, py::arg("t_s"))
        .def("rate_hz_per_s", &DopplerProfile::rate_hz_per_s, py::arg("t_s"));

    m.def("visibility_half_window_s", &visibility_half_window_s, py::arg("geometry"));
    m.def(
        "apply_doppler",
        [](const BasebandSignal& sig, const DopplerProfile& p, double t_start) {
            return apply_doppler(sig, p, t_start);
        },
        py::arg("signal"), py::arg("profile"), py::arg("t_start_s"));

    py::class_<MidambleAdvice>(m, "MidambleAdvice")
        .def_readonly("midambles_needed", &MidambleAdvice::midambles_needed)
        .def_readonly("update_interval_s", &MidambleAdvice::update_interval_s)
        .def_readonly("n_star", &MidambleAdvice::n_star)
        .def_readonly("n_int", &MidambleAdvice::n_int);

    m.def("recommended_midamble_interval", &recommended_midamble_interval, py::arg("cfg"),
          py::arg("k"), py::arg("xi_hz_per_s"), py::arg("n_sym"));

    m.def("awgn_ser_oracle", &awgn_ser_oracle, py::arg("alphabet_size"),
          py::arg("esn0_linear"));

    m.def("run_scenario_json", &run_scenario_json, py::arg("config_json"),
          py::arg("workers") = 1,
          "Run the sweep described by a JSON config string; returns CSV text.");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
