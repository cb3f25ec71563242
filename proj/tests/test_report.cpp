#include <doctest.h>

#include <stdexcept>

#include <lorasat/iq_io.hpp>
#include <lorasat/report.hpp>
#include <lorasat/scenario.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lorasat;
namespace fs = std::filesystem;

namespace {

std::vector<ResultRow> sample_rows() {
    SweepSpec spec;
    spec.sf = {7, 10};
    spec.estimators = {"point", "genie"};
    spec.esn0_db = {8.0, 14.0};
    spec.t_start_s = {-366.0};
    spec.trials = 4;
    const auto cells = spec.expand();
    const auto results = run_sweep(cells, 2);
    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < cells.size(); ++i)
        rows.push_back(make_result_row(cells[i], results[i]));
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lorasat_test_" + std::to_string(std::rand()) + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LORASAT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string run_cli_capture(const std::string& args, int* exit_code = nullptr) {
    TempDir tmp;
    const fs::path out = tmp.path / "stdout.txt";
    const std::string cmd =
        std::string(LORASAT_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (exit_code) *exit_code = WEXITSTATUS(status);
    return slurp(out);
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("csv round trip") {
    const auto rows = sample_rows();
    REQUIRE(!rows.empty());
    const std::string csv = to_csv(rows);
    CHECK(csv.find("\r") == std::string::npos); // LF endings only
    const auto parsed = parse_csv(csv);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].estimator == rows[i].estimator);
        CHECK(parsed[i].sf == rows[i].sf);
        CHECK(parsed[i].ldro == rows[i].ldro);
        CHECK(parsed[i].profile == rows[i].profile);
        CHECK(parsed[i].t_start_s == rows[i].t_start_s);
        REQUIRE(parsed[i].esn0_db.has_value() == rows[i].esn0_db.has_value());
        if (rows[i].esn0_db) CHECK(*parsed[i].esn0_db == doctest::Approx(*rows[i].esn0_db));
        CHECK(parsed[i].errors == rows[i].errors);
        CHECK(parsed[i].totals == rows[i].totals);
        CHECK(parsed[i].seed == rows[i].seed);
        CHECK(parsed[i].ser == doctest::Approx(rows[i].ser).epsilon(1e-10));
        CHECK(parsed[i].status == "ok");
    }

    // Missing noise axis serializes as an empty field and survives the trip.
    SweepSpec quiet;
    quiet.sf = {7};
    quiet.estimators = {"none"};
    quiet.profile = "zero";
    quiet.trials = 1;
    const auto qc = quiet.expand();
    const auto qr = run_sweep(qc, 1);
    const std::string qcsv = to_csv({make_result_row(qc[0], qr[0])});
    const auto qparsed = parse_csv(qcsv);
    CHECK(!qparsed[0].esn0_db.has_value());
    CHECK(!qparsed[0].snr_db.has_value());
    CHECK(qparsed[0].errors == 0);
}

TEST_CASE("csv parser rejects junk") {
    CHECK_THROWS_AS(parse_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv("nope\n1,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv(csv_header() + "\nshort,row\n"), std::invalid_argument);
}

TEST_CASE("json emission is well formed") {
    const auto rows = sample_rows();
    const std::string js = to_json(rows);
    CHECK(js.find("\"estimator\":\"point\"") != std::string::npos);
    CHECK(js.find("\"esn0_db\":8") != std::string::npos);
    CHECK(js.find("\"status\":\"ok\"") != std::string::npos);
}

TEST_CASE("svg emission never alters the rows") {
    const auto rows = sample_rows();
    const std::string before = to_csv(rows);
    const std::string svg = ser_curves_svg(rows);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("SF 7") != std::string::npos);
    CHECK(to_csv(rows) == before);
}

TEST_CASE("doppler profile emission") {
    std::vector<DopplerSample> samples;
    for (int i = -2; i <= 2; ++i)
        samples.push_back({0.5 * i, 100.0 * i, -3.0});
    const std::string csv = doppler_profile_csv(samples);
    // header + 5 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.rfind("t_s,doppler_shift_hz,doppler_rate_hz_per_s\n", 0) == 0);
    const std::string svg = doppler_profile_svg(samples);
    CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("format_double is locale independent") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-366.0) == "-366");
    CHECK(format_double(976.5625) == "976.5625");
}

TEST_CASE("sweep spec parsing") {
    const std::string good = R"({
        "bandwidth_hz": 125000,
        "sf": [7, 12],
        "ldro": false,
        "estimators": ["point", "midamble-point"],
        "esn0_db": [8, 14],
        "t_start_s": 0,
        "payload_bits": 120,
        "n_dw": "auto",
        "n_int": "auto",
        "trials": 3,
        "master_seed": 5,
        "profile": "leo-pass"
    })";
    const SweepSpec spec = parse_sweep_spec(good);
    CHECK(spec.sf == std::vector<int>{7, 12});
    CHECK(spec.ldro == std::vector<bool>{false});
    CHECK(spec.n_dw == -1);

    const auto cells = spec.expand();
    CHECK(cells.size() == 2 * 2 * 2);
    for (const auto& cell : cells) {
        CHECK(cell.scenario.n_dw == 2); // point family
        if (cell.scenario.estimator == EstimatorKind::MidamblePoint) {
            const int expect = cell.scenario.modem.sf == 12 ? 1 : 12;
            CHECK(cell.scenario.n_int == expect);
        } else {
            CHECK(cell.scenario.n_int == 0);
        }
    }

    CHECK_THROWS_WITH_AS(parse_sweep_spec(R"({"sff": 7})"),
                         doctest::Contains("unknown key 'sff'"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"sf": 19})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"esn0_db": 10, "snr_db": -5})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"profile": "warp"})"), std::invalid_argument);
}

TEST_CASE("bundled preset configs parse and expand") {
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(LORASAT_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++seen;
        const SweepSpec spec = load_sweep_spec(entry.path().string());
        const auto cells = spec.expand();
        CHECK(!cells.empty());
        for (const auto& cell : cells) CHECK_NOTHROW(cell.scenario.validate());
    }
    CHECK(seen >= 5);
}

TEST_CASE("auto layout parameters follow the estimator family") {
    CHECK(auto_n_dw(EstimatorKind::Point) == 2);
    CHECK(auto_n_dw(EstimatorKind::MidamblePoint) == 2);
    CHECK(auto_n_dw(EstimatorKind::Linear) == 6);
    CHECK(auto_n_dw(EstimatorKind::MidambleLinear) == 6);
    CHECK(auto_n_int(EstimatorKind::MidamblePoint, 12) == 1);
    CHECK(auto_n_int(EstimatorKind::MidamblePoint, 10) == 4);
    CHECK(auto_n_int(EstimatorKind::MidamblePoint, 7) == 12);
    CHECK(auto_n_int(EstimatorKind::MidambleLinear, 12) == 6);
    CHECK(auto_n_int(EstimatorKind::Point, 12) == 0);
}

TEST_CASE("iq export round trip") {
    TempDir tmp;
    const ModemConfig cfg = ModemConfig::make(7, 125e3);
    const BasebandSignal sig = symbol_envelope(cfg, 77);
    const std::string path = (tmp.path / "chirp.iq").string();
    write_iq(path, sig);
    const BasebandSignal back = read_iq(path);
    CHECK(back.sample_rate_hz == sig.sample_rate_hz);
    CHECK(back.t0_s == sig.t0_s);
    REQUIRE(back.samples.size() == sig.samples.size());
    for (std::size_t k = 0; k < sig.samples.size(); ++k)
        CHECK(back.samples[k] == sig.samples[k]);
}

TEST_CASE("cli help and exit codes") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("doppler-profile --help") == 0);
    // Config error: exit code 2.
    TempDir tmp;
    const fs::path bad = tmp.path / "bad.json";
    std::ofstream(bad) << R"({"sff": 7})";
    CHECK(run_cli("simulate --config " + bad.string() + " --out-dir " + tmp.path.string()) == 2);
    // Domain error: range outside visibility, exit code 3.
    CHECK(run_cli("doppler-profile --t-min -500 --t-max 500 --step 10 --out-dir " +
                  tmp.path.string()) == 3);
}

TEST_CASE("cli midamble advisor reproduces the worked example") {
    int code = 0;
    const std::string out = run_cli_capture(
        "midamble-advisor --sf 10 --bandwidth 125000 --k 0.1 --xi -304.71 --n-sym 15 --json",
        &code);
    CHECK(code == 0);
    CHECK(out.find("\"n_star\": 4") != std::string::npos);
    CHECK(out.find("\"n_int\": 4") != std::string::npos);
    CHECK(out.find("0.0400") != std::string::npos);

    // xi = 0: explicit no-midamble answer.
    const std::string quiet = run_cli_capture(
        "midamble-advisor --sf 10 --bandwidth 125000 --k 0.1 --xi 0 --n-sym 15", &code);
    CHECK(code == 0);
    CHECK(quiet.find("no midambles needed") != std::string::npos);

    // Reading xi from the pass geometry at zenith gives the same order.
    const std::string from_orbit = run_cli_capture(
        "midamble-advisor --sf 10 --bandwidth 125000 --k 0.1 --t-start 0 --n-sym 15 --json",
        &code);
    CHECK(code == 0);
    CHECK(from_orbit.find("\"xi_hz_per_s\": -279.0") != std::string::npos);
}

TEST_CASE("cli doppler-profile emits the documented csv") {
    TempDir tmp;
    int code = run_cli("doppler-profile --t-min -1 --t-max 1 --step 0.5 --out-dir " +
                       tmp.path.string() + " --emit csv,svg");
    CHECK(code == 0);
    const std::string csv = slurp(tmp.path / "doppler_profile.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6); // header + 5 rows
    CHECK(fs::exists(tmp.path / "doppler_profile.svg"));
}

TEST_CASE("cli simulate writes deterministic results") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.json";
    std::ofstream(cfg) << R"({
        "sf": 7, "estimators": ["point"], "esn0_db": [11],
        "t_start_s": -366.0, "trials": 5, "master_seed": 12
    })";
    const fs::path out_a = tmp.path / "a";
    const fs::path out_b = tmp.path / "b";
    CHECK(run_cli("simulate --config " + cfg.string() + " --out-dir " + out_a.string() +
                  " --emit csv,json,svg --workers 1") == 0);
    CHECK(run_cli("simulate --config " + cfg.string() + " --out-dir " + out_b.string() +
                  " --emit csv --workers 4") == 0);
    const std::string a = slurp(out_a / "results.csv");
    const std::string b = slurp(out_b / "results.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(fs::exists(out_a / "results.json"));
    CHECK(fs::exists(out_a / "ser_curves.svg"));
    const auto rows = parse_csv(a);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].trials == 5);
    CHECK(rows[0].totals == 5 * 22);
}

TEST_CASE("cli sweep accepts inline axes") {
    TempDir tmp;
    CHECK(run_cli("sweep --sf 7 --estimators point,genie --esn0 8,14 --t-start -366 "
                  "--trials 2 --seed 3 --out-dir " + tmp.path.string()) == 0);
    const auto rows = parse_csv(slurp(tmp.path / "results.csv"));
    CHECK(rows.size() == 4);
}

TEST_CASE("cli dump-estimates emits a measurement trail") {
    TempDir tmp;
    CHECK(run_cli("sweep --sf 10 --estimators midamble-point --esn0 14 --t-start 0 "
                  "--trials 2 --seed 5 --dump-estimates --out-dir " + tmp.path.string()) == 0);
    bool found = false;
    for (const auto& entry : fs::directory_iterator(tmp.path)) {
        if (entry.path().filename().string().rfind("estimates_", 0) == 0) {
            found = true;
            const std::string body = slurp(entry.path());
            CHECK(body.find("\"anchors\"") != std::string::npos);
        }
    }
    CHECK(found);
}

} // TEST_SUITE
