#include <lorasat/scenario.hpp>

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lorasat {

int auto_n_dw(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::Linear:
    case EstimatorKind::MidambleLinear:
        return 6;
    default:
        return 2;
    }
}

int auto_n_int(EstimatorKind kind, int sf) {
    if (kind == EstimatorKind::MidamblePoint) {
        if (sf == 12) return 1;
        if (sf == 10) return 4;
        return 12;
    }
    if (kind == EstimatorKind::MidambleLinear) return 6;
    return 0;
}

void SweepSpec::validate() const {
    if (!(bandwidth_hz > 0)) throw std::invalid_argument("config: bandwidth_hz must be positive");
    if (oversampling < 1) throw std::invalid_argument("config: oversampling must be >= 1");
    if (sf.empty()) throw std::invalid_argument("config: sf list is empty");
    for (int s : sf)
        if (s < 7 || s > 12) throw std::invalid_argument("config: sf must be in 7..12");
    if (estimators.empty()) throw std::invalid_argument("config: estimators list is empty");
    for (const auto& e : estimators) estimator_from_string(e); // throws on junk
    if (!esn0_db.empty() && !snr_db.empty())
        throw std::invalid_argument("config: give esn0_db or snr_db, not both");
    if (payload_bits.empty()) throw std::invalid_argument("config: payload_bits list is empty");
    if (coding_rate < 1 || coding_rate > 4)
        throw std::invalid_argument("config: coding_rate must be in 1..4");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (profile != "zero" && profile != "static" && profile != "linear-ramp" && profile != "leo-pass")
        throw std::invalid_argument("config: unknown profile '" + profile + "'");
}

DopplerProfile SweepSpec::make_profile() const {
    if (profile == "zero") return DopplerProfile::zero();
    if (profile == "static") return DopplerProfile::static_offset(static_f0_hz);
    if (profile == "linear-ramp")
        return DopplerProfile::linear_ramp(ramp_f0_hz, ramp_slope_hz_per_s, ramp_t_ref_s);
    OrbitGeometry geom;
    geom.altitude_m = altitude_m;
    geom.carrier_hz = carrier_hz;
    return DopplerProfile::leo_pass(geom);
}

namespace {

std::string bool_str(bool b) { return b ? "1" : "0"; }

} // namespace

std::vector<SweepCell> SweepSpec::expand() const {
    validate();
    const DopplerProfile prof = make_profile();

    // Noise axis: one entry per esn0 / snr value; a single no-noise cell when
    // neither list is given.
    struct NoisePoint {
        std::optional<double> esn0, snr;
    };
    std::vector<NoisePoint> noise;
    for (double v : esn0_db) noise.push_back({v, std::nullopt});
    for (double v : snr_db) noise.push_back({std::nullopt, v});
    if (noise.empty()) noise.push_back({std::nullopt, std::nullopt});

    std::vector<SweepCell> cells;
    for (const auto& est_name : estimators) {
        const EstimatorKind kind = estimator_from_string(est_name);
        for (int s : sf)
            for (bool ld : ldro)
                for (double ts : t_start_s)
                    for (std::uint32_t bits : payload_bits)
                        for (int ni : n_int)
                            for (const auto& np : noise) {
                                ScenarioConfig sc;
                                sc.modem = ModemConfig::make(s, bandwidth_hz, ld, oversampling);
                                sc.n_up = n_up;
                                sc.n_dw = (n_dw < 0) ? auto_n_dw(kind) : n_dw;
                                sc.n_int = (ni < 0) ? auto_n_int(kind, s) : ni;
                                sc.payload_bits = bits;
                                sc.coding_rate = coding_rate;
                                sc.profile = prof;
                                sc.t_start_s = ts;
                                sc.estimator = kind;
                                sc.esn0_db = np.esn0;
                                sc.snr_db = np.snr;
                                sc.trials = trials;

                                // Canonical key: every axis value, so cells are
                                // insensitive to grid shape and ordering.
                                std::ostringstream key;
                                key << "est=" << est_name << "|sf=" << s << "|B=" << bandwidth_hz
                                    << "|ldro=" << bool_str(ld) << "|osf=" << oversampling
                                    << "|profile=" << profile << "|t=" << ts
                                    << "|esn0=" << (np.esn0 ? std::to_string(*np.esn0) : "-")
                                    << "|snr=" << (np.snr ? std::to_string(*np.snr) : "-")
                                    << "|L=" << bits << "|cr=" << coding_rate
                                    << "|nup=" << n_up << "|ndw=" << sc.n_dw
                                    << "|nint=" << sc.n_int;
                                sc.master_seed = cell_seed(master_seed, key.str());
                                sc.validate();
                                cells.push_back({key.str(), sc});
                            }
    }
    return cells;
}

namespace {

using nlohmann::json;

template <typename T>
std::vector<T> as_list(const json& j, const std::string& key) {
    const json& v = j.at(key);
    std::vector<T> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(e.get<T>());
    } else {
        out.push_back(v.get<T>());
    }
    return out;
}

} // namespace

SweepSpec parse_sweep_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    static const std::set<std::string> known = {
        "bandwidth_hz", "oversampling", "sf", "ldro", "estimators", "esn0_db",
        "snr_db", "t_start_s", "payload_bits", "coding_rate", "n_up", "n_dw",
        "n_int", "trials", "master_seed", "profile", "altitude_m", "carrier_hz",
        "static_f0_hz", "ramp_f0_hz", "ramp_slope_hz_per_s", "ramp_t_ref_s"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    SweepSpec spec;
    try {
        if (j.contains("bandwidth_hz")) spec.bandwidth_hz = j.at("bandwidth_hz").get<double>();
        if (j.contains("oversampling")) spec.oversampling = j.at("oversampling").get<int>();
        if (j.contains("sf")) spec.sf = as_list<int>(j, "sf");
        if (j.contains("ldro")) spec.ldro = as_list<bool>(j, "ldro");
        if (j.contains("estimators")) spec.estimators = as_list<std::string>(j, "estimators");
        if (j.contains("esn0_db")) spec.esn0_db = as_list<double>(j, "esn0_db");
        if (j.contains("snr_db")) spec.snr_db = as_list<double>(j, "snr_db");
        if (j.contains("t_start_s")) spec.t_start_s = as_list<double>(j, "t_start_s");
        if (j.contains("payload_bits")) spec.payload_bits = as_list<std::uint32_t>(j, "payload_bits");
        if (j.contains("coding_rate")) spec.coding_rate = j.at("coding_rate").get<int>();
        if (j.contains("n_up")) spec.n_up = j.at("n_up").get<int>();
        if (j.contains("n_dw")) {
            if (j.at("n_dw").is_string()) {
                if (j.at("n_dw").get<std::string>() != "auto")
                    throw std::invalid_argument("config: n_dw must be a number or \"auto\"");
                spec.n_dw = -1;
            } else {
                spec.n_dw = j.at("n_dw").get<int>();
            }
        }
        if (j.contains("n_int")) {
            const json& v = j.at("n_int");
            spec.n_int.clear();
            auto one = [&](const json& e) {
                if (e.is_string()) {
                    if (e.get<std::string>() != "auto")
                        throw std::invalid_argument("config: n_int must be numbers or \"auto\"");
                    spec.n_int.push_back(-1);
                } else {
                    spec.n_int.push_back(e.get<int>());
                }
            };
            if (v.is_array())
                for (const auto& e : v) one(e);
            else
                one(v);
        }
        if (j.contains("trials")) spec.trials = j.at("trials").get<std::uint64_t>();
        if (j.contains("master_seed")) spec.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("profile")) spec.profile = j.at("profile").get<std::string>();
        if (j.contains("altitude_m")) spec.altitude_m = j.at("altitude_m").get<double>();
        if (j.contains("carrier_hz")) spec.carrier_hz = j.at("carrier_hz").get<double>();
        if (j.contains("static_f0_hz")) spec.static_f0_hz = j.at("static_f0_hz").get<double>();
        if (j.contains("ramp_f0_hz")) spec.ramp_f0_hz = j.at("ramp_f0_hz").get<double>();
        if (j.contains("ramp_slope_hz_per_s"))
            spec.ramp_slope_hz_per_s = j.at("ramp_slope_hz_per_s").get<double>();
        if (j.contains("ramp_t_ref_s")) spec.ramp_t_ref_s = j.at("ramp_t_ref_s").get<double>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: bad value type: ") + e.what());
    }
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_spec(ss.str());
}

} // namespace lorasat
