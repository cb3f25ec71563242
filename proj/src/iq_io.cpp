#include <lorasat/iq_io.hpp>

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace lorasat {

void write_iq(const std::string& path, const BasebandSignal& signal) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_iq: cannot open '" + path + "'");
    for (const auto& v : signal.samples) {
        const double iq[2] = {v.real(), v.imag()};
        out.write(reinterpret_cast<const char*>(iq), sizeof(iq));
    }
    if (!out) throw std::runtime_error("write_iq: short write to '" + path + "'");

    nlohmann::json meta;
    meta["sample_rate_hz"] = signal.sample_rate_hz;
    meta["t0_s"] = signal.t0_s;
    meta["samples"] = signal.samples.size();
    std::ofstream side(path + ".json");
    side << meta.dump(2) << "\n";
}

BasebandSignal read_iq(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("read_iq: missing sidecar for '" + path + "'");
    nlohmann::json meta = nlohmann::json::parse(side);

    BasebandSignal signal;
    signal.sample_rate_hz = meta.at("sample_rate_hz").get<double>();
    signal.t0_s = meta.at("t0_s").get<double>();
    const std::size_t count = meta.at("samples").get<std::size_t>();

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_iq: cannot open '" + path + "'");
    signal.samples.resize(count);
    for (auto& v : signal.samples) {
        double iq[2];
        in.read(reinterpret_cast<char*>(iq), sizeof(iq));
        v = {iq[0], iq[1]};
    }
    if (!in) throw std::runtime_error("read_iq: truncated I/Q file '" + path + "'");
    return signal;
}

} // namespace lorasat
